// Copyright 2026 The RLVR Lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Tabular autoregressive generator used to separate per-step (token-level)
// uncertainty from diversity of final answers.

#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "rlvr/sample_log.hpp"

namespace rlvr {

using TokenId = std::size_t;

inline constexpr TokenId kTerminal = 0;
// Left padding for histories shorter than the model order.
inline constexpr TokenId kBos = std::numeric_limits<TokenId>::max();
inline const std::string kNaLabel = "NA";

class ToyGenerativeModel {
 public:
  using State = std::vector<TokenId>;  // last `order` tokens, kBos-padded

  // vocabulary[0] is the terminal token. Each transition row is a
  // distribution over the whole vocabulary. answer_tokens maps tokens to the
  // answer label they emit; a terminated sequence takes the label of its last
  // answer token. Sequences cut at max_length, or terminated without an
  // answer token, are labelled NA.
  ToyGenerativeModel(std::vector<std::string> vocabulary, std::size_t order,
                     std::size_t max_length, std::map<State, std::vector<double>> transitions,
                     std::map<TokenId, std::string> answer_tokens);

  const std::vector<std::string>& vocabulary() const { return vocabulary_; }
  std::size_t order() const { return order_; }
  std::size_t max_length() const { return max_length_; }
  const std::map<State, std::vector<double>>& transitions() const { return transitions_; }

  State state_for(std::span<const TokenId> history) const;
  const std::vector<double>& next_token_distribution(std::span<const TokenId> history) const;
  // Label for a generated token sequence (terminal excluded).
  std::string label_for(std::span<const TokenId> tokens, bool terminated) const;

 private:
  void check_reachable() const;

  std::vector<std::string> vocabulary_;
  std::size_t order_;
  std::size_t max_length_;
  std::map<State, std::vector<double>> transitions_;
  std::map<TokenId, std::string> answer_tokens_;
};

struct GeneratedSequence {
  std::vector<TokenId> tokens;                   // sampled tokens, terminal included
  std::vector<std::vector<double>> step_distributions;  // one per sampled token
  std::vector<double> token_logprobs;            // log p_t(sampled token)
  bool terminated = false;                       // terminal sampled, not forced
  std::string answer;
};

struct GenerationBatch {
  std::vector<GeneratedSequence> sequences;

  std::vector<std::string> answers() const;
};

// Sequence i draws from derive_seed(seed, "genmodel", i). If max_length
// tokens are sampled without a terminal, a terminal is appended (not counted
// as a generation step) and the answer is NA.
GenerationBatch generate(const ToyGenerativeModel& model, std::uint64_t seed,
                         std::size_t n);

// Mean over sequences of the mean per-step next-token entropy.
double token_entropy(const GenerationBatch& batch);

// Entropy of the empirical label frequencies; NA is an ordinary label.
double answer_entropy(std::span<const std::string> answers);

// Order-1 chain: `filler_steps` positions each uniform over `branching`
// position-specific filler tokens, then one of `answers` answer tokens
// uniformly, then the terminal. Answer labels are "a0", "a1", ...
ToyGenerativeModel build_chain_model(std::size_t filler_steps, std::size_t branching,
                                     std::size_t answers);

struct ChainEntropies {
  double token_entropy;   // (F ln b + ln a) / (F + 2), identical for every sequence
  double answer_entropy;  // ln a
};

ChainEntropies chain_closed_form(std::size_t filler_steps, std::size_t branching,
                                 std::size_t answers);

struct DecouplingPair {
  ToyGenerativeModel base;        // chain(1, 1, base_answers)
  ToyGenerativeModel rlvr_like;   // chain(L, b, 1)
};

// Base: short deterministic prefix then a choice among base_answers answers.
// RLVR-like: L uniform-over-b filler steps converging on a single answer.
// For L >= 2, b >= 2 the RLVR-like model has strictly higher token entropy
// and, when base_answers >= 2, strictly lower answer entropy.
DecouplingPair build_decoupling_pair(std::size_t chain_length, std::size_t branching,
                                     std::size_t base_answers = 2);

// Exports generations as log records with reward = (answer == correct_answer).
SampleLog batch_to_sample_log(const GenerationBatch& batch, const std::string& problem_id,
                              const std::string& correct_answer,
                              const ToyGenerativeModel& model);

}  // namespace rlvr
