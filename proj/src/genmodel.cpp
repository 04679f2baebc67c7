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

#include "rlvr/genmodel.hpp"

#include <cmath>
#include <set>
#include <unordered_map>
#include <utility>

#include "rlvr/distribution.hpp"
#include "rlvr/error.hpp"
#include "rlvr/seed.hpp"

namespace rlvr {

ToyGenerativeModel::ToyGenerativeModel(std::vector<std::string> vocabulary,
                                       std::size_t order, std::size_t max_length,
                                       std::map<State, std::vector<double>> transitions,
                                       std::map<TokenId, std::string> answer_tokens)
    : vocabulary_(std::move(vocabulary)),
      order_(order),
      max_length_(max_length),
      transitions_(std::move(transitions)),
      answer_tokens_(std::move(answer_tokens)) {
  if (vocabulary_.empty()) fail(ErrorCode::kInvalidModel, "vocabulary is empty");
  if (order_ < 1 || order_ > 2) fail(ErrorCode::kInvalidModel, "order must be 1 or 2");
  if (max_length_ < 1) fail(ErrorCode::kInvalidModel, "max_length must be at least 1");
  for (const auto& [state, row] : transitions_) {
    if (state.size() != order_) fail(ErrorCode::kInvalidModel, "state length differs from order");
    if (row.size() != vocabulary_.size()) {
      fail(ErrorCode::kInvalidModel, "transition row does not cover the vocabulary");
    }
    double total = 0.0;
    for (double p : row) {
      if (!std::isfinite(p) || p < 0.0) fail(ErrorCode::kInvalidModel, "invalid probability");
      total += p;
    }
    if (std::abs(total - 1.0) > kNormalizationTolerance) {
      fail(ErrorCode::kInvalidModel, "transition row does not sum to 1");
    }
  }
  for (const auto& [token, label] : answer_tokens_) {
    if (token == kTerminal || token >= vocabulary_.size()) {
      fail(ErrorCode::kInvalidModel, "answer token outside the vocabulary");
    }
  }
  check_reachable();
}

ToyGenerativeModel::State ToyGenerativeModel::state_for(
    std::span<const TokenId> history) const {
  State s(order_, kBos);
  const std::size_t take = std::min(order_, history.size());
  for (std::size_t i = 0; i < take; ++i) {
    s[order_ - take + i] = history[history.size() - take + i];
  }
  return s;
}

const std::vector<double>& ToyGenerativeModel::next_token_distribution(
    std::span<const TokenId> history) const {
  auto it = transitions_.find(state_for(history));
  if (it == transitions_.end()) {
    fail(ErrorCode::kInvalidModel, "no transition for reachable state");
  }
  return it->second;
}

std::string ToyGenerativeModel::label_for(std::span<const TokenId> tokens,
                                          bool terminated) const {
  if (!terminated) return kNaLabel;
  for (auto it = tokens.rbegin(); it != tokens.rend(); ++it) {
    if (auto a = answer_tokens_.find(*it); a != answer_tokens_.end()) return a->second;
  }
  return kNaLabel;
}

void ToyGenerativeModel::check_reachable() const {
  // States visited at each depth; a state at depth < max_length must have a row.
  std::set<State> frontier = {State(order_, kBos)};
  for (std::size_t depth = 0; depth < max_length_ && !frontier.empty(); ++depth) {
    std::set<State> next;
    for (const auto& s : frontier) {
      auto it = transitions_.find(s);
      if (it == transitions_.end()) {
        fail(ErrorCode::kInvalidModel, "reachable state at depth " +
                                           std::to_string(depth) + " has no transition");
      }
      for (TokenId t = 0; t < it->second.size(); ++t) {
        if (it->second[t] == 0.0 || t == kTerminal) continue;
        State succ(s.begin() + 1, s.end());
        succ.push_back(t);
        next.insert(std::move(succ));
      }
    }
    frontier = std::move(next);
  }
}

std::vector<std::string> GenerationBatch::answers() const {
  std::vector<std::string> out;
  out.reserve(sequences.size());
  for (const auto& s : sequences) out.push_back(s.answer);
  return out;
}

GenerationBatch generate(const ToyGenerativeModel& model, std::uint64_t seed,
                         std::size_t n) {
  if (n == 0) fail(ErrorCode::kInvalidParams, "n must be at least 1");
  GenerationBatch batch;
  batch.sequences.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng(derive_seed(seed, "genmodel", i));
    auto& seq = batch.sequences[i];
    std::vector<TokenId> body;
    for (std::size_t t = 0; t < model.max_length(); ++t) {
      const auto& dist = model.next_token_distribution(body);
      const TokenId tok = sample_one(dist, rng);
      seq.step_distributions.push_back(dist);
      seq.token_logprobs.push_back(std::log(dist[tok]));
      seq.tokens.push_back(tok);
      if (tok == kTerminal) {
        seq.terminated = true;
        break;
      }
      body.push_back(tok);
    }
    if (!seq.terminated) seq.tokens.push_back(kTerminal);
    seq.answer = model.label_for(body, seq.terminated);
  }
  return batch;
}

namespace {

double row_entropy(const std::vector<double>& p) {
  double h = 0.0;
  for (double x : p) {
    if (x > 0.0) h -= x * std::log(x);
  }
  return h;
}

}  // namespace

double token_entropy(const GenerationBatch& batch) {
  if (batch.sequences.empty()) fail(ErrorCode::kEmptyBatch, "batch has no sequences");
  double total = 0.0;
  for (const auto& seq : batch.sequences) {
    double steps = 0.0;
    for (const auto& d : seq.step_distributions) steps += row_entropy(d);
    total += steps / static_cast<double>(seq.step_distributions.size());
  }
  return total / static_cast<double>(batch.sequences.size());
}

double answer_entropy(std::span<const std::string> answers) {
  if (answers.empty()) fail(ErrorCode::kEmptySequence, "no answers");
  std::map<std::string, std::size_t> freq;
  for (const auto& a : answers) ++freq[a];
  const double n = static_cast<double>(answers.size());
  double h = 0.0;
  for (const auto& [label, count] : freq) {
    const double p = static_cast<double>(count) / n;
    h -= p * std::log(p);
  }
  return h;
}

ToyGenerativeModel build_chain_model(std::size_t filler_steps, std::size_t branching,
                                     std::size_t answers) {
  if (branching < 1 || answers < 1) {
    fail(ErrorCode::kInvalidParams, "branching and answers must be at least 1");
  }
  std::vector<std::string> vocab = {"</s>"};
  std::vector<std::vector<TokenId>> fillers(filler_steps);
  for (std::size_t t = 0; t < filler_steps; ++t) {
    for (std::size_t j = 0; j < branching; ++j) {
      fillers[t].push_back(vocab.size());
      vocab.push_back("f" + std::to_string(t) + "_" + std::to_string(j));
    }
  }
  std::vector<TokenId> answer_ids;
  std::map<TokenId, std::string> labels;
  for (std::size_t j = 0; j < answers; ++j) {
    answer_ids.push_back(vocab.size());
    labels[vocab.size()] = "a" + std::to_string(j);
    vocab.push_back("a" + std::to_string(j));
  }
  auto uniform_over = [&](const std::vector<TokenId>& ids) {
    std::vector<double> row(vocab.size(), 0.0);
    for (TokenId id : ids) row[id] = 1.0 / static_cast<double>(ids.size());
    return row;
  };

  std::map<ToyGenerativeModel::State, std::vector<double>> rows;
  const auto& first = filler_steps > 0 ? fillers[0] : answer_ids;
  rows[{kBos}] = uniform_over(first);
  for (std::size_t t = 0; t < filler_steps; ++t) {
    const auto& next = t + 1 < filler_steps ? fillers[t + 1] : answer_ids;
    for (TokenId id : fillers[t]) rows[{id}] = uniform_over(next);
  }
  for (TokenId id : answer_ids) rows[{id}] = uniform_over({kTerminal});
  return ToyGenerativeModel(std::move(vocab), 1, filler_steps + 2, std::move(rows),
                            std::move(labels));
}

ChainEntropies chain_closed_form(std::size_t filler_steps, std::size_t branching,
                                 std::size_t answers) {
  const double f = static_cast<double>(filler_steps);
  return {(f * std::log(static_cast<double>(branching)) +
           std::log(static_cast<double>(answers))) / (f + 2.0),
          std::log(static_cast<double>(answers))};
}

DecouplingPair build_decoupling_pair(std::size_t chain_length, std::size_t branching,
                                     std::size_t base_answers) {
  if (chain_length < 2) fail(ErrorCode::kInvalidParams, "chain length must be at least 2");
  return {build_chain_model(1, 1, base_answers),
          build_chain_model(chain_length, branching, 1)};
}

SampleLog batch_to_sample_log(const GenerationBatch& batch, const std::string& problem_id,
                              const std::string& correct_answer,
                              const ToyGenerativeModel& model) {
  SampleLog log;
  log.records.reserve(batch.sequences.size());
  for (std::size_t i = 0; i < batch.sequences.size(); ++i) {
    const auto& seq = batch.sequences[i];
    SampleRecord r;
    r.problem_id = problem_id;
    r.sample_index = i;
    for (std::size_t t = 0; t < seq.tokens.size(); ++t) {
      if (t) r.completion += ' ';
      r.completion += model.vocabulary()[seq.tokens[t]];
    }
    r.reward = seq.answer == correct_answer ? 1 : 0;
    if (seq.answer != kNaLabel) r.answer = seq.answer;
    r.token_logprobs = seq.token_logprobs;
    log.records.push_back(std::move(r));
  }
  return log;
}

}  // namespace rlvr
