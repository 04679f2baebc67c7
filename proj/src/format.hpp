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

// Deterministic CSV output. Doubles use the shortest round-trip form so the
// same values always produce the same bytes.

#pragma once

#include <charconv>
#include <cmath>
#include <concepts>
#include <string>
#include <string_view>
#include <vector>

namespace rlvr {

inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";  // folds -0
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, end);
}

inline std::string csv_escape(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

class CsvTable {
 public:
  class Row {
   public:
    Row& add(double x) { return push(format_double(x)); }
    Row& add(bool b) { return push(b ? "1" : "0"); }
    Row& add(std::string_view s) { return push(csv_escape(s)); }
    Row& add(const char* s) { return add(std::string_view(s)); }
    Row& add(const std::string& s) { return add(std::string_view(s)); }
    template <std::integral T>
      requires(!std::same_as<T, bool>)
    Row& add(T x) {
      return push(std::to_string(x));
    }

    const std::vector<std::string>& cells() const { return cells_; }

   private:
    Row& push(std::string s) {
      cells_.push_back(std::move(s));
      return *this;
    }
    std::vector<std::string> cells_;
  };

  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_column(std::string name) { header_.push_back(std::move(name)); }

  Row& row() { return rows_.emplace_back(); }

  std::string str() const {
    std::string out;
    append_line(out, header_, true);
    for (const auto& r : rows_) append_line(out, r.cells(), false);
    return out;
  }

 private:
  static void append_line(std::string& out, const std::vector<std::string>& cells,
                          bool escape) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += escape ? csv_escape(cells[i]) : cells[i];
    }
    out += '\n';
  }

  std::vector<std::string> header_;
  std::vector<Row> rows_;
};

}  // namespace rlvr
