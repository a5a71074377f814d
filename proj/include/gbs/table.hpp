// Copyright 2026 The loopgbs Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"

namespace gbs {

/// Empty, integer, real, text or flag.
using Cell = std::variant<std::monostate, long long, double, std::string, bool>;

/// Column-typed result table with "# key=value" header comments. Reals are
/// printed with %.17g so files round-trip and compare byte for byte.
class Table {
 public:
  explicit Table(std::vector<std::string> columns);

  void comment(const std::string& key, const std::string& value);
  void add_row(std::vector<Cell> row);

  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const { return rows_; }

  std::string to_csv() const;
  /// {"meta": {...comments}, "columns": [...], "rows": [{col: value}]}.
  nlohmann::ordered_json to_json() const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::pair<std::string, std::string>> comments_;
  std::vector<std::vector<Cell>> rows_;
};

enum class OutputFormat { csv, json };

OutputFormat parse_format(const std::string& name);

/// Writes `stem` + ".csv" or ".json" into `dir`; returns the file name.
std::string write_table(const std::filesystem::path& dir, const std::string& stem,
                        const Table& table, OutputFormat format);

std::string format_real(double v);
std::string hex64(std::uint64_t v);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& content);

/// Pretty JSON with a trailing newline.
std::string dump_json(const nlohmann::ordered_json& j);

}  // namespace gbs
