/*
 * Copyright 2026 The gpsurrogate Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

// Minimal CSV artifact I/O. Every file starts with a "# <schema> v<version>"
// comment line followed by a header row. Doubles are written in the shortest
// decimal form that round-trips exactly.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace gpsur {

inline constexpr int kCsvSchemaVersion = 1;

std::string format_double(double v);
double parse_double(std::string_view text);

class CsvWriter {
 public:
  CsvWriter(std::string schema, std::vector<std::string> header);

  CsvWriter& add_row(std::vector<std::string> cells);
  std::size_t rows() const { return rows_.size(); }

  std::string str() const;
  void save(const std::string& path) const;  // throws IoError

 private:
  std::string schema_;
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

struct CsvTable {
  std::string schema;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column index by name; throws IoError if absent.
  std::size_t column(std::string_view name) const;
  double number(std::size_t row, std::size_t col) const;
  std::size_t size() const { return rows.size(); }
};

/// Parse a CSV written by CsvWriter; throws IoError on missing file or bad shape.
CsvTable read_csv(const std::string& path);

/// Split on commas and/or whitespace, dropping empty tokens.
std::vector<std::string> split_list(std::string_view text);

}  // namespace gpsur
