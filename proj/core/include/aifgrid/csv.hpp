// Copyright 2026 The aifgrid Authors
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

#ifndef AIFGRID_CSV_HPP_
#define AIFGRID_CSV_HPP_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace aifgrid {

// Numeric comma-separated table with a single header line.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  // Index of a header column; throws ParameterError if absent.
  int Column(std::string_view name) const;
};

// Throws IoError if the file cannot be read and ParameterError on ragged rows
// or non-numeric cells.
CsvTable ReadCsv(const std::filesystem::path& path);

// Shortest decimal text that round-trips to the same double.
std::string FormatNumber(double value);

// Writes `contents` to a sibling temporary file and renames it over `path`.
void WriteFileAtomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace aifgrid

#endif  // AIFGRID_CSV_HPP_
