// Copyright 2026 The ift-trust Authors
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

#ifndef IFT_APP_CSV_HPP
#define IFT_APP_CSV_HPP

#include <string>
#include <vector>

namespace ift::app {

/// Numeric CSV table: mandatory header row, comma separators, '.' decimals.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  int column(const std::string& name) const;  // -1 if absent
};

/// Parses CSV text. Throws ConfigError naming `source` and the offending line
/// on ragged rows, empty cells, non-numeric or non-finite values.
CsvTable parse_csv(const std::string& text, const std::string& source);
CsvTable read_csv(const std::string& path);

/// Shortest round-trip decimal representation; "nan"/"inf" are never produced
/// for finite input.
std::string format_number(double v);

class CsvWriter {
 public:
  explicit CsvWriter(const std::vector<std::string>& header);
  CsvWriter& row(const std::vector<std::string>& cells);
  const std::string& str() const { return text_; }

 private:
  std::size_t columns_;
  std::string text_;
};

}  // namespace ift::app

#endif  // IFT_APP_CSV_HPP
