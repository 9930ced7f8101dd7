// Copyright 2026 The kipa-esr Authors
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

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace kipa {

// Shortest round-trip decimal form; identical input gives identical bytes.
std::string format_double(double v);
double parse_double(const std::string& text, const std::string& context);

// Numeric CSV with a mandatory header row. Blank lines and lines starting with
// '#' are skipped (and handed to the comment callback, if any). Header names
// are matched after trimming, so "t_s, I, Q" and "t_s,I,Q" are equivalent.
class CsvReader {
 public:
  CsvReader(std::istream& in, std::string source, std::vector<std::string> header);

  void on_comment(std::function<void(const std::string&)> cb) { comment_ = std::move(cb); }
  bool next(std::vector<double>& row);
  [[noreturn]] void fail(const std::string& why) const;

 private:
  bool read_line(std::string& line);

  std::istream& in_;
  std::string source_;
  std::vector<std::string> header_;
  std::function<void(const std::string&)> comment_;
  bool header_seen_ = false;
  int lineno_ = 0;
};

void write_csv_row(std::ostream& out, const std::vector<double>& values);
void write_csv_header(std::ostream& out, const std::vector<std::string>& names);

}  // namespace kipa
