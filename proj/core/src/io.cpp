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

#include "kipa/io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "kipa/errors.hpp"

namespace kipa {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::string format_double(double v) {
  if (v == 0.0) return "0";  // folds -0 into 0
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& text, const std::string& context) {
  const std::string t = trim(text);
  double v = 0.0;
  const char* first = t.data();
  if (!t.empty() && t.front() == '+') ++first;
  auto res = std::from_chars(first, t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size() || !std::isfinite(v))
    throw ParseError(context + ": not a finite number: '" + t + "'");
  return v;
}

CsvReader::CsvReader(std::istream& in, std::string source, std::vector<std::string> header)
    : in_(in), source_(std::move(source)), header_(std::move(header)) {}

void CsvReader::fail(const std::string& why) const {
  throw ParseError(source_ + ":" + std::to_string(lineno_) + ": " + why);
}

bool CsvReader::read_line(std::string& line) {
  while (std::getline(in_, line)) {
    ++lineno_;
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '#') {
      if (comment_) comment_(t.substr(1));
      continue;
    }
    line = t;
    return true;
  }
  return false;
}

bool CsvReader::next(std::vector<double>& row) {
  std::string line;
  if (!header_seen_) {
    if (!read_line(line)) fail("missing header row");
    const auto names = split(line);
    if (names != header_) {
      std::string want;
      for (std::size_t i = 0; i < header_.size(); ++i) want += (i ? "," : "") + header_[i];
      fail("expected header '" + want + "'");
    }
    header_seen_ = true;
  }
  if (!read_line(line)) return false;
  const auto fields = split(line);
  if (fields.size() != header_.size())
    fail("expected " + std::to_string(header_.size()) + " columns, got " + std::to_string(fields.size()));
  row.resize(fields.size());
  for (std::size_t i = 0; i < fields.size(); ++i)
    row[i] = parse_double(fields[i], source_ + ":" + std::to_string(lineno_) + " column " + header_[i]);
  return true;
}

void write_csv_row(std::ostream& out, const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) out << (i ? "," : "") << format_double(values[i]);
  out << '\n';
}

void write_csv_header(std::ostream& out, const std::vector<std::string>& names) {
  for (std::size_t i = 0; i < names.size(); ++i) out << (i ? "," : "") << names[i];
  out << '\n';
}

}  // namespace kipa
