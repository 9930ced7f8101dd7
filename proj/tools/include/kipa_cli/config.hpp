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

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace kipa::cli {

// Anything wrong with the run request itself: unknown key, bad value, missing
// file. Maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Flat "section.key = value" settings. Every key has a schema entry with a
// default taken from the reference device, so an empty config is a full run.
class Config {
 public:
  enum class Kind { Number, Text, Path, Choice };

  struct Entry {
    Kind kind;
    std::string value;
    std::vector<std::string> choices;  // Choice only
    std::string help;
  };

  Config();

  // INI file with [section] headers. Relative paths resolve against the
  // file's directory. Unknown sections or keys throw.
  void load_file(const std::string& path);
  // "section.key=value"; relative paths resolve against the working directory.
  void apply_override(const std::string& assignment);
  void set(const std::string& key, const std::string& value);

  // Parses every number and choice and checks every non-empty path exists.
  void validate() const;

  double number(const std::string& key) const;
  int integer(const std::string& key) const;
  const std::string& text(const std::string& key) const;
  // Comma-separated numbers.
  std::vector<double> numbers(const std::string& key) const;
  bool has_path(const std::string& key) const { return !text(key).empty(); }

  // Effective settings as INI, sections and keys in schema order.
  std::string dump() const;

  const std::map<std::string, Entry>& entries() const { return entries_; }

 private:
  const Entry& entry(const std::string& key) const;
  Entry& entry(const std::string& key);

  std::map<std::string, Entry> entries_;
  std::vector<std::string> order_;
};

}  // namespace kipa::cli
