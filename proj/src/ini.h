// Copyright 2026 The nameorigin Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef NAMEORIGIN_SRC_INI_H_
#define NAMEORIGIN_SRC_INI_H_

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace nameorigin::internal {

// Minimal sectioned key/value reader shared by the taxonomy and synthgen
// config formats. Keeps file order and duplicates so callers can validate.
struct IniSection {
  std::string name;
  int line = 0;
  std::vector<std::pair<std::string, std::string>> entries;

  const std::string* Find(std::string_view key) const;
  int Count(std::string_view key) const;
};

struct IniDocument {
  IniSection globals;  // keys before the first [section]
  std::vector<IniSection> sections;
};

// Throws TaxonomyParseError (reused as the generic config parse error) with
// the 1-based line number on malformed input.
IniDocument ParseIni(std::string_view text);

std::string Trim(std::string_view s);
std::vector<std::string> SplitAndTrim(std::string_view s, char sep);

}  // namespace nameorigin::internal

#endif  // NAMEORIGIN_SRC_INI_H_
