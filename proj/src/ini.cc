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

#include "ini.h"

#include <algorithm>

#include "nameorigin/taxonomy.h"

namespace nameorigin::internal {

const std::string* IniSection::Find(std::string_view key) const {
  for (const auto& [k, v] : entries) {
    if (k == key) return &v;
  }
  return nullptr;
}

int IniSection::Count(std::string_view key) const {
  return static_cast<int>(std::count_if(
      entries.begin(), entries.end(),
      [&](const auto& kv) { return kv.first == key; }));
}

std::string Trim(std::string_view s) {
  const auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n';
  };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return std::string(s);
}

std::vector<std::string> SplitAndTrim(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t end = s.find(sep, start);
    if (end == std::string_view::npos) end = s.size();
    std::string item = Trim(s.substr(start, end - start));
    if (!item.empty()) out.push_back(std::move(item));
    start = end + 1;
  }
  return out;
}

IniDocument ParseIni(std::string_view text) {
  IniDocument doc;
  IniSection* current = &doc.globals;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string line = Trim(text.substr(pos, eol - pos));
    pos = eol + 1;
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        throw TaxonomyParseError("line " + std::to_string(line_no) +
                                 ": malformed section header '" + line + "'");
      }
      doc.sections.push_back(
          {Trim(std::string_view(line).substr(1, line.size() - 2)), line_no,
           {}});
      current = &doc.sections.back();
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw TaxonomyParseError("line " + std::to_string(line_no) +
                               ": expected 'key = value', got '" + line + "'");
    }
    std::string key = Trim(std::string_view(line).substr(0, eq));
    if (key.empty()) {
      throw TaxonomyParseError("line " + std::to_string(line_no) +
                               ": empty key");
    }
    current->entries.emplace_back(std::move(key),
                                  Trim(std::string_view(line).substr(eq + 1)));
  }
  return doc;
}

}  // namespace nameorigin::internal
