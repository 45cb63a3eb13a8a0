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

#include "test_util.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nameorigin::testing {

std::shared_ptr<const Taxonomy> ParseTaxonomy(std::string_view text) {
  return std::make_shared<const Taxonomy>(Taxonomy::Parse(text));
}

FullName Name(std::string first, std::string last) {
  FullName n;
  n.raw = first + " " + last;
  n.first = std::move(first);
  n.last = std::move(last);
  return n;
}

LabeledName Label(std::string first, std::string last, std::string country,
                  std::uint64_t count) {
  return {Name(std::move(first), std::move(last)), std::move(country), count};
}

std::filesystem::path DataDir() { return NAMEORIGIN_TEST_DATA; }
std::filesystem::path CliPath() { return NAMEORIGIN_CLI_PATH; }

TempDir::TempDir() {
  std::string tmpl =
      (std::filesystem::temp_directory_path() / "nameorigin-XXXXXX").string();
  if (!mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
  path_ = tmpl;
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::string ReadFile(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::filesystem::path& p, std::string_view content) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out << content;
}

int RunCommand(const std::string& cmd, std::string* out) {
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return -1;
  char buf[4096];
  std::string text;
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) text.append(buf, n);
  const int status = pclose(pipe);
  if (out) *out = std::move(text);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string Rng::Word(int len, std::string_view alphabet) {
  std::string w;
  for (int i = 0; i < len; ++i)
    w += alphabet[gen_() % alphabet.size()];
  return w;
}

std::string RandomTaxonomyText(Rng& rng, int max_depth, int max_children) {
  std::ostringstream out;
  out << "taxonomy = random\n\n[Root]\n";
  int next_id = 0, next_country = 0;
  std::vector<std::pair<std::string, int>> stack = {{"Root", 0}};
  while (!stack.empty()) {
    auto [parent, depth] = stack.back();
    stack.pop_back();
    const int kids = rng.Int(2, max_children);
    for (int k = 0; k < kids; ++k) {
      const std::string id = "N" + std::to_string(next_id++);
      out << "\n[" << id << "]\nparent = " << parent << "\n";
      if (depth + 1 < max_depth && rng.Coin(0.5)) {
        stack.push_back({id, depth + 1});
      } else {
        const int c = next_country++;
        out << "countries = " << static_cast<char>('A' + c / 26)
            << static_cast<char>('A' + c % 26) << "\n";
        out << "population = " << rng.Int(1, 1000000) << "\n";
      }
    }
  }
  return out.str();
}

}  // namespace nameorigin::testing
