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

#ifndef NAMEORIGIN_SYNTHGEN_H_
#define NAMEORIGIN_SYNTHGEN_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "nameorigin/ingest.h"
#include "nameorigin/taxonomy.h"

namespace nameorigin {

// Name-part generator of one synthetic country: parts are runs of syllables
// from a country-specific inventory plus an optional role-specific ending.
struct SynthCountry {
  std::string code;   // two uppercase letters
  std::string leaf;   // taxonomy leaf id
  std::string group;  // parent node id under the root
  std::uint64_t population = 1;
  double sample_rate = 1.0;  // relative share of labeled/online names
  std::vector<std::string> syllables;
  int first_min = 2, first_max = 3;  // syllables per first name
  int last_min = 2, last_max = 3;
  std::vector<std::string> first_endings;
  std::vector<std::string> last_endings;
  double ending_rate = 0.7;
};

struct SynthConfig {
  std::vector<SynthCountry> countries;
  double homophily = 0.9;
  std::uint64_t owners = 20000;
  int contacts_min = 10;
  int contacts_max = 30;
  std::uint64_t labels = 20000;  // labeled draws before aggregation
  double label_noise = 0.0;
  std::uint64_t seed = 7;
  std::size_t first_names = 500;  // inventory per country
  std::size_t last_names = 800;
  double zipf = 1.0;

  static SynthConfig Parse(std::string_view text);
  static SynthConfig Load(const std::filesystem::path& path);
  // The shipped 8-country, 2-group benchmark.
  static SynthConfig Default();
  std::string Serialize() const;
  // Throws std::invalid_argument naming the first bad field.
  void Validate() const;
};

struct ContactTruth {
  std::size_t owner_country = 0;
  std::vector<std::size_t> contact_countries;
};

struct SynthCorpus {
  std::vector<ContactList> contacts;
  std::vector<LabeledName> labels;  // aggregated, sorted
  std::string taxonomy_text;
  // role token ("F:x" / "L:x") -> country code
  std::map<std::string, std::string> part_country;
  std::vector<ContactTruth> truth;  // parallel to `contacts`
  // Per country index: first / last name inventories, most popular first.
  std::vector<std::vector<std::string>> first_inventory;
  std::vector<std::vector<std::string>> last_inventory;
};

// Deterministic per config (including seed).
SynthCorpus Generate(const SynthConfig& config);

// Writes contacts.tsv, labels.tsv, taxonomy.taxonomy and parts.tsv into `dir`.
void WriteCorpus(const SynthCorpus& corpus, const std::filesystem::path& dir);

// Fresh parts from country `country`'s generator that are neither in its
// inventory nor in `exclude`.
std::vector<std::string> GenerateNovelParts(const SynthConfig& config,
                                            const SynthCorpus& corpus,
                                            std::size_t country,
                                            NamePartRole role, std::size_t n,
                                            const std::set<std::string>& exclude,
                                            std::uint64_t seed);

// (same-country rate - 1/C) / (1 - 1/C): recovers h under the generator's
// mixing model.
double EmpiricalHomophily(const SynthCorpus& corpus, std::size_t countries);

}  // namespace nameorigin

#endif  // NAMEORIGIN_SYNTHGEN_H_
