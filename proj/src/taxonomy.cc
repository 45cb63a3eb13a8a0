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

#include "nameorigin/taxonomy.h"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include "ini.h"

namespace nameorigin {
namespace {

using internal::IniDocument;
using internal::IniSection;

bool ValidNodeId(std::string_view id) {
  if (id.empty()) return false;
  for (unsigned char c : id) {
    if (c <= 0x20 || c >= 0x7f || c == '=' || c == '[' || c == ']' ||
        c == '#' || c == ',')
      return false;
  }
  return true;
}

bool ValidCountryCode(std::string_view code) {
  return code.size() == 2 && code[0] >= 'A' && code[0] <= 'Z' &&
         code[1] >= 'A' && code[1] <= 'Z';
}

std::uint64_t ParsePopulation(const std::string& text, const IniSection& s) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos)
    throw TaxonomyParseError("line " + std::to_string(s.line) + ": node '" +
                             s.name + "' has non-integer population '" + text +
                             "'");
  return std::stoull(text);
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

Taxonomy Taxonomy::Parse(std::string_view text) {
  const IniDocument doc = internal::ParseIni(text);
  Taxonomy t;
  for (const auto& [key, value] : doc.globals.entries) {
    if (key == "taxonomy") {
      t.name_ = value;
    } else if (key == "population_year") {
      t.population_year_ = value;
    } else {
      throw TaxonomyParseError("unknown top-level key '" + key + "'");
    }
  }
  if (t.name_.empty()) throw TaxonomyParseError("missing 'taxonomy = <name>'");
  if (doc.sections.empty()) throw TaxonomyParseError("taxonomy has no nodes");

  // Gather raw records in file order.
  std::vector<TaxonomyNode> raw;
  std::map<std::string, std::size_t, std::less<>> raw_index;
  for (const IniSection& s : doc.sections) {
    if (!ValidNodeId(s.name))
      throw TaxonomyValidationError(s.name, "invalid node id");
    TaxonomyNode n;
    n.id = s.name;
    for (const auto& [key, value] : s.entries) {
      if (s.Count(key) > 1)
        throw TaxonomyValidationError(s.name, "key '" + key + "' repeated");
      if (key == "parent") {
        n.parent = value;
      } else if (key == "countries") {
        for (const std::string& c : internal::SplitAndTrim(value, ',')) {
          if (!ValidCountryCode(c))
            throw TaxonomyValidationError(s.name,
                                          "invalid country code '" + c + "'");
          n.countries.insert(c);
        }
      } else if (key == "population") {
        n.world_population = ParsePopulation(value, s);
      } else {
        throw TaxonomyParseError("line " + std::to_string(s.line) +
                                 ": unknown key '" + key + "'");
      }
    }
    if (auto it = raw_index.find(n.id); it != raw_index.end()) {
      const auto& first = raw[it->second];
      throw TaxonomyValidationError(
          n.id, "defined twice (under parents '" +
                    first.parent.value_or("<none>") + "' and '" +
                    n.parent.value_or("<none>") + "')");
    }
    raw_index.emplace(n.id, raw.size());
    raw.push_back(std::move(n));
  }

  std::optional<std::size_t> root;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    TaxonomyNode& n = raw[i];
    if (!n.parent) {
      if (root) throw TaxonomyValidationError(n.id, "second root node");
      root = i;
      continue;
    }
    auto it = raw_index.find(*n.parent);
    if (it == raw_index.end())
      throw TaxonomyValidationError(
          n.id, "parent '" + *n.parent + "' is not defined (orphan)");
    if (it->second == i)
      throw TaxonomyValidationError(n.id, "node is its own parent");
    raw[it->second].children.push_back(n.id);
  }
  if (!root)
    throw TaxonomyValidationError(raw.front().id,
                                  "no root node (every node has a parent)");

  // Preorder walk from the root; unreached nodes sit on a cycle.
  std::vector<bool> seen(raw.size(), false);
  std::function<void(std::size_t)> visit = [&](std::size_t i) {
    seen[i] = true;
    t.nodes_.push_back(raw[i]);
    for (const std::string& child : raw[i].children)
      visit(raw_index.find(child)->second);
  };
  visit(*root);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (!seen[i])
      throw TaxonomyValidationError(raw[i].id,
                                    "not reachable from the root (cycle)");
  }

  std::map<std::string, std::string> owner;
  for (const TaxonomyNode& n : t.nodes_) {
    if (!n.is_leaf() && !n.countries.empty())
      throw TaxonomyValidationError(n.id, "internal node carries countries");
    if (!n.is_leaf() && n.world_population != 0)
      throw TaxonomyValidationError(
          n.id, "internal node carries a population (derived from leaves)");
    for (const std::string& c : n.countries) {
      auto [it, inserted] = owner.emplace(c, n.id);
      if (!inserted)
        throw TaxonomyValidationError(n.id, "country " + c +
                                                " already assigned to leaf '" +
                                                it->second + "'");
    }
  }
  t.Index();
  return t;
}

void Taxonomy::Index() {
  by_id_.clear();
  for (NodeIndex i = 0; i < nodes_.size(); ++i) by_id_.emplace(nodes_[i].id, i);
  child_index_.assign(nodes_.size(), {});
  parent_index_.assign(nodes_.size(), std::nullopt);
  depth_.assign(nodes_.size(), 0);
  leaves_.clear();
  country_leaf_.clear();
  for (NodeIndex i = 0; i < nodes_.size(); ++i) {
    for (const std::string& c : nodes_[i].children) {
      const NodeIndex ci = by_id_.at(c);
      child_index_[i].push_back(ci);
      parent_index_[ci] = i;
    }
  }
  // Preorder guarantees parents precede children.
  for (NodeIndex i = 1; i < nodes_.size(); ++i)
    depth_[i] = depth_[*parent_index_[i]] + 1;
  for (NodeIndex i = 0; i < nodes_.size(); ++i) {
    if (child_index_[i].empty()) {
      leaves_.push_back(i);
      for (const std::string& c : nodes_[i].countries)
        country_leaf_.emplace(c, nodes_[i].id);
    }
  }
  for (NodeIndex i = nodes_.size(); i-- > 0;) {
    if (child_index_[i].empty()) continue;
    std::uint64_t total = 0;
    for (NodeIndex c : child_index_[i]) total += nodes_[c].world_population;
    nodes_[i].world_population = total;
  }
}

Taxonomy Taxonomy::Load(const std::filesystem::path& path) {
  return Parse(ReadFile(path));
}

std::string Taxonomy::Serialize() const {
  std::ostringstream out;
  out << "taxonomy = " << name_ << "\n";
  if (!population_year_.empty())
    out << "population_year = " << population_year_ << "\n";
  for (const TaxonomyNode& n : nodes_) {
    out << "\n[" << n.id << "]\n";
    if (n.parent) out << "parent = " << *n.parent << "\n";
    if (!n.countries.empty()) {
      out << "countries = ";
      bool first = true;
      for (const std::string& c : n.countries) {
        out << (first ? "" : ", ") << c;
        first = false;
      }
      out << "\n";
    }
    if (n.is_leaf() && n.world_population > 0)
      out << "population = " << n.world_population << "\n";
  }
  return out.str();
}

const TaxonomyNode& Taxonomy::node(std::string_view id) const {
  return nodes_.at(IndexOf(id));
}

std::optional<NodeIndex> Taxonomy::index(std::string_view id) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

NodeIndex Taxonomy::IndexOf(std::string_view id) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end())
    throw std::out_of_range("unknown taxonomy node '" + std::string(id) + "'");
  return it->second;
}

std::optional<NodeIndex> Taxonomy::parent(NodeIndex i) const {
  return parent_index_.at(i);
}

std::vector<std::string> Taxonomy::LeafIds() const {
  std::vector<std::string> ids;
  ids.reserve(leaves_.size());
  for (NodeIndex i : leaves_) ids.push_back(nodes_[i].id);
  return ids;
}

std::vector<NodeIndex> Taxonomy::PathFromRoot(NodeIndex i) const {
  std::vector<NodeIndex> path;
  for (std::optional<NodeIndex> cur = i; cur; cur = parent_index_[*cur])
    path.push_back(*cur);
  return {path.rbegin(), path.rend()};
}

int Taxonomy::height() const {
  int h = 0;
  for (int d : depth_) h = std::max(h, d);
  return h;
}

bool Taxonomy::IsAncestorOf(NodeIndex ancestor, NodeIndex i) const {
  for (std::optional<NodeIndex> cur = i; cur; cur = parent_index_[*cur]) {
    if (*cur == ancestor) return true;
  }
  return false;
}

std::optional<std::string> Taxonomy::LeafForCountry(
    std::string_view country) const {
  auto it = country_leaf_.find(country);
  if (it == country_leaf_.end()) return std::nullopt;
  return it->second;
}

TaxonomyProjection::TaxonomyProjection(std::shared_ptr<const Taxonomy> source,
                                       std::shared_ptr<const Taxonomy> target,
                                       std::map<std::string, std::string> map)
    : source_(std::move(source)),
      target_(std::move(target)),
      leaf_map_(std::move(map)) {
  for (const auto& [from, to] : leaf_map_) {
    const auto si = source_->index(from);
    if (!si || !source_->IsLeaf(*si))
      throw TaxonomyValidationError(from, "projection source is not a leaf of '" +
                                              source_->name() + "'");
    if (!target_->contains(to))
      throw TaxonomyValidationError(
          from, "projection target '" + to + "' is not a node of '" +
                    target_->name() + "'");
  }
  for (NodeIndex leaf : source_->leaves()) {
    const std::string& id = source_->node(leaf).id;
    if (!leaf_map_.contains(id))
      throw TaxonomyValidationError(id, "leaf is not mapped by the projection");
  }
}

TaxonomyProjection TaxonomyProjection::Parse(
    std::string_view text, std::shared_ptr<const Taxonomy> source,
    std::shared_ptr<const Taxonomy> target) {
  std::map<std::string, std::string> map;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string trimmed = internal::Trim(line);
    if (trimmed.empty() || trimmed[0] == '#') continue;
    const std::size_t tab = trimmed.find('\t');
    if (tab == std::string::npos)
      throw TaxonomyParseError("projection line " + std::to_string(line_no) +
                               ": expected 'source<TAB>target'");
    std::string from = internal::Trim(trimmed.substr(0, tab));
    std::string to = internal::Trim(trimmed.substr(tab + 1));
    if (!map.emplace(from, to).second)
      throw TaxonomyValidationError(from, "mapped twice in projection");
  }
  return TaxonomyProjection(std::move(source), std::move(target),
                            std::move(map));
}

TaxonomyProjection TaxonomyProjection::Load(
    const std::filesystem::path& path, std::shared_ptr<const Taxonomy> source,
    std::shared_ptr<const Taxonomy> target) {
  return Parse(ReadFile(path), std::move(source), std::move(target));
}

TaxonomyProjection TaxonomyProjection::Identity(
    std::shared_ptr<const Taxonomy> t) {
  std::map<std::string, std::string> map;
  for (NodeIndex leaf : t->leaves()) map.emplace(t->node(leaf).id, t->node(leaf).id);
  return TaxonomyProjection(t, t, std::move(map));
}

const std::string& TaxonomyProjection::Map(std::string_view source_leaf) const {
  auto it = leaf_map_.find(std::string(source_leaf));
  if (it == leaf_map_.end())
    throw std::invalid_argument("projection has no mapping for '" +
                                std::string(source_leaf) + "'");
  return it->second;
}

ClassDistribution TaxonomyProjection::Project(
    const ClassDistribution& dist) const {
  if (std::abs(dist.Sum() - 1.0) > 1e-9)
    throw std::invalid_argument("distribution does not sum to 1");
  ClassDistribution out;
  out.node = target_->root_id();
  for (const auto& [leaf, p] : dist.probs) out.probs[Map(leaf)] += p;
  return out;
}

std::filesystem::path ResolveConfigPath(std::string_view name_or_path,
                                        std::string_view extension) {
  const std::filesystem::path direct{std::string(name_or_path)};
  if (std::filesystem::is_regular_file(direct)) return direct;
  std::vector<std::filesystem::path> dirs;
  if (const char* env = std::getenv("NAMEORIGIN_CONFIG_DIR")) dirs.emplace_back(env);
#ifdef NAMEORIGIN_CONFIG_DIR
  dirs.emplace_back(NAMEORIGIN_CONFIG_DIR);
#endif
  for (const auto& dir : dirs) {
    auto candidate = dir / (std::string(name_or_path) + std::string(extension));
    if (std::filesystem::is_regular_file(candidate)) return candidate;
  }
  throw std::runtime_error("no config file found for '" +
                           std::string(name_or_path) + "'");
}

}  // namespace nameorigin
