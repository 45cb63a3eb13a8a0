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

#ifndef NAMEORIGIN_TAXONOMY_H_
#define NAMEORIGIN_TAXONOMY_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nameorigin/distribution.h"

namespace nameorigin {

// Malformed taxonomy or projection text.
class TaxonomyParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Structurally invalid tree. The message always names the offending node.
class TaxonomyValidationError : public std::runtime_error {
 public:
  TaxonomyValidationError(std::string node, const std::string& what)
      : std::runtime_error("node '" + node + "': " + what),
        node_(std::move(node)) {}
  const std::string& node() const { return node_; }

 private:
  std::string node_;
};

// Position of a node in Taxonomy's preorder numbering.
using NodeIndex = std::size_t;

struct TaxonomyNode {
  std::string id;
  std::optional<std::string> parent;
  std::vector<std::string> children;
  std::set<std::string> countries;  // ISO-3166 alpha-2; leaves only
  // Persons. Configured on leaves; derived by summation on internal nodes.
  std::uint64_t world_population = 0;

  bool is_leaf() const { return children.empty(); }
  friend bool operator==(const TaxonomyNode&, const TaxonomyNode&) = default;
};

// Immutable rooted class tree loaded from the taxonomy text format (see
// docs/formats.md). Nodes are numbered in preorder with children in file
// order, so index 0 is always the root.
class Taxonomy {
 public:
  static Taxonomy Parse(std::string_view text);
  static Taxonomy Load(const std::filesystem::path& path);

  // Canonical text form; Parse(Serialize()) reproduces an equal Taxonomy.
  std::string Serialize() const;

  const std::string& name() const { return name_; }
  const std::string& population_year() const { return population_year_; }
  std::size_t size() const { return nodes_.size(); }
  NodeIndex root() const { return 0; }
  const std::string& root_id() const { return nodes_.front().id; }

  const TaxonomyNode& node(NodeIndex i) const { return nodes_.at(i); }
  const TaxonomyNode& node(std::string_view id) const;
  std::optional<NodeIndex> index(std::string_view id) const;
  NodeIndex IndexOf(std::string_view id) const;  // throws std::out_of_range
  bool contains(std::string_view id) const { return index(id).has_value(); }

  const std::vector<NodeIndex>& children(NodeIndex i) const {
    return child_index_.at(i);
  }
  std::optional<NodeIndex> parent(NodeIndex i) const;
  bool IsLeaf(NodeIndex i) const { return child_index_.at(i).empty(); }
  // Leaves in preorder.
  const std::vector<NodeIndex>& leaves() const { return leaves_; }
  std::vector<std::string> LeafIds() const;
  // Root first, `i` last.
  std::vector<NodeIndex> PathFromRoot(NodeIndex i) const;
  int depth(NodeIndex i) const { return depth_.at(i); }
  int height() const;
  // True when `ancestor` lies on the root path of `i` (inclusive).
  bool IsAncestorOf(NodeIndex ancestor, NodeIndex i) const;

  // The unique leaf whose country set holds `country`, if any.
  std::optional<std::string> LeafForCountry(std::string_view country) const;
  std::size_t country_count() const { return country_leaf_.size(); }

  friend bool operator==(const Taxonomy& a, const Taxonomy& b) {
    return a.name_ == b.name_ && a.population_year_ == b.population_year_ &&
           a.nodes_ == b.nodes_;
  }

 private:
  Taxonomy() = default;
  void Index();

  std::string name_;
  std::string population_year_;
  std::vector<TaxonomyNode> nodes_;
  std::map<std::string, NodeIndex, std::less<>> by_id_;
  std::vector<std::vector<NodeIndex>> child_index_;
  std::vector<std::optional<NodeIndex>> parent_index_;
  std::vector<int> depth_;
  std::vector<NodeIndex> leaves_;
  std::map<std::string, std::string, std::less<>> country_leaf_;
};

// Many-to-one map from the leaves of a fine taxonomy onto nodes of a coarser
// one, used to score fine predictions against reduced schemes.
class TaxonomyProjection {
 public:
  TaxonomyProjection(std::shared_ptr<const Taxonomy> source,
                     std::shared_ptr<const Taxonomy> target,
                     std::map<std::string, std::string> leaf_map);

  // Lines of `source_leaf <TAB> target_node`; '#' starts a comment.
  static TaxonomyProjection Parse(std::string_view text,
                                  std::shared_ptr<const Taxonomy> source,
                                  std::shared_ptr<const Taxonomy> target);
  static TaxonomyProjection Load(const std::filesystem::path& path,
                                 std::shared_ptr<const Taxonomy> source,
                                 std::shared_ptr<const Taxonomy> target);
  static TaxonomyProjection Identity(std::shared_ptr<const Taxonomy> t);

  const Taxonomy& source() const { return *source_; }
  const Taxonomy& target() const { return *target_; }
  const std::map<std::string, std::string>& leaf_map() const {
    return leaf_map_;
  }
  const std::string& Map(std::string_view source_leaf) const;

  // Sums source-leaf masses into their target nodes. The input must sum to 1
  // within 1e-9; unmapped ids raise std::invalid_argument.
  ClassDistribution Project(const ClassDistribution& dist) const;

 private:
  std::shared_ptr<const Taxonomy> source_;
  std::shared_ptr<const Taxonomy> target_;
  std::map<std::string, std::string> leaf_map_;
};

// Resolves a shipped profile name ("nat39", "nat13", "ethnicity6", ...) or a
// file path to a taxonomy file.
std::filesystem::path ResolveConfigPath(std::string_view name_or_path,
                                        std::string_view extension);

}  // namespace nameorigin

#endif  // NAMEORIGIN_TAXONOMY_H_
