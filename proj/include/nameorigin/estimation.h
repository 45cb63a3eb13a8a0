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

#ifndef NAMEORIGIN_ESTIMATION_H_
#define NAMEORIGIN_ESTIMATION_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nameorigin/embedding.h"
#include "nameorigin/ingest.h"
#include "nameorigin/taxonomy.h"

namespace nameorigin {

// Evidence sources, in decreasing order of confidence. kUs holds census-based
// likelihoods and only appears in ethnicity models.
enum class Source { kUs, kTr, kEm, kPs, kCh };

std::string_view SourceName(Source s);  // "US", "TR", "EM", "PS", "CH"
std::optional<Source> ParseSource(std::string_view s);

// One value per taxonomy node, indexed by NodeIndex.
using NodeVector = std::vector<double>;

// P(key | N) for every node N of a taxonomy. Keys are name parts for TR, EM
// and US tables, "P:<affix>" / "S:<affix>" for PS and script names for CH.
class LikelihoodTable {
 public:
  LikelihoodTable() = default;
  LikelihoodTable(Source source, NamePartRole role,
                  std::shared_ptr<const Taxonomy> taxonomy)
      : source_(source), role_(role), taxonomy_(std::move(taxonomy)) {}

  Source source() const { return source_; }
  NamePartRole role() const { return role_; }
  const Taxonomy& taxonomy() const { return *taxonomy_; }
  const std::shared_ptr<const Taxonomy>& taxonomy_ptr() const {
    return taxonomy_;
  }
  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }

  const NodeVector* Find(std::string_view key) const;
  bool contains(std::string_view key) const { return Find(key) != nullptr; }
  void Set(std::string key, NodeVector row);
  const std::map<std::string, NodeVector, std::less<>>& rows() const {
    return rows_;
  }

  // Per-class column sum over all rows.
  double ColumnSum(NodeIndex n) const;

  // Entries finite and in [0, 1] (US: nonnegative); for TR and EM tables
  // also every column sum <= 1 + 1e-6. On failure `why` names the row or
  // column.
  bool Valid(std::string* why = nullptr) const;

  // TSV rows "source role part class prob" for every nonzero entry, sorted,
  // probabilities printed with 17 significant digits.
  void Write(std::ostream& out) const;
  static LikelihoodTable Read(std::istream& in, Source source,
                              NamePartRole role,
                              std::shared_ptr<const Taxonomy> taxonomy);

  friend bool operator==(const LikelihoodTable& a, const LikelihoodTable& b) {
    return a.source_ == b.source_ && a.role_ == b.role_ && a.rows_ == b.rows_;
  }

 private:
  Source source_ = Source::kTr;
  NamePartRole role_ = NamePartRole::kFirst;
  std::shared_ptr<const Taxonomy> taxonomy_;
  std::map<std::string, NodeVector, std::less<>> rows_;
};

// Internet and world priors. Leaf values come from label counts (I) and configured
// populations (W); internal nodes hold the sums of their children.
struct PriorTable {
  NodeVector internet;      // P^I
  NodeVector world;         // P^W
  NodeVector sample_ratio;  // s_N = I^N / W^N, 0 where W^N = 0
  double overall_ratio = 0.0;  // S = sum I / sum W

  // Priors of `children` renormalized to sum to 1 (uniform if all zero).
  std::vector<double> ChildPriors(std::span<const NodeIndex> children,
                                  bool world_mode) const;

  void Write(std::ostream& out, const Taxonomy& t) const;
  static PriorTable Read(std::istream& in, const Taxonomy& t);
  friend bool operator==(const PriorTable&, const PriorTable&) = default;
};

// Throws std::invalid_argument when there are no labels or a leaf has
// labels but zero population.
PriorTable BuildPriors(const CountTable& counts, const Taxonomy& t);
// Same, from explicit per-leaf label counts I^N (keyed by leaf id).
PriorTable BuildPriors(const std::map<std::string, std::uint64_t>& label_counts,
                       const Taxonomy& t);

// P^I = P^W * s_N / S and its inverse, elementwise.
NodeVector InternetFromWorld(const NodeVector& world,
                             const NodeVector& sample_ratio, double S);
NodeVector WorldFromInternet(const NodeVector& internet,
                             const NodeVector& sample_ratio, double S);

// Bayes over the leaves of `t`: P(N|v) = P(v|N) P(N) / sum_M P(v|M) P(M),
// internal nodes summed from their leaves. All-zero evidence gives zeros.
NodeVector LikelihoodToPosterior(const NodeVector& likelihood,
                                 const NodeVector& prior, const Taxonomy& t);
// P(v|N) = P(N|v) P(v) / P(N); 0 where P(N) = 0.
NodeVector PosteriorToLikelihood(const NodeVector& posterior, double part_prior,
                                 const NodeVector& prior);

// Marginal P(v) per role.
class PartPrior {
 public:
  enum class Corpus { kLabeled, kContacts };

  // Relative frequency in the labeled counts with add-one smoothing over
  // `vocabulary` (every part that may be queried).
  static PartPrior FromLabels(const CountTable& counts, NamePartRole role,
                              const std::vector<std::string>& vocabulary);
  // Relative frequency of role-tagged tokens in the contact sentences.
  static PartPrior FromSentences(std::span<const Sentence> sentences,
                                 NamePartRole role);

  double operator()(std::string_view part) const;
  double Total() const;

 private:
  std::map<std::string, double, std::less<>> p_;
};

// P_tr(v|N) = C(v,N) / C(N) for parts in V_tr; internal nodes use
// subtree sums. Leaves with C(N) = 0 get 0 with a warning.
LikelihoodTable EstimateTraining(const CountTable& counts, NamePartRole role,
                                 std::shared_ptr<const Taxonomy> taxonomy,
                                 std::vector<std::string>* warnings = nullptr);

struct EmbeddingEstimateConfig {
  std::size_t k = 10;
  // Also estimate parts already in V_tr (embedding-only variant).
  bool include_training_parts = false;
};

// P_em for the role-tagged tokens of `embeddings` outside V_tr: the mean
// posterior of the kNN that lie in V_tr, mapped back through Bayes.
LikelihoodTable EstimateEmbedding(const EmbeddingTable& embeddings,
                                  const LikelihoodTable& tr,
                                  const PriorTable& priors,
                                  const PartPrior& part_prior,
                                  const EmbeddingEstimateConfig& config,
                                  std::vector<std::string>* warnings = nullptr);

inline constexpr std::size_t kMinAffix = 3;
inline constexpr std::size_t kMaxAffix = 5;

// "P:<prefix>" and "S:<suffix>" keys of lengths 3..5 code points (bounded by
// the part length).
std::vector<std::string> AffixKeys(std::string_view part);

// Affix index: per affix key, the mean P_tr row over V_tr parts carrying it.
LikelihoodTable EstimateAffix(const LikelihoodTable& tr);
// Query: mean of the stored rows of the part's own indexed affixes.
std::optional<NodeVector> AffixLikelihood(const LikelihoodTable& ps,
                                          std::string_view part);

// Script index: per script, the mean P_tr row over V_tr parts of that script.
LikelihoodTable EstimateScript(const LikelihoodTable& tr);
std::optional<NodeVector> ScriptLikelihood(const LikelihoodTable& ch,
                                           std::string_view part);

// All tables one classifier needs.
struct RoleTables {
  LikelihoodTable us;  // empty outside ethnicity models
  LikelihoodTable tr;
  LikelihoodTable em;
  LikelihoodTable ps;
  LikelihoodTable ch;
};

struct ModelTables {
  std::shared_ptr<const Taxonomy> taxonomy;
  PriorTable priors;
  RoleTables roles[2];

  const RoleTables& role(NamePartRole r) const {
    return roles[r == NamePartRole::kFirst ? 0 : 1];
  }
  RoleTables& role(NamePartRole r) {
    return roles[r == NamePartRole::kFirst ? 0 : 1];
  }
};

struct ModelConfig {
  std::uint64_t min_count = 5;
  std::size_t k = 10;
  PartPrior::Corpus part_prior = PartPrior::Corpus::kLabeled;
  bool include_training_parts_in_em = false;
};

// Labels -> counts -> priors -> TR, EM, PS, CH for both roles. `embeddings`
// may be null (no EM table); `sentences` is only read for the contact-corpus
// part prior.
ModelTables BuildModel(std::span<const LabeledName> labels,
                       std::shared_ptr<const Taxonomy> taxonomy,
                       const EmbeddingTable* embeddings,
                       std::span<const Sentence> sentences,
                       const ModelConfig& config,
                       std::vector<std::string>* warnings = nullptr);

}  // namespace nameorigin

#endif  // NAMEORIGIN_ESTIMATION_H_
