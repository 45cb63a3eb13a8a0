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

#ifndef NAMEORIGIN_CLASSIFIER_H_
#define NAMEORIGIN_CLASSIFIER_H_

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nameorigin/distribution.h"
#include "nameorigin/estimation.h"
#include "nameorigin/ingest.h"

namespace nameorigin {

enum class PriorMode { kInternet, kWorld };

std::string_view PriorModeName(PriorMode m);  // "internet" / "world"
std::optional<PriorMode> ParsePriorMode(std::string_view s);

enum class Tier { kUs, kTr, kEm, kPs, kCh, kSmoothed };

std::string_view TierName(Tier t);  // "US", "TR", "EM", "PS", "CH", "smoothed"

struct Evidence {
  std::string part;
  NamePartRole role = NamePartRole::kFirst;
  std::string level;  // id of the node whose children were scored
  Tier tier = Tier::kSmoothed;
  friend bool operator==(const Evidence&, const Evidence&) = default;
};

struct ClassificationResult {
  std::string name;  // "first last"
  std::string taxonomy;
  PriorMode mode = PriorMode::kInternet;
  std::vector<ClassDistribution> path;  // root level first
  std::string leaf;
  std::vector<Evidence> evidence;  // first then last part, per level
  // No tier had anything to say about either part.
  bool low_confidence = false;
};

struct ClassifierOptions {
  bool use_us = true;
  bool use_tr = true;
  bool use_em = true;
  bool use_ps = true;
  bool use_ch = true;
  double sigma = 1e-7;

  static ClassifierOptions PriorOnly();
  static ClassifierOptions TrainingOnly();
  static ClassifierOptions TrainingAndEmbedding();
  static ClassifierOptions EmbeddingOnly();
};

// A name part's likelihood row and the tier that supplied it. `row` is empty
// for the smoothed tier.
struct PartLikelihood {
  Tier tier = Tier::kSmoothed;
  NodeVector row;
};

// Hierarchical Naive Bayes over a ModelTables taxonomy. At every level each
// part takes its likelihood from the first tier that covers it (US, TR, EM);
// when neither part is covered, both retry with the affix index and then the
// script index. Uncovered parts contribute sigma to every child. A part whose
// row is zero on every child of a level is smoothed at that level; if every
// child still scores zero, the zero entries of each factor are replaced by
// sigma times that factor's smallest positive entry.
//
// Greedy top-down: the argmax child is taken at each level, ties going to the
// larger prior and then the smaller id. Immutable and thread-safe.
class NameClassifier {
 public:
  explicit NameClassifier(std::shared_ptr<const ModelTables> tables,
                          ClassifierOptions options = {});

  const ModelTables& tables() const { return *tables_; }
  const ClassifierOptions& options() const { return options_; }

  ClassificationResult Classify(const FullName& name, PriorMode mode) const;

  // One Naive Bayes step over an arbitrary set of taxonomy nodes. The result
  // is keyed by node id with `node` set to the taxonomy root.
  ClassDistribution ClassifyFlat(const FullName& name,
                                 std::span<const std::string> nodes,
                                 PriorMode mode) const;

  // Tier resolution for both parts, including the affix/script retry.
  std::pair<PartLikelihood, PartLikelihood> Resolve(const FullName& name) const;

 private:
  struct Level {
    ClassDistribution dist;
    NodeIndex winner;
    Tier tiers[2];
  };
  Level ScoreLevel(NodeIndex parent, std::span<const NodeIndex> children,
                   const PartLikelihood (&parts)[2], PriorMode mode) const;
  PartLikelihood Primary(std::string_view part, NamePartRole role) const;
  PartLikelihood Fallback(std::string_view part, NamePartRole role) const;

  std::shared_ptr<const ModelTables> tables_;
  ClassifierOptions options_;
};

}  // namespace nameorigin

#endif  // NAMEORIGIN_CLASSIFIER_H_
