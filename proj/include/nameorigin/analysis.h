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

#ifndef NAMEORIGIN_ANALYSIS_H_
#define NAMEORIGIN_ANALYSIS_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "nameorigin/classifier.h"
#include "nameorigin/ingest.h"
#include "nameorigin/taxonomy.h"

namespace nameorigin {

struct Split {
  std::vector<LabeledName> train;
  std::vector<LabeledName> test;
};

// Partitions labeled records per taxonomy leaf (records of uncovered
// countries form their own stratum): round(train_frac * n) of each stratum go
// to train. Strata with fewer than two records go to train with a warning.
// Input order is kept inside each side.
Split StratifiedSplit(std::span<const LabeledName> labels, const Taxonomy& t,
                      double train_frac, std::uint64_t seed,
                      std::vector<std::string>* warnings = nullptr);

struct Prediction {
  std::string truth;
  std::string predicted;
  std::uint64_t weight = 1;
};

struct ClassScore {
  std::string id;
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::uint64_t support() const { return tp + fn; }
};

// Scores for one set of classes; weighted_f1 weights each class F1 by its
// test support.
struct ScoreSet {
  std::vector<ClassScore> classes;
  double weighted_f1 = 0.0;
  std::uint64_t total = 0;
};

ScoreSet ScorePredictions(std::span<const Prediction> predictions);

struct EvalReport {
  std::string taxonomy;
  std::string variant;
  std::uint64_t seed = 0;
  int run = 0;
  ScoreSet leaves;
  // depth -> scores of the depth-d ancestors (leaves shallower than d stand
  // for themselves), for 1 <= d < height.
  std::map<int, ScoreSet> levels;

  void WriteTsv(std::ostream& out) const;
  std::string ToJson() const;
};

// Leaf-level scores plus internal levels obtained by mapping leaf truths and
// predictions to their ancestors. Throws on an empty prediction set.
EvalReport Evaluate(std::span<const Prediction> predictions, const Taxonomy& t);

// Maps truths and predictions through `p`; records whose truth lands on an
// `excluded` target node are dropped.
std::vector<Prediction> ProjectPredictions(
    std::span<const Prediction> predictions, const TaxonomyProjection& p,
    const std::set<std::string>& excluded = {});

struct MeanStd {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation, 0 for one value
};
MeanStd Summarize(std::span<const double> values);

struct SimilarityEdge {
  std::string src;
  std::string dst;
  double similarity = 0.0;
  friend bool operator==(const SimilarityEdge&, const SimilarityEdge&) = default;
};

struct SimilarityResult {
  std::vector<std::string> countries;
  std::vector<std::vector<double>> matrix;  // symmetric, unit diagonal
  std::vector<SimilarityEdge> edges;        // src < dst, sorted

  void WriteEdges(std::ostream& out) const;
  void WriteMatrix(std::ostream& out) const;
};

// Cosine similarity of per-country name-part count vectors (first and last
// parts pooled, weighted by record count). Edges join pairs above
// `threshold` and every country to its most similar country. Throws with
// fewer than two countries.
SimilarityResult CountrySimilarity(std::span<const LabeledName> labels,
                                   double threshold = 0.5,
                                   std::vector<std::string>* warnings = nullptr);

struct RepresentationRow {
  std::string id;
  std::uint64_t count = 0;
  double follower_share = 0.0;
  double baseline_share = 0.0;
  double ratio = 0.0;  // follower_share / baseline_share - 1
};

struct RepresentationReport {
  std::vector<RepresentationRow> rows;
  std::string dominant;  // class whose share is tested for the anomaly flag
  double dominant_share = 0.0;
  bool anomaly = false;

  void WriteTsv(std::ostream& out) const;
  std::string ToJson() const;
};

// From argmax classes of the followers. `baseline` must sum to 1 and be
// positive on every predicted class. The anomaly flag is raised when the
// `dominant` class (default: the baseline argmax) holds less than
// `anomaly_threshold` of the followers. Throws on an empty follower list.
RepresentationReport BuildRepresentationReport(
    std::span<const std::string> predicted,
    const std::map<std::string, double>& baseline,
    std::optional<std::string> dominant = std::nullopt,
    double anomaly_threshold = 0.2);

RepresentationReport RepresentationReportFor(
    std::span<const FullName> followers,
    const std::map<std::string, double>& baseline,
    const NameClassifier& classifier, PriorMode mode,
    std::optional<std::string> dominant = std::nullopt,
    double anomaly_threshold = 0.2);

}  // namespace nameorigin

#endif  // NAMEORIGIN_ANALYSIS_H_
