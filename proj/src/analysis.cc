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

#include "nameorigin/analysis.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>

#include "json.hpp"

namespace nameorigin {
namespace {

using json = nlohmann::ordered_json;

std::string Fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

json ScoreSetJson(const ScoreSet& s) {
  json classes = json::array();
  for (const ClassScore& c : s.classes)
    classes.push_back({{"class", c.id},
                       {"support", c.support()},
                       {"tp", c.tp},
                       {"fp", c.fp},
                       {"fn", c.fn},
                       {"precision", c.precision},
                       {"recall", c.recall},
                       {"f1", c.f1}});
  return {{"weighted_f1", s.weighted_f1}, {"total", s.total},
          {"classes", std::move(classes)}};
}

void WriteScoreRows(std::ostream& out, const std::string& level,
                    const ScoreSet& s) {
  for (const ClassScore& c : s.classes)
    out << level << '\t' << c.id << '\t' << c.support() << '\t'
        << Fmt(c.precision) << '\t' << Fmt(c.recall) << '\t' << Fmt(c.f1)
        << '\n';
  out << level << "\t*weighted\t" << s.total << "\t\t\t" << Fmt(s.weighted_f1)
      << '\n';
}

}  // namespace

Split StratifiedSplit(std::span<const LabeledName> labels, const Taxonomy& t,
                      double train_frac, std::uint64_t seed,
                      std::vector<std::string>* warnings) {
  if (!(train_frac >= 0.0 && train_frac <= 1.0))
    throw std::invalid_argument("train fraction must lie in [0, 1]");
  std::map<std::string, std::vector<std::size_t>> strata;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const std::optional<std::string> leaf = t.LeafForCountry(labels[i].country);
    strata[leaf ? *leaf : "?" + labels[i].country].push_back(i);
  }

  std::mt19937_64 rng(seed);
  std::vector<bool> to_train(labels.size(), false);
  for (auto& [stratum, idx] : strata) {
    if (idx.size() < 2) {
      if (warnings)
        warnings->push_back("stratum " + stratum +
                            " has fewer than 2 records; all go to train");
      for (std::size_t i : idx) to_train[i] = true;
      continue;
    }
    for (std::size_t i = idx.size() - 1; i > 0; --i)
      std::swap(idx[i], idx[rng() % (i + 1)]);
    const auto n_train = static_cast<std::size_t>(
        std::llround(train_frac * static_cast<double>(idx.size())));
    for (std::size_t j = 0; j < n_train; ++j) to_train[idx[j]] = true;
  }

  Split split;
  for (std::size_t i = 0; i < labels.size(); ++i)
    (to_train[i] ? split.train : split.test).push_back(labels[i]);
  return split;
}

ScoreSet ScorePredictions(std::span<const Prediction> predictions) {
  std::map<std::string, ClassScore> by_class;
  ScoreSet s;
  for (const Prediction& p : predictions) {
    s.total += p.weight;
    if (p.truth == p.predicted) {
      by_class[p.truth].tp += p.weight;
    } else {
      by_class[p.predicted].fp += p.weight;
      by_class[p.truth].fn += p.weight;
    }
  }
  double weighted = 0.0;
  for (auto& [id, c] : by_class) {
    c.id = id;
    const double tp = static_cast<double>(c.tp);
    if (c.tp + c.fp > 0) c.precision = tp / static_cast<double>(c.tp + c.fp);
    if (c.tp + c.fn > 0) c.recall = tp / static_cast<double>(c.tp + c.fn);
    const std::uint64_t denom = 2 * c.tp + c.fp + c.fn;
    if (denom > 0) c.f1 = 2.0 * tp / static_cast<double>(denom);
    weighted += c.f1 * static_cast<double>(c.support());
    s.classes.push_back(c);
  }
  if (s.total > 0) s.weighted_f1 = weighted / static_cast<double>(s.total);
  return s;
}

EvalReport Evaluate(std::span<const Prediction> predictions, const Taxonomy& t) {
  if (predictions.empty()) throw std::invalid_argument("empty test set");
  auto index_of = [&](const std::string& id) {
    const std::optional<NodeIndex> i = t.index(id);
    if (!i) throw std::invalid_argument("class '" + id + "' not in taxonomy");
    return *i;
  };

  EvalReport report;
  report.taxonomy = t.name();
  report.leaves = ScorePredictions(predictions);

  for (int d = 1; d < t.height(); ++d) {
    auto ancestor = [&](const std::string& id) {
      const std::vector<NodeIndex> path = t.PathFromRoot(index_of(id));
      return t.node(path[std::min<std::size_t>(d, path.size() - 1)]).id;
    };
    std::vector<Prediction> mapped;
    mapped.reserve(predictions.size());
    for (const Prediction& p : predictions)
      mapped.push_back({ancestor(p.truth), ancestor(p.predicted), p.weight});
    report.levels[d] = ScorePredictions(mapped);
  }
  for (const Prediction& p : predictions) {
    index_of(p.truth);
    index_of(p.predicted);
  }
  return report;
}

void EvalReport::WriteTsv(std::ostream& out) const {
  out << "level\tclass\tsupport\tprecision\trecall\tf1\n";
  for (const auto& [depth, s] : levels)
    WriteScoreRows(out, "depth" + std::to_string(depth), s);
  WriteScoreRows(out, "leaf", leaves);
}

std::string EvalReport::ToJson() const {
  json levels_json = json::object();
  for (const auto& [depth, s] : levels)
    levels_json[std::to_string(depth)] = ScoreSetJson(s);
  json j = {{"taxonomy", taxonomy}, {"variant", variant}, {"seed", seed},
            {"run", run},           {"leaves", ScoreSetJson(leaves)},
            {"levels", std::move(levels_json)}};
  return j.dump(2);
}

std::vector<Prediction> ProjectPredictions(
    std::span<const Prediction> predictions, const TaxonomyProjection& p,
    const std::set<std::string>& excluded) {
  std::vector<Prediction> out;
  for (const Prediction& pred : predictions) {
    const std::string& truth = p.Map(pred.truth);
    if (excluded.contains(truth)) continue;
    out.push_back({truth, p.Map(pred.predicted), pred.weight});
  }
  return out;
}

MeanStd Summarize(std::span<const double> values) {
  MeanStd s;
  if (values.empty()) return s;
  const double n = static_cast<double>(values.size());
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() > 1) {
    double sq = 0.0;
    for (double v : values) sq += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(sq / (n - 1.0));
  }
  return s;
}

SimilarityResult CountrySimilarity(std::span<const LabeledName> labels,
                                   double threshold,
                                   std::vector<std::string>* warnings) {
  std::map<std::string, std::map<std::string, double>> vectors;
  for (const LabeledName& l : labels) {
    auto& v = vectors[l.country];
    v[l.name.first] += static_cast<double>(l.count);
    v[l.name.last] += static_cast<double>(l.count);
  }
  SimilarityResult r;
  std::vector<const std::map<std::string, double>*> vecs;
  std::vector<double> norms;
  for (const auto& [country, v] : vectors) {
    double sq = 0.0;
    for (const auto& [part, n] : v) sq += n * n;
    if (sq == 0.0) {
      if (warnings) warnings->push_back("country " + country + " has no names");
      continue;
    }
    r.countries.push_back(country);
    vecs.push_back(&v);
    norms.push_back(std::sqrt(sq));
  }
  const std::size_t n = r.countries.size();
  if (n < 2) throw std::invalid_argument("need at least two countries");

  r.matrix.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    r.matrix[i][i] = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto& small = vecs[i]->size() <= vecs[j]->size() ? *vecs[i] : *vecs[j];
      const auto& large = vecs[i]->size() <= vecs[j]->size() ? *vecs[j] : *vecs[i];
      double dot = 0.0;
      for (const auto& [part, x] : small)
        if (auto it = large.find(part); it != large.end()) dot += x * it->second;
      r.matrix[i][j] = r.matrix[j][i] = dot / (norms[i] * norms[j]);
    }
  }

  std::set<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t best = i == 0 ? 1 : 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      if (r.matrix[i][j] > threshold) pairs.emplace(std::min(i, j), std::max(i, j));
      if (r.matrix[i][j] > r.matrix[i][best]) best = j;
    }
    pairs.emplace(std::min(i, best), std::max(i, best));
  }
  for (const auto& [i, j] : pairs)
    r.edges.push_back({r.countries[i], r.countries[j], r.matrix[i][j]});
  return r;
}

void SimilarityResult::WriteEdges(std::ostream& out) const {
  for (const SimilarityEdge& e : edges)
    out << e.src << '\t' << e.dst << '\t' << Fmt(e.similarity) << '\n';
}

void SimilarityResult::WriteMatrix(std::ostream& out) const {
  out << "country";
  for (const std::string& c : countries) out << '\t' << c;
  out << '\n';
  for (std::size_t i = 0; i < countries.size(); ++i) {
    out << countries[i];
    for (double x : matrix[i]) out << '\t' << Fmt(x);
    out << '\n';
  }
}

RepresentationReport BuildRepresentationReport(
    std::span<const std::string> predicted,
    const std::map<std::string, double>& baseline,
    std::optional<std::string> dominant, double anomaly_threshold) {
  if (predicted.empty()) throw std::invalid_argument("empty follower list");
  double baseline_total = 0.0;
  for (const auto& [id, share] : baseline) {
    if (!(share >= 0.0)) throw std::invalid_argument("negative baseline share");
    baseline_total += share;
  }
  if (std::abs(baseline_total - 1.0) > 1e-6)
    throw std::invalid_argument("baseline shares must sum to 1");

  std::map<std::string, std::uint64_t> counts;
  for (const std::string& id : predicted) {
    auto it = baseline.find(id);
    if (it == baseline.end() || it->second <= 0.0)
      throw std::invalid_argument("class '" + id + "' has no baseline share");
    ++counts[id];
  }

  RepresentationReport r;
  const double n = static_cast<double>(predicted.size());
  for (const auto& [id, share] : baseline) {
    RepresentationRow row;
    row.id = id;
    row.count = counts.contains(id) ? counts[id] : 0;
    row.follower_share = static_cast<double>(row.count) / n;
    row.baseline_share = share;
    row.ratio = share > 0.0 ? row.follower_share / share - 1.0 : 0.0;
    r.rows.push_back(row);
  }
  if (!dominant) {
    auto best = std::max_element(
        baseline.begin(), baseline.end(),
        [](const auto& a, const auto& b) { return a.second < b.second; });
    dominant = best->first;
  }
  r.dominant = *dominant;
  r.dominant_share = counts.contains(r.dominant)
                         ? static_cast<double>(counts[r.dominant]) / n
                         : 0.0;
  r.anomaly = r.dominant_share < anomaly_threshold;
  return r;
}

RepresentationReport RepresentationReportFor(
    std::span<const FullName> followers,
    const std::map<std::string, double>& baseline,
    const NameClassifier& classifier, PriorMode mode,
    std::optional<std::string> dominant, double anomaly_threshold) {
  std::vector<std::string> predicted;
  predicted.reserve(followers.size());
  for (const FullName& f : followers)
    predicted.push_back(classifier.Classify(f, mode).leaf);
  return BuildRepresentationReport(predicted, baseline, std::move(dominant),
                                   anomaly_threshold);
}

void RepresentationReport::WriteTsv(std::ostream& out) const {
  out << "class\tcount\tfollower_share\tbaseline_share\tratio\n";
  for (const RepresentationRow& row : rows)
    out << row.id << '\t' << row.count << '\t' << Fmt(row.follower_share)
        << '\t' << Fmt(row.baseline_share) << '\t' << Fmt(row.ratio) << '\n';
}

std::string RepresentationReport::ToJson() const {
  json rows_json = json::array();
  for (const RepresentationRow& row : rows)
    rows_json.push_back({{"class", row.id},
                         {"count", row.count},
                         {"follower_share", row.follower_share},
                         {"baseline_share", row.baseline_share},
                         {"ratio", row.ratio}});
  json j = {{"rows", std::move(rows_json)},
            {"dominant", dominant},
            {"dominant_share", dominant_share},
            {"anomaly", anomaly}};
  return j.dump(2);
}

}  // namespace nameorigin
