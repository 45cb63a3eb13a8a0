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

#include "nameorigin/estimation.h"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "nameorigin/unicode.h"

namespace nameorigin {
namespace {

constexpr double kColumnTolerance = 1e-6;

// Adds every node's value into its parent, leaves upward. Preorder numbering
// puts each child after its parent, so one reverse pass suffices.
void AccumulateUp(NodeVector& v, const Taxonomy& t) {
  for (NodeIndex i = t.size(); i-- > 1;) v[*t.parent(i)] += v[i];
}

std::string FormatDouble(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double ParseDouble(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || !std::isfinite(x))
    throw std::runtime_error(what + ": bad number '" + s + "'");
  return x;
}

}  // namespace

std::string_view SourceName(Source s) {
  switch (s) {
    case Source::kUs:
      return "US";
    case Source::kTr:
      return "TR";
    case Source::kEm:
      return "EM";
    case Source::kPs:
      return "PS";
    case Source::kCh:
      return "CH";
  }
  return "TR";
}

std::optional<Source> ParseSource(std::string_view s) {
  for (Source src : {Source::kUs, Source::kTr, Source::kEm, Source::kPs,
                     Source::kCh})
    if (SourceName(src) == s) return src;
  return std::nullopt;
}

const NodeVector* LikelihoodTable::Find(std::string_view key) const {
  auto it = rows_.find(key);
  return it == rows_.end() ? nullptr : &it->second;
}

void LikelihoodTable::Set(std::string key, NodeVector row) {
  if (row.size() != taxonomy_->size())
    throw std::invalid_argument("likelihood row for '" + key +
                                "' has the wrong length");
  rows_.insert_or_assign(std::move(key), std::move(row));
}

double LikelihoodTable::ColumnSum(NodeIndex n) const {
  double sum = 0.0;
  for (const auto& [key, row] : rows_) sum += row[n];
  return sum;
}

bool LikelihoodTable::Valid(std::string* why) const {
  for (const auto& [key, row] : rows_) {
    for (double p : row) {
      // Census likelihoods are scaled by population shares, not bounded by 1.
      const bool bounded = source_ != Source::kUs;
      if (!std::isfinite(p) || p < 0.0 || (bounded && p > 1.0)) {
        if (why) *why = "row '" + key + "' has entry " + FormatDouble(p);
        return false;
      }
    }
  }
  if (source_ != Source::kTr && source_ != Source::kEm)
    return true;
  for (NodeIndex n = 0; n < taxonomy_->size(); ++n) {
    const double sum = ColumnSum(n);
    if (sum > 1.0 + kColumnTolerance) {
      if (why)
        *why = "class '" + taxonomy_->node(n).id + "' sums to " +
               FormatDouble(sum);
      return false;
    }
  }
  return true;
}

void LikelihoodTable::Write(std::ostream& out) const {
  for (const auto& [key, row] : rows_) {
    for (NodeIndex n = 0; n < row.size(); ++n) {
      if (row[n] == 0.0) continue;
      out << SourceName(source_) << '\t' << RoleName(role_) << '\t' << key
          << '\t' << taxonomy_->node(n).id << '\t' << FormatDouble(row[n])
          << '\n';
    }
  }
}

LikelihoodTable LikelihoodTable::Read(std::istream& in, Source source,
                                      NamePartRole role,
                                      std::shared_ptr<const Taxonomy> taxonomy) {
  LikelihoodTable table(source, role, taxonomy);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::istringstream ss(line);
    for (std::string cell; std::getline(ss, cell, '\t');) f.push_back(cell);
    const std::string where = "likelihood line " + std::to_string(line_no);
    if (f.size() != 5) throw std::runtime_error(where + ": expected 5 fields");
    if (f[0] != SourceName(source) || f[1] != RoleName(role))
      throw std::runtime_error(where + ": table is " + f[0] + "/" + f[1]);
    const std::optional<NodeIndex> n = taxonomy->index(f[3]);
    if (!n) throw std::runtime_error(where + ": unknown class " + f[3]);
    auto it = table.rows_.find(f[2]);
    if (it == table.rows_.end())
      it = table.rows_.emplace(f[2], NodeVector(taxonomy->size(), 0.0)).first;
    it->second[*n] = ParseDouble(f[4], where);
  }
  return table;
}

std::vector<double> PriorTable::ChildPriors(std::span<const NodeIndex> children,
                                            bool world_mode) const {
  const NodeVector& p = world_mode ? world : internet;
  std::vector<double> out;
  double total = 0.0;
  for (NodeIndex c : children) {
    out.push_back(p[c]);
    total += p[c];
  }
  for (double& x : out)
    x = total > 0.0 ? x / total : 1.0 / static_cast<double>(children.size());
  return out;
}

void PriorTable::Write(std::ostream& out, const Taxonomy& t) const {
  out << "node\tinternet\tworld\tsample_ratio\n";
  for (NodeIndex n = 0; n < t.size(); ++n)
    out << t.node(n).id << '\t' << FormatDouble(internet[n]) << '\t'
        << FormatDouble(world[n]) << '\t' << FormatDouble(sample_ratio[n])
        << '\n';
  out << "#overall_ratio\t" << FormatDouble(overall_ratio) << '\n';
}

PriorTable PriorTable::Read(std::istream& in, const Taxonomy& t) {
  PriorTable p;
  p.internet.assign(t.size(), 0.0);
  p.world.assign(t.size(), 0.0);
  p.sample_ratio.assign(t.size(), 0.0);
  std::string line;
  std::getline(in, line);
  std::set<NodeIndex> seen;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::istringstream ss(line);
    for (std::string cell; std::getline(ss, cell, '\t');) f.push_back(cell);
    if (f.size() == 2 && f[0] == "#overall_ratio") {
      p.overall_ratio = ParseDouble(f[1], "priors");
      continue;
    }
    if (f.size() != 4) throw std::runtime_error("priors: bad row '" + line + "'");
    const std::optional<NodeIndex> n = t.index(f[0]);
    if (!n) throw std::runtime_error("priors: unknown node " + f[0]);
    p.internet[*n] = ParseDouble(f[1], "priors");
    p.world[*n] = ParseDouble(f[2], "priors");
    p.sample_ratio[*n] = ParseDouble(f[3], "priors");
    seen.insert(*n);
  }
  if (seen.size() != t.size())
    throw std::runtime_error("priors: table does not cover the taxonomy");
  return p;
}

PriorTable BuildPriors(const std::map<std::string, std::uint64_t>& label_counts,
                       const Taxonomy& t) {
  NodeVector I(t.size(), 0.0), W(t.size(), 0.0);
  for (NodeIndex leaf : t.leaves()) {
    const TaxonomyNode& node = t.node(leaf);
    auto it = label_counts.find(node.id);
    I[leaf] = it == label_counts.end() ? 0.0 : static_cast<double>(it->second);
    W[leaf] = static_cast<double>(node.world_population);
    if (W[leaf] == 0.0 && I[leaf] > 0.0)
      throw std::invalid_argument("leaf '" + node.id +
                                  "' has labels but zero world population");
  }
  AccumulateUp(I, t);
  AccumulateUp(W, t);
  const double total_i = I[t.root()];
  const double total_w = W[t.root()];
  if (total_i == 0.0) throw std::invalid_argument("no labeled names in taxonomy");

  PriorTable p;
  p.internet.resize(t.size());
  p.world.resize(t.size());
  p.sample_ratio.resize(t.size());
  p.overall_ratio = total_i / total_w;
  for (NodeIndex n = 0; n < t.size(); ++n) {
    p.internet[n] = I[n] / total_i;
    p.world[n] = W[n] / total_w;
    p.sample_ratio[n] = W[n] > 0.0 ? I[n] / W[n] : 0.0;
  }
  return p;
}

PriorTable BuildPriors(const CountTable& counts, const Taxonomy& t) {
  std::map<std::string, std::uint64_t> label_counts;
  for (const auto& [leaf, n] : counts.class_totals(NamePartRole::kFirst))
    label_counts[leaf] = n;
  return BuildPriors(label_counts, t);
}

NodeVector InternetFromWorld(const NodeVector& world,
                             const NodeVector& sample_ratio, double S) {
  NodeVector out(world.size());
  for (std::size_t i = 0; i < world.size(); ++i)
    out[i] = world[i] * sample_ratio[i] / S;
  return out;
}

NodeVector WorldFromInternet(const NodeVector& internet,
                             const NodeVector& sample_ratio, double S) {
  NodeVector out(internet.size());
  for (std::size_t i = 0; i < internet.size(); ++i)
    out[i] = sample_ratio[i] > 0.0 ? internet[i] * S / sample_ratio[i] : 0.0;
  return out;
}

NodeVector LikelihoodToPosterior(const NodeVector& likelihood,
                                 const NodeVector& prior, const Taxonomy& t) {
  NodeVector post(t.size(), 0.0);
  double z = 0.0;
  for (NodeIndex leaf : t.leaves()) {
    post[leaf] = likelihood[leaf] * prior[leaf];
    z += post[leaf];
  }
  if (z == 0.0) return post;
  for (NodeIndex leaf : t.leaves()) post[leaf] /= z;
  AccumulateUp(post, t);
  return post;
}

NodeVector PosteriorToLikelihood(const NodeVector& posterior, double part_prior,
                                 const NodeVector& prior) {
  NodeVector out(posterior.size(), 0.0);
  for (std::size_t i = 0; i < posterior.size(); ++i)
    if (prior[i] > 0.0) out[i] = posterior[i] * part_prior / prior[i];
  return out;
}

PartPrior PartPrior::FromLabels(const CountTable& counts, NamePartRole role,
                                const std::vector<std::string>& vocabulary) {
  std::map<std::string, double, std::less<>> raw;
  for (const std::string& v : vocabulary) raw[v] = 0.0;
  for (const auto& [part, by_leaf] : counts.parts(role)) {
    double n = 0.0;
    for (const auto& [leaf, c] : by_leaf) n += static_cast<double>(c);
    raw[part] = n;
  }
  double total = 0.0;
  for (auto& [part, n] : raw) total += n + 1.0;
  PartPrior p;
  for (auto& [part, n] : raw) p.p_[part] = (n + 1.0) / total;
  return p;
}

PartPrior PartPrior::FromSentences(std::span<const Sentence> sentences,
                                   NamePartRole role) {
  std::map<std::string, double, std::less<>> raw;
  double total = 0.0;
  for (const Sentence& s : sentences) {
    for (const std::string& token : s) {
      auto split = SplitRoleToken(token);
      if (!split || split->first != role) continue;
      raw[split->second] += 1.0;
      total += 1.0;
    }
  }
  PartPrior p;
  for (auto& [part, n] : raw) p.p_[part] = n / total;
  return p;
}

double PartPrior::operator()(std::string_view part) const {
  auto it = p_.find(part);
  return it == p_.end() ? 0.0 : it->second;
}

double PartPrior::Total() const {
  double total = 0.0;
  for (const auto& [part, p] : p_) total += p;
  return total;
}

LikelihoodTable EstimateTraining(const CountTable& counts, NamePartRole role,
                                 std::shared_ptr<const Taxonomy> taxonomy,
                                 std::vector<std::string>* warnings) {
  const Taxonomy& t = *taxonomy;
  LikelihoodTable table(Source::kTr, role, taxonomy);

  NodeVector totals(t.size(), 0.0);
  for (const auto& [leaf, n] : counts.class_totals(role)) {
    if (auto i = t.index(leaf); i && t.IsLeaf(*i))
      totals[*i] = static_cast<double>(n);
    else if (warnings)
      warnings->push_back("counts for '" + leaf + "' are not a taxonomy leaf");
  }
  for (NodeIndex leaf : t.leaves())
    if (totals[leaf] == 0.0 && warnings)
      warnings->push_back("class '" + t.node(leaf).id +
                          "' has no training names; omitted from " +
                          std::string(RoleName(role)) + " TR table");
  AccumulateUp(totals, t);

  for (const auto& [part, by_leaf] : counts.parts(role)) {
    if (!counts.InTrainingVocabulary(role, part)) continue;
    NodeVector row(t.size(), 0.0);
    for (const auto& [leaf, n] : by_leaf)
      if (auto i = t.index(leaf); i && t.IsLeaf(*i))
        row[*i] = static_cast<double>(n);
    AccumulateUp(row, t);
    for (NodeIndex n = 0; n < t.size(); ++n)
      row[n] = totals[n] > 0.0 ? row[n] / totals[n] : 0.0;
    table.Set(part, std::move(row));
  }
  return table;
}

LikelihoodTable EstimateEmbedding(const EmbeddingTable& embeddings,
                                  const LikelihoodTable& tr,
                                  const PriorTable& priors,
                                  const PartPrior& part_prior,
                                  const EmbeddingEstimateConfig& config,
                                  std::vector<std::string>* warnings) {
  if (config.k < 1) throw std::invalid_argument("k must be >= 1");
  const Taxonomy& t = tr.taxonomy();
  const NamePartRole role = tr.role();
  LikelihoodTable table(Source::kEm, role,
                        tr.taxonomy_ptr());

  std::map<std::string, NodeVector, std::less<>> posterior_cache;
  auto posterior_of = [&](const std::string& part) -> const NodeVector& {
    auto it = posterior_cache.find(part);
    if (it == posterior_cache.end())
      it = posterior_cache
               .emplace(part, LikelihoodToPosterior(*tr.Find(part),
                                                    priors.internet, t))
               .first;
    return it->second;
  };

  // Neighbors that carry a P_tr row of the same role.
  auto usable = [&](const NeighborList& nn) {
    std::vector<std::string> parts;
    for (const Neighbor& n : nn.neighbors) {
      auto split = SplitRoleToken(n.token);
      if (split && split->first == role && tr.contains(split->second))
        parts.push_back(split->second);
    }
    return parts;
  };

  for (const std::string& token : embeddings.tokens()) {
    auto split = SplitRoleToken(token);
    if (!split || split->first != role) continue;
    const std::string& part = split->second;
    if (tr.contains(part) && !config.include_training_parts) continue;

    std::vector<std::string> neighbors =
        usable(*Knn(embeddings, token, config.k));
    if (neighbors.empty())
      neighbors = usable(*Knn(embeddings, token, 5 * config.k));
    if (neighbors.empty()) {
      if (warnings)
        warnings->push_back("no V_tr neighbors for " + token + "; excluded");
      continue;
    }
    NodeVector avg(t.size(), 0.0);
    for (const std::string& n : neighbors) {
      const NodeVector& post = posterior_of(n);
      for (NodeIndex i = 0; i < t.size(); ++i) avg[i] += post[i];
    }
    for (double& x : avg) x /= static_cast<double>(neighbors.size());
    table.Set(part, PosteriorToLikelihood(avg, part_prior(part), priors.internet));
  }

  // Keep each class column a sub-distribution.
  std::vector<double> scale(t.size(), 1.0);
  bool capped = false;
  for (NodeIndex n = 0; n < t.size(); ++n) {
    const double sum = table.ColumnSum(n);
    if (sum > 1.0) {
      scale[n] = 1.0 / sum;
      capped = true;
      if (warnings)
        warnings->push_back("EM column '" + t.node(n).id + "' sums to " +
                            FormatDouble(sum) + "; rescaled");
    }
  }
  if (capped) {
    LikelihoodTable rescaled(Source::kEm, role,
                             tr.taxonomy_ptr());
    for (const auto& [key, row] : table.rows()) {
      NodeVector r = row;
      for (NodeIndex n = 0; n < t.size(); ++n) r[n] = std::min(1.0, r[n] * scale[n]);
      rescaled.Set(key, std::move(r));
    }
    table = std::move(rescaled);
  }
  return table;
}

std::vector<std::string> AffixKeys(std::string_view part) {
  std::vector<std::string> keys;
  const std::size_t len = CodePointLength(part);
  for (std::size_t n = kMinAffix; n <= std::min(kMaxAffix, len); ++n)
    keys.push_back("P:" + PrefixCodePoints(part, n));
  for (std::size_t n = kMinAffix; n <= std::min(kMaxAffix, len); ++n)
    keys.push_back("S:" + SuffixCodePoints(part, n));
  return keys;
}

namespace {

// Mean row per group key over the rows of `tr`.
template <typename KeysOf>
LikelihoodTable GroupAverage(const LikelihoodTable& tr, Source source,
                             KeysOf keys_of) {
  const Taxonomy& t = tr.taxonomy();
  std::map<std::string, std::pair<NodeVector, std::size_t>, std::less<>> acc;
  for (const auto& [part, row] : tr.rows()) {
    for (const std::string& key : keys_of(part)) {
      auto& [mean, n] = acc.try_emplace(key, NodeVector(t.size(), 0.0), 0)
                            .first->second;
      ++n;
      // Running mean: exact when every row is the same.
      for (NodeIndex i = 0; i < t.size(); ++i)
        mean[i] += (row[i] - mean[i]) / static_cast<double>(n);
    }
  }
  LikelihoodTable table(source, tr.role(),
                        tr.taxonomy_ptr());
  for (auto& [key, entry] : acc) table.Set(key, std::move(entry.first));
  return table;
}

std::vector<std::string> ScriptKeys(std::string_view part) {
  std::optional<std::string> script = DominantScript(part);
  if (!script) return {};
  return {*script};
}

}  // namespace

LikelihoodTable EstimateAffix(const LikelihoodTable& tr) {
  return GroupAverage(tr, Source::kPs, AffixKeys);
}

std::optional<NodeVector> AffixLikelihood(const LikelihoodTable& ps,
                                          std::string_view part) {
  std::optional<NodeVector> mean;
  std::size_t n = 0;
  for (const std::string& key : AffixKeys(part)) {
    const NodeVector* row = ps.Find(key);
    if (!row) continue;
    if (!mean) mean.emplace(row->size(), 0.0);
    ++n;
    for (std::size_t i = 0; i < row->size(); ++i)
      (*mean)[i] += ((*row)[i] - (*mean)[i]) / static_cast<double>(n);
  }
  return mean;
}

LikelihoodTable EstimateScript(const LikelihoodTable& tr) {
  return GroupAverage(tr, Source::kCh, ScriptKeys);
}

std::optional<NodeVector> ScriptLikelihood(const LikelihoodTable& ch,
                                           std::string_view part) {
  const std::optional<std::string> script = DominantScript(part);
  if (!script) return std::nullopt;
  const NodeVector* row = ch.Find(*script);
  if (!row) return std::nullopt;
  return *row;
}

ModelTables BuildModel(std::span<const LabeledName> labels,
                       std::shared_ptr<const Taxonomy> taxonomy,
                       const EmbeddingTable* embeddings,
                       std::span<const Sentence> sentences,
                       const ModelConfig& config,
                       std::vector<std::string>* warnings) {
  SkipReport skips;
  const CountTable counts =
      BuildCountTable(labels, *taxonomy, config.min_count, &skips);
  if (warnings && !skips.skipped_by_country.empty()) {
    std::uint64_t skipped = 0;
    for (const auto& [c, n] : skips.skipped_by_country) skipped += n;
    warnings->push_back(std::to_string(skipped) +
                        " labeled names from countries outside '" +
                        taxonomy->name() + "' skipped");
  }
  if (!counts.TotalsConsistent())
    throw std::logic_error("count table totals are inconsistent");

  ModelTables model;
  model.taxonomy = taxonomy;
  model.priors = BuildPriors(counts, *taxonomy);
  for (NamePartRole role : kRoles) {
    RoleTables& tables = model.role(role);
    tables.us = LikelihoodTable(Source::kUs, role, taxonomy);
    tables.tr = EstimateTraining(counts, role, taxonomy, warnings);
    tables.em = LikelihoodTable(Source::kEm, role, taxonomy);
    if (embeddings) {
      PartPrior part_prior;
      if (config.part_prior == PartPrior::Corpus::kLabeled) {
        std::vector<std::string> vocabulary;
        for (const std::string& token : embeddings->tokens())
          if (auto split = SplitRoleToken(token); split && split->first == role)
            vocabulary.push_back(split->second);
        part_prior = PartPrior::FromLabels(counts, role, vocabulary);
      } else {
        part_prior = PartPrior::FromSentences(sentences, role);
      }
      EmbeddingEstimateConfig em_config;
      em_config.k = config.k;
      em_config.include_training_parts = config.include_training_parts_in_em;
      tables.em = EstimateEmbedding(*embeddings, tables.tr, model.priors,
                                    part_prior, em_config, warnings);
    }
    tables.ps = EstimateAffix(tables.tr);
    tables.ch = EstimateScript(tables.tr);
  }
  return model;
}

}  // namespace nameorigin
