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

#include "nameorigin/classifier.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nameorigin {

std::string_view PriorModeName(PriorMode m) {
  return m == PriorMode::kInternet ? "internet" : "world";
}

std::optional<PriorMode> ParsePriorMode(std::string_view s) {
  if (s == "internet") return PriorMode::kInternet;
  if (s == "world") return PriorMode::kWorld;
  return std::nullopt;
}

std::string_view TierName(Tier t) {
  switch (t) {
    case Tier::kUs:
      return "US";
    case Tier::kTr:
      return "TR";
    case Tier::kEm:
      return "EM";
    case Tier::kPs:
      return "PS";
    case Tier::kCh:
      return "CH";
    case Tier::kSmoothed:
      return "smoothed";
  }
  return "smoothed";
}

ClassifierOptions ClassifierOptions::PriorOnly() {
  ClassifierOptions o;
  o.use_us = o.use_tr = o.use_em = o.use_ps = o.use_ch = false;
  return o;
}

ClassifierOptions ClassifierOptions::TrainingOnly() {
  ClassifierOptions o;
  o.use_em = o.use_ps = o.use_ch = false;
  return o;
}

ClassifierOptions ClassifierOptions::TrainingAndEmbedding() {
  ClassifierOptions o;
  o.use_ps = o.use_ch = false;
  return o;
}

ClassifierOptions ClassifierOptions::EmbeddingOnly() {
  ClassifierOptions o;
  o.use_tr = o.use_ps = o.use_ch = false;
  return o;
}

NameClassifier::NameClassifier(std::shared_ptr<const ModelTables> tables,
                               ClassifierOptions options)
    : tables_(std::move(tables)), options_(options) {
  if (!tables_ || !tables_->taxonomy)
    throw std::invalid_argument("classifier needs model tables");
  if (!(options_.sigma > 0.0))
    throw std::invalid_argument("sigma must be positive");
}

PartLikelihood NameClassifier::Primary(std::string_view part,
                                       NamePartRole role) const {
  const RoleTables& t = tables_->role(role);
  if (options_.use_us)
    if (const NodeVector* row = t.us.Find(part)) return {Tier::kUs, *row};
  if (options_.use_tr)
    if (const NodeVector* row = t.tr.Find(part)) return {Tier::kTr, *row};
  if (options_.use_em)
    if (const NodeVector* row = t.em.Find(part)) return {Tier::kEm, *row};
  return {};
}

PartLikelihood NameClassifier::Fallback(std::string_view part,
                                        NamePartRole role) const {
  const RoleTables& t = tables_->role(role);
  if (options_.use_ps)
    if (auto row = AffixLikelihood(t.ps, part)) return {Tier::kPs, *row};
  if (options_.use_ch)
    if (auto row = ScriptLikelihood(t.ch, part)) return {Tier::kCh, *row};
  return {};
}

std::pair<PartLikelihood, PartLikelihood> NameClassifier::Resolve(
    const FullName& name) const {
  PartLikelihood first = Primary(name.first, NamePartRole::kFirst);
  PartLikelihood last = Primary(name.last, NamePartRole::kLast);
  if (first.tier == Tier::kSmoothed && last.tier == Tier::kSmoothed) {
    first = Fallback(name.first, NamePartRole::kFirst);
    last = Fallback(name.last, NamePartRole::kLast);
  }
  return {std::move(first), std::move(last)};
}

NameClassifier::Level NameClassifier::ScoreLevel(
    NodeIndex parent, std::span<const NodeIndex> children,
    const PartLikelihood (&parts)[2], PriorMode mode) const {
  const Taxonomy& tax = *tables_->taxonomy;
  const std::size_t m = children.size();
  const double sigma = options_.sigma;
  const std::vector<double> prior =
      tables_->priors.ChildPriors(children, mode == PriorMode::kWorld);

  Level level;
  std::vector<double> factor[2];
  for (int p = 0; p < 2; ++p) {
    level.tiers[p] = parts[p].tier;
    factor[p].assign(m, sigma);
    if (parts[p].tier == Tier::kSmoothed) continue;
    bool any = false;
    for (std::size_t i = 0; i < m; ++i) {
      factor[p][i] = parts[p].row[children[i]];
      any = any || factor[p][i] > 0.0;
    }
    if (!any) {
      factor[p].assign(m, sigma);
      level.tiers[p] = Tier::kSmoothed;
    }
  }

  std::vector<double> score(m);
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    score[i] = factor[0][i] * factor[1][i] * prior[i];
    total += score[i];
  }
  if (total == 0.0) {
    // Zeros become sigma times the factor's smallest positive entry, which
    // keeps decisions invariant to rescaling a factor.
    for (auto& f : factor) {
      double lo = 0.0;
      for (double x : f)
        if (x > 0.0 && (lo == 0.0 || x < lo)) lo = x;
      for (double& x : f)
        if (x == 0.0) x = sigma * lo;
    }
    for (std::size_t i = 0; i < m; ++i) {
      score[i] = factor[0][i] * factor[1][i] * prior[i];
      total += score[i];
    }
  }

  // Scores equal up to rounding count as tied.
  auto same = [](double a, double b) {
    return std::abs(a - b) <= 1e-12 * std::max(a, b);
  };
  std::size_t best = 0;
  for (std::size_t i = 1; i < m; ++i) {
    if (!same(score[i], score[best])) {
      if (score[i] > score[best]) best = i;
    } else if (prior[i] != prior[best]) {
      if (prior[i] > prior[best]) best = i;
    } else if (tax.node(children[i]).id < tax.node(children[best]).id) {
      best = i;
    }
  }

  level.dist.node = tax.node(parent).id;
  for (std::size_t i = 0; i < m; ++i)
    level.dist.probs[tax.node(children[i]).id] =
        total > 0.0 ? score[i] / total : prior[i];
  level.winner = children[best];
  return level;
}

ClassificationResult NameClassifier::Classify(const FullName& name,
                                              PriorMode mode) const {
  const Taxonomy& tax = *tables_->taxonomy;
  auto [first, last] = Resolve(name);
  const PartLikelihood parts[2] = {std::move(first), std::move(last)};

  ClassificationResult result;
  result.name = name.Joined();
  result.taxonomy = tax.name();
  result.mode = mode;
  result.low_confidence =
      parts[0].tier == Tier::kSmoothed && parts[1].tier == Tier::kSmoothed;

  NodeIndex node = tax.root();
  while (!tax.IsLeaf(node)) {
    Level level = ScoreLevel(node, tax.children(node), parts, mode);
    result.evidence.push_back(
        {name.first, NamePartRole::kFirst, level.dist.node, level.tiers[0]});
    result.evidence.push_back(
        {name.last, NamePartRole::kLast, level.dist.node, level.tiers[1]});
    result.path.push_back(std::move(level.dist));
    node = level.winner;
  }
  result.leaf = tax.node(node).id;
  return result;
}

ClassDistribution NameClassifier::ClassifyFlat(
    const FullName& name, std::span<const std::string> nodes,
    PriorMode mode) const {
  const Taxonomy& tax = *tables_->taxonomy;
  if (nodes.empty()) throw std::invalid_argument("empty class set");
  std::vector<NodeIndex> children;
  for (const std::string& id : nodes) children.push_back(tax.IndexOf(id));
  auto [first, last] = Resolve(name);
  const PartLikelihood parts[2] = {std::move(first), std::move(last)};
  Level level = ScoreLevel(tax.root(), children, parts, mode);
  return std::move(level.dist);
}

}  // namespace nameorigin
