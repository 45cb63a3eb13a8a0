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

#include "nameorigin/ethnicity.h"

#include <stdexcept>

namespace nameorigin {
namespace {

void CheckScheme(const Taxonomy& t) {
  if (t.leaves().size() != std::size(kEthnicityIds) || t.height() != 1)
    throw std::invalid_argument("ethnicity taxonomy must be flat with six leaves");
  for (std::string_view id : kEthnicityIds)
    if (!t.contains(id))
      throw std::invalid_argument("ethnicity taxonomy lacks class " +
                                  std::string(id));
}

// P(E|v) P(v) / P(E) over the leaves of `t`.
NodeVector CensusLikelihood(const ClassDistribution& posterior,
                            double part_prior, const Taxonomy& t,
                            const NodeVector& prior) {
  NodeVector row(t.size(), 0.0);
  for (const auto& [id, p] : posterior.probs) {
    const NodeIndex n = t.IndexOf(id);
    if (prior[n] > 0.0) row[n] = p * part_prior / prior[n];
  }
  return row;
}

}  // namespace

EthnicityModel BuildEthnicityModel(const CensusTable& census,
                                   std::span<const FullName> us_pairs,
                                   std::shared_ptr<const Taxonomy> ethnicity,
                                   std::span<const LabeledName> labels,
                                   const EmbeddingTable* embeddings,
                                   const ModelConfig& config,
                                   std::vector<std::string>* warnings) {
  if (census.empty()) throw std::invalid_argument("empty census table");
  const Taxonomy& t = *ethnicity;
  CheckScheme(t);

  auto tables = std::make_shared<ModelTables>();
  bool have_labels = false;
  for (const LabeledName& l : labels)
    if (t.LeafForCountry(l.country)) have_labels = true;
  if (have_labels) {
    *tables = BuildModel(labels, ethnicity, embeddings, {}, config, warnings);
  } else {
    tables->taxonomy = ethnicity;
    std::map<std::string, std::uint64_t> population;
    for (NodeIndex leaf : t.leaves())
      population[t.node(leaf).id] = t.node(leaf).world_population;
    tables->priors = BuildPriors(population, t);
    for (NamePartRole role : kRoles) {
      RoleTables& r = tables->role(role);
      r.tr = LikelihoodTable(Source::kTr, role, ethnicity);
      r.em = LikelihoodTable(Source::kEm, role, ethnicity);
      r.ps = LikelihoodTable(Source::kPs, role, ethnicity);
      r.ch = LikelihoodTable(Source::kCh, role, ethnicity);
    }
  }
  const NodeVector& prior = tables->priors.world;

  EthnicityModel model;
  model.census = census;

  // Last names: P(v) is the surname's share of census persons.
  double persons = 0.0;
  for (const auto& [name, entry] : census)
    persons += static_cast<double>(entry.count);
  LikelihoodTable us_last(Source::kUs, NamePartRole::kLast, ethnicity);
  for (const auto& [name, entry] : census) {
    const double pv = persons > 0.0
                          ? static_cast<double>(entry.count) / persons
                          : 1.0 / static_cast<double>(census.size());
    us_last.Set(name, CensusLikelihood(entry.posterior, pv, t, prior));
  }

  // First names: average over the pair multiset, keeping a first name only
  // when at least half of its pairs carry a census label.
  struct Pairing {
    std::size_t total = 0;
    std::size_t labeled = 0;
    std::map<std::string, double> sum;
  };
  std::map<std::string, Pairing, std::less<>> pairings;
  for (const FullName& pair : us_pairs) {
    Pairing& p = pairings[pair.first];
    ++p.total;
    auto it = census.find(pair.last);
    if (it == census.end()) continue;
    ++p.labeled;
    for (const auto& [id, prob] : it->second.posterior.probs) p.sum[id] += prob;
  }
  LikelihoodTable us_first(Source::kUs, NamePartRole::kFirst, ethnicity);
  const double pair_count = static_cast<double>(us_pairs.size());
  for (auto& [first, p] : pairings) {
    if (p.labeled == 0 || 2 * p.labeled < p.total) {
      model.excluded_first_names.push_back(first);
      continue;
    }
    ClassDistribution post;
    post.node = t.root_id();
    for (auto& [id, s] : p.sum) post.probs[id] = s / static_cast<double>(p.labeled);
    us_first.Set(first, CensusLikelihood(
                            post, static_cast<double>(p.total) / pair_count, t,
                            prior));
    model.first_posteriors.emplace(first, std::move(post));
  }

  tables->role(NamePartRole::kFirst).us = std::move(us_first);
  tables->role(NamePartRole::kLast).us = std::move(us_last);
  model.tables = std::move(tables);
  return model;
}

ClassificationResult ClassifyEthnicity(const EthnicityModel& model,
                                       const FullName& name,
                                       const ClassifierOptions& options) {
  return NameClassifier(model.tables, options).Classify(name, PriorMode::kWorld);
}

}  // namespace nameorigin
