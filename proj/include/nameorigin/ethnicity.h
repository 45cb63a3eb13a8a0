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

#ifndef NAMEORIGIN_ETHNICITY_H_
#define NAMEORIGIN_ETHNICITY_H_

#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "nameorigin/classifier.h"
#include "nameorigin/distribution.h"
#include "nameorigin/embedding.h"
#include "nameorigin/estimation.h"
#include "nameorigin/ingest.h"
#include "nameorigin/taxonomy.h"

namespace nameorigin {

// Census-bootstrapped six-class ethnicity model. The US tables hold census
// likelihoods P(v|E) = P(E|v) P(v) / P(E) with P(E) the population shares of
// the ethnicity taxonomy; TR/EM/PS/CH come from nationality labels whose
// countries are mapped through the ethnicity taxonomy's country lists.
struct EthnicityModel {
  std::shared_ptr<const ModelTables> tables;
  CensusTable census;  // last-name posteriors
  // First-name posteriors: mean census posterior of the labeled last names
  // they were paired with (pair multiset).
  std::map<std::string, ClassDistribution, std::less<>> first_posteriors;
  // First names with fewer than half of their pairs census-labeled.
  std::vector<std::string> excluded_first_names;
};

// `ethnicity` must be a flat taxonomy whose leaves are the six census
// classes. `labels` may be empty, in which case only census evidence is
// available and the internet prior equals the world prior. Throws on an
// empty census.
EthnicityModel BuildEthnicityModel(const CensusTable& census,
                                   std::span<const FullName> us_pairs,
                                   std::shared_ptr<const Taxonomy> ethnicity,
                                   std::span<const LabeledName> labels,
                                   const EmbeddingTable* embeddings,
                                   const ModelConfig& config,
                                   std::vector<std::string>* warnings = nullptr);

// Tier order US -> TR -> EM -> sigma with the affix/script retry, combined
// with the population-share prior.
ClassificationResult ClassifyEthnicity(const EthnicityModel& model,
                                       const FullName& name,
                                       const ClassifierOptions& options = {});

}  // namespace nameorigin

#endif  // NAMEORIGIN_ETHNICITY_H_
