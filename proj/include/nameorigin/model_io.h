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

#ifndef NAMEORIGIN_MODEL_IO_H_
#define NAMEORIGIN_MODEL_IO_H_

#include <filesystem>
#include <map>
#include <memory>
#include <string>

#include "nameorigin/estimation.h"
#include "nameorigin/ethnicity.h"

namespace nameorigin {

using Metadata = std::map<std::string, std::string>;

// A model directory holds taxonomy.taxonomy, priors.tsv, one
// likelihood_<source>_<role>.tsv per table and model.json with `metadata`.
void SaveModel(const ModelTables& model, const std::filesystem::path& dir,
               const Metadata& metadata);
std::shared_ptr<ModelTables> LoadModel(const std::filesystem::path& dir);
Metadata LoadMetadata(const std::filesystem::path& dir);

// Adds census.tsv, first_posteriors.tsv and excluded_first_names.txt.
void SaveEthnicityModel(const EthnicityModel& model,
                        const std::filesystem::path& dir,
                        const Metadata& metadata);
EthnicityModel LoadEthnicityModel(const std::filesystem::path& dir);

}  // namespace nameorigin

#endif  // NAMEORIGIN_MODEL_IO_H_
