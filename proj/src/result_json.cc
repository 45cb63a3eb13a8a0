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

#include "nameorigin/result_json.h"

#include <cstdio>
#include <ostream>

#include "json.hpp"

namespace nameorigin {

std::string ResultToJson(const ClassificationResult& result) {
  using json = nlohmann::ordered_json;
  json path = json::array();
  for (const ClassDistribution& d : result.path) {
    json probs = json::object();
    for (const auto& [id, p] : d.probs) probs[id] = p;
    path.push_back({{"node", d.node}, {"probs", std::move(probs)}});
  }
  json evidence = json::array();
  for (const Evidence& e : result.evidence)
    evidence.push_back(
        {{"part", e.part}, {"level", e.level}, {"tier", TierName(e.tier)}});
  json j = {{"name", result.name},
            {"taxonomy", result.taxonomy},
            {"mode", PriorModeName(result.mode)},
            {"path", std::move(path)},
            {"leaf", result.leaf},
            {"evidence", std::move(evidence)},
            {"low_confidence", result.low_confidence}};
  return j.dump();
}

void WriteResultHeader(std::ostream& out) {
  out << "first\tlast\tleaf\tmode\tpath\tevidence\tlow_confidence\n";
}

void WriteResultRow(std::ostream& out, const FullName& name,
                    const ClassificationResult& result) {
  out << name.first << '\t' << name.last << '\t' << result.leaf << '\t'
      << PriorModeName(result.mode) << '\t';
  char buf[40];
  for (std::size_t i = 0; i < result.path.size(); ++i) {
    const ClassDistribution& d = result.path[i];
    out << (i ? ";" : "") << d.node << ':';
    bool first = true;
    for (const auto& [id, p] : d.probs) {
      std::snprintf(buf, sizeof buf, "%.6g", p);
      out << (first ? "" : ",") << id << '=' << buf;
      first = false;
    }
  }
  out << '\t';
  for (std::size_t i = 0; i < result.evidence.size(); ++i) {
    const Evidence& e = result.evidence[i];
    out << (i ? ";" : "") << e.level << '/' << RoleName(e.role) << '='
        << TierName(e.tier);
  }
  out << '\t' << (result.low_confidence ? "1" : "0") << '\n';
}

}  // namespace nameorigin
