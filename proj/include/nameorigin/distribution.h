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

#ifndef NAMEORIGIN_DISTRIBUTION_H_
#define NAMEORIGIN_DISTRIBUTION_H_

#include <map>
#include <string>

namespace nameorigin {

// Probability vector over the children of one taxonomy node (or over an
// arbitrary class set for flat classification). Keys are node ids.
struct ClassDistribution {
  std::string node;
  std::map<std::string, double> probs;

  double Sum() const {
    double total = 0.0;
    for (const auto& [id, p] : probs) total += p;
    return total;
  }

  double Get(const std::string& id) const {
    auto it = probs.find(id);
    return it == probs.end() ? 0.0 : it->second;
  }

  friend bool operator==(const ClassDistribution&,
                         const ClassDistribution&) = default;
};

}  // namespace nameorigin

#endif  // NAMEORIGIN_DISTRIBUTION_H_
