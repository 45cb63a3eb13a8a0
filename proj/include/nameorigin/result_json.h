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

#ifndef NAMEORIGIN_RESULT_JSON_H_
#define NAMEORIGIN_RESULT_JSON_H_

#include <iosfwd>
#include <string>

#include "nameorigin/classifier.h"

namespace nameorigin {

// {name, taxonomy, mode, path:[{node, probs:{child:prob}}], leaf,
//  evidence:[{part, level, tier}], low_confidence}, compact, keys in that
// order. A pure function of the result.
std::string ResultToJson(const ClassificationResult& result);

// Batch output: first, last, leaf, mode, path, evidence, low_confidence.
void WriteResultHeader(std::ostream& out);
void WriteResultRow(std::ostream& out, const FullName& name,
                    const ClassificationResult& result);

}  // namespace nameorigin

#endif  // NAMEORIGIN_RESULT_JSON_H_
