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

#ifndef NAMEORIGIN_UNICODE_H_
#define NAMEORIGIN_UNICODE_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nameorigin {

// NFC, then full Unicode case folding, then NFC again (folding can
// denormalize). Invalid UTF-8 sequences become U+FFFD.
std::string FoldName(std::string_view utf8);

// Splits on Unicode white space.
std::vector<std::string> SplitOnWhitespace(std::string_view utf8);

std::size_t CodePointLength(std::string_view utf8);

// First / last `n` code points. Requires n <= CodePointLength(utf8).
std::string PrefixCodePoints(std::string_view utf8, std::size_t n);
std::string SuffixCodePoints(std::string_view utf8, std::size_t n);

// Unicode script of the letters of `utf8` by strict plurality vote, as the
// long ICU script name ("Latin", "Hangul", ...). Non-letters are ignored.
// Empty when there are no letters, the top two scripts tie, or the winner is
// Common/Inherited/Unknown.
std::optional<std::string> DominantScript(std::string_view utf8);

}  // namespace nameorigin

#endif  // NAMEORIGIN_UNICODE_H_
