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

#include "nameorigin/unicode.h"

#include <map>
#include <stdexcept>

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/uscript.h>
#include <unicode/utf8.h>

namespace nameorigin {
namespace {

const icu::Normalizer2& Nfc() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status) || nfc == nullptr)
    throw std::runtime_error("ICU NFC normalizer unavailable");
  return *nfc;
}

// Decodes `utf8` into code points, substituting U+FFFD for bad sequences.
std::vector<UChar32> Decode(std::string_view utf8) {
  std::vector<UChar32> cps;
  const auto* s = reinterpret_cast<const uint8_t*>(utf8.data());
  const int32_t length = static_cast<int32_t>(utf8.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(s, i, length, c);
    cps.push_back(c < 0 ? 0xFFFD : c);
  }
  return cps;
}

// Byte offset of the code point at index `n`.
std::size_t ByteOffset(std::string_view utf8, std::size_t n) {
  const auto* s = reinterpret_cast<const uint8_t*>(utf8.data());
  const int32_t length = static_cast<int32_t>(utf8.size());
  int32_t i = 0;
  for (std::size_t k = 0; k < n && i < length; ++k) U8_FWD_1(s, i, length);
  return static_cast<std::size_t>(i);
}

}  // namespace

std::string FoldName(std::string_view utf8) {
  const icu::Normalizer2& nfc = Nfc();
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString s = icu::UnicodeString::fromUTF8(
      icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  s = nfc.normalize(s, status);
  s.foldCase(U_FOLD_CASE_DEFAULT);
  s = nfc.normalize(s, status);
  if (U_FAILURE(status))
    throw std::runtime_error(std::string("ICU normalization failed: ") +
                             u_errorName(status));
  std::string out;
  s.toUTF8String(out);
  return out;
}

std::vector<std::string> SplitOnWhitespace(std::string_view utf8) {
  std::vector<std::string> parts;
  const auto* s = reinterpret_cast<const uint8_t*>(utf8.data());
  const int32_t length = static_cast<int32_t>(utf8.size());
  int32_t i = 0;
  int32_t start = -1;
  while (i < length) {
    const int32_t at = i;
    UChar32 c;
    U8_NEXT(s, i, length, c);
    const bool space = c >= 0 && u_isUWhiteSpace(c);
    if (space) {
      if (start >= 0) parts.emplace_back(utf8.substr(start, at - start));
      start = -1;
    } else if (start < 0) {
      start = at;
    }
  }
  if (start >= 0) parts.emplace_back(utf8.substr(start));
  return parts;
}

std::size_t CodePointLength(std::string_view utf8) {
  return Decode(utf8).size();
}

std::string PrefixCodePoints(std::string_view utf8, std::size_t n) {
  return std::string(utf8.substr(0, ByteOffset(utf8, n)));
}

std::string SuffixCodePoints(std::string_view utf8, std::size_t n) {
  const std::size_t total = CodePointLength(utf8);
  if (n > total) n = total;
  return std::string(utf8.substr(ByteOffset(utf8, total - n)));
}

std::optional<std::string> DominantScript(std::string_view utf8) {
  std::map<UScriptCode, int> votes;
  for (UChar32 c : Decode(utf8)) {
    if (!u_isalpha(c)) continue;
    UErrorCode status = U_ZERO_ERROR;
    const UScriptCode code = uscript_getScript(c, &status);
    if (U_FAILURE(status)) continue;
    ++votes[code];
  }
  if (votes.empty()) return std::nullopt;
  UScriptCode best = USCRIPT_INVALID_CODE;
  int best_votes = 0;
  bool tied = false;
  for (const auto& [code, n] : votes) {
    if (n > best_votes) {
      best = code;
      best_votes = n;
      tied = false;
    } else if (n == best_votes) {
      tied = true;
    }
  }
  if (tied || best == USCRIPT_COMMON || best == USCRIPT_INHERITED ||
      best == USCRIPT_UNKNOWN)
    return std::nullopt;
  return std::string(uscript_getName(best));
}

}  // namespace nameorigin
