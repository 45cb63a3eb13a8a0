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

#ifndef NAMEORIGIN_INGEST_H_
#define NAMEORIGIN_INGEST_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "nameorigin/distribution.h"
#include "nameorigin/taxonomy.h"

namespace nameorigin {

enum class NamePartRole { kFirst, kLast };

inline constexpr NamePartRole kRoles[] = {NamePartRole::kFirst,
                                          NamePartRole::kLast};

std::string_view RoleName(NamePartRole role);        // "first" / "last"
std::optional<NamePartRole> ParseRole(std::string_view s);
// Embedding token prefixes: "F:" and "L:".
std::string_view RolePrefix(NamePartRole role);
std::string RoleToken(NamePartRole role, std::string_view part);
// Splits "F:zhang" into (kFirst, "zhang").
std::optional<std::pair<NamePartRole, std::string>> SplitRoleToken(
    std::string_view token);

// A normalized (first, last) pair. Both parts are case-folded NFC strings
// with no white space and at least two code points.
struct FullName {
  std::string first;
  std::string last;
  std::string raw;

  const std::string& part(NamePartRole role) const {
    return role == NamePartRole::kFirst ? first : last;
  }
  std::string Joined() const { return first + " " + last; }
};

enum class RejectReason {
  kEmpty,
  kTooFewParts,
  kTooManyParts,
  kTooShort,
  kMalformed,
};
std::string_view RejectReasonCode(RejectReason reason);

// What to do with names of three or more parts.
enum class MultiPartPolicy {
  kStrict,      // reject
  kJoinMiddle,  // merge interior parts into the first part with '-'
};

std::variant<FullName, RejectReason> NormalizeName(
    std::string_view raw, MultiPartPolicy policy = MultiPartPolicy::kStrict);

struct ContactRecord {
  FullName contact;
  double frequency = 0.0;     // communications
  double recency_days = 0.0;  // age of the last communication
};

// `owner` is an opaque anonymized id and never leaves the ingest stage.
struct ContactList {
  std::string owner;
  std::vector<ContactRecord> contacts;
};

struct Rejection {
  std::size_t line = 0;
  RejectReason reason = RejectReason::kMalformed;
  std::string raw;
};

// Parses one line of the contact-list format
//   owner_id <TAB> first last:freq:recency_days <TAB> ...
// Unusable contacts are appended to `rejects` (owner id omitted).
ContactList ParseContactLine(std::string_view line, std::size_t line_no,
                             MultiPartPolicy policy,
                             std::vector<Rejection>* rejects);
std::vector<ContactList> ReadContactLists(std::istream& in,
                                          MultiPartPolicy policy,
                                          std::vector<Rejection>* rejects);

enum class VocabularyLayout {
  kJoint,     // one sentence holding both F: and L: tokens
  kSeparate,  // one sentence of F: tokens and one of L: tokens
};

struct SentenceConfig {
  int top_contacts = 20;   // K
  double tau_days = 30.0;  // recency decay constant
  VocabularyLayout layout = VocabularyLayout::kJoint;
};

using Sentence = std::vector<std::string>;

double ContactWeight(const ContactRecord& c, double tau_days);

// Sentences for one contact list: contacts ordered by descending weight, ties
// by normalized full name, truncated to K; each contact contributes its
// F: token then its L: token. Empty lists give no sentences.
std::vector<Sentence> SentencesFor(const ContactList& list,
                                   const SentenceConfig& config);
std::vector<Sentence> BuildSentences(std::span<const ContactList> lists,
                                     const SentenceConfig& config);
void WriteSentences(std::ostream& out, std::span<const Sentence> sentences);
std::vector<Sentence> ReadSentences(std::istream& in);

struct LabeledName {
  FullName name;
  std::string country;      // ISO-3166 alpha-2
  std::uint64_t count = 1;  // multiplicity

  friend bool operator==(const LabeledName& a, const LabeledName& b) {
    return a.name.first == b.name.first && a.name.last == b.name.last &&
           a.country == b.country && a.count == b.count;
  }
};

// TSV: first <TAB> last <TAB> country_code <TAB> count. Rows whose name
// fails normalization are reported in `rejects`.
std::vector<LabeledName> ReadLabeledNames(std::istream& in,
                                          MultiPartPolicy policy,
                                          std::vector<Rejection>* rejects);
void WriteLabeledNames(std::ostream& out, std::span<const LabeledName> labels);

// TSV "first <TAB> last" (extra columns ignored), as used for classification
// batches, follower lists and US name pairs.
std::vector<FullName> ReadNamePairs(std::istream& in, MultiPartPolicy policy,
                                    std::vector<Rejection>* rejects);
void WriteRejections(std::ostream& out, std::span<const Rejection> rejects);

struct FilterStats {
  std::uint64_t records_in = 0;
  std::uint64_t records_kept = 0;
  std::uint64_t names_in = 0;  // count-weighted
  std::uint64_t names_kept = 0;
  double survival_rate() const {
    return names_in == 0 ? 0.0
                         : static_cast<double>(names_kept) /
                               static_cast<double>(names_in);
  }
};

// Drops a labeled name iff its first part and its last part each occur
// exactly once (count-weighted, per role) across the whole input.
std::vector<LabeledName> FilterLabels(std::span<const LabeledName> labels,
                                      FilterStats* stats = nullptr);

// Per-role counts C(v, N) over taxonomy leaves, plus class totals C(N).
class CountTable {
 public:
  explicit CountTable(std::uint64_t min_count = 5) : min_count_(min_count) {}

  void Add(NamePartRole role, std::string_view part, std::string_view leaf,
           std::uint64_t count);
  // Associative, commutative merge.
  void Merge(const CountTable& other);

  std::uint64_t min_count() const { return min_count_; }
  std::uint64_t Count(NamePartRole role, std::string_view part,
                      std::string_view leaf) const;
  std::uint64_t ClassTotal(NamePartRole role, std::string_view leaf) const;
  std::uint64_t PartTotal(NamePartRole role, std::string_view part) const;
  std::uint64_t RoleTotal(NamePartRole role) const;
  // Labeled names per leaf (every name adds one first-name occurrence).
  std::uint64_t LabelTotal(std::string_view leaf) const {
    return ClassTotal(NamePartRole::kFirst, leaf);
  }
  // V_tr membership: total occurrences >= min_count.
  bool InTrainingVocabulary(NamePartRole role, std::string_view part) const;

  using PartCounts = std::map<std::string, std::uint64_t, std::less<>>;
  const std::map<std::string, PartCounts, std::less<>>& parts(
      NamePartRole role) const {
    return parts_[Slot(role)];
  }
  const PartCounts& class_totals(NamePartRole role) const {
    return class_totals_[Slot(role)];
  }
  bool empty() const { return parts_[0].empty() && parts_[1].empty(); }

  // C(N) == sum_v C(v, N) for every role and class.
  bool TotalsConsistent() const;

  // TSV: role <TAB> part <TAB> leaf <TAB> count, sorted.
  void Write(std::ostream& out) const;
  static CountTable Read(std::istream& in, std::uint64_t min_count);

  friend bool operator==(const CountTable&, const CountTable&) = default;

 private:
  static int Slot(NamePartRole role) {
    return role == NamePartRole::kFirst ? 0 : 1;
  }
  std::uint64_t min_count_;
  std::map<std::string, PartCounts, std::less<>> parts_[2];
  PartCounts class_totals_[2];
};

struct SkipReport {
  std::map<std::string, std::uint64_t> skipped_by_country;  // records
  std::uint64_t records_used = 0;
  void Write(std::ostream& out) const;
};

// Aggregates labeled names into per-leaf counts. Countries outside the
// taxonomy are skipped and tallied in `skips`.
CountTable BuildCountTable(std::span<const LabeledName> labels,
                           const Taxonomy& taxonomy, std::uint64_t min_count,
                           SkipReport* skips = nullptr);

// Ethnicity ids of the census scheme, in file column order.
inline constexpr std::string_view kEthnicityIds[] = {
    "White", "Black", "API", "AIAN", "2PRACE", "Hispanic"};

struct CensusEntry {
  ClassDistribution posterior;  // over kEthnicityIds
  std::uint64_t count = 0;      // persons with the surname
};

using CensusTable = std::map<std::string, CensusEntry, std::less<>>;

// Census surname CSV (name,rank,count,prop100k,cum_prop100k,pctwhite,
// pctblack,pctapi,pctaian,pct2prace,pcthispanic); "(S)" marks suppressed
// cells. Percentages are renormalized over the visible cells. Malformed
// rows are skipped with a warning.
CensusTable ReadCensusLastNames(std::istream& in,
                                std::vector<std::string>* warnings);
CensusTable LoadCensusLastNames(const std::filesystem::path& path,
                                std::vector<std::string>* warnings);

}  // namespace nameorigin

#endif  // NAMEORIGIN_INGEST_H_
