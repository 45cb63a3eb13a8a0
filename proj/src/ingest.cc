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

#include "nameorigin/ingest.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "nameorigin/unicode.h"

namespace nameorigin {
namespace {

std::vector<std::string_view> SplitTabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

std::string_view StripCr(std::string_view s) {
  if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
  return s;
}

std::optional<double> ParseNonNegative(std::string_view s) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(value) ||
      value < 0.0)
    return std::nullopt;
  return value;
}

std::optional<std::uint64_t> ParseCount(std::string_view s) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

}  // namespace

std::string_view RoleName(NamePartRole role) {
  return role == NamePartRole::kFirst ? "first" : "last";
}

std::optional<NamePartRole> ParseRole(std::string_view s) {
  if (s == "first") return NamePartRole::kFirst;
  if (s == "last") return NamePartRole::kLast;
  return std::nullopt;
}

std::string_view RolePrefix(NamePartRole role) {
  return role == NamePartRole::kFirst ? "F:" : "L:";
}

std::string RoleToken(NamePartRole role, std::string_view part) {
  std::string token(RolePrefix(role));
  token += part;
  return token;
}

std::optional<std::pair<NamePartRole, std::string>> SplitRoleToken(
    std::string_view token) {
  for (NamePartRole role : kRoles) {
    if (token.starts_with(RolePrefix(role)))
      return std::pair{role, std::string(token.substr(2))};
  }
  return std::nullopt;
}

std::string_view RejectReasonCode(RejectReason reason) {
  switch (reason) {
    case RejectReason::kEmpty:
      return "empty";
    case RejectReason::kTooFewParts:
      return "too-few-parts";
    case RejectReason::kTooManyParts:
      return "too-many-parts";
    case RejectReason::kTooShort:
      return "too-short";
    case RejectReason::kMalformed:
      return "malformed";
  }
  return "malformed";
}

std::variant<FullName, RejectReason> NormalizeName(std::string_view raw,
                                                   MultiPartPolicy policy) {
  std::vector<std::string> parts = SplitOnWhitespace(FoldName(raw));
  if (parts.empty()) return RejectReason::kEmpty;
  if (parts.size() == 1) return RejectReason::kTooFewParts;
  if (parts.size() > 2) {
    if (policy == MultiPartPolicy::kStrict) return RejectReason::kTooManyParts;
    std::string first = parts.front();
    for (std::size_t i = 1; i + 1 < parts.size(); ++i) first += "-" + parts[i];
    parts = {std::move(first), parts.back()};
  }
  for (const std::string& p : parts) {
    if (CodePointLength(p) <= 1) return RejectReason::kTooShort;
  }
  return FullName{std::move(parts[0]), std::move(parts[1]), std::string(raw)};
}

ContactList ParseContactLine(std::string_view line, std::size_t line_no,
                             MultiPartPolicy policy,
                             std::vector<Rejection>* rejects) {
  line = StripCr(line);
  const std::vector<std::string_view> fields = SplitTabs(line);
  ContactList list;
  list.owner = std::string(fields.front());
  for (std::size_t i = 1; i < fields.size(); ++i) {
    const std::string_view field = fields[i];
    if (field.empty()) continue;
    const std::size_t c2 = field.rfind(':');
    const std::size_t c1 =
        c2 == std::string_view::npos || c2 == 0 ? std::string_view::npos
                                                : field.rfind(':', c2 - 1);
    std::optional<double> freq, recency;
    if (c1 != std::string_view::npos) {
      freq = ParseNonNegative(field.substr(c1 + 1, c2 - c1 - 1));
      recency = ParseNonNegative(field.substr(c2 + 1));
    }
    if (!freq || !recency) {
      if (rejects)
        rejects->push_back({line_no, RejectReason::kMalformed, std::string(field)});
      continue;
    }
    auto normalized = NormalizeName(field.substr(0, c1), policy);
    if (auto* reason = std::get_if<RejectReason>(&normalized)) {
      if (rejects)
        rejects->push_back({line_no, *reason, std::string(field.substr(0, c1))});
      continue;
    }
    list.contacts.push_back(
        {std::move(std::get<FullName>(normalized)), *freq, *recency});
  }
  return list;
}

std::vector<ContactList> ReadContactLists(std::istream& in,
                                          MultiPartPolicy policy,
                                          std::vector<Rejection>* rejects) {
  std::vector<ContactList> lists;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (StripCr(line).empty()) continue;
    lists.push_back(ParseContactLine(line, line_no, policy, rejects));
  }
  return lists;
}

double ContactWeight(const ContactRecord& c, double tau_days) {
  return c.frequency * std::exp(-c.recency_days / tau_days);
}

std::vector<Sentence> SentencesFor(const ContactList& list,
                                   const SentenceConfig& config) {
  if (config.top_contacts < 1) throw std::invalid_argument("K must be >= 1");
  if (!(config.tau_days > 0.0)) throw std::invalid_argument("tau must be > 0");
  if (list.contacts.empty()) return {};

  struct Ranked {
    double weight;
    std::string key;
    const ContactRecord* record;
  };
  std::vector<Ranked> ranked;
  ranked.reserve(list.contacts.size());
  for (const ContactRecord& c : list.contacts)
    ranked.push_back({ContactWeight(c, config.tau_days), c.contact.Joined(), &c});
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const Ranked& a, const Ranked& b) {
                     if (a.weight != b.weight) return a.weight > b.weight;
                     return a.key < b.key;
                   });
  const std::size_t keep =
      std::min(ranked.size(), static_cast<std::size_t>(config.top_contacts));

  if (config.layout == VocabularyLayout::kJoint) {
    Sentence s;
    s.reserve(2 * keep);
    for (std::size_t i = 0; i < keep; ++i) {
      s.push_back(RoleToken(NamePartRole::kFirst, ranked[i].record->contact.first));
      s.push_back(RoleToken(NamePartRole::kLast, ranked[i].record->contact.last));
    }
    return {std::move(s)};
  }
  Sentence firsts, lasts;
  for (std::size_t i = 0; i < keep; ++i) {
    firsts.push_back(RoleToken(NamePartRole::kFirst, ranked[i].record->contact.first));
    lasts.push_back(RoleToken(NamePartRole::kLast, ranked[i].record->contact.last));
  }
  return {std::move(firsts), std::move(lasts)};
}

std::vector<Sentence> BuildSentences(std::span<const ContactList> lists,
                                     const SentenceConfig& config) {
  std::vector<Sentence> out;
  for (const ContactList& list : lists) {
    for (Sentence& s : SentencesFor(list, config)) out.push_back(std::move(s));
  }
  return out;
}

void WriteSentences(std::ostream& out, std::span<const Sentence> sentences) {
  for (const Sentence& s : sentences) {
    for (std::size_t i = 0; i < s.size(); ++i) out << (i ? " " : "") << s[i];
    out << '\n';
  }
}

std::vector<Sentence> ReadSentences(std::istream& in) {
  std::vector<Sentence> sentences;
  std::string line;
  while (std::getline(in, line)) {
    Sentence s;
    std::istringstream tokens(line);
    std::string token;
    while (tokens >> token) s.push_back(std::move(token));
    if (!s.empty()) sentences.push_back(std::move(s));
  }
  return sentences;
}

std::vector<LabeledName> ReadLabeledNames(std::istream& in,
                                          MultiPartPolicy policy,
                                          std::vector<Rejection>* rejects) {
  std::vector<LabeledName> labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = StripCr(line);
    if (view.empty() || view.front() == '#') continue;
    const auto fields = SplitTabs(view);
    const std::uint64_t count =
        fields.size() == 4 ? ParseCount(fields[3]).value_or(0) : 0;
    std::string country =
        fields.size() >= 3 ? std::string(fields[2]) : std::string();
    for (char& c : country) c = static_cast<char>(std::toupper(c));
    if (fields.size() != 4 || count == 0 || country.size() != 2) {
      if (line_no == 1 && fields.size() == 4 && fields[0] == "first") continue;
      if (rejects) rejects->push_back({line_no, RejectReason::kMalformed, line});
      continue;
    }
    const std::string raw = std::string(fields[0]) + " " + std::string(fields[1]);
    auto normalized = NormalizeName(raw, policy);
    if (auto* reason = std::get_if<RejectReason>(&normalized)) {
      if (rejects) rejects->push_back({line_no, *reason, raw});
      continue;
    }
    labels.push_back({std::move(std::get<FullName>(normalized)),
                      std::move(country), count});
  }
  return labels;
}

std::vector<FullName> ReadNamePairs(std::istream& in, MultiPartPolicy policy,
                                    std::vector<Rejection>* rejects) {
  std::vector<FullName> names;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = StripCr(line);
    if (view.empty() || view.front() == '#') continue;
    const auto fields = SplitTabs(view);
    if (fields.size() < 2) {
      if (rejects) rejects->push_back({line_no, RejectReason::kMalformed, line});
      continue;
    }
    const std::string raw = std::string(fields[0]) + " " + std::string(fields[1]);
    auto normalized = NormalizeName(raw, policy);
    if (auto* reason = std::get_if<RejectReason>(&normalized)) {
      if (rejects) rejects->push_back({line_no, *reason, raw});
      continue;
    }
    names.push_back(std::move(std::get<FullName>(normalized)));
  }
  return names;
}

void WriteLabeledNames(std::ostream& out, std::span<const LabeledName> labels) {
  for (const LabeledName& l : labels)
    out << l.name.first << '\t' << l.name.last << '\t' << l.country << '\t'
        << l.count << '\n';
}

void WriteRejections(std::ostream& out, std::span<const Rejection> rejects) {
  out << "line\treason\traw\n";
  for (const Rejection& r : rejects) {
    std::string raw = r.raw;
    std::replace(raw.begin(), raw.end(), '\t', ' ');
    out << r.line << '\t' << RejectReasonCode(r.reason) << '\t' << raw << '\n';
  }
}

std::vector<LabeledName> FilterLabels(std::span<const LabeledName> labels,
                                      FilterStats* stats) {
  std::map<std::string, std::uint64_t, std::less<>> first_counts, last_counts;
  for (const LabeledName& l : labels) {
    first_counts[l.name.first] += l.count;
    last_counts[l.name.last] += l.count;
  }
  std::vector<LabeledName> kept;
  FilterStats local;
  for (const LabeledName& l : labels) {
    ++local.records_in;
    local.names_in += l.count;
    const bool singleton = first_counts.find(l.name.first)->second == 1 &&
                           last_counts.find(l.name.last)->second == 1;
    if (singleton) continue;
    ++local.records_kept;
    local.names_kept += l.count;
    kept.push_back(l);
  }
  if (stats) *stats = local;
  return kept;
}

void CountTable::Add(NamePartRole role, std::string_view part,
                     std::string_view leaf, std::uint64_t count) {
  if (count == 0) return;
  const int slot = Slot(role);
  auto it = parts_[slot].find(part);
  if (it == parts_[slot].end())
    it = parts_[slot].emplace(std::string(part), PartCounts{}).first;
  auto leaf_it = it->second.find(leaf);
  if (leaf_it == it->second.end())
    it->second.emplace(std::string(leaf), count);
  else
    leaf_it->second += count;
  auto total_it = class_totals_[slot].find(leaf);
  if (total_it == class_totals_[slot].end())
    class_totals_[slot].emplace(std::string(leaf), count);
  else
    total_it->second += count;
}

void CountTable::Merge(const CountTable& other) {
  for (NamePartRole role : kRoles) {
    for (const auto& [part, by_leaf] : other.parts(role)) {
      for (const auto& [leaf, n] : by_leaf) Add(role, part, leaf, n);
    }
  }
}

std::uint64_t CountTable::Count(NamePartRole role, std::string_view part,
                                std::string_view leaf) const {
  const auto& parts = parts_[Slot(role)];
  auto it = parts.find(part);
  if (it == parts.end()) return 0;
  auto leaf_it = it->second.find(leaf);
  return leaf_it == it->second.end() ? 0 : leaf_it->second;
}

std::uint64_t CountTable::ClassTotal(NamePartRole role,
                                     std::string_view leaf) const {
  const auto& totals = class_totals_[Slot(role)];
  auto it = totals.find(leaf);
  return it == totals.end() ? 0 : it->second;
}

std::uint64_t CountTable::PartTotal(NamePartRole role,
                                    std::string_view part) const {
  const auto& parts = parts_[Slot(role)];
  auto it = parts.find(part);
  if (it == parts.end()) return 0;
  std::uint64_t total = 0;
  for (const auto& [leaf, n] : it->second) total += n;
  return total;
}

std::uint64_t CountTable::RoleTotal(NamePartRole role) const {
  std::uint64_t total = 0;
  for (const auto& [leaf, n] : class_totals_[Slot(role)]) total += n;
  return total;
}

bool CountTable::InTrainingVocabulary(NamePartRole role,
                                      std::string_view part) const {
  return PartTotal(role, part) >= min_count_;
}

bool CountTable::TotalsConsistent() const {
  for (int slot = 0; slot < 2; ++slot) {
    PartCounts sums;
    for (const auto& [part, by_leaf] : parts_[slot]) {
      for (const auto& [leaf, n] : by_leaf) sums[leaf] += n;
    }
    if (sums != class_totals_[slot]) return false;
  }
  return true;
}

void CountTable::Write(std::ostream& out) const {
  for (NamePartRole role : kRoles) {
    for (const auto& [part, by_leaf] : parts(role)) {
      for (const auto& [leaf, n] : by_leaf)
        out << RoleName(role) << '\t' << part << '\t' << leaf << '\t' << n
            << '\n';
    }
  }
}

CountTable CountTable::Read(std::istream& in, std::uint64_t min_count) {
  CountTable table(min_count);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = StripCr(line);
    if (view.empty()) continue;
    const auto fields = SplitTabs(view);
    std::optional<NamePartRole> role =
        fields.size() == 4 ? ParseRole(fields[0]) : std::nullopt;
    std::optional<std::uint64_t> n =
        fields.size() == 4 ? ParseCount(fields[3]) : std::nullopt;
    if (!role || !n)
      throw std::runtime_error("count table line " + std::to_string(line_no) +
                               ": malformed");
    table.Add(*role, fields[1], fields[2], *n);
  }
  return table;
}

void SkipReport::Write(std::ostream& out) const {
  out << "country\trecords\treason\n";
  for (const auto& [country, n] : skipped_by_country)
    out << country << '\t' << n << "\tnot-in-taxonomy\n";
}

CountTable BuildCountTable(std::span<const LabeledName> labels,
                           const Taxonomy& taxonomy, std::uint64_t min_count,
                           SkipReport* skips) {
  if (min_count < 1) throw std::invalid_argument("min_count must be >= 1");
  CountTable table(min_count);
  for (const LabeledName& l : labels) {
    const std::optional<std::string> leaf = taxonomy.LeafForCountry(l.country);
    if (!leaf) {
      if (skips) ++skips->skipped_by_country[l.country];
      continue;
    }
    if (skips) ++skips->records_used;
    table.Add(NamePartRole::kFirst, l.name.first, *leaf, l.count);
    table.Add(NamePartRole::kLast, l.name.last, *leaf, l.count);
  }
  return table;
}

CensusTable ReadCensusLastNames(std::istream& in,
                                std::vector<std::string>* warnings) {
  // Default column positions of the published layout.
  std::size_t name_col = 0, count_col = 2, first_pct_col = 5;
  CensusTable table;
  std::string line;
  std::size_t line_no = 0;
  auto warn = [&](const std::string& msg) {
    if (warnings)
      warnings->push_back("census line " + std::to_string(line_no) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = StripCr(line);
    if (view.empty()) continue;
    std::vector<std::string> cols;
    {
      std::string cell;
      std::istringstream ss{std::string(view)};
      while (std::getline(ss, cell, ',')) cols.push_back(cell);
      if (!view.empty() && view.back() == ',') cols.emplace_back();
    }
    if (line_no == 1 && !cols.empty() && FoldName(cols[0]) == "name") {
      for (std::size_t i = 0; i < cols.size(); ++i) {
        const std::string h = FoldName(cols[i]);
        if (h == "count") count_col = i;
        if (h == "pctwhite") first_pct_col = i;
      }
      continue;
    }
    if (cols.size() < first_pct_col + 6 || cols.size() <= count_col) {
      warn("expected " + std::to_string(first_pct_col + 6) + " columns");
      continue;
    }
    const std::string name = FoldName(cols[name_col]);
    if (name.empty() || SplitOnWhitespace(name).size() != 1) {
      warn("bad surname '" + cols[name_col] + "'");
      continue;
    }
    double visible = 0.0;
    std::vector<std::optional<double>> pct(6);
    bool ok = true;
    for (std::size_t e = 0; e < 6; ++e) {
      const std::string& cell = cols[first_pct_col + e];
      if (cell == "(S)") continue;
      pct[e] = ParseNonNegative(cell);
      if (!pct[e]) {
        ok = false;
        break;
      }
      visible += *pct[e];
    }
    const std::optional<std::uint64_t> count = ParseCount(cols[count_col]);
    if (!ok || !(visible > 0.0)) {
      warn("unparseable or empty percentages for '" + name + "'");
      continue;
    }
    if (table.contains(name)) {
      warn("duplicate surname '" + name + "' ignored");
      continue;
    }
    CensusEntry entry;
    entry.count = count.value_or(0);
    entry.posterior.node = "Root";
    for (std::size_t e = 0; e < 6; ++e)
      entry.posterior.probs[std::string(kEthnicityIds[e])] =
          pct[e] ? *pct[e] / visible : 0.0;
    table.emplace(name, std::move(entry));
  }
  return table;
}

CensusTable LoadCensusLastNames(const std::filesystem::path& path,
                                std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open census file " + path.string());
  return ReadCensusLastNames(in, warnings);
}

}  // namespace nameorigin
