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

#include "nameorigin/analysis.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "test_util.h"

namespace nameorigin {
namespace {

using testing::Label;
using testing::Name;
using testing::ParseTaxonomy;

constexpr char kTax[] = R"(taxonomy = t
[Root]
[G]
parent = Root
[A]
parent = G
countries = AA
population = 1
[B]
parent = G
countries = BB
population = 1
[C]
parent = Root
countries = CC
population = 1
)";

std::vector<std::string> Keys(const std::vector<LabeledName>& v) {
  std::vector<std::string> out;
  for (const auto& l : v) out.push_back(l.name.Joined() + "/" + l.country);
  return out;
}

std::vector<LabeledName> Records(const std::string& country, int n) {
  std::vector<LabeledName> out;
  for (int i = 0; i < n; ++i)
    out.push_back(Label("f" + std::to_string(i), "l" + country, country));
  return out;
}

TEST(SplitTest, SixFour) {
  auto t = ParseTaxonomy(kTax);
  auto labels = Records("AA", 10);
  Split s = StratifiedSplit(labels, *t, 0.6, 1);
  EXPECT_EQ(s.train.size(), 6u);
  EXPECT_EQ(s.test.size(), 4u);
  Split again = StratifiedSplit(labels, *t, 0.6, 1);
  EXPECT_EQ(Keys(s.train), Keys(again.train));
  EXPECT_EQ(Keys(s.test), Keys(again.test));
}

TEST(SplitTest, SeedsDifferAndStayStratified) {
  auto t = ParseTaxonomy(kTax);
  std::vector<LabeledName> labels = Records("AA", 17);
  auto more = Records("BB", 9);
  labels.insert(labels.end(), more.begin(), more.end());
  std::vector<std::vector<std::string>> trains;
  for (std::uint64_t seed : {1, 2, 3}) {
    Split s = StratifiedSplit(labels, *t, 0.6, seed);
    int a = 0, b = 0;
    for (const auto& l : s.train) (l.country == "AA" ? a : b)++;
    EXPECT_LE(std::abs(a - 0.6 * 17), 1.0);
    EXPECT_LE(std::abs(b - 0.6 * 9), 1.0);
    trains.push_back(Keys(s.train));
  }
  EXPECT_NE(trains[0], trains[1]);
  EXPECT_NE(trains[1], trains[2]);
}

TEST(SplitTest, TinyStratumGoesToTrain) {
  auto t = ParseTaxonomy(kTax);
  auto labels = Records("CC", 1);
  std::vector<std::string> warnings;
  Split s = StratifiedSplit(labels, *t, 0.6, 1, &warnings);
  EXPECT_EQ(s.train.size(), 1u);
  EXPECT_TRUE(s.test.empty());
  EXPECT_EQ(warnings.size(), 1u);
}

TEST(ScoreTest, HandConfusion) {
  // Class X: tp 8, fp 2, fn 2.
  std::vector<Prediction> p = {{"X", "X", 8}, {"Y", "X", 2}, {"X", "Y", 2}, {"Y", "Y", 3}};
  ScoreSet s = ScorePredictions(p);
  auto x = std::find_if(s.classes.begin(), s.classes.end(),
                        [](const ClassScore& c) { return c.id == "X"; });
  ASSERT_NE(x, s.classes.end());
  EXPECT_EQ(x->tp, 8u);
  EXPECT_DOUBLE_EQ(x->f1, 0.8);
  EXPECT_DOUBLE_EQ(x->precision, 0.8);
  EXPECT_EQ(s.total, 15u);
  // Y: tp 3, fp 2, fn 2 -> 0.6; supports 10 and 5.
  EXPECT_NEAR(s.weighted_f1, (0.8 * 10 + 0.6 * 5) / 15.0, 1e-15);
}

TEST(ScoreTest, PerfectPredictions) {
  auto t = ParseTaxonomy(kTax);
  std::vector<Prediction> p = {{"A", "A", 3}, {"B", "B", 1}, {"C", "C", 2}};
  EvalReport r = Evaluate(p, *t);
  EXPECT_DOUBLE_EQ(r.leaves.weighted_f1, 1.0);
  for (const auto& c : r.leaves.classes) EXPECT_DOUBLE_EQ(c.f1, 1.0);
  ASSERT_TRUE(r.levels.count(1));
  EXPECT_DOUBLE_EQ(r.levels.at(1).weighted_f1, 1.0);
  EXPECT_THROW(Evaluate({}, *t), std::invalid_argument);
  std::vector<Prediction> bad = {{"A", "Nope", 1}};
  EXPECT_THROW(Evaluate(bad, *t), std::exception);
}

TEST(ScoreTest, InternalLevelsProjectUpward) {
  auto t = ParseTaxonomy(kTax);
  // A confused with B is still right at depth 1 (both under G).
  std::vector<Prediction> p = {{"A", "B", 1}, {"C", "C", 1}};
  EvalReport r = Evaluate(p, *t);
  EXPECT_LT(r.leaves.weighted_f1, 1.0);
  EXPECT_DOUBLE_EQ(r.levels.at(1).weighted_f1, 1.0);
  std::ostringstream tsv;
  r.WriteTsv(tsv);
  EXPECT_NE(tsv.str().find("leaf\t*weighted"), std::string::npos);
  EXPECT_NE(r.ToJson().find("\"weighted_f1\""), std::string::npos);
}

TEST(ProjectPredictionsTest, DropsExcludedTruths) {
  auto src = ParseTaxonomy(kTax);
  auto dst = ParseTaxonomy("taxonomy = d\n[R]\n[X]\nparent = R\n[Excluded]\nparent = R\n");
  TaxonomyProjection p(src, dst, {{"A", "X"}, {"B", "X"}, {"C", "Excluded"}});
  std::vector<Prediction> preds = {{"A", "B", 2}, {"C", "A", 1}, {"B", "C", 1}};
  auto out = ProjectPredictions(preds, p, {"Excluded"});
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].predicted, "X");
  EXPECT_EQ(out[1].predicted, "Excluded");
}

TEST(SummarizeTest, SampleStd) {
  std::vector<double> v = {1.0, 2.0, 3.0};
  MeanStd s = Summarize(v);
  EXPECT_DOUBLE_EQ(s.mean, 2.0);
  EXPECT_DOUBLE_EQ(s.stddev, 1.0);
  std::vector<double> one = {0.5};
  EXPECT_DOUBLE_EQ(Summarize(one).stddev, 0.0);
}

TEST(SimilarityTest, Examples) {
  std::vector<LabeledName> same = {Label("ana", "silva", "AO"), Label("ana", "silva", "MZ"),
                                   Label("john", "smith", "GB")};
  SimilarityResult r = CountrySimilarity(same);
  ASSERT_EQ(r.countries, (std::vector<std::string>{"AO", "GB", "MZ"}));
  EXPECT_DOUBLE_EQ(r.matrix[0][2], 1.0);
  EXPECT_DOUBLE_EQ(r.matrix[0][1], 0.0);
  // AO-MZ above threshold; GB linked to its best neighbor despite 0.
  ASSERT_EQ(r.edges.size(), 2u);
  EXPECT_EQ(r.edges[0], (SimilarityEdge{"AO", "GB", 0.0}));
  EXPECT_EQ(r.edges[1].src, "AO");
  EXPECT_EQ(r.edges[1].dst, "MZ");
  EXPECT_NEAR(r.edges[1].similarity, 1.0, 1e-12);
  std::ostringstream out;
  r.WriteEdges(out);
  EXPECT_EQ(out.str(), "AO\tGB\t0.000000\nAO\tMZ\t1.000000\n");
}

TEST(SimilarityTest, PortugueseSharedParts) {
  std::vector<LabeledName> labels = {
      Label("joao", "santos", "AO", 5), Label("maria", "silva", "AO", 4),
      Label("kofi", "mensah", "AO", 1), Label("joao", "silva", "MZ", 4),
      Label("maria", "santos", "MZ", 5), Label("amina", "banda", "MZ", 1),
      Label("kwame", "mensah", "GH", 6), Label("ama", "owusu", "GH", 5)};
  SimilarityResult r = CountrySimilarity(labels);
  auto has = [&](const std::string& a, const std::string& b) {
    for (const auto& e : r.edges)
      if (e.src == a && e.dst == b) return e.similarity > 0.5;
    return false;
  };
  EXPECT_TRUE(has("AO", "MZ"));
  EXPECT_THROW(CountrySimilarity(std::vector<LabeledName>{Label("aa", "bb", "AO")}),
               std::invalid_argument);
}

TEST(RepresentationTest, Ratios) {
  std::map<std::string, double> baseline = {{"A", 0.5}, {"B", 0.25}, {"C", 0.25}};
  std::vector<std::string> equal = {"A", "A", "B", "C"};
  RepresentationReport r = BuildRepresentationReport(equal, baseline);
  for (const auto& row : r.rows) EXPECT_NEAR(row.ratio, 0.0, 1e-15);
  EXPECT_EQ(r.dominant, "A");
  EXPECT_FALSE(r.anomaly);

  std::vector<std::string> doubled = {"B", "B", "A", "C"};
  RepresentationReport d = BuildRepresentationReport(doubled, baseline);
  EXPECT_NEAR(d.rows[1].ratio, 1.0, 1e-15);

  EXPECT_THROW(BuildRepresentationReport({}, baseline), std::invalid_argument);
  std::map<std::string, double> bad = {{"A", 0.7}};
  EXPECT_THROW(BuildRepresentationReport(equal, bad), std::invalid_argument);
}

TEST(RepresentationTest, IndonesianAnomaly) {
  std::map<std::string, double> baseline = {
      {"Indonesian", 0.6}, {"British", 0.15}, {"Russian", 0.15}, {"Indian", 0.1}};
  std::vector<std::string> followers;
  auto add = [&](const std::string& id, int n) { followers.insert(followers.end(), n, id); };
  add("Indonesian", 13);
  add("British", 30);
  add("Russian", 27);
  add("Indian", 30);
  RepresentationReport r = BuildRepresentationReport(followers, baseline, "Indonesian");
  EXPECT_DOUBLE_EQ(r.dominant_share, 0.13);
  EXPECT_TRUE(r.anomaly);
  EXPECT_NE(r.ToJson().find("\"anomaly\""), std::string::npos);
}

}  // namespace
}  // namespace nameorigin
