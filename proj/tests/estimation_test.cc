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

#include "nameorigin/estimation.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "nameorigin/embedding.h"
#include "test_util.h"

namespace nameorigin {
namespace {

using testing::Label;
using testing::ParseTaxonomy;

constexpr char kFlat[] = R"(taxonomy = flat
[Root]
[CN]
parent = Root
countries = CN
population = 50000000
[JP]
parent = Root
countries = JP
population = 50000000
)";

NodeVector Row(const Taxonomy& t, std::map<std::string, double> m) {
  NodeVector r(t.size(), 0.0);
  for (auto& [id, p] : m) r[t.IndexOf(id)] = p;
  return r;
}

TEST(TrainingTest, DirectRatio) {
  auto t = ParseTaxonomy(kFlat);
  CountTable c(1);
  c.Add(NamePartRole::kLast, "zhang", "CN", 8);
  c.Add(NamePartRole::kLast, "wang", "CN", 2);
  c.Add(NamePartRole::kLast, "sato", "JP", 4);
  LikelihoodTable tr = EstimateTraining(c, NamePartRole::kLast, t);
  EXPECT_DOUBLE_EQ((*tr.Find("zhang"))[t->IndexOf("CN")], 0.8);
  EXPECT_DOUBLE_EQ((*tr.Find("sato"))[t->IndexOf("JP")], 1.0);
  EXPECT_DOUBLE_EQ((*tr.Find("sato"))[t->IndexOf("CN")], 0.0);
  // Root holds subtree sums: 4 / 14.
  EXPECT_DOUBLE_EQ((*tr.Find("sato"))[t->root()], 4.0 / 14.0);
  EXPECT_TRUE(tr.Valid());
}

TEST(TrainingTest, MinCountExcludes) {
  auto t = ParseTaxonomy(kFlat);
  CountTable c(5);
  c.Add(NamePartRole::kFirst, "rare", "CN", 4);
  c.Add(NamePartRole::kFirst, "common", "CN", 6);
  LikelihoodTable tr = EstimateTraining(c, NamePartRole::kFirst, t);
  EXPECT_FALSE(tr.contains("rare"));
  EXPECT_DOUBLE_EQ((*tr.Find("common"))[t->IndexOf("CN")], 0.6);
}

TEST(TrainingTest, SingleNameSingleClass) {
  auto t = ParseTaxonomy("taxonomy = one\n[Root]\n[A]\nparent = Root\ncountries = AA\n"
                         "population = 1\n");
  CountTable c(1);
  c.Add(NamePartRole::kFirst, "solo", "A", 1);
  EXPECT_DOUBLE_EQ((*EstimateTraining(c, NamePartRole::kFirst, t).Find("solo"))[1], 1.0);
}

TEST(PriorTest, WorldCorrection) {
  auto t = ParseTaxonomy(kFlat);
  PriorTable p = BuildPriors({{"CN", 9000}, {"JP", 1000}}, *t);
  const NodeIndex cn = t->IndexOf("CN"), jp = t->IndexOf("JP");
  EXPECT_DOUBLE_EQ(p.internet[cn], 0.9);
  EXPECT_DOUBLE_EQ(p.internet[jp], 0.1);
  EXPECT_NEAR(p.world[cn], 0.5, 1e-12);
  EXPECT_NEAR(p.world[jp], 0.5, 1e-12);
  EXPECT_DOUBLE_EQ(p.sample_ratio[cn], 9000.0 / 5e7);
  EXPECT_DOUBLE_EQ(p.overall_ratio, 10000.0 / 1e8);
  NodeVector back = WorldFromInternet(p.internet, p.sample_ratio, p.overall_ratio);
  EXPECT_NEAR(back[cn], 0.5, 1e-12);
  NodeVector fwd = InternetFromWorld(p.world, p.sample_ratio, p.overall_ratio);
  EXPECT_NEAR(fwd[cn], 0.9, 1e-12);
  EXPECT_DOUBLE_EQ(p.internet[t->root()], 1.0);
}

TEST(PriorTest, SymmetricCaseAndErrors) {
  auto t = ParseTaxonomy(kFlat);
  PriorTable p = BuildPriors({{"CN", 10}, {"JP", 10}}, *t);
  EXPECT_DOUBLE_EQ(p.internet[1], p.world[1]);
  EXPECT_THROW(BuildPriors(std::map<std::string, std::uint64_t>{}, *t), std::invalid_argument);
  auto zero = ParseTaxonomy("taxonomy = z\n[R]\n[A]\nparent = R\ncountries = AA\n"
                            "[B]\nparent = R\ncountries = BB\npopulation = 5\n");
  EXPECT_THROW(BuildPriors({{"A", 3}}, *zero), std::invalid_argument);
}

TEST(PriorTest, UkSouthAfricaSkew) {
  auto t = ParseTaxonomy(R"(taxonomy = uk
[Root]
[UK]
parent = Root
countries = GB
population = 60000000
[SouthAfrica]
parent = Root
countries = ZA
population = 55000000
)");
  PriorTable p = BuildPriors({{"UK", 50000}, {"SouthAfrica", 500}}, *t);
  const double ratio = p.world[t->IndexOf("UK")] / p.world[t->IndexOf("SouthAfrica")];
  EXPECT_NEAR(ratio, 60.0 / 55.0, 1e-9);
  EXPECT_GT(p.internet[t->IndexOf("UK")], 0.98);
}

TEST(PriorTest, ReadWriteRoundTrip) {
  auto t = ParseTaxonomy(kFlat);
  PriorTable p = BuildPriors({{"CN", 7}, {"JP", 3}}, *t);
  std::stringstream ss;
  p.Write(ss, *t);
  EXPECT_EQ(PriorTable::Read(ss, *t), p);
}

TEST(BayesTest, PosteriorLikelihoodRoundTrip) {
  auto t = ParseTaxonomy(kFlat);
  NodeVector prior = Row(*t, {{"CN", 0.5}, {"JP", 0.5}});
  prior[t->root()] = 1.0;
  NodeVector post = Row(*t, {{"CN", 0.75}, {"JP", 0.25}});
  NodeVector like = PosteriorToLikelihood(post, 0.01, prior);
  EXPECT_NEAR(like[t->IndexOf("CN")], 0.015, 1e-15);
  EXPECT_NEAR(like[t->IndexOf("JP")], 0.005, 1e-15);
  NodeVector again = LikelihoodToPosterior(like, prior, *t);
  EXPECT_NEAR(again[t->IndexOf("CN")], 0.75, 1e-12);
  EXPECT_NEAR(again[t->root()], 1.0, 1e-12);
  EXPECT_EQ(LikelihoodToPosterior(NodeVector(t->size(), 0.0), prior, *t),
            NodeVector(t->size(), 0.0));
}

EmbeddingTable Vectors(std::vector<std::string> tokens,
                       std::vector<std::vector<float>> vecs) {
  std::vector<float> flat;
  for (auto& v : vecs) flat.insert(flat.end(), v.begin(), v.end());
  std::vector<std::uint64_t> counts(tokens.size(), 5);
  return EmbeddingTable(static_cast<int>(vecs[0].size()), std::move(tokens),
                        std::move(counts), std::move(flat));
}

TEST(EmbeddingEstimateTest, AveragesNeighborPosteriors) {
  auto t = ParseTaxonomy(kFlat);
  const NodeIndex cn = t->IndexOf("CN"), jp = t->IndexOf("JP");
  LikelihoodTable tr(Source::kTr, NamePartRole::kFirst, t);
  tr.Set("one", Row(*t, {{"CN", 0.2}}));               // posterior CN 1.0
  tr.Set("two", Row(*t, {{"CN", 0.1}, {"JP", 0.1}}));  // posterior 0.5 / 0.5
  PriorTable priors = BuildPriors({{"CN", 5}, {"JP", 5}}, *t);
  EmbeddingTable emb = Vectors({"F:one", "F:two", "F:new", "F:far", "L:one"},
                               {{1, 0.2f}, {1, -0.2f}, {1, 0}, {-1, 0}, {1, 0.01f}});
  CountTable counts(1);
  counts.Add(NamePartRole::kFirst, "one", "CN", 10);
  PartPrior pv = PartPrior::FromLabels(counts, NamePartRole::kFirst,
                                       {"one", "two", "new", "far"});
  EmbeddingEstimateConfig cfg;
  cfg.k = 3;  // F:one, F:two and the last-name token L:one
  std::vector<std::string> warnings;
  LikelihoodTable em = EstimateEmbedding(emb, tr, priors, pv, cfg, &warnings);
  ASSERT_TRUE(em.contains("new"));
  EXPECT_FALSE(em.contains("one"));
  const double p_new = pv("new");
  EXPECT_NEAR((*em.Find("new"))[cn], 0.75 * p_new / 0.5, 1e-15);
  EXPECT_NEAR((*em.Find("new"))[jp], 0.25 * p_new / 0.5, 1e-15);
  EXPECT_TRUE(em.Valid());

  cfg.k = 1;
  LikelihoodTable k1 = EstimateEmbedding(emb, tr, priors, pv, cfg);
  // The nearest token to "new" is the last-name token, so the search widens.
  EXPECT_TRUE(k1.contains("new"));
}

TEST(EmbeddingEstimateTest, NoNeighborsWarns) {
  auto t = ParseTaxonomy(kFlat);
  LikelihoodTable tr(Source::kTr, NamePartRole::kFirst, t);
  tr.Set("one", Row(*t, {{"CN", 1.0}}));
  PriorTable priors = BuildPriors({{"CN", 5}, {"JP", 5}}, *t);
  std::vector<std::string> tokens = {"F:one", "F:lonely"};
  std::vector<std::vector<float>> vecs = {{1, 0}, {0, 1}};
  for (int i = 0; i < 6; ++i) {
    tokens.push_back("L:x" + std::to_string(i));
    vecs.push_back({0, 1});
  }
  EmbeddingTable emb = Vectors(tokens, vecs);
  CountTable counts(1);
  PartPrior pv = PartPrior::FromLabels(counts, NamePartRole::kFirst, {"one", "lonely"});
  std::vector<std::string> warnings;
  EmbeddingEstimateConfig cfg;
  cfg.k = 1;
  LikelihoodTable em = EstimateEmbedding(emb, tr, priors, pv, cfg, &warnings);
  EXPECT_FALSE(em.contains("lonely"));
  EXPECT_EQ(warnings.size(), 1u);
}

TEST(AffixTest, Keys) {
  auto keys = AffixKeys("kowalski");
  std::sort(keys.begin(), keys.end());
  EXPECT_EQ(keys, (std::vector<std::string>{"P:kow", "P:kowa", "P:kowal", "S:alski",
                                            "S:lski", "S:ski"}));
  EXPECT_TRUE(AffixKeys("ab").empty());
  EXPECT_EQ(AffixKeys("abc").size(), 2u);
}

TEST(AffixTest, SingleElementAverage) {
  auto t = ParseTaxonomy(kFlat);
  LikelihoodTable tr(Source::kTr, NamePartRole::kLast, t);
  const NodeVector row = Row(*t, {{"CN", 0.3}, {"JP", 0.1}});
  tr.Set("abcde", row);
  LikelihoodTable ps = EstimateAffix(tr);
  auto hit = AffixLikelihood(ps, "abcxx");
  ASSERT_TRUE(hit);
  EXPECT_EQ(*hit, row);
  EXPECT_FALSE(AffixLikelihood(ps, "xy").has_value());
  EXPECT_FALSE(AffixLikelihood(ps, "zzzzz").has_value());
  EXPECT_EQ(*AffixLikelihood(ps, "abcde"), row);
}

TEST(AffixTest, TwoStageAverage) {
  auto t = ParseTaxonomy(kFlat);
  const NodeIndex cn = t->IndexOf("CN");
  LikelihoodTable tr(Source::kTr, NamePartRole::kLast, t);
  tr.Set("abcxy", Row(*t, {{"CN", 0.4}}));
  tr.Set("abczz", Row(*t, {{"CN", 0.2}}));
  tr.Set("qqqzz", Row(*t, {{"CN", 0.1}}));
  LikelihoodTable ps = EstimateAffix(tr);
  // "abcvv": only P:abc is indexed, mean(0.4, 0.2).
  EXPECT_NEAR((*AffixLikelihood(ps, "abcvv"))[cn], 0.3, 1e-15);
  // "xxczz": S:czz -> abczz only = 0.2.
  EXPECT_NEAR((*AffixLikelihood(ps, "xxczz"))[cn], 0.2, 1e-15);
  // "abqzz": S:qzz -> 0.1; P:abq none.
  EXPECT_NEAR((*AffixLikelihood(ps, "abqzz"))[cn], 0.1, 1e-15);
  // "abczz" itself: P:abc 0.3, P:abcz 0.2, P:abczz 0.2, S:czz 0.2,
  // S:bczz 0.2, S:abczz 0.2 -> mean 1.3 / 6.
  EXPECT_NEAR((*AffixLikelihood(ps, "abczz"))[cn], 1.3 / 6.0, 1e-15);
}

TEST(ScriptTest, HangulAndLatin) {
  auto t = ParseTaxonomy(R"(taxonomy = s
[Root]
[Korean]
parent = Root
countries = KR
population = 1
[English]
parent = Root
countries = GB
population = 1
)");
  const NodeIndex kr = t->IndexOf("Korean"), en = t->IndexOf("English");
  LikelihoodTable tr(Source::kTr, NamePartRole::kFirst, t);
  tr.Set("민준", Row(*t, {{"Korean", 0.5}}));
  tr.Set("지우", Row(*t, {{"Korean", 0.3}}));
  tr.Set("john", Row(*t, {{"English", 0.6}}));
  tr.Set("mary", Row(*t, {{"English", 0.2}, {"Korean", 0.1}}));
  LikelihoodTable ch = EstimateScript(tr);
  auto hangul = ScriptLikelihood(ch, "근혜");
  ASSERT_TRUE(hangul);
  EXPECT_NEAR((*hangul)[kr], 0.4, 1e-15);
  EXPECT_EQ((*hangul)[en], 0.0);
  auto latin = ScriptLikelihood(ch, "zed");
  EXPECT_NEAR((*latin)[en], 0.4, 1e-15);
  EXPECT_NEAR((*latin)[kr], 0.05, 1e-15);
  EXPECT_FALSE(ScriptLikelihood(ch, "1234").has_value());
  EXPECT_FALSE(ScriptLikelihood(ch, "иван").has_value());
}

TEST(LikelihoodTableTest, WriteReadAndValid) {
  auto t = ParseTaxonomy(kFlat);
  LikelihoodTable tr(Source::kTr, NamePartRole::kLast, t);
  tr.Set("a", Row(*t, {{"CN", 0.25}, {"JP", 1.0 / 3.0}}));
  std::stringstream ss;
  tr.Write(ss);
  EXPECT_EQ(LikelihoodTable::Read(ss, Source::kTr, NamePartRole::kLast, t), tr);
  EXPECT_THROW(tr.Set("b", NodeVector(1, 0.0)), std::invalid_argument);
  LikelihoodTable bad(Source::kTr, NamePartRole::kLast, t);
  bad.Set("x", Row(*t, {{"CN", 0.7}}));
  bad.Set("y", Row(*t, {{"CN", 0.7}}));
  std::string why;
  EXPECT_FALSE(bad.Valid(&why));
  EXPECT_NE(why.find("CN"), std::string::npos);
}

TEST(BuildModelTest, EndToEndSmall) {
  auto t = ParseTaxonomy(kFlat);
  std::vector<LabeledName> labels = {Label("wei", "zhang", "CN", 6),
                                     Label("hiro", "sato", "JP", 7),
                                     Label("john", "smith", "US", 3)};
  std::vector<std::string> warnings;
  ModelTables m = BuildModel(labels, t, nullptr, {}, ModelConfig{}, &warnings);
  EXPECT_TRUE(m.role(NamePartRole::kLast).tr.contains("zhang"));
  EXPECT_TRUE(m.role(NamePartRole::kLast).em.empty());
  EXPECT_FALSE(m.role(NamePartRole::kLast).ps.empty());
  EXPECT_FALSE(m.role(NamePartRole::kFirst).ch.empty());
  EXPECT_NEAR(m.priors.internet[t->IndexOf("JP")], 7.0 / 13.0, 1e-15);
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_NE(warnings[0].find("skipped"), std::string::npos);
}

}  // namespace
}  // namespace nameorigin
