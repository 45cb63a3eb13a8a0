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

#include "nameorigin/classifier.h"

#include <gtest/gtest.h>

#include "test_util.h"

namespace nameorigin {
namespace {

using testing::Label;
using testing::Name;
using testing::ParseTaxonomy;

constexpr char kTwoLevel[] = R"(taxonomy = two
[Root]
[Asia]
parent = Root
[Chinese]
parent = Asia
countries = CN
population = 1000
[Korean]
parent = Asia
countries = KR
population = 100
[Europe]
parent = Root
[British]
parent = Europe
countries = GB
population = 500
[Spanish]
parent = Europe
countries = ES
population = 400
)";

std::vector<LabeledName> QiangLeeLabels() {
  return {Label("qiang", "wang", "CN", 10), Label("wei", "lee", "CN", 8),
          Label("john", "lee", "GB", 12),   Label("john", "smith", "GB", 10),
          Label("minjun", "kim", "KR", 9),  Label("jose", "garcia", "ES", 9)};
}

std::shared_ptr<const ModelTables> Model(std::vector<LabeledName> labels,
                                         std::string_view tax = kTwoLevel) {
  return std::make_shared<const ModelTables>(
      BuildModel(labels, ParseTaxonomy(tax), nullptr, {}, ModelConfig{}));
}

TEST(ClassifierTest, QiangLeeAndJohnLee) {
  NameClassifier c(Model(QiangLeeLabels()));
  for (PriorMode mode : {PriorMode::kInternet, PriorMode::kWorld}) {
    ClassificationResult q = c.Classify(Name("qiang", "lee"), mode);
    EXPECT_EQ(q.leaf, "Chinese");
    ASSERT_EQ(q.path.size(), 2u);
    EXPECT_EQ(q.path[0].node, "Root");
    EXPECT_EQ(q.path[1].node, "Asia");
    EXPECT_NEAR(q.path[0].Sum(), 1.0, 1e-9);
    EXPECT_FALSE(q.low_confidence);
    EXPECT_EQ(c.Classify(Name("john", "lee"), mode).leaf, "British");
  }
}

TEST(ClassifierTest, UnknownNameFollowsPriorArgmax) {
  auto m = Model(QiangLeeLabels());
  NameClassifier c(m);
  // Digits carry no script, so no tier applies.
  ClassificationResult r = c.Classify(Name("12", "34"), PriorMode::kWorld);
  EXPECT_TRUE(r.low_confidence);
  // World populations: Asia 1100 vs Europe 900, then Chinese.
  EXPECT_EQ(r.leaf, "Chinese");
  for (const Evidence& e : r.evidence) EXPECT_EQ(e.tier, Tier::kSmoothed);
  ClassificationResult internet = c.Classify(Name("12", "34"), PriorMode::kInternet);
  // Label counts: Europe 31 vs Asia 27, then British 22 vs Spanish 9.
  EXPECT_EQ(internet.leaf, "British");
  EXPECT_NEAR(internet.path[0].Get("Europe"), 31.0 / 58.0, 1e-12);
}

TEST(ClassifierTest, EvidenceTiers) {
  NameClassifier c(Model(QiangLeeLabels()));
  ClassificationResult r = c.Classify(Name("qiang", "leeson"), PriorMode::kInternet);
  ASSERT_EQ(r.evidence.size(), 4u);
  EXPECT_EQ(r.evidence[0].tier, Tier::kTr);
  EXPECT_EQ(r.evidence[0].role, NamePartRole::kFirst);
  EXPECT_EQ(r.evidence[0].level, "Root");
  // Only one part is covered: the other is smoothed, no affix retry.
  EXPECT_EQ(r.evidence[1].tier, Tier::kSmoothed);

  // Neither part covered: affix then script retry.
  ClassificationResult f = c.Classify(Name("johnny", "garciaz"), PriorMode::kInternet);
  EXPECT_EQ(f.evidence[0].tier, Tier::kPs);
  EXPECT_EQ(f.evidence[1].tier, Tier::kPs);
  EXPECT_EQ(f.leaf, "British");
  ClassificationResult s = c.Classify(Name("zz", "qq"), PriorMode::kInternet);
  EXPECT_EQ(s.evidence[0].tier, Tier::kCh);
}

TEST(ClassifierTest, ZeroRowIsSmoothedAtThatLevel) {
  NameClassifier c(Model(QiangLeeLabels()));
  // "kim" is Korean only: its row is zero on both Europe leaves but the
  // Root level is decided by it.
  ClassificationResult r = c.Classify(Name("john", "kim"), PriorMode::kInternet);
  EXPECT_EQ(r.evidence[1].tier, Tier::kTr);
  for (const ClassDistribution& d : r.path) EXPECT_NEAR(d.Sum(), 1.0, 1e-9);
}

TEST(ClassifierTest, ContradictoryPartsStillSumToOne) {
  NameClassifier c(Model(QiangLeeLabels()));
  // qiang is Chinese only, smith British only: every child scores zero at
  // Root, so zero entries fall back to sigma times the smallest positive one.
  ClassificationResult r = c.Classify(Name("qiang", "smith"), PriorMode::kInternet);
  EXPECT_NEAR(r.path[0].Sum(), 1.0, 1e-9);
  EXPECT_FALSE(r.leaf.empty());
  // qiang: 10 of Asia's 27 names; smith: 10 of Europe's 31.
  const double asia = 10.0 / 27 * (1e-7 * 10.0 / 31) * 27.0 / 58;
  const double europe = (1e-7 * 10.0 / 27) * 10.0 / 31 * 31.0 / 58;
  EXPECT_NEAR(r.path[0].Get("Asia"), asia / (asia + europe), 1e-9);
}

TEST(ClassifierTest, TierPrecedence) {
  auto t = ParseTaxonomy(kTwoLevel);
  auto m = std::make_shared<ModelTables>(
      BuildModel(QiangLeeLabels(), t, nullptr, {}, ModelConfig{}));
  NodeVector bogus(t->size(), 0.0);
  bogus[t->IndexOf("Spanish")] = 1.0;
  bogus[t->IndexOf("Europe")] = 1.0;
  m->role(NamePartRole::kFirst).em.Set("qiang", bogus);
  NameClassifier c(m);
  ClassificationResult r = c.Classify(Name("qiang", "wang"), PriorMode::kInternet);
  EXPECT_EQ(r.leaf, "Chinese");
  EXPECT_EQ(r.evidence[0].tier, Tier::kTr);
  NameClassifier em_only(m, ClassifierOptions::EmbeddingOnly());
  EXPECT_EQ(em_only.Classify(Name("qiang", "xx"), PriorMode::kInternet).leaf, "Spanish");
}

TEST(ClassifierTest, ModesShareEvidence) {
  NameClassifier c(Model(QiangLeeLabels()));
  // Levels scored under both modes carry identical evidence; deeper levels
  // may differ only because the priors chose another branch.
  for (const FullName& n : {Name("qiang", "lee"), Name("jose", "kim"), Name("ab", "cd")}) {
    auto a = c.Classify(n, PriorMode::kInternet).evidence;
    auto b = c.Classify(n, PriorMode::kWorld).evidence;
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i].level == b[i].level) EXPECT_EQ(a[i], b[i]) << i;
    EXPECT_EQ(a[0], b[0]);
    EXPECT_EQ(a[1], b[1]);
  }
  auto q = c.Classify(Name("qiang", "lee"), PriorMode::kInternet);
  EXPECT_EQ(q.evidence, c.Classify(Name("qiang", "lee"), PriorMode::kWorld).evidence);
}

constexpr char kFlat[] = R"(taxonomy = flat
[Root]
[A]
parent = Root
countries = AA
population = 100
[B]
parent = Root
countries = BB
population = 300
)";

TEST(ClassifyFlatTest, Examples) {
  auto m = Model({Label("aaa", "bbb", "AA", 6), Label("aaa", "bbb", "BB", 6),
                  Label("ccc", "ddd", "BB", 12)},
                 kFlat);
  NameClassifier c(m);
  std::vector<std::string> one = {"A"};
  EXPECT_DOUBLE_EQ(c.ClassifyFlat(Name("aaa", "bbb"), one, PriorMode::kWorld).Get("A"), 1.0);
  // Identical likelihoods 6/6 vs 6/18 differ; use unknown parts instead.
  std::vector<std::string> both = {"A", "B"};
  ClassDistribution d = c.ClassifyFlat(Name("zz", "yy"), both, PriorMode::kWorld);
  EXPECT_NEAR(d.Get("B") / d.Get("A"), 3.0, 1e-12);
  // Depth-1 taxonomy: Classify and ClassifyFlat agree exactly.
  for (const FullName& n : {Name("aaa", "bbb"), Name("ccc", "bbb"), Name("zz", "ddd")}) {
    for (PriorMode mode : {PriorMode::kInternet, PriorMode::kWorld}) {
      EXPECT_EQ(c.Classify(n, mode).path[0].probs, c.ClassifyFlat(n, both, mode).probs);
    }
  }
}

TEST(ClassifierTest, WorldModeFlipsOversampledLeaf) {
  // UK is sampled ten times more often than SouthAfrica; equal populations.
  constexpr char kTax[] = R"(taxonomy = skew
[Root]
[UK]
parent = Root
countries = GB
population = 1000000
[SouthAfrica]
parent = Root
countries = ZA
population = 1000000
)";
  auto m = Model({Label("xxa", "yya", "GB", 100), Label("xxb", "yyb", "ZA", 10)}, kTax);
  NameClassifier c(m);
  const FullName neutral = Name("12", "34");
  ClassificationResult i = c.Classify(neutral, PriorMode::kInternet);
  EXPECT_EQ(i.leaf, "UK");
  EXPECT_NEAR(i.path[0].Get("UK"), 100.0 / 110.0, 1e-12);
  ClassificationResult w = c.Classify(neutral, PriorMode::kWorld);
  EXPECT_DOUBLE_EQ(w.path[0].Get("UK"), 0.5);
  // Equal world priors: the tie goes to the smaller id.
  EXPECT_EQ(w.leaf, "SouthAfrica");
}

TEST(ClassifierTest, RejectsBadOptions) {
  ClassifierOptions o;
  o.sigma = 0.0;
  EXPECT_THROW(NameClassifier(Model(QiangLeeLabels()), o), std::invalid_argument);
  EXPECT_THROW(NameClassifier(nullptr), std::invalid_argument);
}

TEST(ClassifierTest, TierNames) {
  EXPECT_EQ(TierName(Tier::kSmoothed), "smoothed");
  EXPECT_EQ(PriorModeName(PriorMode::kWorld), "world");
  EXPECT_EQ(ParsePriorMode("internet"), PriorMode::kInternet);
  EXPECT_FALSE(ParsePriorMode("galaxy").has_value());
}

}  // namespace
}  // namespace nameorigin
