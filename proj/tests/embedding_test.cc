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

#include "nameorigin/embedding.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "test_util.h"

namespace nameorigin {
namespace {

EmbeddingTable Table(std::vector<std::string> tokens,
                     std::vector<std::vector<float>> vecs) {
  const int dim = static_cast<int>(vecs.front().size());
  std::vector<float> flat;
  for (auto& v : vecs) flat.insert(flat.end(), v.begin(), v.end());
  std::vector<std::uint64_t> counts(tokens.size(), 1);
  return EmbeddingTable(dim, std::move(tokens), std::move(counts), std::move(flat));
}

// Two clusters whose sentences never mix.
std::vector<Sentence> TwoClusters(int reps) {
  std::vector<Sentence> out;
  for (int i = 0; i < reps; ++i) {
    out.push_back({"F:a", "L:b", "F:a2", "L:b2"});
    out.push_back({"F:c", "L:d", "F:c2", "L:d2"});
  }
  return out;
}

std::string ClusterToken(int cluster, int i) {
  return std::string(i % 2 ? "L:" : "F:") + static_cast<char>('p' + cluster) +
         std::to_string(i);
}

// Sentences of six tokens drawn from one of two 12-token clusters.
std::vector<Sentence> RandomClusters(int sentences, std::uint64_t seed) {
  testing::Rng rng(seed);
  std::vector<Sentence> out;
  for (int s = 0; s < sentences; ++s) {
    const int cluster = s % 2;
    Sentence sent;
    for (int k = 0; k < 6; ++k) sent.push_back(ClusterToken(cluster, rng.Int(0, 11)));
    out.push_back(std::move(sent));
  }
  return out;
}

TEST(TrainTest, TwoClustersSeparate) {
  TrainConfig cfg;
  cfg.dim = 20;
  cfg.epochs = 10;
  cfg.min_count = 1;
  for (Algorithm alg : {Algorithm::kCbow, Algorithm::kSkipGram}) {
    cfg.algorithm = alg;
    EmbeddingTable t = Train(RandomClusters(2000, 5), cfg);
    double intra = 0.0, inter = 0.0;
    int ni = 0, nx = 0;
    for (int i = 0; i < 12; ++i)
      for (int j = 0; j < 12; ++j) {
        const std::size_t a = *t.Find(ClusterToken(0, i));
        if (i != j) {
          intra += t.Cosine(a, *t.Find(ClusterToken(0, j)));
          ++ni;
        }
        inter += t.Cosine(a, *t.Find(ClusterToken(1, j)));
        ++nx;
      }
    EXPECT_GT(intra / ni, inter / nx + 0.2) << AlgorithmName(alg);
  }
}

TEST(TrainTest, DefaultsAndValidation) {
  TrainConfig cfg;
  EXPECT_EQ(cfg.dim, 100);
  EXPECT_EQ(cfg.window, 5);
  EXPECT_EQ(cfg.min_count, 5u);
  EXPECT_EQ(cfg.algorithm, Algorithm::kCbow);
  cfg.dim = 0;
  EXPECT_THROW(cfg.Validate(), std::invalid_argument);
  TrainConfig high;
  high.min_count = 1000;
  EXPECT_THROW(Train(TwoClusters(3), high), std::invalid_argument);
}

TEST(TrainTest, ZeroEpochsKeepsInitialization) {
  TrainConfig cfg;
  cfg.dim = 8;
  cfg.min_count = 1;
  cfg.epochs = 0;
  TrainStats stats;
  EmbeddingTable t = Train(TwoClusters(5), cfg, &stats);
  EXPECT_EQ(stats.epochs_run, 0);
  EXPECT_EQ(stats.updates, 0u);
  EXPECT_TRUE(stats.epoch_loss.empty());
  for (std::size_t i = 0; i < t.size(); ++i)
    for (float x : t.vector(i)) EXPECT_LE(std::abs(x), 0.5f / 8 + 1e-7f);
  EXPECT_EQ(Train(TwoClusters(5), cfg), t);
}

TEST(TrainTest, SingleThreadIsReproducible) {
  TrainConfig cfg;
  cfg.dim = 16;
  cfg.min_count = 1;
  cfg.epochs = 3;
  std::ostringstream a, b;
  Train(TwoClusters(50), cfg).Save(a);
  Train(TwoClusters(50), cfg).Save(b);
  EXPECT_EQ(a.str(), b.str());
  cfg.seed = 2;
  std::ostringstream c;
  Train(TwoClusters(50), cfg).Save(c);
  EXPECT_NE(a.str(), c.str());
}

TEST(TrainTest, LossDecreasesOnFixture) {
  TrainConfig cfg;
  cfg.dim = 16;
  cfg.min_count = 1;
  cfg.epochs = 5;
  TrainStats stats;
  Train(TwoClusters(300), cfg, &stats);
  ASSERT_EQ(stats.epoch_loss.size(), 5u);
  EXPECT_LT(stats.epoch_loss.back(), stats.epoch_loss.front());
}

TEST(TrainTest, VocabularyRespectsMinCount) {
  std::vector<Sentence> s = TwoClusters(3);
  s.push_back({"F:rare", "L:b"});
  TrainConfig cfg;
  cfg.dim = 4;
  cfg.min_count = 2;
  EmbeddingTable t = Train(s, cfg);
  EXPECT_FALSE(t.Find("F:rare").has_value());
  EXPECT_TRUE(t.Find("L:b").has_value());
}

TEST(EmbeddingTableTest, SaveLoadRoundTrip) {
  EmbeddingTable t = Table({"F:x", "L:y"}, {{0.1f, -2.5f}, {3e-8f, 1.0f}});
  std::stringstream ss;
  t.Save(ss);
  EXPECT_EQ(ss.str().substr(0, 4), "2 2\n");
  EXPECT_EQ(EmbeddingTable::Load(ss), t);
}

TEST(KnnTest, Examples) {
  EmbeddingTable two = Table({"a", "b"}, {{1, 0}, {0, 1}});
  auto r = Knn(two, "a", 1);
  ASSERT_TRUE(r);
  ASSERT_EQ(r->neighbors.size(), 1u);
  EXPECT_EQ(r->neighbors[0].token, "b");
  EXPECT_FALSE(Knn(two, "zzz", 1).has_value());

  EmbeddingTable t = Table({"q", "near", "mid", "far"},
                           {{1, 0}, {1, 0.1f}, {1, 0.5f}, {0, 1}});
  auto restricted = Knn(t, "q", 1, MaskOf(t, {"mid", "far"}));
  EXPECT_EQ(restricted->neighbors[0].token, "mid");

  EmbeddingTable dup = Table({"q", "zz", "aa"}, {{1, 0}, {1, 1}, {1, 1}});
  auto tie = Knn(dup, "q", 2);
  EXPECT_EQ(tie->neighbors[0].token, "aa");
  EXPECT_EQ(tie->neighbors[1].token, "zz");
  EXPECT_EQ(tie->query, "q");
}

TEST(PurityTest, SeparatedClustersArePure) {
  EmbeddingTable t = Table({"a1", "a2", "b1", "b2"},
                           {{1, 0}, {0.9f, 0.1f}, {0, 1}, {0.1f, 0.9f}});
  auto p = EvalNeighborPurity(t, {{"a1", "A"}, {"a2", "A"}, {"b1", "B"}, {"b2", "B"}}, 1);
  EXPECT_DOUBLE_EQ(p.at("A"), 1.0);
  EXPECT_DOUBLE_EQ(p.at("B"), 1.0);
}

TEST(PurityTest, IdenticalVectorsMatchBruteForce) {
  // With equal similarities the lexicographically smallest other token wins.
  EmbeddingTable t = Table({"a", "b", "c", "d"}, {{1, 1}, {1, 1}, {1, 1}, {1, 1}});
  std::map<std::string, std::string> labels = {{"a", "X"}, {"b", "Y"}, {"c", "X"}, {"d", "Y"}};
  auto p = EvalNeighborPurity(t, labels, 1);
  // a->b (Y), c->a (X) ; b->a (X), d->a (X).
  EXPECT_DOUBLE_EQ(p.at("X"), 0.5);
  EXPECT_DOUBLE_EQ(p.at("Y"), 0.0);
}

TEST(PurityTest, SmallClassWarned) {
  EmbeddingTable t = Table({"a", "b", "c"}, {{1, 0}, {1, 0.1f}, {0, 1}});
  std::vector<std::string> warnings;
  auto p = EvalNeighborPurity(t, {{"a", "X"}, {"b", "X"}, {"c", "Y"}}, 1, &warnings);
  EXPECT_FALSE(p.count("Y"));
  EXPECT_EQ(warnings.size(), 1u);
}

TEST(ExportTest, Rows) {
  EmbeddingTable t = Table({"a", "b"}, {{1, 2}, {3, 4}});
  std::vector<std::string> tokens = {"a", "missing"};
  std::ostringstream out;
  std::vector<std::string> warnings;
  ExportProjectionData(t, tokens, out, &warnings);
  EXPECT_EQ(out.str(), "token\tv1\tv2\na\t1\t2\n");
  EXPECT_EQ(warnings.size(), 1u);
  std::ostringstream empty;
  ExportProjectionData(t, {}, empty);
  EXPECT_EQ(empty.str(), "token\tv1\tv2\n");
}

}  // namespace
}  // namespace nameorigin
