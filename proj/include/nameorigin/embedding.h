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

#ifndef NAMEORIGIN_EMBEDDING_H_
#define NAMEORIGIN_EMBEDDING_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nameorigin/ingest.h"

namespace nameorigin {

enum class Algorithm { kCbow, kSkipGram };

std::string_view AlgorithmName(Algorithm a);  // "cbow" / "sg"
std::optional<Algorithm> ParseAlgorithm(std::string_view s);

struct TrainConfig {
  Algorithm algorithm = Algorithm::kCbow;
  int window = 5;
  int dim = 100;
  int epochs = 5;  // 0 leaves the random initialization untouched
  int negative = 5;
  double learning_rate = 0.025;  // decays linearly to lr * 1e-4
  std::uint64_t min_count = 5;
  std::uint64_t seed = 1;
  // 1 is bit-reproducible. More threads run lock-free over sentence shards.
  int threads = 1;

  // Throws std::invalid_argument naming the first bad field.
  void Validate() const;
};

// Dense vectors for the tokens of a trained vocabulary. Tokens are ordered by
// descending count, ties by token.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  EmbeddingTable(int dim, std::vector<std::string> tokens,
                 std::vector<std::uint64_t> counts, std::vector<float> vectors);

  int dim() const { return dim_; }
  std::size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }
  const std::vector<std::string>& tokens() const { return tokens_; }
  const std::string& token(std::size_t i) const { return tokens_.at(i); }
  std::uint64_t count(std::size_t i) const { return counts_.at(i); }
  std::optional<std::size_t> Find(std::string_view token) const;
  std::span<const float> vector(std::size_t i) const {
    return {vectors_.data() + i * dim_, static_cast<std::size_t>(dim_)};
  }
  double norm(std::size_t i) const { return norms_.at(i); }

  // dot(a, b) / (|a| |b|) in double; 0 when either vector is zero.
  double Cosine(std::size_t a, std::size_t b) const;

  // Text: "<size> <dim>" then one "token count v_1 ... v_dim" line per token,
  // floats printed with 9 significant digits (exact round trip).
  void Save(std::ostream& out) const;
  void Save(const std::filesystem::path& path) const;
  static EmbeddingTable Load(std::istream& in);
  static EmbeddingTable Load(const std::filesystem::path& path);

  friend bool operator==(const EmbeddingTable& a, const EmbeddingTable& b) {
    return a.dim_ == b.dim_ && a.tokens_ == b.tokens_ &&
           a.counts_ == b.counts_ && a.vectors_ == b.vectors_;
  }

 private:
  int dim_ = 0;
  std::vector<std::string> tokens_;
  std::vector<std::uint64_t> counts_;
  std::vector<float> vectors_;
  std::vector<double> norms_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

struct TrainStats {
  int epochs_run = 0;
  std::uint64_t updates = 0;  // predicted (center, context) events
  // Mean negative-sampling loss per prediction for each epoch.
  std::vector<double> epoch_loss;
};

// Trains on `sentences`; context never crosses a sentence boundary. Throws
// std::invalid_argument when no token reaches min_count.
EmbeddingTable Train(std::span<const Sentence> sentences,
                     const TrainConfig& config, TrainStats* stats = nullptr);

struct Neighbor {
  std::string token;
  double similarity = 0.0;
  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

struct NeighborList {
  std::string query;
  std::vector<Neighbor> neighbors;  // similarity nonincreasing
};

// Allowed-token mask indexed like EmbeddingTable::tokens(); empty allows all.
using TokenMask = std::vector<bool>;

TokenMask MaskOf(const EmbeddingTable& table,
                 const std::vector<std::string>& allowed);

// Exact top-k by cosine, ties by token. The query itself is never returned.
// Empty when the query token is unknown.
std::optional<NeighborList> Knn(const EmbeddingTable& table,
                                std::string_view token, std::size_t k,
                                const TokenMask& restrict = {});

// Per class c: mean over labeled tokens of class c of the fraction of their k
// nearest labeled neighbors also of class c. Only labeled tokens present in
// the table take part. Classes with fewer than two such tokens are skipped
// with a warning.
std::map<std::string, double> EvalNeighborPurity(
    const EmbeddingTable& table,
    const std::map<std::string, std::string>& labels, std::size_t k,
    std::vector<std::string>* warnings = nullptr);

// TSV with a "token v1 ... vd" header row; unknown tokens are skipped with a
// warning.
void ExportProjectionData(const EmbeddingTable& table,
                          std::span<const std::string> tokens, std::ostream& out,
                          std::vector<std::string>* warnings = nullptr);

}  // namespace nameorigin

#endif  // NAMEORIGIN_EMBEDDING_H_
