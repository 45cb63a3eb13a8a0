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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace nameorigin {
namespace {

// Uniform double in [0, 1) from the top 53 bits, identical on every platform
// (std::uniform_real_distribution is implementation-defined).
double Uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double Sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// log(1 + exp(x)) without overflow.
double Softplus(double x) {
  return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

class NegativeSampler {
 public:
  explicit NegativeSampler(const std::vector<std::uint64_t>& counts) {
    cumulative_.reserve(counts.size());
    double total = 0.0;
    for (std::uint64_t c : counts) {
      total += std::pow(static_cast<double>(c), 0.75);
      cumulative_.push_back(total);
    }
    for (double& c : cumulative_) c /= total;
  }

  std::int32_t Draw(std::mt19937_64& rng) const {
    const double u = Uniform(rng);
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    if (it == cumulative_.end()) --it;
    return static_cast<std::int32_t>(it - cumulative_.begin());
  }

 private:
  std::vector<double> cumulative_;
};

struct Trainer {
  const TrainConfig& config;
  const std::vector<std::vector<std::int32_t>>& corpus;
  const NegativeSampler& sampler;
  std::vector<float>& syn0;
  std::vector<float>& syn1;
  std::uint64_t total_words;  // per epoch

  // Returns (loss sum, prediction count) for the sentences of one shard.
  std::pair<double, std::uint64_t> RunShard(int epoch, int shard, int shards,
                                            std::mt19937_64& rng) const {
    const int dim = config.dim;
    std::vector<float> neu1(dim), neu1e(dim);
    double loss = 0.0;
    std::uint64_t updates = 0;
    std::uint64_t seen = 0;
    const double work = static_cast<double>(total_words) * config.epochs + 1.0;
    const double done_before = static_cast<double>(total_words) * epoch;

    // One negative-sampling step of input vector `l1` towards `target`.
    auto step = [&](const float* l1, std::int32_t target, double alpha) {
      for (int d = 0; d <= config.negative; ++d) {
        std::int32_t out;
        double label;
        if (d == 0) {
          out = target;
          label = 1.0;
        } else {
          out = sampler.Draw(rng);
          if (out == target) continue;
          label = 0.0;
        }
        float* l2 = &syn1[static_cast<std::size_t>(out) * dim];
        double f = 0.0;
        for (int j = 0; j < dim; ++j) f += static_cast<double>(l1[j]) * l2[j];
        loss += label > 0 ? Softplus(-f) : Softplus(f);
        const float g = static_cast<float>((label - Sigmoid(f)) * alpha);
        for (int j = 0; j < dim; ++j) neu1e[j] += g * l2[j];
        for (int j = 0; j < dim; ++j) l2[j] += g * l1[j];
      }
    };

    for (std::size_t s = shard; s < corpus.size(); s += shards) {
      const std::vector<std::int32_t>& sent = corpus[s];
      const int n = static_cast<int>(sent.size());
      for (int pos = 0; pos < n; ++pos) {
        const double progress =
            (done_before + static_cast<double>(seen) * shards) / work;
        const double alpha =
            config.learning_rate * std::max(1e-4, 1.0 - progress);
        ++seen;
        const int b = static_cast<int>(rng() % config.window);
        const int lo = std::max(0, pos - config.window + b);
        const int hi = std::min(n - 1, pos + config.window - b);
        if (config.algorithm == Algorithm::kCbow) {
          std::fill(neu1.begin(), neu1.end(), 0.0f);
          std::fill(neu1e.begin(), neu1e.end(), 0.0f);
          int cw = 0;
          for (int c = lo; c <= hi; ++c) {
            if (c == pos) continue;
            const float* v = &syn0[static_cast<std::size_t>(sent[c]) * dim];
            for (int j = 0; j < dim; ++j) neu1[j] += v[j];
            ++cw;
          }
          if (cw == 0) continue;
          for (int j = 0; j < dim; ++j) neu1[j] /= static_cast<float>(cw);
          step(neu1.data(), sent[pos], alpha);
          ++updates;
          for (int c = lo; c <= hi; ++c) {
            if (c == pos) continue;
            float* v = &syn0[static_cast<std::size_t>(sent[c]) * dim];
            for (int j = 0; j < dim; ++j) v[j] += neu1e[j];
          }
        } else {
          for (int c = lo; c <= hi; ++c) {
            if (c == pos) continue;
            float* l1 = &syn0[static_cast<std::size_t>(sent[c]) * dim];
            std::fill(neu1e.begin(), neu1e.end(), 0.0f);
            step(l1, sent[pos], alpha);
            ++updates;
            for (int j = 0; j < dim; ++j) l1[j] += neu1e[j];
          }
        }
      }
    }
    return {loss, updates};
  }
};

}  // namespace

std::string_view AlgorithmName(Algorithm a) {
  return a == Algorithm::kCbow ? "cbow" : "sg";
}

std::optional<Algorithm> ParseAlgorithm(std::string_view s) {
  if (s == "cbow") return Algorithm::kCbow;
  if (s == "sg") return Algorithm::kSkipGram;
  return std::nullopt;
}

void TrainConfig::Validate() const {
  auto require = [](bool ok, const char* field) {
    if (!ok) throw std::invalid_argument(std::string("invalid ") + field);
  };
  require(window >= 1, "window");
  require(dim >= 1, "dim");
  require(epochs >= 0, "epochs");
  require(negative >= 1, "negative");
  require(learning_rate > 0.0 && std::isfinite(learning_rate), "learning_rate");
  require(min_count >= 1, "min_count");
  require(threads >= 1, "threads");
}

EmbeddingTable::EmbeddingTable(int dim, std::vector<std::string> tokens,
                               std::vector<std::uint64_t> counts,
                               std::vector<float> vectors)
    : dim_(dim),
      tokens_(std::move(tokens)),
      counts_(std::move(counts)),
      vectors_(std::move(vectors)) {
  if (dim_ < 1) throw std::invalid_argument("embedding dim must be >= 1");
  if (counts_.size() != tokens_.size() ||
      vectors_.size() != tokens_.size() * static_cast<std::size_t>(dim_))
    throw std::invalid_argument("embedding table shape mismatch");
  norms_.resize(tokens_.size());
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (!index_.emplace(tokens_[i], i).second)
      throw std::invalid_argument("duplicate embedding token " + tokens_[i]);
    double sq = 0.0;
    for (float x : vector(i)) sq += static_cast<double>(x) * x;
    norms_[i] = std::sqrt(sq);
  }
}

std::optional<std::size_t> EmbeddingTable::Find(std::string_view token) const {
  auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

double EmbeddingTable::Cosine(std::size_t a, std::size_t b) const {
  if (norms_[a] == 0.0 || norms_[b] == 0.0) return 0.0;
  const float* x = vectors_.data() + a * dim_;
  const float* y = vectors_.data() + b * dim_;
  double dot = 0.0;
  for (int j = 0; j < dim_; ++j) dot += static_cast<double>(x[j]) * y[j];
  return dot / (norms_[a] * norms_[b]);
}

void EmbeddingTable::Save(std::ostream& out) const {
  out << tokens_.size() << ' ' << dim_ << '\n';
  char buf[32];
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    out << tokens_[i] << ' ' << counts_[i];
    for (float x : vector(i)) {
      std::snprintf(buf, sizeof buf, " %.9g", static_cast<double>(x));
      out << buf;
    }
    out << '\n';
  }
}

void EmbeddingTable::Save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  Save(out);
}

EmbeddingTable EmbeddingTable::Load(std::istream& in) {
  std::size_t n = 0;
  int dim = 0;
  std::string header;
  if (!std::getline(in, header) ||
      !(std::istringstream(header) >> n >> dim) || dim < 1)
    throw std::runtime_error("embedding file: bad header");
  std::vector<std::string> tokens(n);
  std::vector<std::uint64_t> counts(n);
  std::vector<float> vectors(n * dim);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(in >> tokens[i] >> counts[i]))
      throw std::runtime_error("embedding file: truncated at row " +
                               std::to_string(i + 1));
    for (int j = 0; j < dim; ++j) {
      std::string cell;
      if (!(in >> cell))
        throw std::runtime_error("embedding file: short row " + tokens[i]);
      vectors[i * dim + j] = std::strtof(cell.c_str(), nullptr);
    }
  }
  return EmbeddingTable(dim, std::move(tokens), std::move(counts),
                        std::move(vectors));
}

EmbeddingTable EmbeddingTable::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return Load(in);
}

EmbeddingTable Train(std::span<const Sentence> sentences,
                     const TrainConfig& config, TrainStats* stats) {
  config.Validate();
  std::map<std::string, std::uint64_t, std::less<>> freq;
  for (const Sentence& s : sentences)
    for (const std::string& t : s) ++freq[t];

  std::vector<std::pair<std::string, std::uint64_t>> vocab;
  for (auto& [token, n] : freq)
    if (n >= config.min_count) vocab.emplace_back(token, n);
  if (vocab.empty())
    throw std::invalid_argument("empty vocabulary after min_count filter");
  std::stable_sort(vocab.begin(), vocab.end(), [](const auto& a, const auto& b) {
    return a.second > b.second;
  });

  std::vector<std::string> tokens;
  std::vector<std::uint64_t> counts;
  std::map<std::string_view, std::int32_t> ids;
  for (const auto& [token, n] : vocab) {
    tokens.push_back(token);
    counts.push_back(n);
  }
  for (std::size_t i = 0; i < tokens.size(); ++i)
    ids.emplace(tokens[i], static_cast<std::int32_t>(i));

  std::vector<std::vector<std::int32_t>> corpus;
  std::uint64_t total_words = 0;
  for (const Sentence& s : sentences) {
    std::vector<std::int32_t> ids_of;
    for (const std::string& t : s) {
      auto it = ids.find(t);
      if (it != ids.end()) ids_of.push_back(it->second);
    }
    total_words += ids_of.size();
    if (!ids_of.empty()) corpus.push_back(std::move(ids_of));
  }

  const std::size_t dim = static_cast<std::size_t>(config.dim);
  std::vector<float> syn0(tokens.size() * dim);
  std::vector<float> syn1(tokens.size() * dim, 0.0f);
  std::mt19937_64 init_rng(config.seed);
  for (float& x : syn0)
    x = static_cast<float>((Uniform(init_rng) - 0.5) / config.dim);

  TrainStats local;
  const NegativeSampler sampler(counts);
  const Trainer trainer{config, corpus, sampler, syn0, syn1, total_words};
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    double loss = 0.0;
    std::uint64_t updates = 0;
    if (config.threads == 1) {
      std::mt19937_64 rng(config.seed * 1000003ULL + epoch + 1);
      std::tie(loss, updates) = trainer.RunShard(epoch, 0, 1, rng);
    } else {
      std::vector<std::pair<double, std::uint64_t>> parts(config.threads);
      std::vector<std::thread> pool;
      for (int t = 0; t < config.threads; ++t) {
        pool.emplace_back([&, t] {
          std::mt19937_64 rng(config.seed * 1000003ULL + epoch * 7919ULL + t + 1);
          parts[t] = trainer.RunShard(epoch, t, config.threads, rng);
        });
      }
      for (std::thread& th : pool) th.join();
      for (const auto& [l, u] : parts) {
        loss += l;
        updates += u;
      }
    }
    ++local.epochs_run;
    local.updates += updates;
    local.epoch_loss.push_back(updates ? loss / static_cast<double>(updates)
                                       : 0.0);
  }
  if (stats) *stats = local;
  return EmbeddingTable(config.dim, std::move(tokens), std::move(counts),
                        std::move(syn0));
}

TokenMask MaskOf(const EmbeddingTable& table,
                 const std::vector<std::string>& allowed) {
  TokenMask mask(table.size(), false);
  for (const std::string& t : allowed)
    if (auto i = table.Find(t)) mask[*i] = true;
  return mask;
}

std::optional<NeighborList> Knn(const EmbeddingTable& table,
                                std::string_view token, std::size_t k,
                                const TokenMask& restrict) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  const std::optional<std::size_t> q = table.Find(token);
  if (!q) return std::nullopt;
  if (!restrict.empty() && restrict.size() != table.size())
    throw std::invalid_argument("token mask size mismatch");

  struct Candidate {
    double sim;
    std::size_t index;
  };
  std::vector<Candidate> candidates;
  candidates.reserve(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (i == *q || (!restrict.empty() && !restrict[i])) continue;
    candidates.push_back({table.Cosine(*q, i), i});
  }
  const auto better = [&](const Candidate& a, const Candidate& b) {
    if (a.sim != b.sim) return a.sim > b.sim;
    return table.token(a.index) < table.token(b.index);
  };
  const std::size_t keep = std::min(k, candidates.size());
  std::partial_sort(candidates.begin(), candidates.begin() + keep,
                    candidates.end(), better);

  NeighborList out;
  out.query = std::string(token);
  for (std::size_t i = 0; i < keep; ++i)
    out.neighbors.push_back({table.token(candidates[i].index), candidates[i].sim});
  return out;
}

std::map<std::string, double> EvalNeighborPurity(
    const EmbeddingTable& table,
    const std::map<std::string, std::string>& labels, std::size_t k,
    std::vector<std::string>* warnings) {
  std::map<std::string, std::vector<std::string>> by_class;
  std::vector<std::string> labeled;
  for (const auto& [token, cls] : labels) {
    if (!table.Find(token)) continue;
    by_class[cls].push_back(token);
    labeled.push_back(token);
  }
  const TokenMask mask = MaskOf(table, labeled);

  std::map<std::string, double> purity;
  for (const auto& [cls, members] : by_class) {
    if (members.size() < 2) {
      if (warnings)
        warnings->push_back("class " + cls + " has fewer than 2 tokens; skipped");
      continue;
    }
    double sum = 0.0;
    for (const std::string& token : members) {
      const NeighborList nn = *Knn(table, token, k, mask);
      if (nn.neighbors.empty()) continue;
      std::size_t same = 0;
      for (const Neighbor& n : nn.neighbors)
        if (labels.at(n.token) == cls) ++same;
      sum += static_cast<double>(same) / static_cast<double>(nn.neighbors.size());
    }
    purity[cls] = sum / static_cast<double>(members.size());
  }
  return purity;
}

void ExportProjectionData(const EmbeddingTable& table,
                          std::span<const std::string> tokens, std::ostream& out,
                          std::vector<std::string>* warnings) {
  out << "token";
  for (int j = 1; j <= table.dim(); ++j) out << "\tv" << j;
  out << '\n';
  char buf[32];
  for (const std::string& t : tokens) {
    const std::optional<std::size_t> i = table.Find(t);
    if (!i) {
      if (warnings) warnings->push_back("unknown token " + t + " skipped");
      continue;
    }
    out << t;
    for (float x : table.vector(*i)) {
      std::snprintf(buf, sizeof buf, "\t%.9g", static_cast<double>(x));
      out << buf;
    }
    out << '\n';
  }
}

}  // namespace nameorigin
