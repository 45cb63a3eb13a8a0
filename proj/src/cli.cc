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

#include "nameorigin/cli.h"

#include <algorithm>
#include <atomic>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <variant>

#include "CLI11.hpp"
#include "json.hpp"
#include "nameorigin/analysis.h"
#include "nameorigin/classifier.h"
#include "nameorigin/embedding.h"
#include "nameorigin/estimation.h"
#include "nameorigin/ethnicity.h"
#include "nameorigin/ingest.h"
#include "nameorigin/manifest.h"
#include "nameorigin/model_io.h"
#include "nameorigin/result_json.h"
#include "nameorigin/service.h"
#include "nameorigin/synthgen.h"
#include "nameorigin/taxonomy.h"

namespace nameorigin {
namespace {

namespace fs = std::filesystem;

class CliError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An existing file, or the name of a shipped taxonomy ("nat39").
fs::path TaxonomyPath(const std::string& arg) {
  try {
    return ResolveConfigPath(arg, ".taxonomy");
  } catch (const std::runtime_error&) {
    throw CliError("missing artifact: taxonomy '" + arg + "'");
  }
}

std::ifstream OpenIn(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw CliError("missing artifact: " + p.string());
  return in;
}

std::ofstream OpenOut(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p);
  if (!out) throw CliError("cannot write " + p.string());
  return out;
}

MultiPartPolicy ParsePolicy(const std::string& s) {
  if (s == "strict") return MultiPartPolicy::kStrict;
  if (s == "join-middle") return MultiPartPolicy::kJoinMiddle;
  throw CliError("--policy must be strict or join-middle");
}

PriorMode Mode(const std::string& s) {
  auto m = ParsePriorMode(s);
  if (!m) throw CliError("--mode must be internet or world");
  return *m;
}

FullName ParseQueryName(const std::string& raw) {
  auto parsed = NormalizeName(raw, MultiPartPolicy::kJoinMiddle);
  if (auto* r = std::get_if<RejectReason>(&parsed))
    throw CliError("unusable name: " + std::string(RejectReasonCode(*r)));
  return std::get<FullName>(parsed);
}

std::vector<LabeledName> LoadLabels(const fs::path& p, MultiPartPolicy policy) {
  std::ifstream in = OpenIn(p);
  std::vector<Rejection> rejects;
  return ReadLabeledNames(in, policy, &rejects);
}

std::vector<Sentence> LoadSentences(const fs::path& p) {
  std::ifstream in = OpenIn(p);
  return ReadSentences(in);
}

std::vector<FullName> LoadPairs(const fs::path& p, std::size_t* rejected) {
  std::ifstream in = OpenIn(p);
  std::vector<Rejection> rejects;
  auto pairs = ReadNamePairs(in, MultiPartPolicy::kJoinMiddle, &rejects);
  if (rejected) *rejected = rejects.size();
  return pairs;
}

ClassifierOptions TierOptions(const std::string& tiers, double sigma) {
  ClassifierOptions o;
  o.use_us = o.use_tr = o.use_em = o.use_ps = o.use_ch = false;
  std::stringstream ss(tiers);
  for (std::string t; std::getline(ss, t, ',');) {
    std::transform(t.begin(), t.end(), t.begin(), ::tolower);
    if (t == "us") o.use_us = true;
    else if (t == "tr") o.use_tr = true;
    else if (t == "em") o.use_em = true;
    else if (t == "ps") o.use_ps = true;
    else if (t == "ch") o.use_ch = true;
    else if (!t.empty() && t != "none") throw CliError("unknown tier '" + t + "'");
  }
  o.sigma = sigma;
  return o;
}

ClassifierOptions VariantOptions(const std::string& v, double sigma) {
  ClassifierOptions o;
  if (v == "full") o = ClassifierOptions{};
  else if (v == "prior") o = ClassifierOptions::PriorOnly();
  else if (v == "tr") o = ClassifierOptions::TrainingOnly();
  else if (v == "tr-em") o = ClassifierOptions::TrainingAndEmbedding();
  else if (v == "em") o = ClassifierOptions::EmbeddingOnly();
  else throw CliError("unknown variant '" + v + "'");
  o.sigma = sigma;
  return o;
}

void WriteWarnings(std::ostream& err, const std::vector<std::string>& w,
                   bool quiet) {
  if (quiet) return;
  constexpr std::size_t kShown = 20;
  for (std::size_t i = 0; i < w.size() && i < kShown; ++i)
    err << "warning: " << w[i] << '\n';
  if (w.size() > kShown)
    err << "warning: ... " << (w.size() - kShown) << " more\n";
}

struct Globals {
  std::string workdir = "work";
  bool force = false;
  bool quiet = false;
};

// Canonical key=value text hashed into a stage's config hash.
class ConfigText {
 public:
  template <typename T>
  ConfigText& Add(const std::string& key, const T& value) {
    std::ostringstream ss;
    ss.precision(17);
    ss << value;
    text_ += key + "=" + ss.str() + "\n";
    return *this;
  }
  std::string Hash() const { return Sha256Hex(text_); }

 private:
  std::string text_;
};

class Pipeline {
 public:
  Pipeline(const Globals& g, std::ostream& out, std::ostream& err)
      : g_(g), out_(out), err_(err), manifest_(Manifest::Load(g.workdir)) {}

  fs::path Work(const fs::path& rel) const { return fs::path(g_.workdir) / rel; }
  // User-supplied input: inside the work directory when present there.
  fs::path Input(const fs::path& arg) const {
    const fs::path w = Work(arg);
    return fs::exists(w) ? w : arg;
  }
  std::ostream& out() { return out_; }
  std::ostream& err() { return err_; }
  const Globals& globals() const { return g_; }
  void Log(const std::string& msg) {
    if (!g_.quiet) err_ << msg << '\n';
  }

  // Skips the stage when its record is current; otherwise checks the
  // inputs against their producers, runs `body` and records the outputs.
  bool Stage(const std::string& name, const ConfigText& config,
             const std::vector<fs::path>& inputs,
             const std::vector<fs::path>& outputs,
             const std::function<void()>& body) {
    const std::string hash = config.Hash();
    if (!g_.force && manifest_.UpToDate(name, hash, inputs, outputs)) {
      Log(name + ": up to date");
      return false;
    }
    if (!g_.force) manifest_.CheckInputs(name, inputs);
    for (const fs::path& p : inputs)
      if (!fs::exists(p)) throw CliError("missing artifact: " + p.string());
    body();
    manifest_.Record(name, hash, inputs, outputs);
    manifest_.Save();
    Log(name + ": done");
    return true;
  }

 private:
  Globals g_;
  std::ostream& out_;
  std::ostream& err_;
  Manifest manifest_;
};

// ---- synth ----------------------------------------------------------------

struct SynthArgs {
  std::string config;
  std::string out = "corpus";
  std::optional<std::uint64_t> seed, owners, labels;
  std::optional<double> homophily;
};

void RunSynth(Pipeline& p, const SynthArgs& a) {
  SynthConfig cfg = a.config.empty() ? SynthConfig::Default()
                                     : SynthConfig::Load(a.config);
  if (a.seed) cfg.seed = *a.seed;
  if (a.owners) cfg.owners = *a.owners;
  if (a.labels) cfg.labels = *a.labels;
  if (a.homophily) cfg.homophily = *a.homophily;
  cfg.Validate();
  const fs::path dir = p.Work(a.out);
  ConfigText c;
  c.Add("synth", cfg.Serialize());
  std::vector<fs::path> outs = {dir / "contacts.tsv", dir / "labels.tsv",
                                dir / "taxonomy.taxonomy", dir / "parts.tsv",
                                dir / "synth.ini"};
  p.Stage("synth", c, {}, outs, [&] {
    SynthCorpus corpus = Generate(cfg);
    WriteCorpus(corpus, dir);
    OpenOut(dir / "synth.ini") << cfg.Serialize();
    p.Log("synth: " + std::to_string(corpus.contacts.size()) + " contact lists, " +
          std::to_string(corpus.labels.size()) + " labeled names");
  });
}

// ---- ingest ---------------------------------------------------------------

struct IngestArgs {
  std::string contacts = "corpus/contacts.tsv";
  std::string labels = "corpus/labels.tsv";
  std::string out = "ingest";
  int top_k = 20;
  double tau = 30.0;
  std::string layout = "joint";
  std::string policy = "strict";
  bool no_filter = false;
};

void RunIngest(Pipeline& p, const IngestArgs& a) {
  if (a.top_k < 1) throw CliError("--top-k must be at least 1");
  if (!(a.tau > 0)) throw CliError("--tau must be positive");
  if (a.layout != "joint" && a.layout != "separate")
    throw CliError("--layout must be joint or separate");
  const MultiPartPolicy policy = ParsePolicy(a.policy);
  const fs::path dir = p.Work(a.out);
  const fs::path contacts = p.Work(a.contacts), labels = p.Work(a.labels);
  ConfigText c;
  c.Add("top_k", a.top_k).Add("tau", a.tau).Add("layout", a.layout)
      .Add("policy", a.policy).Add("filter", !a.no_filter);
  std::vector<fs::path> outs = {dir / "sentences.txt", dir / "labels.filtered.tsv",
                                dir / "rejections.tsv", dir / "filter.json"};
  p.Stage("ingest", c, {contacts, labels}, outs, [&] {
    std::vector<Rejection> rejects;
    std::ifstream cin_ = OpenIn(contacts);
    auto lists = ReadContactLists(cin_, policy, &rejects);
    SentenceConfig sc;
    sc.top_contacts = a.top_k;
    sc.tau_days = a.tau;
    sc.layout = a.layout == "joint" ? VocabularyLayout::kJoint
                                    : VocabularyLayout::kSeparate;
    auto sentences = BuildSentences(lists, sc);
    {
      std::ofstream out = OpenOut(dir / "sentences.txt");
      WriteSentences(out, sentences);
    }
    std::vector<Rejection> label_rejects;
    std::ifstream lin = OpenIn(labels);
    auto raw = ReadLabeledNames(lin, policy, &label_rejects);
    FilterStats stats;
    std::vector<LabeledName> kept;
    if (a.no_filter) {
      kept = raw;
      stats.records_in = stats.records_kept = raw.size();
      for (const auto& l : raw) stats.names_in += l.count;
      stats.names_kept = stats.names_in;
    } else {
      kept = FilterLabels(raw, &stats);
    }
    {
      std::ofstream out = OpenOut(dir / "labels.filtered.tsv");
      WriteLabeledNames(out, kept);
    }
    {
      rejects.insert(rejects.end(), label_rejects.begin(), label_rejects.end());
      std::ofstream out = OpenOut(dir / "rejections.tsv");
      WriteRejections(out, rejects);
    }
    nlohmann::ordered_json j;
    j["contact_lists"] = lists.size();
    j["sentences"] = sentences.size();
    j["contact_rejections"] = rejects.size() - label_rejects.size();
    j["label_rejections"] = label_rejects.size();
    j["records_in"] = stats.records_in;
    j["records_kept"] = stats.records_kept;
    j["names_in"] = stats.names_in;
    j["names_kept"] = stats.names_kept;
    j["survival_rate"] = stats.survival_rate();
    OpenOut(dir / "filter.json") << j.dump(2) << '\n';
    p.Log("ingest: " + std::to_string(sentences.size()) + " sentences, " +
          std::to_string(kept.size()) + " labeled names kept");
  });
}

// ---- train-embeddings -----------------------------------------------------

struct TrainArgs {
  std::string sentences = "ingest/sentences.txt";
  std::string out = "embeddings";
  std::string algorithm = "cbow";
  TrainConfig config;
  std::string parts;  // optional "role part class" truth for purity
  std::size_t purity_k = 1;
};

void RunTrain(Pipeline& p, TrainArgs a) {
  auto alg = ParseAlgorithm(a.algorithm);
  if (!alg) throw CliError("--algorithm must be cbow or sg");
  a.config.algorithm = *alg;
  a.config.Validate();
  const fs::path dir = p.Work(a.out);
  const fs::path sentences = p.Work(a.sentences);
  const TrainConfig& t = a.config;
  ConfigText c;
  c.Add("algorithm", a.algorithm).Add("dim", t.dim).Add("window", t.window)
      .Add("epochs", t.epochs).Add("negative", t.negative)
      .Add("lr", t.learning_rate).Add("min_count", t.min_count)
      .Add("seed", t.seed).Add("threads", t.threads).Add("parts", a.parts)
      .Add("purity_k", a.purity_k);
  std::vector<fs::path> ins = {sentences};
  std::vector<fs::path> outs = {dir / "vectors.txt", dir / "stats.json"};
  if (!a.parts.empty()) {
    ins.push_back(p.Work(a.parts));
    outs.push_back(dir / "purity.tsv");
  }
  p.Stage("train-embeddings", c, ins, outs, [&] {
    auto sents = LoadSentences(sentences);
    TrainStats stats;
    EmbeddingTable table = Train(sents, t, &stats);
    fs::create_directories(dir);
    table.Save(dir / "vectors.txt");
    nlohmann::ordered_json j;
    j["tokens"] = table.size();
    j["dim"] = table.dim();
    j["epochs_run"] = stats.epochs_run;
    j["updates"] = stats.updates;
    j["epoch_loss"] = stats.epoch_loss;
    OpenOut(dir / "stats.json") << j.dump(2) << '\n';
    if (!a.parts.empty()) {
      std::map<std::string, std::string> truth;
      std::ifstream in = OpenIn(p.Work(a.parts));
      for (std::string line; std::getline(in, line);) {
        std::istringstream ss(line);
        std::string role, part, cls;
        if (!(ss >> role >> part >> cls)) continue;
        auto r = ParseRole(role);
        if (r) truth[RoleToken(*r, part)] = cls;
      }
      std::vector<std::string> warnings;
      auto purity = EvalNeighborPurity(table, truth, a.purity_k, &warnings);
      WriteWarnings(p.err(), warnings, p.globals().quiet);
      std::ofstream out = OpenOut(dir / "purity.tsv");
      out << "class\tpurity_at_" << a.purity_k << '\n';
      double sum = 0.0;
      for (const auto& [cls, v] : purity) {
        out << cls << '\t' << v << '\n';
        sum += v;
      }
      if (!purity.empty())
        out << "mean\t" << sum / static_cast<double>(purity.size()) << '\n';
    }
    p.Log("train-embeddings: " + std::to_string(table.size()) + " tokens");
  });
}

// ---- estimate -------------------------------------------------------------

struct EstimateArgs {
  std::string labels = "ingest/labels.filtered.tsv";
  std::string taxonomy = "corpus/taxonomy.taxonomy";
  std::string embeddings = "embeddings/vectors.txt";
  std::string sentences = "ingest/sentences.txt";
  std::string out = "model";
  std::uint64_t min_count = 5;
  std::size_t k = 10;
  std::string part_prior = "labeled";
};

ModelConfig ModelConfigOf(std::uint64_t min_count, std::size_t k,
                          const std::string& part_prior) {
  ModelConfig m;
  m.min_count = min_count;
  m.k = k;
  if (part_prior == "labeled") m.part_prior = PartPrior::Corpus::kLabeled;
  else if (part_prior == "contacts") m.part_prior = PartPrior::Corpus::kContacts;
  else throw CliError("--part-prior must be labeled or contacts");
  return m;
}

fs::path ResolveTaxonomy(Pipeline& p, const std::string& arg) {
  fs::path in_work = p.Work(arg);
  if (fs::exists(in_work)) return in_work;
  return TaxonomyPath(arg);
}

void RunEstimate(Pipeline& p, const EstimateArgs& a) {
  const ModelConfig mc = ModelConfigOf(a.min_count, a.k, a.part_prior);
  if (a.min_count < 1) throw CliError("--min-count must be at least 1");
  const fs::path dir = p.Work(a.out);
  const fs::path labels = p.Work(a.labels);
  const fs::path tax = ResolveTaxonomy(p, a.taxonomy);
  const bool use_emb = a.embeddings != "none";
  const bool use_sent = mc.part_prior == PartPrior::Corpus::kContacts;
  ConfigText c;
  c.Add("min_count", a.min_count).Add("k", a.k).Add("part_prior", a.part_prior)
      .Add("embeddings", use_emb);
  std::vector<fs::path> ins = {labels, tax};
  if (use_emb) ins.push_back(p.Work(a.embeddings));
  if (use_sent) ins.push_back(p.Work(a.sentences));
  std::vector<fs::path> outs = {dir / "taxonomy.taxonomy", dir / "priors.tsv",
                                dir / "model.json"};
  for (const char* role : {"first", "last"})
    for (const char* s : {"us", "tr", "em", "ps", "ch"})
      outs.push_back(dir / ("likelihood_" + std::string(s) + "_" + role + ".tsv"));
  p.Stage("estimate", c, ins, outs, [&] {
    auto taxonomy = std::make_shared<const Taxonomy>(Taxonomy::Load(tax));
    auto lab = LoadLabels(labels, MultiPartPolicy::kStrict);
    std::optional<EmbeddingTable> emb;
    if (use_emb) emb = EmbeddingTable::Load(p.Work(a.embeddings));
    std::vector<Sentence> sents;
    if (use_sent) sents = LoadSentences(p.Work(a.sentences));
    std::vector<std::string> warnings;
    ModelTables model = BuildModel(lab, taxonomy, emb ? &*emb : nullptr, sents,
                                   mc, &warnings);
    WriteWarnings(p.err(), warnings, p.globals().quiet);
    Metadata meta = {{"taxonomy", taxonomy->name()},
                     {"min_count", std::to_string(a.min_count)},
                     {"k", std::to_string(a.k)},
                     {"part_prior", a.part_prior},
                     {"embeddings", use_emb ? "yes" : "no"}};
    SaveModel(model, dir, meta);
    p.Log("estimate: " + std::to_string(model.role(NamePartRole::kFirst).tr.size()) +
          " first / " + std::to_string(model.role(NamePartRole::kLast).tr.size()) +
          " last parts in the training vocabulary");
  });
}

// ---- classify -------------------------------------------------------------

struct ClassifyArgs {
  std::string model = "model";
  std::string name;
  std::string input;
  std::string output;
  std::string mode = "internet";
  std::string tiers = "tr,em,ps,ch";
  double sigma = 1e-7;
};

void ClassifyOut(Pipeline& p, const NameClassifier& classifier,
                 const ClassifyArgs& a, PriorMode mode) {
  if (a.name.empty() == a.input.empty())
    throw CliError("give exactly one of --name and --input");
  if (!a.name.empty()) {
    p.out() << ResultToJson(classifier.Classify(ParseQueryName(a.name), mode))
            << '\n';
    return;
  }
  std::size_t rejected = 0;
  auto pairs = LoadPairs(p.Input(a.input), &rejected);
  std::ofstream file;
  if (!a.output.empty()) file = OpenOut(p.Work(a.output));
  std::ostream& out = a.output.empty() ? p.out() : file;
  WriteResultHeader(out);
  for (const FullName& n : pairs) WriteResultRow(out, n, classifier.Classify(n, mode));
  p.Log("classify: " + std::to_string(pairs.size()) + " names, " +
        std::to_string(rejected) + " rejected");
}

std::shared_ptr<ModelTables> LoadModelDir(Pipeline& p, const std::string& dir) {
  fs::path d = p.Work(dir);
  if (!fs::exists(d)) d = dir;
  if (!fs::exists(d / "priors.tsv")) throw CliError("missing artifact: model " + d.string());
  return LoadModel(d);
}

void RunClassify(Pipeline& p, const ClassifyArgs& a) {
  const PriorMode mode = Mode(a.mode);
  auto tables = LoadModelDir(p, a.model);
  NameClassifier classifier(tables, TierOptions(a.tiers, a.sigma));
  ClassifyOut(p, classifier, a, mode);
}

// ---- classify-ethnicity ---------------------------------------------------

struct EthnicityArgs {
  ClassifyArgs query;
  std::string census;
  std::string pairs;
  std::string labels;
  std::string embeddings;
  std::string taxonomy = "ethnicity6";
  std::string out = "ethnicity";
  std::uint64_t min_count = 5;
  std::size_t k = 10;
};

void RunEthnicity(Pipeline& p, EthnicityArgs a) {
  fs::path dir = p.Work(a.out);
  if (!a.census.empty()) {
    const fs::path census = p.Input(a.census), tax = TaxonomyPath(a.taxonomy);
    const fs::path pairs_path = a.pairs.empty() ? fs::path() : p.Input(a.pairs);
    std::vector<fs::path> ins = {census, tax};
    if (!a.pairs.empty()) ins.push_back(pairs_path);
    if (!a.labels.empty()) ins.push_back(p.Work(a.labels));
    if (!a.embeddings.empty()) ins.push_back(p.Work(a.embeddings));
    ConfigText c;
    c.Add("min_count", a.min_count).Add("k", a.k).Add("pairs", !a.pairs.empty())
        .Add("labels", !a.labels.empty()).Add("embeddings", !a.embeddings.empty());
    std::vector<fs::path> outs = {dir / "census.tsv", dir / "first_posteriors.tsv",
                                  dir / "excluded_first_names.txt",
                                  dir / "priors.tsv", dir / "model.json"};
    p.Stage("classify-ethnicity", c, ins, outs, [&] {
      std::vector<std::string> warnings;
      CensusTable table = LoadCensusLastNames(census, &warnings);
      std::vector<FullName> pairs;
      if (!a.pairs.empty()) pairs = LoadPairs(pairs_path, nullptr);
      std::vector<LabeledName> labels;
      if (!a.labels.empty()) labels = LoadLabels(p.Work(a.labels), MultiPartPolicy::kStrict);
      std::optional<EmbeddingTable> emb;
      if (!a.embeddings.empty()) emb = EmbeddingTable::Load(p.Work(a.embeddings));
      auto taxonomy = std::make_shared<const Taxonomy>(Taxonomy::Load(tax));
      EthnicityModel model = BuildEthnicityModel(
          table, pairs, taxonomy, labels, emb ? &*emb : nullptr,
          ModelConfigOf(a.min_count, a.k, "labeled"), &warnings);
      WriteWarnings(p.err(), warnings, p.globals().quiet);
      SaveEthnicityModel(model, dir, {{"taxonomy", taxonomy->name()}});
      p.Log("classify-ethnicity: " + std::to_string(model.census.size()) +
            " surnames, " + std::to_string(model.first_posteriors.size()) +
            " first names kept, " +
            std::to_string(model.excluded_first_names.size()) + " excluded");
    });
  } else if (!fs::exists(dir / "census.tsv")) {
    dir = a.out;
  }
  if (a.query.name.empty() && a.query.input.empty()) return;
  EthnicityModel model = LoadEthnicityModel(dir);
  ClassifierOptions o = TierOptions(a.query.tiers, a.query.sigma);
  NameClassifier classifier(model.tables, o);
  ClassifyOut(p, classifier, a.query, PriorMode::kWorld);
}

// ---- evaluate -------------------------------------------------------------

struct EvaluateArgs {
  std::string labels = "ingest/labels.filtered.tsv";
  std::string train_taxonomy = "corpus/taxonomy.taxonomy";
  std::string taxonomy;  // scoring taxonomy; empty = training taxonomy
  std::string projection;
  std::string embeddings = "embeddings/vectors.txt";
  std::string out = "eval";
  std::vector<std::string> variants = {"full"};
  std::string mode = "internet";
  int runs = 3;
  double train_frac = 0.6;
  std::uint64_t seed = 1;
  std::uint64_t min_count = 5;
  std::size_t k = 10;
  double sigma = 1e-7;
  std::string excluded = "Excluded";
};

void RunEvaluate(Pipeline& p, EvaluateArgs a) {
  if (a.runs < 1) throw CliError("--runs must be at least 1");
  if (!(a.train_frac > 0 && a.train_frac < 1))
    throw CliError("--train-frac must lie in (0, 1)");
  if (a.variants.size() == 1 && a.variants[0] == "all")
    a.variants = {"prior", "tr", "tr-em", "em", "full"};
  for (const auto& v : a.variants) VariantOptions(v, a.sigma);
  const PriorMode mode = Mode(a.mode);
  const fs::path labels = p.Work(a.labels);
  const fs::path train_tax = ResolveTaxonomy(p, a.train_taxonomy);
  const bool use_emb = a.embeddings != "none";
  std::vector<fs::path> ins = {labels, train_tax};
  if (use_emb) ins.push_back(p.Work(a.embeddings));
  fs::path target_tax, proj;
  if (!a.taxonomy.empty()) {
    target_tax = ResolveTaxonomy(p, a.taxonomy);
    ins.push_back(target_tax);
  }
  const fs::path dir = p.Work(a.out);
  ConfigText c;
  c.Add("mode", a.mode).Add("runs", a.runs).Add("train_frac", a.train_frac)
      .Add("seed", a.seed).Add("min_count", a.min_count).Add("k", a.k)
      .Add("sigma", a.sigma).Add("embeddings", use_emb).Add("excluded", a.excluded);
  for (const auto& v : a.variants) c.Add("variant", v);
  std::vector<fs::path> outs = {dir / "summary.tsv"};
  for (const auto& v : a.variants)
    for (int r = 0; r < a.runs; ++r) {
      const std::string stem = v + "_run" + std::to_string(r);
      outs.push_back(dir / (stem + ".tsv"));
      outs.push_back(dir / (stem + ".json"));
    }
  auto train_t = std::make_shared<const Taxonomy>(Taxonomy::Load(train_tax));
  std::shared_ptr<const Taxonomy> target_t = train_t;
  std::optional<TaxonomyProjection> projection;
  if (!a.taxonomy.empty()) {
    target_t = std::make_shared<const Taxonomy>(Taxonomy::Load(target_tax));
    const std::string pname = a.projection.empty()
                                  ? train_t->name() + "_to_" + target_t->name()
                                  : a.projection;
    try {
      proj = ResolveConfigPath(pname, ".projection");
    } catch (const std::runtime_error&) {
      throw CliError("missing artifact: projection '" + pname + "'");
    }
    ins.push_back(proj);
    projection = TaxonomyProjection::Load(proj, train_t, target_t);
  }
  p.Stage("evaluate", c, ins, outs, [&] {
    auto lab = LoadLabels(labels, MultiPartPolicy::kStrict);
    std::optional<EmbeddingTable> emb;
    if (use_emb) emb = EmbeddingTable::Load(p.Work(a.embeddings));
    const ModelConfig mc = ModelConfigOf(a.min_count, a.k, "labeled");
    const std::set<std::string> excluded = {a.excluded};
    std::map<std::string, std::vector<double>> f1;
    for (int r = 0; r < a.runs; ++r) {
      const std::uint64_t seed = a.seed + static_cast<std::uint64_t>(r);
      std::vector<std::string> warnings;
      Split split = StratifiedSplit(lab, *train_t, a.train_frac, seed, &warnings);
      auto model = std::make_shared<const ModelTables>(BuildModel(
          split.train, train_t, emb ? &*emb : nullptr, {}, mc, &warnings));
      WriteWarnings(p.err(), warnings, p.globals().quiet);
      for (const std::string& v : a.variants) {
        NameClassifier classifier(model, VariantOptions(v, a.sigma));
        std::vector<Prediction> preds;
        for (const LabeledName& l : split.test) {
          auto truth = train_t->LeafForCountry(l.country);
          if (!truth) continue;
          preds.push_back({*truth, classifier.Classify(l.name, mode).leaf, l.count});
        }
        if (projection) preds = ProjectPredictions(preds, *projection, excluded);
        EvalReport report = Evaluate(preds, *target_t);
        report.variant = v;
        report.seed = seed;
        report.run = r;
        const std::string stem = v + "_run" + std::to_string(r);
        {
          std::ofstream out = OpenOut(dir / (stem + ".tsv"));
          report.WriteTsv(out);
        }
        OpenOut(dir / (stem + ".json")) << report.ToJson() << '\n';
        f1[v].push_back(report.leaves.weighted_f1);
        p.Log("evaluate: " + v + " run " + std::to_string(r) +
              " weighted F1 " + std::to_string(report.leaves.weighted_f1));
      }
    }
    std::ofstream out = OpenOut(dir / "summary.tsv");
    out << "variant\truns\tmean_weighted_f1\tstd_weighted_f1\n";
    for (const std::string& v : a.variants) {
      MeanStd s = Summarize(f1[v]);
      out << v << '\t' << a.runs << '\t' << s.mean << '\t' << s.stddev << '\n';
      p.out() << v << "\tF1 " << s.mean << " +- " << s.stddev << '\n';
    }
  });
}

// ---- similarity -----------------------------------------------------------

struct SimilarityArgs {
  std::string labels = "ingest/labels.filtered.tsv";
  std::string out = "similarity";
  double threshold = 0.5;
};

void RunSimilarity(Pipeline& p, const SimilarityArgs& a) {
  const fs::path labels = p.Work(a.labels), dir = p.Work(a.out);
  ConfigText c;
  c.Add("threshold", a.threshold);
  p.Stage("similarity", c, {labels}, {dir / "edges.tsv", dir / "matrix.tsv"}, [&] {
    auto lab = LoadLabels(labels, MultiPartPolicy::kStrict);
    std::vector<std::string> warnings;
    SimilarityResult s = CountrySimilarity(lab, a.threshold, &warnings);
    WriteWarnings(p.err(), warnings, p.globals().quiet);
    {
      std::ofstream out = OpenOut(dir / "edges.tsv");
      s.WriteEdges(out);
    }
    std::ofstream out = OpenOut(dir / "matrix.tsv");
    s.WriteMatrix(out);
    p.Log("similarity: " + std::to_string(s.countries.size()) + " countries, " +
          std::to_string(s.edges.size()) + " edges");
  });
}

// ---- report ---------------------------------------------------------------

struct ReportArgs {
  std::string followers;
  std::string baseline;
  std::string model = "model";
  std::string out = "report";
  std::string mode = "world";
  std::string dominant;
  double threshold = 0.2;
  double sigma = 1e-7;
  bool ethnicity = false;
};

void RunReport(Pipeline& p, const ReportArgs& a) {
  const PriorMode mode = Mode(a.mode);
  std::map<std::string, double> baseline;
  {
    std::ifstream in = OpenIn(p.Input(a.baseline));
    for (std::string line; std::getline(in, line);) {
      if (line.empty() || line[0] == '#') continue;
      std::istringstream ss(line);
      std::string id;
      double share = 0;
      if (!(ss >> id >> share)) throw CliError("bad baseline row: " + line);
      baseline[id] = share;
    }
  }
  std::shared_ptr<const ModelTables> tables;
  if (a.ethnicity) {
    fs::path d = p.Work(a.model);
    if (!fs::exists(d)) d = a.model;
    tables = LoadEthnicityModel(d).tables;
  } else {
    tables = LoadModelDir(p, a.model);
  }
  ClassifierOptions o;
  o.sigma = a.sigma;
  NameClassifier classifier(tables, o);
  auto followers = LoadPairs(p.Input(a.followers), nullptr);
  std::optional<std::string> dominant;
  if (!a.dominant.empty()) dominant = a.dominant;
  RepresentationReport r = RepresentationReportFor(followers, baseline, classifier,
                                                   mode, dominant, a.threshold);
  const fs::path dir = p.Work(a.out);
  {
    std::ofstream out = OpenOut(dir / "representation.tsv");
    r.WriteTsv(out);
  }
  OpenOut(dir / "representation.json") << r.ToJson() << '\n';
  r.WriteTsv(p.out());
}

// ---- serve ----------------------------------------------------------------

struct ServeArgs {
  std::string model = "model";
  std::string ethnicity_model;
  std::string host = "127.0.0.1";
  int port = 8080;
  double sigma = 1e-7;
};

std::atomic<HttpServer*> g_server{nullptr};

void RunServe(Pipeline& p, const ServeArgs& a) {
  ClassifierOptions o;
  o.sigma = a.sigma;
  std::shared_ptr<const NameClassifier> nat;
  if (a.model != "none")
    nat = std::make_shared<NameClassifier>(LoadModelDir(p, a.model), o);
  std::shared_ptr<const EthnicityModel> eth;
  if (!a.ethnicity_model.empty()) {
    fs::path d = p.Work(a.ethnicity_model);
    if (!fs::exists(d)) d = a.ethnicity_model;
    eth = std::make_shared<EthnicityModel>(LoadEthnicityModel(d));
  }
  if (!nat && !eth) throw CliError("serve needs a model");
  auto service = std::make_shared<const QueryService>(nat, eth, o);
  HttpServer server(service);
  const int port = server.Bind(a.host, a.port);
  p.Log("serve: listening on http://" + a.host + ":" + std::to_string(port));
  g_server = &server;
  auto stop = [](int) {
    if (HttpServer* s = g_server.load()) s->Stop();
  };
  std::signal(SIGINT, stop);
  std::signal(SIGTERM, stop);
  server.Run();
  g_server = nullptr;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Name-based nationality and ethnicity classification pipeline",
               "nameorigin"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--workdir", g.workdir, "Pipeline work directory")
      ->capture_default_str();
  app.add_flag("--force", g.force, "Rerun stages even when up to date");
  app.add_flag("--quiet", g.quiet, "Suppress progress and warnings");

  SynthArgs sa;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic benchmark corpus");
  synth->add_option("--config", sa.config, "Synthetic corpus config (INI)");
  synth->add_option("--out", sa.out, "Output directory")->capture_default_str();
  synth->add_option("--seed", sa.seed, "Override the config seed");
  synth->add_option("--owners", sa.owners, "Override the number of owners");
  synth->add_option("--labels", sa.labels, "Override the number of label draws");
  synth->add_option("--homophily", sa.homophily, "Override h")
      ->check(CLI::Range(0.0, 1.0));

  IngestArgs ia;
  auto* ingest = app.add_subcommand("ingest", "Contact lists to sentences; label filtering");
  ingest->add_option("--contacts", ia.contacts)->capture_default_str();
  ingest->add_option("--labels", ia.labels)->capture_default_str();
  ingest->add_option("--out", ia.out)->capture_default_str();
  ingest->add_option("--top-k", ia.top_k, "K contacts per sentence")->capture_default_str();
  ingest->add_option("--tau", ia.tau, "Recency decay in days")->capture_default_str();
  ingest->add_option("--layout", ia.layout, "joint or separate")->capture_default_str();
  ingest->add_option("--policy", ia.policy, "strict or join-middle")->capture_default_str();
  ingest->add_flag("--no-filter", ia.no_filter, "Keep single-occurrence names");

  TrainArgs ta;
  auto* train = app.add_subcommand("train-embeddings", "Train name embeddings");
  train->add_option("--sentences", ta.sentences)->capture_default_str();
  train->add_option("--out", ta.out)->capture_default_str();
  train->add_option("--algorithm", ta.algorithm, "cbow or sg")->capture_default_str();
  train->add_option("--dim", ta.config.dim)->capture_default_str();
  train->add_option("--window", ta.config.window)->capture_default_str();
  train->add_option("--epochs", ta.config.epochs)->capture_default_str();
  train->add_option("--negative", ta.config.negative)->capture_default_str();
  train->add_option("--lr", ta.config.learning_rate)->capture_default_str();
  train->add_option("--min-count", ta.config.min_count)->capture_default_str();
  train->add_option("--seed", ta.config.seed)->capture_default_str();
  train->add_option("--threads", ta.config.threads)->capture_default_str();
  train->add_option("--parts", ta.parts, "role/part/class truth for neighbor purity");
  train->add_option("--purity-k", ta.purity_k)->capture_default_str();

  EstimateArgs ea;
  auto* estimate = app.add_subcommand("estimate", "Estimate priors and likelihood tables");
  estimate->add_option("--labels", ea.labels)->capture_default_str();
  estimate->add_option("--taxonomy", ea.taxonomy, "File or shipped name")->capture_default_str();
  estimate->add_option("--embeddings", ea.embeddings, "Vectors file or 'none'")
      ->capture_default_str();
  estimate->add_option("--sentences", ea.sentences)->capture_default_str();
  estimate->add_option("--out", ea.out)->capture_default_str();
  estimate->add_option("--min-count", ea.min_count, "Training-vocabulary threshold")
      ->capture_default_str();
  estimate->add_option("-k,--k", ea.k, "Embedding neighbors")->capture_default_str();
  estimate->add_option("--part-prior", ea.part_prior, "labeled or contacts")
      ->capture_default_str();

  auto add_query = [](CLI::App* sub, ClassifyArgs& q) {
    sub->add_option("--name", q.name, "\"First Last\"; prints JSON");
    sub->add_option("--input", q.input, "TSV of first/last pairs");
    sub->add_option("--output", q.output, "Batch output (default stdout)");
    sub->add_option("--sigma", q.sigma, "Smoothing likelihood")->capture_default_str();
  };
  ClassifyArgs ca;
  auto* classify = app.add_subcommand("classify", "Classify names by nationality");
  classify->add_option("--model", ca.model)->capture_default_str();
  classify->add_option("--mode", ca.mode, "internet or world")->capture_default_str();
  classify->add_option("--tiers", ca.tiers, "Enabled tiers")->capture_default_str();
  add_query(classify, ca);

  EthnicityArgs eth;
  eth.query.tiers = "us,tr,em,ps,ch";
  auto* ethnicity = app.add_subcommand("classify-ethnicity",
                                       "Build and query the census ethnicity model");
  ethnicity->add_option("--census", eth.census, "Census surname CSV; builds the model");
  ethnicity->add_option("--pairs", eth.pairs, "US first/last pairs");
  ethnicity->add_option("--labels", eth.labels, "Nationality labels");
  ethnicity->add_option("--embeddings", eth.embeddings);
  ethnicity->add_option("--taxonomy", eth.taxonomy)->capture_default_str();
  ethnicity->add_option("--out", eth.out, "Model directory")->capture_default_str();
  ethnicity->add_option("--min-count", eth.min_count)->capture_default_str();
  ethnicity->add_option("-k,--k", eth.k)->capture_default_str();
  ethnicity->add_option("--tiers", eth.query.tiers)->capture_default_str();
  add_query(ethnicity, eth.query);

  EvaluateArgs va;
  auto* evaluate = app.add_subcommand("evaluate", "Split, train and score");
  evaluate->add_option("--labels", va.labels)->capture_default_str();
  evaluate->add_option("--train-taxonomy", va.train_taxonomy)->capture_default_str();
  evaluate->add_option("--taxonomy", va.taxonomy, "Scoring taxonomy (projected)");
  evaluate->add_option("--projection", va.projection);
  evaluate->add_option("--embeddings", va.embeddings)->capture_default_str();
  evaluate->add_option("--out", va.out)->capture_default_str();
  evaluate->add_option("--variant", va.variants, "full prior tr tr-em em, or all")
      ->capture_default_str();
  evaluate->add_option("--mode", va.mode)->capture_default_str();
  evaluate->add_option("--runs", va.runs)->capture_default_str();
  evaluate->add_option("--train-frac", va.train_frac)->capture_default_str();
  evaluate->add_option("--seed", va.seed)->capture_default_str();
  evaluate->add_option("--min-count", va.min_count)->capture_default_str();
  evaluate->add_option("-k,--k", va.k)->capture_default_str();
  evaluate->add_option("--sigma", va.sigma)->capture_default_str();
  evaluate->add_option("--excluded", va.excluded, "Target node dropped from scoring")
      ->capture_default_str();

  SimilarityArgs ya;
  auto* similarity = app.add_subcommand("similarity", "Country name-similarity graph");
  similarity->add_option("--labels", ya.labels)->capture_default_str();
  similarity->add_option("--out", ya.out)->capture_default_str();
  similarity->add_option("--threshold", ya.threshold)->capture_default_str();

  ReportArgs ra;
  auto* report = app.add_subcommand("report", "Follower over/under-representation");
  report->add_option("--followers", ra.followers, "first/last pairs")->required();
  report->add_option("--baseline", ra.baseline, "class <TAB> share")->required();
  report->add_option("--model", ra.model)->capture_default_str();
  report->add_flag("--ethnicity", ra.ethnicity, "--model is an ethnicity model");
  report->add_option("--out", ra.out)->capture_default_str();
  report->add_option("--mode", ra.mode)->capture_default_str();
  report->add_option("--dominant", ra.dominant);
  report->add_option("--threshold", ra.threshold)->capture_default_str();
  report->add_option("--sigma", ra.sigma)->capture_default_str();

  ServeArgs sv;
  auto* serve = app.add_subcommand("serve", "HTTP query service");
  serve->add_option("--model", sv.model, "Nationality model or 'none'")->capture_default_str();
  serve->add_option("--ethnicity-model", sv.ethnicity_model);
  serve->add_option("--host", sv.host)->capture_default_str();
  serve->add_option("--port", sv.port)->capture_default_str();
  serve->add_option("--sigma", sv.sigma)->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    Pipeline p(g, out, err);
    if (*synth) RunSynth(p, sa);
    else if (*ingest) RunIngest(p, ia);
    else if (*train) RunTrain(p, ta);
    else if (*estimate) RunEstimate(p, ea);
    else if (*classify) RunClassify(p, ca);
    else if (*ethnicity) RunEthnicity(p, eth);
    else if (*evaluate) RunEvaluate(p, va);
    else if (*similarity) RunSimilarity(p, ya);
    else if (*report) RunReport(p, ra);
    else if (*serve) RunServe(p, sv);
  } catch (const ManifestMismatch& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

int RunCli(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return RunCli(args, std::cout, std::cerr);
}

}  // namespace nameorigin
