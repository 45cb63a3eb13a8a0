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

#include <gtest/gtest.h>

#include <atomic>
#include <future>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "nameorigin/cli.h"
#include "nameorigin/manifest.h"
#include "nameorigin/model_io.h"
#include "nameorigin/result_json.h"
#include "nameorigin/service.h"
#include "test_util.h"

namespace nameorigin {
namespace {

using testing::Label;
using testing::Name;
using testing::TempDir;
namespace fs = std::filesystem;

std::shared_ptr<const ModelTables> StandardModel() {
  auto tax = std::make_shared<const Taxonomy>(
      Taxonomy::Load(testing::DataDir() / "standard" / "taxonomy.taxonomy"));
  std::ifstream in(testing::DataDir() / "standard" / "labels.tsv");
  std::vector<Rejection> rejects;
  auto labels = ReadLabeledNames(in, MultiPartPolicy::kStrict, &rejects);
  return std::make_shared<const ModelTables>(
      BuildModel(labels, tax, nullptr, {}, ModelConfig{}));
}

struct CliRun {
  int status;
  std::string out;
  std::string err;
};

CliRun Cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int status = RunCli(args, out, err);
  return {status, out.str(), err.str()};
}

TEST(Sha256Test, KnownVector) {
  EXPECT_EQ(Sha256Hex("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(ManifestTest, RecordAndCheck) {
  TempDir dir;
  const fs::path a = dir.path() / "a.txt", b = dir.path() / "b.txt";
  testing::WriteFile(a, "input");
  testing::WriteFile(b, "output");
  Manifest m(dir.path());
  m.Record("one", "h1", {a}, {b});
  m.Save();
  Manifest loaded = Manifest::Load(dir.path());
  EXPECT_TRUE(loaded.UpToDate("one", "h1", {a}, {b}));
  EXPECT_FALSE(loaded.UpToDate("one", "h2", {a}, {b}));
  EXPECT_EQ(loaded.ProducerHash(b), "h1");
  EXPECT_NO_THROW(loaded.CheckInputs("two", {b}));
  testing::WriteFile(b, "tampered");
  EXPECT_FALSE(loaded.UpToDate("one", "h1", {a}, {b}));
  EXPECT_THROW(loaded.CheckInputs("two", {b}), ManifestMismatch);
  EXPECT_THROW(loaded.CheckInputs("two", {dir.path() / "missing"}), ManifestMismatch);
}

TEST(ModelIoTest, RoundTrip) {
  auto model = StandardModel();
  TempDir dir;
  SaveModel(*model, dir.path(), {{"k", "10"}});
  auto loaded = LoadModel(dir.path());
  EXPECT_EQ(*loaded->taxonomy, *model->taxonomy);
  EXPECT_EQ(loaded->priors, model->priors);
  for (NamePartRole r : kRoles) {
    EXPECT_EQ(loaded->role(r).tr, model->role(r).tr);
    EXPECT_EQ(loaded->role(r).ps, model->role(r).ps);
    EXPECT_EQ(loaded->role(r).ch, model->role(r).ch);
  }
  EXPECT_EQ(LoadMetadata(dir.path()).at("k"), "10");
  NameClassifier a(model), b(loaded);
  for (auto n : {Name("qiang", "lee"), Name("maria", "lopez"), Name("zzz", "qqq")})
    EXPECT_EQ(ResultToJson(a.Classify(n, PriorMode::kWorld)),
              ResultToJson(b.Classify(n, PriorMode::kWorld)));
  EXPECT_THROW(LoadModel(dir.path() / "nope"), std::exception);
}

TEST(ResultJsonTest, Shape) {
  NameClassifier c(StandardModel());
  auto j = nlohmann::json::parse(
      ResultToJson(c.Classify(Name("qiang", "lee"), PriorMode::kWorld)));
  EXPECT_EQ(j["leaf"], "Chinese");
  EXPECT_EQ(j["mode"], "world");
  EXPECT_EQ(j["taxonomy"], "standard");
  ASSERT_EQ(j["path"].size(), 2u);
  EXPECT_EQ(j["path"][0]["node"], "Root");
  double sum = 0.0;
  for (auto& [k, v] : j["path"][0]["probs"].items()) sum += v.get<double>();
  EXPECT_NEAR(sum, 1.0, 1e-9);
  EXPECT_EQ(j["evidence"].size(), 4u);
  EXPECT_FALSE(j["low_confidence"].get<bool>());
}

TEST(ServiceTest, StatusCodes) {
  auto nat = std::make_shared<const NameClassifier>(StandardModel());
  QueryService s(nat, nullptr);
  ServiceResponse ok = s.Handle("/classify", {{"first", "Qiang"}, {"last", "Lee"},
                                             {"mode", "world"}});
  EXPECT_EQ(ok.status, 200);
  EXPECT_EQ(nlohmann::json::parse(ok.body)["leaf"], "Chinese");
  EXPECT_EQ(s.Handle("/classify", {{"first", "qiang"}}).status, 400);
  EXPECT_EQ(s.Handle("/classify", {{"first", "q"}, {"last", "lee"}}).status, 400);
  EXPECT_EQ(s.Handle("/classify", {{"first", "qiang"}, {"last", "lee"}, {"mode", "x"}})
                .status,
            400);
  EXPECT_EQ(s.Handle("/nope", {}).status, 404);
  ServiceResponse eth = s.Handle("/ethnicity", {{"first", "qiang"}, {"last", "lee"}});
  EXPECT_EQ(eth.status, 503);
  EXPECT_TRUE(nlohmann::json::parse(eth.body).contains("error"));
}

TEST(HttpServerTest, ParallelIdenticalRequests) {
  auto nat = std::make_shared<const NameClassifier>(StandardModel());
  auto svc = std::make_shared<const QueryService>(nat, nullptr);
  HttpServer server(svc);
  const int port = server.Bind("127.0.0.1", 0);
  std::thread t([&] { server.Run(); });

  HttpServer other(svc);
  EXPECT_THROW(other.Bind("127.0.0.1", port), std::runtime_error);

  const std::string expected =
      svc->Handle("/classify", {{"first", "john"}, {"last", "smith"}}).body;
  std::vector<std::future<std::pair<int, std::string>>> futures;
  for (int i = 0; i < 100; ++i)
    futures.push_back(std::async(std::launch::async, [port] {
      httplib::Client cli("127.0.0.1", port);
      auto r = cli.Get("/classify?first=John&last=Smith");
      if (!r) return std::pair<int, std::string>{-1, httplib::to_string(r.error())};
      return std::pair<int, std::string>{r->status, r->body};
    }));
  for (auto& f : futures) {
    auto [status, body] = f.get();
    EXPECT_EQ(status, 200);
    EXPECT_EQ(body, expected);
  }
  httplib::Client cli("127.0.0.1", port);
  auto missing = cli.Get("/classify?first=john");
  ASSERT_TRUE(missing);
  EXPECT_EQ(missing->status, 400);
  auto unknown = cli.Get("/other");
  ASSERT_TRUE(unknown);
  EXPECT_EQ(unknown->status, 404);
  server.Stop();
  t.join();
}

TEST(CliTest, StandardFixtureEndToEnd) {
  TempDir work;
  const std::string data = (testing::DataDir() / "standard").string();
  const std::string wd = work.path().string();
  CliRun e = Cli({"--workdir", wd, "--quiet", "estimate", "--labels", data + "/labels.tsv",
                  "--taxonomy", data + "/taxonomy.taxonomy", "--embeddings", "none",
                  "--min-count", "1"});
  ASSERT_EQ(e.status, 0) << e.err;
  CliRun c = Cli({"--workdir", wd, "classify", "--name", "Qiang Lee", "--mode", "world"});
  ASSERT_EQ(c.status, 0) << c.err;
  EXPECT_EQ(nlohmann::json::parse(c.out)["leaf"], "Chinese");

  CliRun again = Cli({"--workdir", wd, "estimate", "--labels", data + "/labels.tsv",
                      "--taxonomy", data + "/taxonomy.taxonomy", "--embeddings", "none",
                      "--min-count", "1"});
  EXPECT_EQ(again.status, 0);
  EXPECT_NE(again.err.find("estimate: up to date"), std::string::npos) << again.err;

  CliRun batch = Cli({"--workdir", wd, "classify", "--input", data + "/queries.tsv",
                      "--output", wd + "/out.tsv"});
  ASSERT_EQ(batch.status, 0) << batch.err;
  std::string tsv = testing::ReadFile(work.path() / "out.tsv");
  EXPECT_EQ(tsv.rfind("first\tlast\tleaf", 0), 0u);
  EXPECT_NE(tsv.find("qiang\tlee\tChinese\t"), std::string::npos);

  // Relative paths resolve inside the work directory.
  testing::WriteFile(work.path() / "mine.tsv", "qiang\tlee\n");
  CliRun rel = Cli({"--workdir", wd, "classify", "--input", "mine.tsv", "--output",
                    "sub/rel.tsv"});
  ASSERT_EQ(rel.status, 0) << rel.err;
  EXPECT_NE(testing::ReadFile(work.path() / "sub" / "rel.tsv").find("qiang\tlee\tChinese"),
            std::string::npos);

  EXPECT_NE(Cli({"--workdir", wd, "classify", "--name", "Qiang Lee", "--mode", "bad"}).status,
            0);
  EXPECT_NE(Cli({"--workdir", wd, "no-such-command"}).status, 0);
}

TEST(CliTest, ResumeAndMismatch) {
  TempDir work;
  const std::string wd = work.path().string();
  const std::vector<std::string> synth = {"--workdir", wd, "synth", "--owners", "40",
                                          "--labels", "400"};
  ASSERT_EQ(Cli(synth).status, 0);
  ASSERT_EQ(Cli({"--workdir", wd, "ingest"}).status, 0);
  CliRun skip = Cli({"--workdir", wd, "ingest"});
  EXPECT_NE(skip.err.find("ingest: up to date"), std::string::npos);

  testing::WriteFile(work.path() / "ingest" / "labels.filtered.tsv", "x\ty\tXA\t1\n");
  CliRun bad = Cli({"--workdir", wd, "estimate", "--embeddings", "none"});
  EXPECT_EQ(bad.status, 3);
  EXPECT_NE(bad.err.find("labels.filtered.tsv"), std::string::npos) << bad.err;

  // Rerunning the producer repairs the chain.
  ASSERT_EQ(Cli({"--workdir", wd, "ingest"}).status, 0);
  CliRun good = Cli({"--workdir", wd, "--quiet", "estimate", "--embeddings", "none"});
  EXPECT_EQ(good.status, 0) << good.err;
}

TEST(CliTest, BinaryRuns) {
  std::string out;
  EXPECT_EQ(testing::RunCommand(testing::CliPath().string() + " --help", &out), 0);
  EXPECT_NE(out.find("classify"), std::string::npos);
}

}  // namespace
}  // namespace nameorigin
