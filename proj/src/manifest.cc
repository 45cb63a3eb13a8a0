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

#include "nameorigin/manifest.h"

#include <openssl/evp.h>

#include <chrono>
#include <ctime>
#include <fstream>
#include <iterator>
#include <memory>

#include "json.hpp"

namespace nameorigin {
namespace {

namespace fs = std::filesystem;

std::string ToHex(const unsigned char* digest, unsigned len) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xf];
  }
  return out;
}

std::string NowUtc() {
  const std::time_t t =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::string Sha256Hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned len = 0;
  if (!EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(),
                  nullptr))
    throw std::runtime_error("sha256 failed");
  return ToHex(digest, len);
}

std::string HashFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                              EVP_MD_CTX_free);
  EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf, in.gcount());
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest, &len);
  return ToHex(digest, len);
}

Manifest::Manifest(fs::path workdir) : workdir_(std::move(workdir)) {}

Manifest Manifest::Load(const fs::path& workdir) {
  Manifest m(workdir);
  std::ifstream in(workdir / "manifest.json");
  if (!in) return m;
  const nlohmann::json j = nlohmann::json::parse(in);
  for (const auto& [stage, rec] : j.at("stages").items()) {
    StageRecord r;
    r.config_hash = rec.at("config_hash").get<std::string>();
    r.inputs = rec.at("inputs").get<std::map<std::string, std::string>>();
    r.outputs = rec.at("outputs").get<std::map<std::string, std::string>>();
    r.completed_at = rec.value("completed_at", "");
    m.stages_[stage] = std::move(r);
  }
  return m;
}

void Manifest::Save() const {
  nlohmann::ordered_json j;
  j["stages"] = nlohmann::ordered_json::object();
  for (const auto& [stage, r] : stages_) {
    j["stages"][stage] = {{"config_hash", r.config_hash},
                          {"inputs", r.inputs},
                          {"outputs", r.outputs},
                          {"completed_at", r.completed_at}};
  }
  fs::create_directories(workdir_);
  std::ofstream out(workdir_ / "manifest.json");
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("cannot write manifest");
}

std::string Manifest::Key(const fs::path& p) const {
  const fs::path abs = fs::weakly_canonical(p);
  const fs::path base = fs::weakly_canonical(workdir_);
  const fs::path rel = abs.lexically_relative(base);
  if (!rel.empty() && *rel.begin() != "..") return rel.generic_string();
  return abs.generic_string();
}

bool Manifest::UpToDate(const std::string& stage, const std::string& config_hash,
                        const std::vector<fs::path>& inputs,
                        const std::vector<fs::path>& outputs) const {
  auto it = stages_.find(stage);
  if (it == stages_.end() || it->second.config_hash != config_hash) return false;
  const StageRecord& r = it->second;
  if (r.inputs.size() != inputs.size() || r.outputs.size() != outputs.size())
    return false;
  auto same = [&](const std::map<std::string, std::string>& recorded,
                  const fs::path& p) {
    auto f = recorded.find(Key(p));
    return f != recorded.end() && fs::exists(p) && HashFile(p) == f->second;
  };
  for (const fs::path& p : inputs)
    if (!same(r.inputs, p)) return false;
  for (const fs::path& p : outputs)
    if (!same(r.outputs, p)) return false;
  return true;
}

void Manifest::CheckInputs(const std::string& stage,
                           const std::vector<fs::path>& inputs) const {
  for (const fs::path& p : inputs) {
    if (!fs::exists(p))
      throw ManifestMismatch(stage + ": missing artifact " + p.string());
    const std::string key = Key(p);
    for (const auto& [producer, r] : stages_) {
      if (producer == stage) continue;
      auto f = r.outputs.find(key);
      if (f != r.outputs.end() && HashFile(p) != f->second)
        throw ManifestMismatch(stage + ": " + p.string() +
                               " no longer matches the output of stage '" +
                               producer + "' (config " +
                               r.config_hash.substr(0, 12) +
                               "); rerun it or pass --force");
    }
  }
}

void Manifest::Record(const std::string& stage, const std::string& config_hash,
                      const std::vector<fs::path>& inputs,
                      const std::vector<fs::path>& outputs) {
  StageRecord r;
  r.config_hash = config_hash;
  for (const fs::path& p : inputs) r.inputs[Key(p)] = HashFile(p);
  for (const fs::path& p : outputs) r.outputs[Key(p)] = HashFile(p);
  r.completed_at = NowUtc();
  stages_[stage] = std::move(r);
}

std::string Manifest::ProducerHash(const fs::path& artifact) const {
  const std::string key = Key(artifact);
  for (const auto& [stage, r] : stages_)
    if (r.outputs.count(key)) return r.config_hash;
  return {};
}

}  // namespace nameorigin
