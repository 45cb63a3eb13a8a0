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

#include "nameorigin/model_io.h"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace nameorigin {
namespace {

namespace fs = std::filesystem;

constexpr Source kSources[] = {Source::kUs, Source::kTr, Source::kEm,
                               Source::kPs, Source::kCh};

const LikelihoodTable& TableOf(const RoleTables& r, Source s) {
  switch (s) {
    case Source::kUs:
      return r.us;
    case Source::kTr:
      return r.tr;
    case Source::kEm:
      return r.em;
    case Source::kPs:
      return r.ps;
    case Source::kCh:
      return r.ch;
  }
  return r.tr;
}

LikelihoodTable& TableOf(RoleTables& r, Source s) {
  return const_cast<LikelihoodTable&>(TableOf(std::as_const(r), s));
}

std::string TableFile(Source s, NamePartRole role) {
  std::string name = "likelihood_";
  for (char c : SourceName(s)) name += static_cast<char>(std::tolower(c));
  return name + "_" + std::string(RoleName(role)) + ".tsv";
}

std::ofstream OpenOut(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::ifstream OpenIn(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("missing model artifact " + path.string());
  return in;
}

std::string Fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

void SaveModel(const ModelTables& model, const fs::path& dir,
               const Metadata& metadata) {
  fs::create_directories(dir);
  OpenOut(dir / "taxonomy.taxonomy") << model.taxonomy->Serialize();
  {
    std::ofstream out = OpenOut(dir / "priors.tsv");
    model.priors.Write(out, *model.taxonomy);
  }
  for (NamePartRole role : kRoles) {
    for (Source s : kSources) {
      std::ofstream out = OpenOut(dir / TableFile(s, role));
      TableOf(model.role(role), s).Write(out);
    }
  }
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [k, v] : metadata) j[k] = v;
  OpenOut(dir / "model.json") << j.dump(2) << '\n';
}

std::shared_ptr<ModelTables> LoadModel(const fs::path& dir) {
  auto model = std::make_shared<ModelTables>();
  model->taxonomy =
      std::make_shared<const Taxonomy>(Taxonomy::Load(dir / "taxonomy.taxonomy"));
  {
    std::ifstream in = OpenIn(dir / "priors.tsv");
    model->priors = PriorTable::Read(in, *model->taxonomy);
  }
  for (NamePartRole role : kRoles) {
    for (Source s : kSources) {
      std::ifstream in = OpenIn(dir / TableFile(s, role));
      TableOf(model->role(role), s) =
          LikelihoodTable::Read(in, s, role, model->taxonomy);
    }
  }
  return model;
}

Metadata LoadMetadata(const fs::path& dir) {
  std::ifstream in = OpenIn(dir / "model.json");
  const nlohmann::json j = nlohmann::json::parse(in);
  Metadata m;
  for (const auto& [k, v] : j.items())
    m[k] = v.is_string() ? v.get<std::string>() : v.dump();
  return m;
}

void SaveEthnicityModel(const EthnicityModel& model, const fs::path& dir,
                        const Metadata& metadata) {
  SaveModel(*model.tables, dir, metadata);
  {
    std::ofstream out = OpenOut(dir / "census.tsv");
    for (const auto& [name, entry] : model.census) {
      out << name << '\t' << entry.count;
      for (std::string_view id : kEthnicityIds)
        out << '\t' << Fmt(entry.posterior.Get(std::string(id)));
      out << '\n';
    }
  }
  {
    std::ofstream out = OpenOut(dir / "first_posteriors.tsv");
    for (const auto& [name, post] : model.first_posteriors) {
      out << name;
      for (std::string_view id : kEthnicityIds)
        out << '\t' << Fmt(post.Get(std::string(id)));
      out << '\n';
    }
  }
  std::ofstream out = OpenOut(dir / "excluded_first_names.txt");
  for (const std::string& name : model.excluded_first_names) out << name << '\n';
}

EthnicityModel LoadEthnicityModel(const fs::path& dir) {
  EthnicityModel model;
  model.tables = LoadModel(dir);
  auto read_rows = [&](const char* file, bool with_count, auto&& sink) {
    std::ifstream in = OpenIn(dir / file);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::istringstream ss(line);
      std::string name;
      std::uint64_t count = 0;
      ss >> name;
      if (with_count) ss >> count;
      ClassDistribution d;
      d.node = model.tables->taxonomy->root_id();
      for (std::string_view id : kEthnicityIds) {
        double p = 0.0;
        if (!(ss >> p)) throw std::runtime_error(std::string(file) + ": bad row");
        d.probs[std::string(id)] = p;
      }
      sink(name, count, std::move(d));
    }
  };
  read_rows("census.tsv", true, [&](const std::string& n, std::uint64_t c,
                                    ClassDistribution d) {
    model.census[n] = {std::move(d), c};
  });
  read_rows("first_posteriors.tsv", false,
            [&](const std::string& n, std::uint64_t, ClassDistribution d) {
              model.first_posteriors[n] = std::move(d);
            });
  std::ifstream in = OpenIn(dir / "excluded_first_names.txt");
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) model.excluded_first_names.push_back(line);
  return model;
}

}  // namespace nameorigin
