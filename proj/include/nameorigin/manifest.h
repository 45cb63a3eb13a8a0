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

#ifndef NAMEORIGIN_MANIFEST_H_
#define NAMEORIGIN_MANIFEST_H_

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nameorigin {

std::string Sha256Hex(std::string_view data);
// Hex SHA-256 of the file contents. Throws when the file cannot be read.
std::string HashFile(const std::filesystem::path& path);

class ManifestMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StageRecord {
  std::string config_hash;
  std::map<std::string, std::string> inputs;   // path -> sha256
  std::map<std::string, std::string> outputs;  // path -> sha256
  std::string completed_at;                    // UTC, ISO 8601
};

// Pipeline manifest kept as manifest.json in the work directory. Paths are
// stored relative to the work directory when they lie inside it.
class Manifest {
 public:
  explicit Manifest(std::filesystem::path workdir);

  // Reads manifest.json if present.
  static Manifest Load(const std::filesystem::path& workdir);
  void Save() const;

  const std::map<std::string, StageRecord>& stages() const { return stages_; }

  // The stage ran with `config_hash` on exactly these input contents and its
  // outputs are still the files it wrote.
  bool UpToDate(const std::string& stage, const std::string& config_hash,
                const std::vector<std::filesystem::path>& inputs,
                const std::vector<std::filesystem::path>& outputs) const;

  // Throws ManifestMismatch when an input is a recorded output of another
  // stage but its contents no longer match, or when an input is missing.
  void CheckInputs(const std::string& stage,
                   const std::vector<std::filesystem::path>& inputs) const;

  void Record(const std::string& stage, const std::string& config_hash,
              const std::vector<std::filesystem::path>& inputs,
              const std::vector<std::filesystem::path>& outputs);

  // Config hash of the stage that last wrote `artifact`, if any.
  std::string ProducerHash(const std::filesystem::path& artifact) const;

 private:
  std::string Key(const std::filesystem::path& p) const;

  std::filesystem::path workdir_;
  std::map<std::string, StageRecord> stages_;
};

}  // namespace nameorigin

#endif  // NAMEORIGIN_MANIFEST_H_
