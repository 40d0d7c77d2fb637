// Copyright 2026 The mtl-serve Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mtl/pipeline.hpp"

namespace mtl {

/// An identifier that is malformed or not in the manifest. The message
/// lists the registered identifiers.
class UnknownModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// "LEM_POS_NER_DEP_SDP_CON_AMR_EN" -> {LEM, POS, NER, DEP, SDP, CON, AMR}
/// and "en". Segments are upper-case alphanumerics joined by '_'; the last
/// is a two- or three-letter language code and at least one other names a
/// task (COREF names dcr). Throws UnknownModelError.
struct IdentifierParts {
  std::vector<Task> tasks;
  std::string language;
};
IdentifierParts parse_identifier(std::string_view identifier);

struct ModelSpec {
  PipelineConfig config;
  std::size_t encoder_dim = 32;
  std::size_t subword_chunk = 4;
  std::string scorer = "hash";  // "hash" or "oracle"
  std::filesystem::path lexicon;  // optional
  std::filesystem::path fixture;  // required by "oracle"
};

/// Versioned JSON model manifest. Relative paths resolve against the
/// manifest's directory.
struct Manifest {
  static constexpr int kVersion = 1;

  std::filesystem::path source;
  std::filesystem::path abbreviations;  // optional
  std::map<std::string, ModelSpec> models;

  /// Throws std::runtime_error naming the file and the offending entry.
  static Manifest load(const std::filesystem::path& path);
  static Manifest parse(std::string_view text, const std::filesystem::path& base_dir);

  std::vector<std::string> identifiers() const;
  /// {"version", "source", "models": {id: {"tasks", "language", ...}}}
  std::string summary_json() const;
};

/// $MTL_MANIFEST when set, else manifest.json in the bundled data directory.
std::filesystem::path default_manifest_path();

/// Builds pipelines from a manifest. load() is thread-safe and returns the
/// same instance for repeated loads of one identifier.
class Registry {
 public:
  explicit Registry(Manifest manifest);

  std::shared_ptr<const Pipeline> load(std::string_view identifier) const;
  const Manifest& manifest() const { return manifest_; }

 private:
  std::shared_ptr<const Pipeline> build(const ModelSpec& spec) const;

  Manifest manifest_;
  mutable std::mutex mu_;
  mutable std::map<std::string, std::shared_ptr<const Pipeline>, std::less<>> cache_;
  mutable std::shared_ptr<const Tokenizer> tokenizer_;
};

/// Loads from a process-wide registry over default_manifest_path().
std::shared_ptr<const Pipeline> load(std::string_view identifier);

}  // namespace mtl
