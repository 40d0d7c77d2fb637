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

#include "mtl/registry.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace mtl {
namespace {

using nlohmann::json;

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& item : items) {
    if (!out.empty()) out += ", ";
    out += item;
  }
  return out;
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    out.emplace_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::optional<Task> identifier_task(const std::string& segment) {
  if (segment == "COREF") return Task::dcr;
  if (segment == "DCR") return std::nullopt;
  return task_from_name(segment);
}

template <typename T>
T field(const json& object, const char* key, const T& fallback) {
  if (!object.contains(key)) return fallback;
  return object.at(key).get<T>();
}

std::filesystem::path resolve(const std::filesystem::path& base, const json& object,
                              const char* key) {
  if (!object.contains(key)) return {};
  std::filesystem::path p = object.at(key).get<std::string>();
  return p.is_absolute() ? p : base / p;
}

ModelSpec parse_model(const std::string& id, const json& entry,
                      const std::filesystem::path& base) {
  const IdentifierParts parts = parse_identifier(id);
  ModelSpec spec;
  spec.config.identifier = id;
  spec.config.language = field<std::string>(entry, "language", parts.language);
  if (spec.config.language != parts.language) {
    throw std::invalid_argument("language '" + spec.config.language +
                                "' does not match the identifier suffix");
  }
  for (const auto& name : entry.at("tasks").get<std::vector<std::string>>()) {
    const auto task = task_from_name(name);
    if (!task) throw std::invalid_argument("unknown task '" + name + "'");
    spec.config.tasks.push_back(*task);
  }
  std::ranges::sort(spec.config.tasks);
  spec.config.tasks.erase(std::unique(spec.config.tasks.begin(), spec.config.tasks.end()),
                          spec.config.tasks.end());
  spec.config.window = field<std::size_t>(entry, "window", spec.config.window);
  if (entry.contains("batch")) {
    const json& batch = entry.at("batch");
    spec.config.batch.batch_size = field<std::size_t>(batch, "batch_size", 128);
    spec.config.batch.batch_max_tokens = field<std::size_t>(batch, "batch_max_tokens", 12800);
  }
  spec.config.parallel_decoders = field<bool>(entry, "parallel_decoders", true);
  spec.config.validate();

  if (entry.contains("encoder")) {
    const json& encoder = entry.at("encoder");
    if (field<std::string>(encoder, "type", "hash") != "hash") {
      throw std::invalid_argument("unknown encoder type");
    }
    spec.encoder_dim = field<std::size_t>(encoder, "dim", spec.encoder_dim);
    spec.subword_chunk = field<std::size_t>(encoder, "subword_chunk", spec.subword_chunk);
    if (spec.encoder_dim == 0 || spec.subword_chunk == 0) {
      throw std::invalid_argument("encoder dim and subword_chunk must be positive");
    }
  }
  if (entry.contains("scorer")) {
    const json& scorer = entry.at("scorer");
    spec.scorer = field<std::string>(scorer, "type", "hash");
    spec.lexicon = resolve(base, scorer, "lexicon");
    spec.fixture = resolve(base, scorer, "fixture");
  }
  if (spec.scorer != "hash" && spec.scorer != "oracle") {
    throw std::invalid_argument("unknown scorer type '" + spec.scorer + "'");
  }
  if (spec.scorer == "oracle" && spec.fixture.empty()) {
    throw std::invalid_argument("oracle scorer needs a fixture");
  }
  return spec;
}

}  // namespace

IdentifierParts parse_identifier(std::string_view identifier) {
  const std::string id(identifier);
  auto malformed = [&](const std::string& why) {
    return UnknownModelError("malformed model identifier '" + id + "': " + why);
  };
  const auto segments = split(identifier, '_');
  if (segments.size() < 2) throw malformed("expected TASKS_LANGUAGE");
  for (const auto& segment : segments) {
    if (segment.empty() || !std::ranges::all_of(segment, [](char c) {
          return (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
        })) {
      throw malformed("segments must be upper-case alphanumerics");
    }
  }
  IdentifierParts parts;
  const std::string& language = segments.back();
  if (language.size() < 2 || language.size() > 3 ||
      !std::ranges::all_of(language, [](char c) { return c >= 'A' && c <= 'Z'; })) {
    throw malformed("last segment must be a language code");
  }
  for (char c : language) parts.language += static_cast<char>(c - 'A' + 'a');
  for (std::size_t i = 0; i + 1 < segments.size(); ++i) {
    if (const auto task = identifier_task(segments[i])) parts.tasks.push_back(*task);
  }
  if (parts.tasks.empty()) throw malformed("no task segment");
  return parts;
}

Manifest Manifest::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read manifest " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    Manifest m = parse(buffer.str(), path.parent_path());
    m.source = path;
    return m;
  } catch (const std::exception& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

Manifest Manifest::parse(std::string_view text, const std::filesystem::path& base_dir) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("invalid manifest JSON: ") + e.what());
  }
  if (!root.is_object()) throw std::runtime_error("manifest must be a JSON object");
  if (!root.contains("version") || root.at("version") != kVersion) {
    throw std::runtime_error("unsupported manifest version (expected " +
                             std::to_string(kVersion) + ")");
  }
  Manifest m;
  m.abbreviations = resolve(base_dir, root, "abbreviations");
  if (!root.contains("models") || !root.at("models").is_object()) {
    throw std::runtime_error("manifest has no \"models\" object");
  }
  for (const auto& [id, entry] : root.at("models").items()) {
    try {
      m.models.emplace(id, parse_model(id, entry, base_dir));
    } catch (const std::exception& e) {
      throw std::runtime_error("model " + id + ": " + e.what());
    }
  }
  return m;
}

std::vector<std::string> Manifest::identifiers() const {
  std::vector<std::string> ids;
  for (const auto& [id, spec] : models) ids.push_back(id);
  return ids;
}

std::string Manifest::summary_json() const {
  nlohmann::ordered_json out;
  out["version"] = kVersion;
  out["source"] = source.string();
  out["models"] = nlohmann::ordered_json::object();
  for (const auto& [id, spec] : models) {
    nlohmann::ordered_json entry;
    std::vector<std::string> tasks;
    for (Task t : spec.config.tasks) tasks.emplace_back(task_name(t));
    entry["tasks"] = tasks;
    entry["language"] = spec.config.language;
    entry["window"] = spec.config.window;
    entry["batch"] = {{"batch_size", spec.config.batch.batch_size},
                      {"batch_max_tokens", spec.config.batch.batch_max_tokens}};
    entry["scorer"] = spec.scorer;
    out["models"][id] = entry;
  }
  return out.dump();
}

std::filesystem::path default_manifest_path() {
  if (const char* env = std::getenv("MTL_MANIFEST"); env != nullptr && *env != '\0') return env;
  return std::filesystem::path(MTL_DATA_DIR) / "manifest.json";
}

Registry::Registry(Manifest manifest) : manifest_(std::move(manifest)) {}

std::shared_ptr<const Pipeline> Registry::load(std::string_view identifier) const {
  std::lock_guard lock(mu_);
  if (auto it = cache_.find(identifier); it != cache_.end()) return it->second;
  auto spec = manifest_.models.find(std::string(identifier));
  if (spec == manifest_.models.end()) {
    std::string why;
    try {
      parse_identifier(identifier);
      why = "unknown model identifier '" + std::string(identifier) + "'";
    } catch (const UnknownModelError& e) {
      why = e.what();
    }
    throw UnknownModelError(why + "; available: " + join(manifest_.identifiers()));
  }
  auto pipeline = build(spec->second);
  cache_.emplace(std::string(identifier), pipeline);
  return pipeline;
}

std::shared_ptr<const Pipeline> Registry::build(const ModelSpec& spec) const {
  if (!tokenizer_) {
    tokenizer_ = manifest_.abbreviations.empty()
                     ? std::make_shared<const Tokenizer>()
                     : std::make_shared<const Tokenizer>(Tokenizer::from_file(manifest_.abbreviations));
  }
  Inventory inventory = Inventory::standard();
  Lexicon lexicon;
  if (!spec.lexicon.empty()) {
    lexicon = load_lexicon(spec.lexicon);
    inventory.add_scripts(lexicon);
  }
  std::vector<Document> fixtures;
  if (spec.scorer == "oracle") {
    fixtures = load_documents(spec.fixture);
    for (const Document& doc : fixtures) inventory.add_labels(doc);
  }
  std::shared_ptr<const Scorer> scorer =
      std::make_shared<const HashScorer>(std::move(inventory), std::move(lexicon));
  if (spec.scorer == "oracle") {
    scorer = std::make_shared<const OracleScorer>(std::move(fixtures), scorer);
  }
  PipelineComponents components{
      tokenizer_, std::make_shared<const ChunkSubwordTokenizer>(spec.subword_chunk),
      std::make_shared<const HashEncoder>(spec.encoder_dim), std::move(scorer)};
  return std::make_shared<const Pipeline>(spec.config, std::move(components));
}

std::shared_ptr<const Pipeline> load(std::string_view identifier) {
  static const Registry registry(Manifest::load(default_manifest_path()));
  return registry.load(identifier);
}

}  // namespace mtl
