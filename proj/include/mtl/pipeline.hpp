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

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mtl/document.hpp"
#include "mtl/encoder.hpp"
#include "mtl/sampler.hpp"
#include "mtl/scorer.hpp"
#include "mtl/task.hpp"
#include "mtl/tokenizer.hpp"
#include "mtl/windowing.hpp"

namespace mtl {

/// A task name that is unknown or not served by the pipeline.
class UnknownTaskError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct PipelineConfig {
  std::string identifier;
  std::string language = "en";
  // Canonical order, no duplicates. Task::sdp has no decoder.
  std::vector<Task> tasks;
  // Encoder window, in sub-tokens including the two boundary markers.
  std::size_t window = 512;
  BatchSpec batch;
  // Run the decoders of different tasks on separate threads.
  bool parallel_decoders = true;

  /// Throws std::invalid_argument.
  void validate() const;
};

struct PipelineComponents {
  std::shared_ptr<const Tokenizer> tokenizer;
  std::shared_ptr<const SubwordTokenizer> subwords;
  std::shared_ptr<const Encoder> encoder;
  std::shared_ptr<const Scorer> scorer;
};

/// tokenize -> sub-tokenize -> window -> encode -> pool -> decode.
///
/// Immutable after construction and safe to share between threads.
class Pipeline {
 public:
  Pipeline(PipelineConfig config, PipelineComponents components);

  const PipelineConfig& config() const { return config_; }
  const PipelineComponents& components() const { return components_; }

  std::vector<Sentence> tokenize(std::string_view text) const;

  /// Maps task names to tasks of this pipeline, in canonical order. An
  /// empty list selects every task. Throws UnknownTaskError.
  std::vector<Task> resolve_tasks(const std::vector<std::string>& names) const;

  /// Annotates `sentences` with `tasks` (every task when empty). Zero
  /// sentences give a document with only "tok". Throws
  /// std::invalid_argument for an empty sentence and UnknownTaskError for a
  /// task this pipeline does not serve.
  Document parse(const std::vector<Sentence>& sentences, const std::vector<Task>& tasks = {}) const;
  Document parse_text(std::string_view text, const std::vector<Task>& tasks = {}) const;

  /// Token vectors for every sentence. Windows of all sentences are grouped
  /// by the sampler and each group costs one encoder call.
  std::vector<std::vector<Vector>> encode(const std::vector<Sentence>& sentences) const;

 private:
  std::vector<Task> check_tasks(const std::vector<Task>& tasks) const;

  PipelineConfig config_;
  PipelineComponents components_;
};

}  // namespace mtl
