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

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mtl/document.hpp"
#include "mtl/edit_script.hpp"
#include "mtl/scores.hpp"
#include "mtl/task.hpp"

namespace mtl {

/// Per-token argmax; ties go to the lowest tag index.
std::vector<std::size_t> argmax_rows(const Matrix& scores, std::size_t width);

std::vector<std::string> decode_tags(const Matrix& tag_scores,
                                     std::span<const std::string> tagset);

/// Lemma of each token from the highest-scoring script that applies to it.
std::vector<std::string> decode_lemmas(const Matrix& script_scores,
                                       std::span<const EditScript> scripts,
                                       const Sentence& tokens);

/// Flat entity decoding. A span is a candidate when its best non-null label
/// outscores the null label (labels[0]); candidates are taken by descending
/// score (then start, then end) and kept unless they overlap a kept span.
std::vector<Span> decode_ner(std::span<const SpanScore> span_scores,
                             std::span<const std::string> labels, const Sentence& tokens);

/// Tree from mst_decode, relation from the argmax of each chosen arc.
std::vector<DepArc> decode_dep(const Matrix& arc_scores, const std::vector<Matrix>& label_scores,
                               std::span<const std::string> relations);

using Structure = std::variant<ConNode, std::vector<std::vector<Span>>, std::vector<AmrTriple>>;

/// Shape-valid placeholders for tasks whose models are not bundled:
/// a flat (TOP (S (XX tok) ...)) tree, no SRL frames, and a single AMR
/// instance. Throws std::invalid_argument for other tasks.
Structure stub_structures(const Sentence& tokens, Task task);

}  // namespace mtl
