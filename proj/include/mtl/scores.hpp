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

#include <vector>

#include "mtl/windowing.hpp"

namespace mtl {

using Matrix = std::vector<Vector>;

/// Scores of every label (index 0 is the null label) for tokens [start, end).
struct SpanScore {
  int start = 0;
  int end = 0;
  Vector scores;
};

/// Decoder inputs produced by a scorer for one sentence of n tokens. Only
/// the members relevant to the scored task are filled.
struct ScoreSet {
  // [token][tag]
  Matrix tag_scores;
  // (n+1) x n; arc_scores[h][d] scores head h (0 = root, h = i+1 for token i)
  // for dependent token d.
  Matrix arc_scores;
  // [h][d][relation], same indexing as arc_scores.
  std::vector<Matrix> label_scores;
  std::vector<SpanScore> span_scores;
};

}  // namespace mtl
