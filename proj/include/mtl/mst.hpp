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

#include "mtl/scores.hpp"

namespace mtl {

/// Maximum spanning arborescence of an (n+1) x n arc score matrix, rooted
/// at node 0, with exactly one token attached to the root. Returns the head
/// of every token (0 = root, i+1 = token i). Ties go to the lowest head.
///
/// Throws std::invalid_argument on ragged or non-finite scores.
std::vector<int> mst_decode(const Matrix& arc_scores);

/// Sum of arc_scores[heads[d]][d].
double tree_score(const Matrix& arc_scores, const std::vector<int>& heads);

}  // namespace mtl
