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

#include <string>
#include <string_view>
#include <vector>

#include "mtl/document.hpp"

namespace mtl {

/// Serializes AMR triples as a single-line Penman string rooted at the
/// source of the first triple. Each variable is expanded at its first
/// mention; later mentions are bare re-entrancies. Constants containing
/// whitespace or Penman punctuation are double-quoted.
///
/// Throws FormatError when a source variable lacks an instance triple, a
/// variable has two instances, or a variable is unreachable from the root.
std::string amr_to_penman(const std::vector<AmrTriple>& triples);

/// Parses a Penman string back into triples (instance first, then each
/// role in reading order).
std::vector<AmrTriple> penman_to_amr(std::string_view text);

}  // namespace mtl
