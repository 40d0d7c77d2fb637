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

/// Penn-Treebank bracketing: `(LABEL child ...)` for non-terminals, the bare
/// form for terminals. Labels and forms must not contain whitespace or
/// parentheses.
std::string con_to_bracketed(const ConNode& tree);

/// Inverse of con_to_bracketed. Throws FormatError on unbalanced brackets,
/// empty non-terminals or trailing input.
ConNode bracketed_to_con(std::string_view text);

// Sentence-level placeholder tree: (TOP (S (XX tok) ...)).
ConNode flat_tree(const Sentence& tokens);

}  // namespace mtl
