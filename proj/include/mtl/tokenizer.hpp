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
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "mtl/document.hpp"

namespace mtl {

/// Rule-based tokenizer and sentence splitter.
///
/// Text is split on whitespace; leading and trailing punctuation is
/// detached unless the chunk is a known abbreviation or a single capital
/// initial ("J."). A sentence ends at ".", "!", "?" or "..." (plus any
/// closing quotes or brackets glued to it) when whitespace and an
/// upper-case word follow.
class Tokenizer {
 public:
  Tokenizer();
  explicit Tokenizer(std::unordered_set<std::string> abbreviations);

  /// One abbreviation per line; blank lines and '#' comments are skipped.
  static Tokenizer from_file(const std::filesystem::path& path);

  std::vector<Sentence> tokenize(std::string_view text) const;

  bool is_abbreviation(std::string_view chunk) const;

 private:
  std::unordered_set<std::string> abbreviations_;
};

}  // namespace mtl
