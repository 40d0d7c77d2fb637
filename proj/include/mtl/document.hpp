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

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mtl {

using Sentence = std::vector<std::string>;

/// Raised when a document, tree or graph violates its structural invariants
/// or cannot be read from its serialized form.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A labeled token range [start, end) of one sentence. Used for NER
/// entities and SRL arguments alike.
struct Span {
  std::string label;
  int start = 0;
  int end = 0;
  std::string form;

  bool operator==(const Span&) const = default;
};

/// Head of a token (-1 is the artificial root) and the relation label.
struct DepArc {
  int head = -1;
  std::string relation;

  bool operator==(const DepArc&) const = default;
};

/// Constituency tree node. A node without children is a terminal and its
/// label holds the token form.
struct ConNode {
  std::string label;
  std::vector<ConNode> children;

  static ConNode leaf(std::string form) { return ConNode{std::move(form), {}}; }

  bool is_leaf() const { return children.empty(); }
  void collect_leaves(std::vector<std::string>& out) const;

  bool operator==(const ConNode&) const = default;
};

struct AmrTriple {
  std::string source;
  std::string relation;
  std::string target;

  bool operator==(const AmrTriple&) const = default;
  auto operator<=>(const AmrTriple&) const = default;
};

inline constexpr std::string_view kAmrInstance = "instance";

struct Mention {
  int sentence = 0;
  int start = 0;
  int end = 0;
  std::string text;

  bool operator==(const Mention&) const = default;
};

using CorefCluster = std::vector<Mention>;

/// Per-request annotation container. `tok` is always present; every other
/// task is optional and, when present, parallel to `tok` (except `dcr`,
/// which is document-level).
struct Document {
  std::vector<Sentence> tok;
  std::optional<std::vector<std::vector<std::string>>> lem;
  std::optional<std::vector<std::vector<std::string>>> pos;
  std::optional<std::vector<std::vector<Span>>> ner;
  // One entry per predicate-argument frame.
  std::optional<std::vector<std::vector<std::vector<Span>>>> srl;
  std::optional<std::vector<std::vector<DepArc>>> dep;
  // Secondary dependencies: every token may carry several arcs.
  std::optional<std::vector<std::vector<std::vector<DepArc>>>> sdp;
  std::optional<std::vector<ConNode>> con;
  std::optional<std::vector<std::vector<AmrTriple>>> amr;
  std::optional<std::vector<CorefCluster>> dcr;

  bool operator==(const Document&) const = default;

  /// Throws FormatError naming the offending task and sentence.
  void validate() const;

  /// Sentences [begin, end) as a standalone document. Coreference clusters
  /// are restricted to mentions inside the range and re-indexed.
  Document slice(std::size_t begin, std::size_t end) const;
};

/// Tokens [start, end) joined by single spaces.
std::string span_form(const Sentence& tokens, int start, int end);

std::string doc_to_json(const Document& doc);
Document doc_from_json(std::string_view text);

}  // namespace mtl
