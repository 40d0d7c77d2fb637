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
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mtl/decoders.hpp"
#include "mtl/document.hpp"
#include "mtl/edit_script.hpp"
#include "mtl/scores.hpp"
#include "mtl/task.hpp"

namespace mtl {

/// Label spaces shared by a scorer and the decoders that read its scores.
struct Inventory {
  std::vector<std::string> pos_tags;
  std::vector<EditScript> lemma_scripts;
  // ner_labels[0] is the null label.
  std::vector<std::string> ner_labels;
  std::vector<std::string> dep_relations;
  std::size_t max_span_width = 8;

  /// Penn Treebank tags, OntoNotes entity types, a dependency relation set,
  /// and the identity and lowercase scripts.
  static Inventory standard();

  void add_scripts(const std::map<std::string, std::string>& lexicon);
  /// Adds every label, script and span width used by `doc`.
  void add_labels(const Document& doc);

  std::optional<std::size_t> script_index(const EditScript& script) const;
};

/// form -> lemma. Lines are "form<TAB>lemma"; '#' starts a comment line.
using Lexicon = std::map<std::string, std::string>;
Lexicon load_lexicon(const std::filesystem::path& path);

/// Maps the token vectors of one sentence to decoder inputs.
class Scorer {
 public:
  virtual ~Scorer() = default;

  virtual const Inventory& inventory() const = 0;

  /// Scores for Task::lem, pos, ner or dep.
  virtual ScoreSet score(Task task, const Sentence& tokens,
                         std::span<const Vector> token_vectors) const = 0;

  /// Structure for Task::con, srl or amr. nullopt selects the placeholder
  /// from stub_structures().
  virtual std::optional<Structure> structure(Task task, const Sentence& tokens,
                                             std::span<const Vector> token_vectors) const;

  /// Coreference clusters of a whole document.
  virtual std::vector<CorefCluster> coref(const std::vector<Sentence>& sentences) const;
};

/// Deterministic reference scorer built from feature-hashed linear and
/// bilinear layers over the token vectors. Lemma scores come from the
/// lexicon when it knows the form and prefer the lowercase script
/// otherwise.
class HashScorer final : public Scorer {
 public:
  HashScorer(Inventory inventory, Lexicon lexicon = {}, std::uint64_t seed = 0xC0FFEE);

  const Inventory& inventory() const override { return inventory_; }
  ScoreSet score(Task task, const Sentence& tokens,
                 std::span<const Vector> token_vectors) const override;

 private:
  double weight(std::string_view task, std::string_view label, std::size_t d) const;
  double linear(std::string_view task, std::string_view label, const Vector& v) const;

  ScoreSet score_tags(const Sentence& tokens, std::span<const Vector> vectors) const;
  ScoreSet score_lemmas(const Sentence& tokens) const;
  ScoreSet score_spans(const Sentence& tokens, std::span<const Vector> vectors) const;
  ScoreSet score_arcs(const Sentence& tokens, std::span<const Vector> vectors) const;

  Inventory inventory_;
  Lexicon lexicon_;
  std::uint64_t seed_;
};

/// Replays annotations of known sentences as sharply peaked scores, so the
/// decoders reproduce them exactly. Sentences not in the fixtures, and
/// layers a fixture lacks, go to the fallback scorer.
class OracleScorer final : public Scorer {
 public:
  /// Throws std::invalid_argument if a fixture label is missing from the
  /// fallback's inventory.
  OracleScorer(std::vector<Document> fixtures, std::shared_ptr<const Scorer> fallback);

  const Inventory& inventory() const override { return fallback_->inventory(); }
  ScoreSet score(Task task, const Sentence& tokens,
                 std::span<const Vector> token_vectors) const override;
  std::optional<Structure> structure(Task task, const Sentence& tokens,
                                     std::span<const Vector> token_vectors) const override;
  std::vector<CorefCluster> coref(const std::vector<Sentence>& sentences) const override;

 private:
  struct Location {
    std::size_t document = 0;
    std::size_t sentence = 0;
  };

  const Location* find(const Sentence& tokens) const;

  std::vector<Document> fixtures_;
  std::map<Sentence, Location> index_;
  std::shared_ptr<const Scorer> fallback_;
};

/// Reads one Document JSON per non-blank line.
std::vector<Document> load_documents(const std::filesystem::path& path);

}  // namespace mtl
