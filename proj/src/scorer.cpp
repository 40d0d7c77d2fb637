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

#include "mtl/scorer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "internal/hash.hpp"

namespace mtl {
namespace {

template <typename T>
void append_unique(std::vector<T>& items, const T& item) {
  if (std::find(items.begin(), items.end(), item) == items.end()) items.push_back(item);
}

template <typename T>
std::optional<std::size_t> index_of(const std::vector<T>& items, const T& item) {
  auto it = std::find(items.begin(), items.end(), item);
  if (it == items.end()) return std::nullopt;
  return static_cast<std::size_t>(it - items.begin());
}

std::string ascii_lower(std::string s) {
  for (char& c : s) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return s;
}

bool has_upper(const std::string& s) {
  return std::any_of(s.begin(), s.end(), [](char c) { return c >= 'A' && c <= 'Z'; });
}

EditScript lowercase_script() {
  EditScript script;
  script.lowercase = true;
  return script;
}

Matrix one_hot_rows(std::size_t rows, std::size_t width, const std::vector<std::size_t>& hot) {
  Matrix m(rows, Vector(width, 0.0));
  for (std::size_t i = 0; i < rows; ++i) m[i][hot[i]] = 1.0;
  return m;
}

}  // namespace

Inventory Inventory::standard() {
  Inventory inv;
  inv.pos_tags = {"CC",  "CD",  "DT",   "EX",  "FW",  "IN",  "JJ",    "JJR",   "JJS", "LS",
                  "MD",  "NN",  "NNS",  "NNP", "NNPS", "PDT", "POS",  "PRP",   "PRP$", "RB",
                  "RBR", "RBS", "RP",   "SYM", "TO",  "UH",  "VB",    "VBD",   "VBG", "VBN",
                  "VBP", "VBZ", "WDT",  "WP",  "WP$", "WRB", "$",     "``",    "''",  ",",
                  ".",   ":",   "-LRB-", "-RRB-", "HYPH", "NFP", "ADD", "AFX", "XX"};
  inv.lemma_scripts = {EditScript{}, lowercase_script()};
  inv.ner_labels = {"O",   "PERSON", "NORP",    "FAC",     "ORG",     "GPE",     "LOC",
                    "PRODUCT", "EVENT", "WORK_OF_ART", "LAW", "LANGUAGE", "DATE", "TIME",
                    "PERCENT", "MONEY", "QUANTITY", "ORDINAL", "CARDINAL"};
  inv.dep_relations = {"root", "nsbj", "csbj", "obj",  "dat",  "comp", "expl", "adv",
                       "advcl", "advnp", "appo", "attr", "aux",  "cop",  "com",  "conj",
                       "cc",   "dep",  "det",  "case", "meta", "neg",  "num",  "poss",
                       "ppmod", "prt", "punct", "relcl", "acl", "mark", "lv"};
  return inv;
}

void Inventory::add_scripts(const Lexicon& lexicon) {
  for (const auto& [form, lemma] : lexicon) {
    append_unique(lemma_scripts, derive_edit_script(form, lemma));
  }
}

void Inventory::add_labels(const Document& doc) {
  for (std::size_t s = 0; s < doc.tok.size(); ++s) {
    const Sentence& tokens = doc.tok[s];
    if (doc.pos) {
      for (const auto& tag : (*doc.pos)[s]) append_unique(pos_tags, tag);
    }
    if (doc.lem) {
      for (std::size_t i = 0; i < tokens.size(); ++i) {
        append_unique(lemma_scripts, derive_edit_script(tokens[i], (*doc.lem)[s][i]));
      }
    }
    if (doc.ner) {
      for (const Span& span : (*doc.ner)[s]) {
        append_unique(ner_labels, span.label);
        max_span_width = std::max(max_span_width, static_cast<std::size_t>(span.end - span.start));
      }
    }
    if (doc.dep) {
      for (const DepArc& arc : (*doc.dep)[s]) append_unique(dep_relations, arc.relation);
    }
  }
}

std::optional<std::size_t> Inventory::script_index(const EditScript& script) const {
  return index_of(lemma_scripts, script);
}

Lexicon load_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read lexicon " + path.string());
  Lexicon lexicon;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == line.size()) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": expected form<TAB>lemma");
    }
    lexicon.emplace(line.substr(0, tab), line.substr(tab + 1));
  }
  return lexicon;
}

std::vector<Document> load_documents(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read documents " + path.string());
  std::vector<Document> docs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      docs.push_back(doc_from_json(line));
    } catch (const std::exception& e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return docs;
}

std::optional<Structure> Scorer::structure(Task, const Sentence&, std::span<const Vector>) const {
  return std::nullopt;
}

std::vector<CorefCluster> Scorer::coref(const std::vector<Sentence>&) const { return {}; }

// ---------------------------------------------------------------------------
// HashScorer

HashScorer::HashScorer(Inventory inventory, Lexicon lexicon, std::uint64_t seed)
    : inventory_(std::move(inventory)), lexicon_(std::move(lexicon)), seed_(seed) {
  if (inventory_.pos_tags.empty() || inventory_.lemma_scripts.empty() ||
      inventory_.ner_labels.size() < 2 || inventory_.dep_relations.empty()) {
    throw std::invalid_argument("HashScorer: inventory has an empty label space");
  }
  if (inventory_.max_span_width == 0) {
    throw std::invalid_argument("HashScorer: max_span_width must be positive");
  }
}

double HashScorer::weight(std::string_view task, std::string_view label, std::size_t d) const {
  const std::uint64_t key = internal::fnv1a(label, internal::fnv1a(task) ^ seed_);
  return internal::hashed_unit(key, d);
}

double HashScorer::linear(std::string_view task, std::string_view label, const Vector& v) const {
  double sum = 0.0;
  for (std::size_t d = 0; d < v.size(); ++d) sum += weight(task, label, d) * v[d];
  return v.empty() ? 0.0 : sum / std::sqrt(static_cast<double>(v.size()));
}

ScoreSet HashScorer::score(Task task, const Sentence& tokens,
                           std::span<const Vector> token_vectors) const {
  if (token_vectors.size() != tokens.size()) {
    throw std::invalid_argument("HashScorer: " + std::to_string(token_vectors.size()) +
                                " vectors for " + std::to_string(tokens.size()) + " tokens");
  }
  switch (task) {
    case Task::pos: return score_tags(tokens, token_vectors);
    case Task::lem: return score_lemmas(tokens);
    case Task::ner: return score_spans(tokens, token_vectors);
    case Task::dep: return score_arcs(tokens, token_vectors);
    default:
      throw std::invalid_argument("HashScorer: no scores for task " +
                                  std::string(task_name(task)));
  }
}

ScoreSet HashScorer::score_tags(const Sentence& tokens, std::span<const Vector> vectors) const {
  ScoreSet out;
  out.tag_scores.assign(tokens.size(), Vector(inventory_.pos_tags.size()));
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    for (std::size_t t = 0; t < inventory_.pos_tags.size(); ++t) {
      out.tag_scores[i][t] = linear("pos", inventory_.pos_tags[t], vectors[i]);
    }
  }
  return out;
}

ScoreSet HashScorer::score_lemmas(const Sentence& tokens) const {
  const auto& scripts = inventory_.lemma_scripts;
  const std::size_t fallback =
      inventory_.script_index(lowercase_script()).value_or(
          inventory_.script_index(EditScript{}).value_or(0));
  ScoreSet out;
  out.tag_scores.assign(tokens.size(), Vector(scripts.size(), 0.0));
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const std::string& form = tokens[i];
    auto it = lexicon_.find(form);
    if (it == lexicon_.end() && has_upper(form)) it = lexicon_.find(ascii_lower(form));
    std::optional<std::size_t> hit;
    if (it != lexicon_.end()) {
      // A lowercased lookup still derives from the original form.
      hit = inventory_.script_index(derive_edit_script(form, it->second));
    }
    out.tag_scores[i][hit.value_or(fallback)] = hit ? 2.0 : 1.0;
  }
  return out;
}

ScoreSet HashScorer::score_spans(const Sentence& tokens, std::span<const Vector> vectors) const {
  // A label has to beat this margin to propose an entity.
  constexpr double kNullScore = 1.0;
  const auto& labels = inventory_.ner_labels;
  const std::size_t n = tokens.size();
  ScoreSet out;
  for (std::size_t start = 0; start < n; ++start) {
    Vector mean(vectors[start].size(), 0.0);
    for (std::size_t end = start + 1; end <= n && end - start <= inventory_.max_span_width;
         ++end) {
      const std::size_t width = end - start;
      for (std::size_t d = 0; d < mean.size(); ++d) {
        mean[d] += (vectors[end - 1][d] - mean[d]) / static_cast<double>(width);
      }
      SpanScore span{static_cast<int>(start), static_cast<int>(end), Vector(labels.size())};
      span.scores[0] = kNullScore;
      for (std::size_t l = 1; l < labels.size(); ++l) span.scores[l] = linear("ner", labels[l], mean);
      out.span_scores.push_back(std::move(span));
    }
  }
  return out;
}

ScoreSet HashScorer::score_arcs(const Sentence& tokens, std::span<const Vector> vectors) const {
  const std::size_t n = tokens.size();
  const std::size_t dim = vectors.empty() ? 0 : vectors[0].size();
  Vector root(dim);
  for (std::size_t d = 0; d < dim; ++d) root[d] = weight("dep", "<root>", d);
  auto head_vector = [&](std::size_t h) -> const Vector& { return h == 0 ? root : vectors[h - 1]; };

  ScoreSet out;
  out.arc_scores.assign(n + 1, Vector(n, 0.0));
  out.label_scores.assign(n + 1, Matrix(n, Vector(inventory_.dep_relations.size(), 0.0)));
  const double scale = dim == 0 ? 1.0 : static_cast<double>(dim);
  for (std::size_t h = 0; h <= n; ++h) {
    const Vector& hv = head_vector(h);
    for (std::size_t d = 0; d < n; ++d) {
      if (h == d + 1) continue;
      double bilinear = 0.0;
      for (std::size_t k = 0; k < dim; ++k) bilinear += weight("dep", "<arc>", k) * hv[k] * vectors[d][k];
      // Nearby heads are likelier, as in most treebanks.
      const double distance = h == 0 ? 0.0 : std::abs(static_cast<double>(h) - (d + 1.0));
      out.arc_scores[h][d] = bilinear / scale - 0.1 * distance;

      Vector pair(dim);
      for (std::size_t k = 0; k < dim; ++k) pair[k] = hv[k] + vectors[d][k];
      for (std::size_t r = 0; r < inventory_.dep_relations.size(); ++r) {
        out.label_scores[h][d][r] = linear("dep", inventory_.dep_relations[r], pair);
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// OracleScorer

OracleScorer::OracleScorer(std::vector<Document> fixtures, std::shared_ptr<const Scorer> fallback)
    : fixtures_(std::move(fixtures)), fallback_(std::move(fallback)) {
  if (!fallback_) throw std::invalid_argument("OracleScorer: null fallback scorer");
  const Inventory& inv = fallback_->inventory();
  for (std::size_t d = 0; d < fixtures_.size(); ++d) {
    const Document& doc = fixtures_[d];
    doc.validate();
    Inventory needed = inv;
    needed.add_labels(doc);
    if (needed.pos_tags.size() != inv.pos_tags.size() ||
        needed.lemma_scripts.size() != inv.lemma_scripts.size() ||
        needed.ner_labels.size() != inv.ner_labels.size() ||
        needed.dep_relations.size() != inv.dep_relations.size() ||
        needed.max_span_width != inv.max_span_width) {
      throw std::invalid_argument("OracleScorer: fixture " + std::to_string(d) +
                                  " uses labels outside the scorer inventory");
    }
    for (std::size_t s = 0; s < doc.tok.size(); ++s) index_.try_emplace(doc.tok[s], Location{d, s});
  }
}

const OracleScorer::Location* OracleScorer::find(const Sentence& tokens) const {
  auto it = index_.find(tokens);
  return it == index_.end() ? nullptr : &it->second;
}

ScoreSet OracleScorer::score(Task task, const Sentence& tokens,
                             std::span<const Vector> token_vectors) const {
  const Location* at = find(tokens);
  if (at == nullptr) return fallback_->score(task, tokens, token_vectors);
  const Document& doc = fixtures_[at->document];
  const Inventory& inv = inventory();
  const std::size_t n = tokens.size();
  ScoreSet out;
  switch (task) {
    case Task::pos: {
      if (!doc.pos) break;
      std::vector<std::size_t> hot;
      for (const auto& tag : (*doc.pos)[at->sentence]) hot.push_back(*index_of(inv.pos_tags, tag));
      out.tag_scores = one_hot_rows(n, inv.pos_tags.size(), hot);
      return out;
    }
    case Task::lem: {
      if (!doc.lem) break;
      std::vector<std::size_t> hot;
      for (std::size_t i = 0; i < n; ++i) {
        hot.push_back(*inv.script_index(derive_edit_script(tokens[i], (*doc.lem)[at->sentence][i])));
      }
      out.tag_scores = one_hot_rows(n, inv.lemma_scripts.size(), hot);
      return out;
    }
    case Task::ner: {
      if (!doc.ner) break;
      const auto& gold = (*doc.ner)[at->sentence];
      for (std::size_t start = 0; start < n; ++start) {
        for (std::size_t end = start + 1; end <= n && end - start <= inv.max_span_width; ++end) {
          SpanScore span{static_cast<int>(start), static_cast<int>(end),
                         Vector(inv.ner_labels.size(), 0.0)};
          span.scores[0] = 1.0;
          for (const Span& g : gold) {
            if (g.start == span.start && g.end == span.end) {
              span.scores[0] = 0.0;
              span.scores[*index_of(inv.ner_labels, g.label)] = 2.0;
            }
          }
          out.span_scores.push_back(std::move(span));
        }
      }
      return out;
    }
    case Task::dep: {
      if (!doc.dep) break;
      const auto& gold = (*doc.dep)[at->sentence];
      out.arc_scores.assign(n + 1, Vector(n, 0.0));
      out.label_scores.assign(n + 1, Matrix(n, Vector(inv.dep_relations.size(), 0.0)));
      for (std::size_t d = 0; d < n; ++d) {
        const auto h = static_cast<std::size_t>(gold[d].head + 1);
        out.arc_scores[h][d] = 1.0;
        out.label_scores[h][d][*index_of(inv.dep_relations, gold[d].relation)] = 1.0;
      }
      return out;
    }
    default:
      break;
  }
  return fallback_->score(task, tokens, token_vectors);
}

std::optional<Structure> OracleScorer::structure(Task task, const Sentence& tokens,
                                                 std::span<const Vector> token_vectors) const {
  if (const Location* at = find(tokens)) {
    const Document& doc = fixtures_[at->document];
    if (task == Task::con && doc.con) return Structure{(*doc.con)[at->sentence]};
    if (task == Task::srl && doc.srl) return Structure{(*doc.srl)[at->sentence]};
    if (task == Task::amr && doc.amr) return Structure{(*doc.amr)[at->sentence]};
  }
  return fallback_->structure(task, tokens, token_vectors);
}

std::vector<CorefCluster> OracleScorer::coref(const std::vector<Sentence>& sentences) const {
  for (const Document& doc : fixtures_) {
    if (doc.dcr && doc.tok == sentences) return *doc.dcr;
  }
  return fallback_->coref(sentences);
}

}  // namespace mtl
