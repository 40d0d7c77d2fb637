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

#include "mtl/decoders.hpp"

#include <algorithm>
#include <stdexcept>

#include "mtl/con_tree.hpp"
#include "mtl/mst.hpp"

namespace mtl {
namespace {

std::size_t argmax(const Vector& row) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < row.size(); ++i) {
    if (row[i] > row[best]) best = i;
  }
  return best;
}

}  // namespace

std::vector<std::size_t> argmax_rows(const Matrix& scores, std::size_t width) {
  if (width == 0) throw std::invalid_argument("empty tagset");
  std::vector<std::size_t> out;
  out.reserve(scores.size());
  for (std::size_t t = 0; t < scores.size(); ++t) {
    if (scores[t].size() != width) {
      throw std::invalid_argument("token " + std::to_string(t) + " has " +
                                  std::to_string(scores[t].size()) + " scores for " +
                                  std::to_string(width) + " tags");
    }
    out.push_back(argmax(scores[t]));
  }
  return out;
}

std::vector<std::string> decode_tags(const Matrix& tag_scores,
                                     std::span<const std::string> tagset) {
  std::vector<std::string> out;
  for (std::size_t i : argmax_rows(tag_scores, tagset.size())) out.push_back(tagset[i]);
  return out;
}

std::vector<std::string> decode_lemmas(const Matrix& script_scores,
                                       std::span<const EditScript> scripts,
                                       const Sentence& tokens) {
  if (scripts.empty()) throw std::invalid_argument("empty edit script inventory");
  if (script_scores.size() != tokens.size()) {
    throw std::invalid_argument("lemma scores do not match the sentence length");
  }
  std::vector<std::string> out;
  out.reserve(tokens.size());
  std::vector<std::size_t> order(scripts.size());
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    const Vector& row = script_scores[t];
    if (row.size() != scripts.size()) {
      throw std::invalid_argument("token " + std::to_string(t) + " has " +
                                  std::to_string(row.size()) + " scores for " +
                                  std::to_string(scripts.size()) + " scripts");
    }
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return row[a] > row[b]; });
    std::string lemma = tokens[t];
    for (std::size_t i : order) {
      try {
        lemma = apply_edit_script(scripts[i], tokens[t]);
        break;
      } catch (const InapplicableScript&) {
      }
    }
    out.push_back(std::move(lemma));
  }
  return out;
}

std::vector<Span> decode_ner(std::span<const SpanScore> span_scores,
                             std::span<const std::string> labels, const Sentence& tokens) {
  if (labels.empty()) throw std::invalid_argument("NER label set lacks the null label");
  const int n = static_cast<int>(tokens.size());

  struct Candidate {
    double score;
    int start;
    int end;
    std::size_t label;
  };
  std::vector<Candidate> candidates;
  for (const SpanScore& s : span_scores) {
    if (s.start < 0 || s.start >= s.end || s.end > n) {
      throw std::invalid_argument("span score outside the sentence");
    }
    if (s.scores.size() != labels.size()) {
      throw std::invalid_argument("span score width does not match the label set");
    }
    std::size_t best = 0;
    for (std::size_t l = 1; l < s.scores.size(); ++l) {
      if (best == 0 || s.scores[l] > s.scores[best]) best = l;
    }
    if (best != 0 && s.scores[best] > s.scores[0]) {
      candidates.push_back(Candidate{s.scores[best], s.start, s.end, best});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.start != b.start) return a.start < b.start;
    return a.end < b.end;
  });

  std::vector<bool> taken(static_cast<std::size_t>(n), false);
  std::vector<Span> out;
  for (const Candidate& c : candidates) {
    const bool free = std::none_of(taken.begin() + c.start, taken.begin() + c.end,
                                   [](bool b) { return b; });
    if (!free) continue;
    std::fill(taken.begin() + c.start, taken.begin() + c.end, true);
    out.push_back(Span{labels[c.label], c.start, c.end, span_form(tokens, c.start, c.end)});
  }
  std::sort(out.begin(), out.end(), [](const Span& a, const Span& b) { return a.start < b.start; });
  return out;
}

std::vector<DepArc> decode_dep(const Matrix& arc_scores, const std::vector<Matrix>& label_scores,
                               std::span<const std::string> relations) {
  const std::vector<int> heads = mst_decode(arc_scores);
  if (relations.empty()) throw std::invalid_argument("empty relation set");
  if (label_scores.size() != arc_scores.size()) {
    throw std::invalid_argument("label scores do not match arc scores");
  }
  std::vector<DepArc> out;
  out.reserve(heads.size());
  for (std::size_t d = 0; d < heads.size(); ++d) {
    const Matrix& by_dep = label_scores[static_cast<std::size_t>(heads[d])];
    if (by_dep.size() != heads.size() || by_dep[d].size() != relations.size()) {
      throw std::invalid_argument("label scores do not match the relation set");
    }
    out.push_back(DepArc{heads[d] - 1, relations[argmax(by_dep[d])]});
  }
  return out;
}

Structure stub_structures(const Sentence& tokens, Task task) {
  switch (task) {
    case Task::con:
      return flat_tree(tokens);
    case Task::srl:
      return std::vector<std::vector<Span>>{};
    case Task::amr:
      return std::vector<AmrTriple>{{"c0", std::string(kAmrInstance), "sentence"}};
    default:
      throw std::invalid_argument("no placeholder structure for task '" +
                                  std::string(task_name(task)) + "'");
  }
}

}  // namespace mtl
