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

#include "mtl/pipeline.hpp"

#include <algorithm>
#include <future>
#include <variant>

#include "mtl/decoders.hpp"

namespace mtl {
namespace {

using Layer = std::variant<std::vector<std::vector<std::string>>,  // lem, pos
                           std::vector<std::vector<Span>>,         // ner
                           std::vector<std::vector<std::vector<Span>>>,  // srl
                           std::vector<std::vector<DepArc>>,       // dep
                           std::vector<ConNode>,                   // con
                           std::vector<std::vector<AmrTriple>>,    // amr
                           std::vector<CorefCluster>>;             // dcr

std::string served_list(const std::vector<Task>& tasks) {
  std::string out;
  for (Task t : tasks) {
    if (!out.empty()) out += ", ";
    out += task_name(t);
  }
  return out;
}

template <typename T>
T take_structure(std::optional<Structure> structure, Task task, const Sentence& tokens) {
  if (!structure) structure = stub_structures(tokens, task);
  if (!std::holds_alternative<T>(*structure)) {
    throw std::logic_error("scorer returned the wrong structure kind for " +
                           std::string(task_name(task)));
  }
  return std::get<T>(std::move(*structure));
}

Layer decode_task(Task task, const Scorer& scorer, const std::vector<Sentence>& sentences,
                  const std::vector<std::vector<Vector>>& vectors) {
  const Inventory& inv = scorer.inventory();
  const std::size_t count = sentences.size();
  switch (task) {
    case Task::lem:
    case Task::pos: {
      std::vector<std::vector<std::string>> rows;
      for (std::size_t s = 0; s < count; ++s) {
        const ScoreSet scores = scorer.score(task, sentences[s], vectors[s]);
        rows.push_back(task == Task::lem
                           ? decode_lemmas(scores.tag_scores, inv.lemma_scripts, sentences[s])
                           : decode_tags(scores.tag_scores, inv.pos_tags));
      }
      return rows;
    }
    case Task::ner: {
      std::vector<std::vector<Span>> rows;
      for (std::size_t s = 0; s < count; ++s) {
        const ScoreSet scores = scorer.score(task, sentences[s], vectors[s]);
        rows.push_back(decode_ner(scores.span_scores, inv.ner_labels, sentences[s]));
      }
      return rows;
    }
    case Task::dep: {
      std::vector<std::vector<DepArc>> rows;
      for (std::size_t s = 0; s < count; ++s) {
        const ScoreSet scores = scorer.score(task, sentences[s], vectors[s]);
        rows.push_back(decode_dep(scores.arc_scores, scores.label_scores, inv.dep_relations));
      }
      return rows;
    }
    case Task::srl: {
      std::vector<std::vector<std::vector<Span>>> rows;
      for (std::size_t s = 0; s < count; ++s) {
        rows.push_back(take_structure<std::vector<std::vector<Span>>>(
            scorer.structure(task, sentences[s], vectors[s]), task, sentences[s]));
      }
      return rows;
    }
    case Task::con: {
      std::vector<ConNode> rows;
      for (std::size_t s = 0; s < count; ++s) {
        rows.push_back(take_structure<ConNode>(scorer.structure(task, sentences[s], vectors[s]),
                                               task, sentences[s]));
      }
      return rows;
    }
    case Task::amr: {
      std::vector<std::vector<AmrTriple>> rows;
      for (std::size_t s = 0; s < count; ++s) {
        rows.push_back(take_structure<std::vector<AmrTriple>>(
            scorer.structure(task, sentences[s], vectors[s]), task, sentences[s]));
      }
      return rows;
    }
    case Task::dcr:
      return scorer.coref(sentences);
    case Task::sdp:
      break;
  }
  throw std::logic_error("no decoder for task " + std::string(task_name(task)));
}

void assign(Document& doc, Task task, Layer layer) {
  switch (task) {
    case Task::lem: doc.lem = std::get<0>(std::move(layer)); break;
    case Task::pos: doc.pos = std::get<0>(std::move(layer)); break;
    case Task::ner: doc.ner = std::get<1>(std::move(layer)); break;
    case Task::srl: doc.srl = std::get<2>(std::move(layer)); break;
    case Task::dep: doc.dep = std::get<3>(std::move(layer)); break;
    case Task::con: doc.con = std::get<4>(std::move(layer)); break;
    case Task::amr: doc.amr = std::get<5>(std::move(layer)); break;
    case Task::dcr: doc.dcr = std::get<6>(std::move(layer)); break;
    case Task::sdp: break;
  }
}

}  // namespace

void PipelineConfig::validate() const {
  if (tasks.empty()) throw std::invalid_argument("pipeline " + identifier + ": no tasks");
  if (!std::ranges::is_sorted(tasks) || std::ranges::adjacent_find(tasks) != tasks.end()) {
    throw std::invalid_argument("pipeline " + identifier + ": tasks must be unique and ordered");
  }
  if (std::ranges::find(tasks, Task::sdp) != tasks.end()) {
    throw std::invalid_argument("pipeline " + identifier + ": sdp has no decoder");
  }
  if (window < 4) throw std::invalid_argument("pipeline " + identifier + ": window must be >= 4");
  batch.validate();
  if (window > batch.batch_max_tokens) {
    throw std::invalid_argument("pipeline " + identifier +
                                ": window exceeds batch_max_tokens");
  }
}

Pipeline::Pipeline(PipelineConfig config, PipelineComponents components)
    : config_(std::move(config)), components_(std::move(components)) {
  config_.validate();
  if (!components_.tokenizer || !components_.subwords || !components_.encoder ||
      !components_.scorer) {
    throw std::invalid_argument("pipeline " + config_.identifier + ": missing component");
  }
}

std::vector<Sentence> Pipeline::tokenize(std::string_view text) const {
  return components_.tokenizer->tokenize(text);
}

std::vector<Task> Pipeline::resolve_tasks(const std::vector<std::string>& names) const {
  std::vector<Task> tasks;
  for (const std::string& name : names) {
    const auto task = task_from_name(name);
    if (!task) throw UnknownTaskError("unknown task '" + name + "'");
    tasks.push_back(*task);
  }
  return check_tasks(tasks);
}

std::vector<Task> Pipeline::check_tasks(const std::vector<Task>& tasks) const {
  if (tasks.empty()) return config_.tasks;
  std::vector<Task> out = tasks;
  std::ranges::sort(out);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  for (Task t : out) {
    if (std::ranges::find(config_.tasks, t) == config_.tasks.end()) {
      throw UnknownTaskError("task '" + std::string(task_name(t)) + "' is not served by " +
                             config_.identifier + " (serves: " + served_list(config_.tasks) + ")");
    }
  }
  return out;
}

std::vector<std::vector<Vector>> Pipeline::encode(const std::vector<Sentence>& sentences) const {
  struct Item {
    std::size_t sentence;
    std::vector<SubtokenId> ids;
  };
  std::vector<SubtokenSequence> sequences;
  std::vector<WindowPlan> plans;
  std::vector<Item> items;
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    sequences.push_back(subtokenize(sentences[s], *components_.subwords));
    plans.push_back(plan_windows(sequences.back().ids.size(), config_.window));
    for (auto& window : apply_windows<SubtokenId>(sequences.back().ids, plans.back())) {
      items.push_back(Item{s, std::move(window)});
    }
  }

  std::vector<std::size_t> lengths;
  lengths.reserve(items.size());
  for (const Item& item : items) lengths.push_back(item.ids.size());
  const BatchAssignment assignment = build_batches(lengths, config_.batch);

  std::vector<std::vector<std::vector<Vector>>> batched;
  batched.reserve(assignment.batches.size());
  for (const Batch& batch : assignment.batches) {
    std::vector<std::vector<SubtokenId>> windows;
    windows.reserve(batch.indices.size());
    for (std::size_t i : batch.indices) windows.push_back(items[i].ids);
    auto outputs = components_.encoder->encode(windows);
    if (outputs.size() != windows.size()) {
      throw std::runtime_error("encoder returned " + std::to_string(outputs.size()) +
                               " outputs for " + std::to_string(windows.size()) + " windows");
    }
    batched.push_back(std::move(outputs));
  }
  std::vector<std::vector<Vector>> per_window = restore_order(std::move(batched), assignment);

  std::vector<std::vector<Vector>> token_vectors;
  token_vectors.reserve(sentences.size());
  std::size_t next = 0;
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    const std::size_t count = plans[s].windows.size();
    std::vector<std::vector<Vector>> outputs(
        std::make_move_iterator(per_window.begin() + static_cast<std::ptrdiff_t>(next)),
        std::make_move_iterator(per_window.begin() + static_cast<std::ptrdiff_t>(next + count)));
    next += count;
    const std::vector<Vector> restored = restore(outputs, plans[s]);
    token_vectors.push_back(pool_subtokens(sequences[s].alignment, restored));
  }
  return token_vectors;
}

Document Pipeline::parse(const std::vector<Sentence>& sentences,
                         const std::vector<Task>& tasks) const {
  const std::vector<Task> selected = check_tasks(tasks);
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    if (sentences[s].empty()) {
      throw std::invalid_argument("sentence " + std::to_string(s) + " has no tokens");
    }
  }
  Document doc;
  doc.tok = sentences;
  if (sentences.empty()) return doc;

  const auto vectors = encode(sentences);
  const Scorer& scorer = *components_.scorer;
  if (config_.parallel_decoders && selected.size() > 1) {
    std::vector<std::future<Layer>> futures;
    for (Task t : selected) {
      futures.push_back(std::async(std::launch::async, [&, t] {
        return decode_task(t, scorer, sentences, vectors);
      }));
    }
    // get() in task order keeps assembly deterministic and rethrows the
    // first failure.
    std::vector<Layer> layers;
    for (auto& f : futures) f.wait();
    for (auto& f : futures) layers.push_back(f.get());
    for (std::size_t i = 0; i < selected.size(); ++i) assign(doc, selected[i], std::move(layers[i]));
  } else {
    for (Task t : selected) assign(doc, t, decode_task(t, scorer, sentences, vectors));
  }
  doc.validate();
  return doc;
}

Document Pipeline::parse_text(std::string_view text, const std::vector<Task>& tasks) const {
  return parse(tokenize(text), tasks);
}

}  // namespace mtl
