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

#include "mtl/mst.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace mtl {
namespace {

constexpr double kNone = -std::numeric_limits<double>::infinity();

// Node ids of a cycle in the head graph, or empty.
std::vector<int> find_cycle(const std::vector<int>& heads) {
  const int n = static_cast<int>(heads.size());
  std::vector<int> state(n, 0);  // 0 unseen, 1 on current path, 2 done
  state[0] = 2;
  for (int start = 1; start < n; ++start) {
    std::vector<int> path;
    int v = start;
    while (state[v] == 0) {
      state[v] = 1;
      path.push_back(v);
      v = heads[v];
    }
    if (state[v] == 1) {
      std::vector<int> cycle;
      for (auto it = path.rbegin(); it != path.rend(); ++it) {
        cycle.push_back(*it);
        if (*it == v) break;
      }
      return cycle;
    }
    for (int p : path) state[p] = 2;
  }
  return {};
}

// Chu-Liu/Edmonds over a square matrix scores[h][d]; node 0 is the root.
std::vector<int> chu_liu_edmonds(const Matrix& scores) {
  const int n = static_cast<int>(scores.size());
  std::vector<int> heads(n, -1);
  for (int d = 1; d < n; ++d) {
    double best = kNone;
    for (int h = 0; h < n; ++h) {
      if (h == d) continue;
      if (heads[d] < 0 || scores[h][d] > best) {
        best = scores[h][d];
        heads[d] = h;
      }
    }
  }

  const std::vector<int> cycle = find_cycle(heads);
  if (cycle.empty()) return heads;

  std::vector<bool> in_cycle(n, false);
  for (int c : cycle) in_cycle[c] = true;
  std::vector<int> old_of_new;
  std::vector<int> new_of_old(n, -1);
  for (int v = 0; v < n; ++v) {
    if (in_cycle[v]) continue;
    new_of_old[v] = static_cast<int>(old_of_new.size());
    old_of_new.push_back(v);
  }
  const int merged = static_cast<int>(old_of_new.size());
  const int m = merged + 1;

  Matrix contracted(m, Vector(m, kNone));
  std::vector<int> leave_from(m, -1);  // cycle node heading a dependent outside
  std::vector<int> enter_at(m, -1);    // cycle node entered from outside
  for (int u : old_of_new) {
    for (int v : old_of_new) {
      if (u != v && v != 0) contracted[new_of_old[u]][new_of_old[v]] = scores[u][v];
    }
  }
  for (int v : old_of_new) {
    if (v == 0) continue;
    double best = kNone;
    for (int c : cycle) {
      if (leave_from[new_of_old[v]] < 0 || scores[c][v] > best ||
          (scores[c][v] == best && c < leave_from[new_of_old[v]])) {
        best = scores[c][v];
        leave_from[new_of_old[v]] = c;
      }
    }
    contracted[merged][new_of_old[v]] = best;
  }
  for (int u : old_of_new) {
    double best = kNone;
    for (int c : cycle) {
      const double gain = scores[u][c] - scores[heads[c]][c];
      if (enter_at[new_of_old[u]] < 0 || gain > best ||
          (gain == best && c < enter_at[new_of_old[u]])) {
        best = gain;
        enter_at[new_of_old[u]] = c;
      }
    }
    contracted[new_of_old[u]][merged] = best;
  }

  const std::vector<int> sub = chu_liu_edmonds(contracted);
  for (int v : old_of_new) {
    if (v == 0) continue;
    const int h = sub[new_of_old[v]];
    heads[v] = h == merged ? leave_from[new_of_old[v]] : old_of_new[h];
  }
  const int entry_head = sub[merged];
  heads[enter_at[entry_head]] = old_of_new[entry_head];
  return heads;
}

}  // namespace

double tree_score(const Matrix& arc_scores, const std::vector<int>& heads) {
  double total = 0.0;
  for (std::size_t d = 0; d < heads.size(); ++d) {
    total += arc_scores[static_cast<std::size_t>(heads[d])][d];
  }
  return total;
}

std::vector<int> mst_decode(const Matrix& arc_scores) {
  if (arc_scores.empty()) throw std::invalid_argument("arc scores need a root row");
  const std::size_t n = arc_scores.size() - 1;
  if (n == 0) return {};
  for (std::size_t h = 0; h <= n; ++h) {
    if (arc_scores[h].size() != n) {
      throw std::invalid_argument("arc score row " + std::to_string(h) + " has " +
                                  std::to_string(arc_scores[h].size()) + " columns, expected " +
                                  std::to_string(n));
    }
    for (double x : arc_scores[h]) {
      if (!std::isfinite(x)) throw std::invalid_argument("arc scores must be finite");
    }
  }

  // Square form: square[h][d] for nodes 0..n, column 0 unused.
  Matrix square(n + 1, Vector(n + 1, kNone));
  for (std::size_t h = 0; h <= n; ++h) {
    for (std::size_t d = 0; d < n; ++d) {
      if (h != d + 1) square[h][d + 1] = arc_scores[h][d];
    }
  }

  auto to_heads = [](const std::vector<int>& tree) {
    return std::vector<int>(tree.begin() + 1, tree.end());
  };

  std::vector<int> heads = to_heads(chu_liu_edmonds(square));
  int root_children = 0;
  for (int h : heads) root_children += h == 0 ? 1 : 0;
  if (root_children <= 1) return heads;

  // Several root children: solve once per candidate root child, keeping
  // only that root arc, and take the best tree (lowest child on ties).
  std::vector<int> best;
  double best_score = kNone;
  for (std::size_t r = 1; r <= n; ++r) {
    Matrix masked = square;
    for (std::size_t d = 1; d <= n; ++d) {
      if (d != r) masked[0][d] = kNone;
    }
    std::vector<int> candidate = to_heads(chu_liu_edmonds(masked));
    const double score = tree_score(arc_scores, candidate);
    if (best.empty() || score > best_score) {
      best_score = score;
      best = std::move(candidate);
    }
  }
  return best;
}

}  // namespace mtl
