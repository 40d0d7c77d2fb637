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

#include "mtl/task.hpp"

#include <algorithm>
#include <cctype>

namespace mtl {

std::string_view task_name(Task task) {
  switch (task) {
    case Task::lem: return "lem";
    case Task::pos: return "pos";
    case Task::ner: return "ner";
    case Task::srl: return "srl";
    case Task::dep: return "dep";
    case Task::sdp: return "sdp";
    case Task::con: return "con";
    case Task::amr: return "amr";
    case Task::dcr: return "dcr";
  }
  return "?";
}

std::optional<Task> task_from_name(std::string_view name) {
  std::string lower(name);
  std::ranges::transform(lower, lower.begin(),
                         [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (Task t : kAllTasks) {
    if (task_name(t) == lower) return t;
  }
  return std::nullopt;
}

std::string task_key(const std::vector<Task>& tasks) {
  std::vector<Task> sorted = tasks;
  std::ranges::sort(sorted);
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::string out;
  for (Task t : sorted) {
    if (!out.empty()) out += '+';
    out += task_name(t);
  }
  return out;
}

}  // namespace mtl
