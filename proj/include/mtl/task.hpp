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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mtl {

/// Annotation layers, in the order their keys appear in a serialized
/// Document.
enum class Task { lem, pos, ner, srl, dep, sdp, con, amr, dcr };

inline constexpr Task kAllTasks[] = {Task::lem, Task::pos, Task::ner, Task::srl, Task::dep,
                                     Task::sdp, Task::con, Task::amr, Task::dcr};

std::string_view task_name(Task task);

/// Case-insensitive; "LEM" and "lem" both name Task::lem.
std::optional<Task> task_from_name(std::string_view name);

/// De-duplicated task names in canonical order joined by '+', e.g. "pos+dep".
std::string task_key(const std::vector<Task>& tasks);

}  // namespace mtl
