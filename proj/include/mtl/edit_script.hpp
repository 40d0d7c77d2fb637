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

#include <compare>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mtl {

class InapplicableScript : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Token-to-lemma transformation: optionally lowercase the form, then
/// replace a prefix and a suffix.
struct EditScript {
  bool lowercase = false;
  std::size_t prefix_delete = 0;
  std::string prefix_insert;
  std::size_t suffix_delete = 0;
  std::string suffix_insert;

  bool is_identity() const;
  std::string to_string() const;

  bool operator==(const EditScript&) const = default;
  auto operator<=>(const EditScript&) const = default;
};

/// The residual around the longest common substring of the (possibly
/// lowercased) form and the lemma becomes the prefix and suffix edits.
/// Lowercasing is used when the form has upper-case letters and it does
/// not make the script longer. Case folding is ASCII-only.
EditScript derive_edit_script(std::string_view form, std::string_view lemma);

/// Throws InapplicableScript when the deletions exceed the form.
std::string apply_edit_script(const EditScript& script, std::string_view form);

}  // namespace mtl
