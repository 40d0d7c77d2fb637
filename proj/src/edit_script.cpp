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

#include "mtl/edit_script.hpp"

#include <vector>

namespace mtl {
namespace {

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

struct Common {
  std::size_t form_pos = 0;
  std::size_t lemma_pos = 0;
  std::size_t length = 0;
};

// Longest common substring; earliest in the form, then in the lemma.
Common longest_common(std::string_view a, std::string_view b) {
  Common best;
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : 0;
      if (cur[j] > best.length) best = Common{i - cur[j], j - cur[j], cur[j]};
    }
    std::swap(prev, cur);
  }
  return best;
}

EditScript script_for(std::string_view form, std::string_view lemma, bool lowercase) {
  EditScript s;
  s.lowercase = lowercase;
  const Common c = longest_common(form, lemma);
  if (c.length == 0) {
    s.suffix_delete = form.size();
    s.suffix_insert = std::string(lemma);
    return s;
  }
  s.prefix_delete = c.form_pos;
  s.prefix_insert = std::string(lemma.substr(0, c.lemma_pos));
  s.suffix_delete = form.size() - c.form_pos - c.length;
  s.suffix_insert = std::string(lemma.substr(c.lemma_pos + c.length));
  return s;
}

std::size_t cost(const EditScript& s) {
  return s.prefix_delete + s.prefix_insert.size() + s.suffix_delete + s.suffix_insert.size();
}

}  // namespace

bool EditScript::is_identity() const { return *this == EditScript{}; }

std::string EditScript::to_string() const {
  std::string out = lowercase ? "L" : "-";
  out += " -" + std::to_string(prefix_delete) + "+\"" + prefix_insert + "\"";
  out += " -" + std::to_string(suffix_delete) + "+\"" + suffix_insert + "\"";
  return out;
}

EditScript derive_edit_script(std::string_view form, std::string_view lemma) {
  EditScript plain = script_for(form, lemma, false);
  const std::string lowered = ascii_lower(form);
  if (lowered == form) return plain;
  EditScript folded = script_for(lowered, lemma, true);
  return cost(folded) <= cost(plain) ? folded : plain;
}

std::string apply_edit_script(const EditScript& script, std::string_view form) {
  const std::string base = script.lowercase ? ascii_lower(form) : std::string(form);
  if (script.prefix_delete + script.suffix_delete > base.size()) {
    throw InapplicableScript("edit script " + script.to_string() + " deletes more than '" +
                             std::string(form) + "' holds");
  }
  std::string out = script.prefix_insert;
  out.append(base, script.prefix_delete,
             base.size() - script.prefix_delete - script.suffix_delete);
  out += script.suffix_insert;
  return out;
}

}  // namespace mtl
