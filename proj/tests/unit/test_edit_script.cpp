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

#include <fstream>
#include <set>

#include "doctest.h"
#include "mtl/edit_script.hpp"

using namespace mtl;

TEST_CASE("identity script") {
  const EditScript s = derive_edit_script("in", "in");
  CHECK(s.is_identity());
  CHECK(apply_edit_script(EditScript{}, "Whatever") == "Whatever");
}

TEST_CASE("lowercase-only script") {
  const EditScript s = derive_edit_script("Atlanta", "atlanta");
  CHECK(s == EditScript{true, 0, "", 0, ""});
  CHECK(apply_edit_script(s, "Atlanta") == "atlanta");
  CHECK(apply_edit_script(s, "Emory") == "emory");
}

TEST_CASE("scripts derived by hand") {
  // No shared characters: the whole form is replaced.
  CHECK(derive_edit_script("is", "be") == EditScript{false, 0, "", 2, "be"});
  CHECK(derive_edit_script("went", "go") == EditScript{false, 0, "", 4, "go"});
  // Longest common substring "stud".
  CHECK(derive_edit_script("studies", "study") == EditScript{false, 0, "", 3, "y"});
  // Lowercasing shortens the residual ("run" is shared after folding).
  CHECK(derive_edit_script("Running", "run") == EditScript{true, 0, "", 4, ""});
  // Prefix edit.
  CHECK(derive_edit_script("unhappy", "happy") == EditScript{false, 2, "", 0, ""});
  // Upper-case lemmas keep their case.
  CHECK(derive_edit_script("US", "US").is_identity());
}

TEST_CASE("the is/be script round trips") {
  const EditScript s = derive_edit_script("is", "be");
  CHECK(apply_edit_script(s, "is") == "be");
  // The same tag applied to another two-letter form.
  CHECK(apply_edit_script(s, "am") == "be");
}

TEST_CASE("deletions longer than the form are inapplicable") {
  const EditScript s{false, 3, "", 3, ""};
  CHECK_THROWS_AS(apply_edit_script(s, "abcde"), InapplicableScript);
  CHECK(apply_edit_script(s, "abcdef").empty());
  CHECK_THROWS_AS(apply_edit_script(derive_edit_script("walking", "walk"), "go"), InapplicableScript);
}

TEST_CASE("fixture lexicon round trips") {
  std::ifstream in(MTL_DATA_DIR "/lemma_lexicon.tsv");
  REQUIRE(in.good());
  std::string line;
  int pairs = 0;
  std::set<EditScript> inventory;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    REQUIRE(tab != std::string::npos);
    const std::string form = line.substr(0, tab), lemma = line.substr(tab + 1);
    const EditScript s = derive_edit_script(form, lemma);
    CHECK_MESSAGE(apply_edit_script(s, form) == lemma, form << " -> " << lemma);
    inventory.insert(s);
    ++pairs;
  }
  CHECK(pairs >= 500);
  // Scripts generalize: far fewer distinct tags than pairs.
  CHECK(inventory.size() < static_cast<std::size_t>(pairs));
}
