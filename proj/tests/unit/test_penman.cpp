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

#include <set>

#include "doctest.h"
#include "mtl/penman.hpp"
#include "support/generators.hpp"

using namespace mtl;

namespace {

std::set<AmrTriple> as_set(const std::vector<AmrTriple>& triples) {
  return {triples.begin(), triples.end()};
}

}  // namespace

// Expected strings below were produced by the reference `penman` Python
// package (penman.encode(graph, indent=None)) and frozen here.

TEST_CASE("listing triples serialize to penman") {
  const std::vector<AmrTriple> triples = {{"c0", "ARG1", "c1"},
                                          {"c0", "ARG2", "c2"},
                                          {"c0", "instance", "be-located-at-91"},
                                          {"c1", "instance", "emory nlp"},
                                          {"c2", "instance", "atlanta"}};
  const std::string expected = R"((c0 / be-located-at-91 :ARG1 (c1 / "emory nlp") :ARG2 (c2 / atlanta)))";
  CHECK(amr_to_penman(triples) == expected);
  CHECK(as_set(penman_to_amr(expected)) == as_set(triples));
}

TEST_CASE("re-entrancy and constants") {
  const std::vector<AmrTriple> triples = {
      {"a", "instance", "want-01"}, {"a", "ARG0", "b"},      {"b", "instance", "boy"},
      {"a", "ARG1", "c"},           {"c", "instance", "go-02"}, {"c", "ARG0", "b"},
      {"c", "mod", "New York"},     {"c", "quant", "5"}};
  const std::string expected =
      R"((a / want-01 :ARG0 (b / boy) :ARG1 (c / go-02 :ARG0 b :mod "New York" :quant 5)))";
  CHECK(amr_to_penman(triples) == expected);
  CHECK(as_set(penman_to_amr(expected)) == as_set(triples));
}

TEST_CASE("single instance") {
  CHECK(amr_to_penman({{"c0", "instance", "dog"}}) == "(c0 / dog)");
  CHECK(penman_to_amr("(c0 / dog)") == std::vector<AmrTriple>{{"c0", "instance", "dog"}});
}

TEST_CASE("escaped quotes inside constants") {
  const std::vector<AmrTriple> triples = {{"x", "instance", "say-01"}, {"x", "ARG1", "a \"b\" \\c"}};
  const std::string text = amr_to_penman(triples);
  CHECK(text == R"((x / say-01 :ARG1 "a \"b\" \\c"))");
  CHECK(penman_to_amr(text) == triples);
}

TEST_CASE("invalid graphs are rejected") {
  CHECK_THROWS_AS(amr_to_penman({}), FormatError);
  CHECK_THROWS_AS(amr_to_penman({{"c0", "ARG0", "c1"}}), FormatError);
  CHECK_THROWS_AS(amr_to_penman({{"c0", "instance", "a"}, {"c0", "instance", "b"}}), FormatError);
  // c1 is never reached from the root c0
  CHECK_THROWS_AS(amr_to_penman({{"c0", "instance", "a"}, {"c1", "instance", "b"}}), FormatError);
  CHECK_THROWS_AS(amr_to_penman({{"c 0", "instance", "a"}}), FormatError);
}

TEST_CASE("malformed penman is rejected") {
  CHECK_THROWS_AS(penman_to_amr("(c0 / dog"), FormatError);
  CHECK_THROWS_AS(penman_to_amr("(c0 / dog))"), FormatError);
  CHECK_THROWS_AS(penman_to_amr("(c0 dog)"), FormatError);
  CHECK_THROWS_AS(penman_to_amr("(c0 / dog :ARG0 (c0 / cat))"), FormatError);
  CHECK_THROWS_AS(penman_to_amr("(c0 / \"dog)"), FormatError);
  CHECK_THROWS_AS(penman_to_amr(""), FormatError);
}

TEST_CASE("random graphs survive serialize then parse") {
  testing::Rng rng(5);
  for (int i = 0; i < 500; ++i) {
    const auto triples = testing::random_amr(rng);
    const std::string text = amr_to_penman(triples);
    const auto back = penman_to_amr(text);
    CHECK(as_set(back) == as_set(triples));
    CHECK(amr_to_penman(back) == text);
  }
}
