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

#include <cctype>

#include "doctest.h"
#include "mtl/con_tree.hpp"
#include "support/generators.hpp"

using namespace mtl;

namespace {

// Independent reader used to cross-check hand-derived bracketings: returns
// the leaves and the non-terminal labels in pre-order.
void scan(const std::string& text, std::vector<std::string>& labels,
          std::vector<std::string>& leaves) {
  int depth = 0;
  bool expect_label = false;
  std::string atom;
  auto flush = [&] {
    if (atom.empty()) return;
    (expect_label ? labels : leaves).push_back(atom);
    expect_label = false;
    atom.clear();
  };
  for (char c : text) {
    if (c == '(') {
      flush();
      ++depth;
      expect_label = true;
    } else if (c == ')') {
      flush();
      --depth;
      REQUIRE(depth >= 0);
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      flush();
    } else {
      atom += c;
    }
  }
  CHECK(depth == 0);
}

ConNode pre(const std::string& label, const std::string& form) {
  return ConNode{label, {ConNode::leaf(form)}};
}

}  // namespace

TEST_CASE("listing tree prints as a conventional bracketing") {
  const ConNode tree{
      "TOP",
      {ConNode{"S",
               {ConNode{"NP", {pre("NNP", "Emory"), pre("NNP", "NLP")}},
                ConNode{"VP",
                        {pre("VBZ", "is"),
                         ConNode{"PP", {pre("IN", "in"), ConNode{"NP", {pre("NNP", "Atlanta")}}}}}}}}}};
  const std::string expected =
      "(TOP (S (NP (NNP Emory) (NNP NLP)) (VP (VBZ is) (PP (IN in) (NP (NNP Atlanta))))))";
  CHECK(con_to_bracketed(tree) == expected);
  CHECK(bracketed_to_con(expected) == tree);

  std::vector<std::string> labels, leaves;
  scan(expected, labels, leaves);
  CHECK(leaves == std::vector<std::string>{"Emory", "NLP", "is", "in", "Atlanta"});
  CHECK(labels == std::vector<std::string>{"TOP", "S", "NP", "NNP", "NNP", "VP", "VBZ", "PP",
                                           "IN", "NP", "NNP"});
}

TEST_CASE("minimal tree") {
  CHECK(con_to_bracketed(pre("X", "a")) == "(X a)");
  CHECK(bracketed_to_con("(X a)") == pre("X", "a"));
  CHECK(bracketed_to_con("  (X\n  a )  ") == pre("X", "a"));
}

TEST_CASE("malformed bracketings are rejected") {
  CHECK_THROWS_AS(bracketed_to_con("(X a"), FormatError);
  CHECK_THROWS_AS(bracketed_to_con("(X a))"), FormatError);
  CHECK_THROWS_AS(bracketed_to_con("(X)"), FormatError);
  CHECK_THROWS_AS(bracketed_to_con("a"), FormatError);
  CHECK_THROWS_AS(bracketed_to_con(""), FormatError);
  CHECK_THROWS_AS(bracketed_to_con("((X a))"), FormatError);
  CHECK_THROWS_AS(con_to_bracketed(pre("X", "a b")), FormatError);
}

TEST_CASE("flat placeholder tree") {
  CHECK(con_to_bracketed(flat_tree({"a"})) == "(TOP (S (XX a)))");
  CHECK(con_to_bracketed(flat_tree({"a", "b"})) == "(TOP (S (XX a) (XX b)))");
}

TEST_CASE("random trees survive print then parse") {
  testing::Rng rng(11);
  for (int i = 0; i < 500; ++i) {
    const Sentence s = testing::random_sentence(rng, 1, 10);
    const ConNode tree = testing::random_tree(rng, s, 0, s.size());
    std::vector<std::string> leaves;
    tree.collect_leaves(leaves);
    REQUIRE(leaves == s);
    const std::string text = con_to_bracketed(tree);
    CHECK(bracketed_to_con(text) == tree);
  }
}
