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

#include "mtl/con_tree.hpp"

#include <cctype>

namespace mtl {
namespace {

bool is_delimiter(char c) {
  return c == '(' || c == ')' || std::isspace(static_cast<unsigned char>(c)) != 0;
}

void check_atom(const std::string& atom) {
  if (atom.empty()) throw FormatError("empty label in constituency tree");
  for (char c : atom) {
    if (is_delimiter(c)) throw FormatError("label '" + atom + "' cannot be bracketed");
  }
}

void write(const ConNode& node, std::string& out) {
  check_atom(node.label);
  if (node.is_leaf()) {
    out += node.label;
    return;
  }
  out += '(';
  out += node.label;
  for (const auto& child : node.children) {
    out += ' ';
    write(child, out);
  }
  out += ')';
}

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  ConNode read_root() {
    skip_space();
    if (peek() != '(') error("expected '('");
    ConNode root = read_node();
    skip_space();
    if (pos_ != text_.size()) error("trailing input");
    return root;
  }

 private:
  ConNode read_node() {
    skip_space();
    if (peek() != '(') return ConNode::leaf(read_atom());
    ++pos_;
    skip_space();
    ConNode node{read_atom(), {}};
    for (;;) {
      skip_space();
      if (pos_ == text_.size()) error("unbalanced brackets");
      if (peek() == ')') {
        ++pos_;
        break;
      }
      node.children.push_back(read_node());
    }
    if (node.children.empty()) error("non-terminal '" + node.label + "' has no children");
    return node;
  }

  std::string read_atom() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && !is_delimiter(text_[pos_])) ++pos_;
    if (pos_ == start) error("expected a label");
    return std::string(text_.substr(start, pos_ - start));
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  [[noreturn]] void error(const std::string& what) const {
    throw FormatError("bracketed tree, offset " + std::to_string(pos_) + ": " + what);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string con_to_bracketed(const ConNode& tree) {
  std::string out;
  write(tree, out);
  return out;
}

ConNode bracketed_to_con(std::string_view text) { return Reader(text).read_root(); }

ConNode flat_tree(const Sentence& tokens) {
  ConNode s{"S", {}};
  for (const auto& t : tokens) s.children.push_back(ConNode{"XX", {ConNode::leaf(t)}});
  return ConNode{"TOP", {std::move(s)}};
}

}  // namespace mtl
