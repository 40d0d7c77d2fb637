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

#include "mtl/penman.hpp"

#include <cctype>
#include <map>
#include <set>

namespace mtl {
namespace {

bool is_special(char c) {
  return c == '(' || c == ')' || c == '/' || c == ':' || c == '"' ||
         std::isspace(static_cast<unsigned char>(c)) != 0;
}

bool needs_quotes(const std::string& value) {
  if (value.empty()) return true;
  for (char c : value) {
    if (is_special(c)) return true;
  }
  return false;
}

std::string quoted(const std::string& value) {
  if (!needs_quotes(value)) return value;
  std::string out = "\"";
  for (char c : value) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

void check_symbol(const std::string& s, std::string_view what) {
  if (needs_quotes(s)) throw FormatError(std::string(what) + " '" + s + "' is not a Penman symbol");
}

struct Graph {
  std::map<std::string, std::string> concepts;
  std::map<std::string, std::vector<const AmrTriple*>> edges;
  std::set<std::string> visited;
};

void write_node(Graph& g, const std::string& var, std::string& out) {
  g.visited.insert(var);
  out += '(';
  out += var;
  out += " / ";
  out += quoted(g.concepts.at(var));
  for (const AmrTriple* edge : g.edges[var]) {
    out += " :";
    out += edge->relation;
    out += ' ';
    if (!g.concepts.contains(edge->target)) {
      out += quoted(edge->target);
    } else if (g.visited.contains(edge->target)) {
      out += edge->target;
    } else {
      write_node(g, edge->target, out);
    }
  }
  out += ')';
}

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  std::vector<AmrTriple> read() {
    skip_space();
    read_node();
    skip_space();
    if (pos_ != text_.size()) error("trailing input");
    return std::move(triples_);
  }

 private:
  std::string read_node() {
    expect('(');
    skip_space();
    std::string var = read_symbol();
    skip_space();
    expect('/');
    skip_space();
    std::string label = read_value();
    if (!seen_.insert(var).second) error("duplicate instance for variable '" + var + "'");
    triples_.push_back(AmrTriple{var, std::string(kAmrInstance), std::move(label)});
    for (;;) {
      skip_space();
      if (pos_ == text_.size()) error("unbalanced parentheses");
      if (peek() == ')') {
        ++pos_;
        return var;
      }
      expect(':');
      std::string role = read_symbol();
      skip_space();
      // Reserve the slot so the edge precedes the nested node's triples.
      const std::size_t slot = triples_.size();
      triples_.push_back(AmrTriple{var, role, {}});
      triples_[slot].target = peek() == '(' ? read_node() : read_value();
    }
  }

  std::string read_value() {
    if (peek() != '"') return read_symbol();
    ++pos_;
    std::string out;
    for (;;) {
      if (pos_ == text_.size()) error("unterminated string");
      char c = text_[pos_++];
      if (c == '"') return out;
      if (c == '\\') {
        if (pos_ == text_.size()) error("unterminated string");
        c = text_[pos_++];
      }
      out += c;
    }
  }

  std::string read_symbol() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && !is_special(text_[pos_])) ++pos_;
    if (pos_ == start) error("expected a symbol");
    return std::string(text_.substr(start, pos_ - start));
  }

  void expect(char c) {
    if (peek() != c) error(std::string("expected '") + c + "'");
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  [[noreturn]] void error(const std::string& what) const {
    throw FormatError("penman, offset " + std::to_string(pos_) + ": " + what);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::set<std::string> seen_;
  std::vector<AmrTriple> triples_;
};

}  // namespace

std::string amr_to_penman(const std::vector<AmrTriple>& triples) {
  if (triples.empty()) throw FormatError("penman: empty graph");
  Graph g;
  for (const auto& t : triples) {
    if (t.relation != kAmrInstance) continue;
    check_symbol(t.source, "variable");
    if (!g.concepts.emplace(t.source, t.target).second) {
      throw FormatError("penman: variable '" + t.source + "' has several instances");
    }
  }
  for (const auto& t : triples) {
    if (!g.concepts.contains(t.source)) {
      throw FormatError("penman: variable '" + t.source + "' has no instance");
    }
    if (t.relation == kAmrInstance) continue;
    check_symbol(t.relation, "relation");
    g.edges[t.source].push_back(&t);
  }
  std::string out;
  write_node(g, triples.front().source, out);
  if (g.visited.size() != g.concepts.size()) {
    for (const auto& [var, _] : g.concepts) {
      if (!g.visited.contains(var)) {
        throw FormatError("penman: variable '" + var + "' is unreachable from the root");
      }
    }
  }
  return out;
}

std::vector<AmrTriple> penman_to_amr(std::string_view text) { return Reader(text).read(); }

}  // namespace mtl
