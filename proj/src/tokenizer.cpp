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

#include "mtl/tokenizer.hpp"

#include <cctype>
#include <fstream>
#include <stdexcept>

namespace mtl {
namespace {

constexpr std::string_view kLeading = "\"'([{`";
constexpr std::string_view kTrailing = ".,!?;:\"')]}";
constexpr std::string_view kClosing = "\"')]}";

struct Piece {
  std::string text;
  bool ends_chunk = false;
};

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool contains(std::string_view set, char c) { return set.find(c) != std::string_view::npos; }

bool is_terminal(const std::string& t) { return t == "." || t == "!" || t == "?" || t == "..."; }
bool is_closing(const std::string& t) { return t.size() == 1 && contains(kClosing, t[0]); }

const std::unordered_set<std::string>& default_abbreviations() {
  static const std::unordered_set<std::string> kDefault = {
      "Mr.",  "Mrs.", "Ms.",  "Dr.",   "Prof.", "Sr.",   "Jr.",  "St.",  "Mt.",    "Gen.",
      "Gov.", "Sen.", "Rep.", "Rev.",  "Inc.",  "Ltd.",  "Co.",  "Corp.", "Bros.", "vs.",
      "etc.", "e.g.", "i.e.", "cf.",   "al.",   "approx.", "U.S.", "U.K.", "U.N.", "E.U.",
      "a.m.", "p.m.", "Ph.D.", "No.",  "Fig.",  "Ave.",  "Blvd.", "Dept.", "Univ.", "Jan.",
      "Feb.", "Mar.", "Apr.", "Jun.",  "Jul.",  "Aug.",  "Sep.",  "Sept.", "Oct.", "Nov.",
      "Dec."};
  return kDefault;
}

}  // namespace

Tokenizer::Tokenizer() : abbreviations_(default_abbreviations()) {}

Tokenizer::Tokenizer(std::unordered_set<std::string> abbreviations)
    : abbreviations_(std::move(abbreviations)) {}

Tokenizer Tokenizer::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read abbreviation list " + path.string());
  std::unordered_set<std::string> abbreviations;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && is_space(line.back())) line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    abbreviations.insert(line);
  }
  return Tokenizer(std::move(abbreviations));
}

bool Tokenizer::is_abbreviation(std::string_view chunk) const {
  if (chunk.size() == 2 && is_upper(chunk[0]) && chunk[1] == '.') return true;
  return abbreviations_.contains(std::string(chunk));
}

std::vector<Sentence> Tokenizer::tokenize(std::string_view text) const {
  std::vector<Piece> pieces;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    const std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i == start) break;
    std::string_view core = text.substr(start, i - start);

    const std::size_t first = pieces.size();
    while (core.size() > 1 && contains(kLeading, core.front()) && !is_abbreviation(core)) {
      pieces.push_back(Piece{std::string(1, core.front())});
      core.remove_prefix(1);
    }
    std::vector<std::string> trailing;
    while (!core.empty() && !is_abbreviation(core)) {
      if (core.size() > 3 && core.ends_with("...")) {
        trailing.emplace_back("...");
        core.remove_suffix(3);
      } else if (core.size() > 1 && contains(kTrailing, core.back())) {
        trailing.emplace_back(1, core.back());
        core.remove_suffix(1);
      } else {
        break;
      }
    }
    if (!core.empty()) pieces.push_back(Piece{std::string(core)});
    for (auto it = trailing.rbegin(); it != trailing.rend(); ++it) pieces.push_back(Piece{*it});
    if (pieces.size() > first) pieces.back().ends_chunk = true;
  }

  std::vector<Sentence> sentences;
  Sentence current;
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    current.push_back(pieces[k].text);
    if (!is_terminal(pieces[k].text)) continue;
    std::size_t last = k;
    while (!pieces[last].ends_chunk && last + 1 < pieces.size() && is_closing(pieces[last + 1].text)) {
      ++last;
      current.push_back(pieces[last].text);
    }
    k = last;
    if (!pieces[last].ends_chunk || last + 1 >= pieces.size()) continue;
    std::size_t next = last + 1;
    while (next < pieces.size() && !pieces[next].ends_chunk && pieces[next].text.size() == 1 &&
           contains(kLeading, pieces[next].text[0])) {
      ++next;
    }
    if (next < pieces.size() && is_upper(pieces[next].text[0])) {
      sentences.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) sentences.push_back(std::move(current));
  return sentences;
}

}  // namespace mtl
