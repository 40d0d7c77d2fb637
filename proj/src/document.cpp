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

#include "mtl/document.hpp"

#include <map>
#include <set>
#include <string>

#include "json.hpp"

namespace mtl {
namespace {

using ojson = nlohmann::ordered_json;
using json = nlohmann::json;

[[noreturn]] void fail(std::string_view task, std::size_t sentence, const std::string& what) {
  throw FormatError(std::string(task) + ": sentence " + std::to_string(sentence) + ": " + what);
}

template <typename T>
void check_parallel(std::string_view task, const std::optional<std::vector<T>>& rows,
                    std::size_t sentences) {
  if (rows && rows->size() != sentences) {
    throw FormatError(std::string(task) + ": " + std::to_string(rows->size()) +
                      " rows for " + std::to_string(sentences) + " sentences");
  }
}

void check_span(std::string_view task, std::size_t i, const Sentence& tokens, const Span& span) {
  const int n = static_cast<int>(tokens.size());
  if (span.start < 0 || span.start >= span.end || span.end > n) {
    fail(task, i, "span [" + std::to_string(span.start) + ", " + std::to_string(span.end) +
                      ") out of range for " + std::to_string(n) + " tokens");
  }
  if (span.form != span_form(tokens, span.start, span.end)) {
    fail(task, i, "span form '" + span.form + "' does not match its tokens");
  }
}

void check_arc(std::string_view task, std::size_t i, int index, int n, const DepArc& arc) {
  if (arc.head < -1 || arc.head >= n || arc.head == index) {
    fail(task, i, "token " + std::to_string(index) + " has invalid head " +
                      std::to_string(arc.head));
  }
}

// --- writing ---------------------------------------------------------------

ojson span_json(const Span& s) { return ojson::array({s.label, s.start, s.end, s.form}); }

ojson arc_json(const DepArc& a) { return ojson::array({a.head, a.relation}); }

ojson con_json(const ConNode& node) {
  if (node.is_leaf()) return node.label;
  ojson children = ojson::array();
  for (const auto& c : node.children) children.push_back(con_json(c));
  return ojson::array({node.label, std::move(children)});
}

template <typename T, typename F>
ojson rows_json(const std::vector<T>& rows, F&& item) {
  ojson out = ojson::array();
  for (const auto& row : rows) out.push_back(item(row));
  return out;
}

// --- reading ---------------------------------------------------------------

[[noreturn]] void bad(std::string_view where, const std::string& what) {
  throw FormatError(std::string(where) + ": " + what);
}

const json& expect_array(const json& j, std::string_view where, std::size_t arity = 0) {
  if (!j.is_array()) bad(where, "expected an array");
  if (arity != 0 && j.size() != arity) {
    bad(where, "expected " + std::to_string(arity) + " elements, got " + std::to_string(j.size()));
  }
  return j;
}

std::string read_string(const json& j, std::string_view where) {
  if (!j.is_string()) bad(where, "expected a string");
  return j.get<std::string>();
}

int read_int(const json& j, std::string_view where) {
  if (!j.is_number_integer()) bad(where, "expected an integer");
  return j.get<int>();
}

Span read_span(const json& j, std::string_view where) {
  expect_array(j, where, 4);
  return Span{read_string(j[0], where), read_int(j[1], where), read_int(j[2], where),
              read_string(j[3], where)};
}

DepArc read_arc(const json& j, std::string_view where) {
  expect_array(j, where, 2);
  return DepArc{read_int(j[0], where), read_string(j[1], where)};
}

ConNode read_con(const json& j) {
  if (j.is_string()) return ConNode::leaf(j.get<std::string>());
  expect_array(j, "con", 2);
  ConNode node{read_string(j[0], "con"), {}};
  for (const auto& c : expect_array(j[1], "con")) node.children.push_back(read_con(c));
  if (node.children.empty()) bad("con", "non-terminal '" + node.label + "' has no children");
  return node;
}

template <typename F>
auto read_rows(const json& j, std::string_view where, F&& item) {
  using T = decltype(item(j));
  std::vector<T> out;
  for (const auto& row : expect_array(j, where)) out.push_back(item(row));
  return out;
}

}  // namespace

void ConNode::collect_leaves(std::vector<std::string>& out) const {
  if (is_leaf()) {
    out.push_back(label);
    return;
  }
  for (const auto& c : children) c.collect_leaves(out);
}

std::string span_form(const Sentence& tokens, int start, int end) {
  std::string out;
  for (int i = start; i < end; ++i) {
    if (i > start) out += ' ';
    out += tokens[static_cast<std::size_t>(i)];
  }
  return out;
}

void Document::validate() const {
  const std::size_t n = tok.size();
  check_parallel("lem", lem, n);
  check_parallel("pos", pos, n);
  check_parallel("ner", ner, n);
  check_parallel("srl", srl, n);
  check_parallel("dep", dep, n);
  check_parallel("sdp", sdp, n);
  check_parallel("con", con, n);
  check_parallel("amr", amr, n);

  for (std::size_t i = 0; i < n; ++i) {
    const Sentence& tokens = tok[i];
    const int len = static_cast<int>(tokens.size());
    if (lem && (*lem)[i].size() != tokens.size()) fail("lem", i, "length differs from tok");
    if (pos && (*pos)[i].size() != tokens.size()) fail("pos", i, "length differs from tok");
    if (ner) {
      for (const auto& s : (*ner)[i]) check_span("ner", i, tokens, s);
    }
    if (srl) {
      for (const auto& frame : (*srl)[i]) {
        for (const auto& s : frame) check_span("srl", i, tokens, s);
      }
    }
    if (dep) {
      if ((*dep)[i].size() != tokens.size()) fail("dep", i, "length differs from tok");
      for (int t = 0; t < len; ++t) check_arc("dep", i, t, len, (*dep)[i][t]);
    }
    if (sdp) {
      if ((*sdp)[i].size() != tokens.size()) fail("sdp", i, "length differs from tok");
      for (int t = 0; t < len; ++t) {
        for (const auto& arc : (*sdp)[i][t]) check_arc("sdp", i, t, len, arc);
      }
    }
    if (con) {
      std::vector<std::string> leaves;
      (*con)[i].collect_leaves(leaves);
      if (leaves != tokens) fail("con", i, "tree leaves do not spell the sentence");
    }
    if (amr) {
      std::map<std::string, int> instances;
      for (const auto& t : (*amr)[i]) {
        if (t.relation == kAmrInstance) ++instances[t.source];
      }
      for (const auto& t : (*amr)[i]) {
        auto it = instances.find(t.source);
        if (it == instances.end()) fail("amr", i, "variable '" + t.source + "' has no instance");
        if (it->second != 1) fail("amr", i, "variable '" + t.source + "' has several instances");
      }
    }
  }

  if (dcr) {
    for (std::size_t c = 0; c < dcr->size(); ++c) {
      for (const auto& m : (*dcr)[c]) {
        if (m.sentence < 0 || static_cast<std::size_t>(m.sentence) >= n) {
          fail("dcr", c, "mention refers to missing sentence " + std::to_string(m.sentence));
        }
        const Sentence& tokens = tok[static_cast<std::size_t>(m.sentence)];
        if (m.start < 0 || m.start >= m.end || m.end > static_cast<int>(tokens.size()) ||
            m.text != span_form(tokens, m.start, m.end)) {
          fail("dcr", c, "mention '" + m.text + "' does not match its tokens");
        }
      }
    }
  }
}

Document Document::slice(std::size_t begin, std::size_t end) const {
  auto cut = [&](const auto& rows) {
    using Rows = std::decay_t<decltype(*rows)>;
    std::optional<Rows> out;
    if (rows) out = Rows(rows->begin() + begin, rows->begin() + end);
    return out;
  };
  Document out;
  out.tok.assign(tok.begin() + begin, tok.begin() + end);
  out.lem = cut(lem);
  out.pos = cut(pos);
  out.ner = cut(ner);
  out.srl = cut(srl);
  out.dep = cut(dep);
  out.sdp = cut(sdp);
  out.con = cut(con);
  out.amr = cut(amr);
  if (dcr) {
    out.dcr.emplace();
    for (const auto& cluster : *dcr) {
      CorefCluster kept;
      for (const auto& m : cluster) {
        const auto s = static_cast<std::size_t>(m.sentence);
        if (s < begin || s >= end) continue;
        Mention moved = m;
        moved.sentence = static_cast<int>(s - begin);
        kept.push_back(std::move(moved));
      }
      if (!kept.empty()) out.dcr->push_back(std::move(kept));
    }
  }
  return out;
}

std::string doc_to_json(const Document& doc) {
  doc.validate();
  ojson out;
  out["tok"] = rows_json(doc.tok, [](const Sentence& s) { return ojson(s); });
  if (doc.lem) out["lem"] = ojson(*doc.lem);
  if (doc.pos) out["pos"] = ojson(*doc.pos);
  if (doc.ner) {
    out["ner"] = rows_json(*doc.ner, [](const auto& row) { return rows_json(row, span_json); });
  }
  if (doc.srl) {
    out["srl"] = rows_json(*doc.srl, [](const auto& frames) {
      return rows_json(frames, [](const auto& frame) { return rows_json(frame, span_json); });
    });
  }
  if (doc.dep) {
    out["dep"] = rows_json(*doc.dep, [](const auto& row) { return rows_json(row, arc_json); });
  }
  if (doc.sdp) {
    out["sdp"] = rows_json(*doc.sdp, [](const auto& row) {
      return rows_json(row, [](const auto& arcs) { return rows_json(arcs, arc_json); });
    });
  }
  if (doc.con) out["con"] = rows_json(*doc.con, con_json);
  if (doc.amr) {
    out["amr"] = rows_json(*doc.amr, [](const auto& row) {
      return rows_json(row, [](const AmrTriple& t) {
        return ojson::array({t.source, t.relation, t.target});
      });
    });
  }
  if (doc.dcr) {
    out["dcr"] = rows_json(*doc.dcr, [](const CorefCluster& cluster) {
      return rows_json(cluster, [](const Mention& m) {
        return ojson::array({m.sentence, m.start, m.end, m.text});
      });
    });
  }
  try {
    return out.dump();
  } catch (const ojson::exception& e) {
    throw FormatError(std::string("cannot serialize document: ") + e.what());
  }
}

Document doc_from_json(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed JSON: ") + e.what());
  }
  if (!root.is_object()) throw FormatError("document must be a JSON object");
  if (!root.contains("tok")) throw FormatError("document has no 'tok' key");

  static const std::set<std::string> kKeys = {"tok", "lem", "pos", "ner", "srl",
                                              "dep", "sdp", "con", "amr", "dcr"};
  for (const auto& [key, _] : root.items()) {
    if (!kKeys.contains(key)) throw FormatError("unknown key '" + key + "'");
  }

  auto strings = [](std::string_view where) {
    return [where](const json& row) {
      return read_rows(row, where, [where](const json& s) { return read_string(s, where); });
    };
  };

  Document doc;
  doc.tok = read_rows(root["tok"], "tok", strings("tok"));
  if (root.contains("lem")) doc.lem = read_rows(root["lem"], "lem", strings("lem"));
  if (root.contains("pos")) doc.pos = read_rows(root["pos"], "pos", strings("pos"));
  if (root.contains("ner")) {
    doc.ner = read_rows(root["ner"], "ner", [](const json& row) {
      return read_rows(row, "ner", [](const json& s) { return read_span(s, "ner"); });
    });
  }
  if (root.contains("srl")) {
    doc.srl = read_rows(root["srl"], "srl", [](const json& frames) {
      return read_rows(frames, "srl", [](const json& frame) {
        return read_rows(frame, "srl", [](const json& s) { return read_span(s, "srl"); });
      });
    });
  }
  if (root.contains("dep")) {
    doc.dep = read_rows(root["dep"], "dep", [](const json& row) {
      return read_rows(row, "dep", [](const json& a) { return read_arc(a, "dep"); });
    });
  }
  if (root.contains("sdp")) {
    doc.sdp = read_rows(root["sdp"], "sdp", [](const json& row) {
      return read_rows(row, "sdp", [](const json& arcs) {
        return read_rows(arcs, "sdp", [](const json& a) { return read_arc(a, "sdp"); });
      });
    });
  }
  if (root.contains("con")) doc.con = read_rows(root["con"], "con", read_con);
  if (root.contains("amr")) {
    doc.amr = read_rows(root["amr"], "amr", [](const json& row) {
      return read_rows(row, "amr", [](const json& t) {
        expect_array(t, "amr", 3);
        return AmrTriple{read_string(t[0], "amr"), read_string(t[1], "amr"),
                         read_string(t[2], "amr")};
      });
    });
  }
  if (root.contains("dcr")) {
    doc.dcr = read_rows(root["dcr"], "dcr", [](const json& cluster) {
      return read_rows(cluster, "dcr", [](const json& m) {
        expect_array(m, "dcr", 4);
        return Mention{read_int(m[0], "dcr"), read_int(m[1], "dcr"), read_int(m[2], "dcr"),
                       read_string(m[3], "dcr")};
      });
    });
  }
  doc.validate();
  return doc;
}

}  // namespace mtl
