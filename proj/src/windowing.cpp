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

#include "mtl/windowing.hpp"

namespace mtl {

void SubtokenSequence::validate() const {
  if (ids.size() < 2) throw std::invalid_argument("subtoken sequence lacks boundary markers");
  std::size_t expected = 1;
  for (const TokenRange& r : alignment) {
    if (r.begin != expected || r.end <= r.begin) {
      throw std::invalid_argument("subtoken alignment is not contiguous at position " +
                                  std::to_string(expected));
    }
    expected = r.end;
  }
  if (expected != ids.size() - 1) {
    throw std::invalid_argument("subtoken alignment does not cover the sequence");
  }
}

ChunkSubwordTokenizer::ChunkSubwordTokenizer(std::size_t chunk) : chunk_(chunk) {
  if (chunk_ == 0) throw std::invalid_argument("sub-word chunk size must be positive");
}

std::vector<std::string> ChunkSubwordTokenizer::split(std::string_view token) const {
  std::vector<std::string> pieces;
  std::string current;
  std::size_t code_points = 0;
  for (char c : token) {
    const bool starts_code_point = (static_cast<unsigned char>(c) & 0xC0) != 0x80;
    if (starts_code_point && code_points == chunk_) {
      pieces.push_back(std::move(current));
      current.clear();
      code_points = 0;
    }
    if (starts_code_point) ++code_points;
    current += c;
  }
  if (!current.empty() || pieces.empty()) pieces.push_back(std::move(current));
  return pieces;
}

SubtokenId ChunkSubwordTokenizer::id(std::string_view piece) const {
  std::uint64_t h = 1469598103934665603ULL;
  for (char c : piece) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return static_cast<SubtokenId>(h >> 2) + 2;
}

SubtokenSequence subtokenize(const Sentence& tokens, const SubwordTokenizer& tokenizer,
                             SubtokenId begin_marker, SubtokenId end_marker) {
  SubtokenSequence seq;
  seq.ids.push_back(begin_marker);
  for (const auto& token : tokens) {
    const std::size_t begin = seq.ids.size();
    for (const auto& piece : tokenizer.split(token)) seq.ids.push_back(tokenizer.id(piece));
    seq.alignment.push_back(TokenRange{begin, seq.ids.size()});
  }
  seq.ids.push_back(end_marker);
  return seq;
}

std::size_t WindowPlan::local_index(const Window& w, std::size_t p) const {
  if (p == 0) return 0;
  if (p == length - 1) return w.size() - 1;
  return p - w.begin + 1;
}

WindowPlan plan_windows(std::size_t length, std::size_t max_size) {
  if (max_size < 4) {
    throw std::invalid_argument("window size " + std::to_string(max_size) + " leaves no middle");
  }
  if (length < 2) throw std::invalid_argument("sequence must hold both boundary markers");

  WindowPlan plan;
  plan.length = length;
  plan.max_size = max_size;
  const std::size_t width = max_size - 2;
  plan.stride = (width + 1) / 2;
  plan.offset = (plan.stride + 1) / 2;

  for (std::size_t k = 0;; ++k) {
    Window w;
    w.begin = 1 + k * plan.stride;
    const bool last = w.begin + width >= length - 1;
    w.end = last ? length - 1 : w.begin + width;
    w.keep_begin = k == 0 ? 0 : k * plan.stride + plan.offset;
    w.keep_end = last ? length : (k + 1) * plan.stride + plan.offset;
    plan.windows.push_back(w);
    if (last) break;
  }
  return plan;
}

std::vector<Vector> pool_subtokens(std::span<const TokenRange> alignment,
                                   std::span<const Vector> subtoken_vectors) {
  std::vector<Vector> out;
  out.reserve(alignment.size());
  for (std::size_t t = 0; t < alignment.size(); ++t) {
    const TokenRange& r = alignment[t];
    if (r.end <= r.begin) {
      throw std::invalid_argument("token " + std::to_string(t) + " has no sub-tokens");
    }
    if (r.end > subtoken_vectors.size()) {
      throw std::invalid_argument("token " + std::to_string(t) + " aligns past the sequence");
    }
    Vector mean(subtoken_vectors[r.begin].size(), 0.0);
    for (std::size_t i = r.begin; i < r.end; ++i) {
      for (std::size_t d = 0; d < mean.size(); ++d) mean[d] += subtoken_vectors[i][d];
    }
    for (double& x : mean) x /= static_cast<double>(r.size());
    out.push_back(std::move(mean));
  }
  return out;
}

}  // namespace mtl
