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

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mtl/document.hpp"

namespace mtl {

using Vector = std::vector<double>;
using SubtokenId = std::int64_t;

// Boundary sentinels; the reference sub-word tokenizer never emits them.
inline constexpr SubtokenId kBeginMarker = 0;
inline constexpr SubtokenId kEndMarker = 1;

struct TokenRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool operator==(const TokenRange&) const = default;
};

/// Sub-tokens of one sentence framed by a begin and an end marker, with the
/// sub-token range of every original token.
struct SubtokenSequence {
  std::vector<SubtokenId> ids;
  std::vector<TokenRange> alignment;

  /// Throws std::invalid_argument unless the alignment tiles [1, n-1).
  void validate() const;
};

class SubwordTokenizer {
 public:
  virtual ~SubwordTokenizer() = default;
  virtual std::vector<std::string> split(std::string_view token) const = 0;
  virtual SubtokenId id(std::string_view piece) const = 0;
};

/// Splits a token into runs of at most `chunk` code points and hashes each
/// run to an id above the boundary sentinels.
class ChunkSubwordTokenizer final : public SubwordTokenizer {
 public:
  explicit ChunkSubwordTokenizer(std::size_t chunk = 4);

  std::vector<std::string> split(std::string_view token) const override;
  SubtokenId id(std::string_view piece) const override;

 private:
  std::size_t chunk_;
};

SubtokenSequence subtokenize(const Sentence& tokens, const SubwordTokenizer& tokenizer,
                             SubtokenId begin_marker = kBeginMarker,
                             SubtokenId end_marker = kEndMarker);

/// One encoder window. The window feeds [0] + [begin, end) + [n-1] to the
/// encoder; the outputs at original positions [keep_begin, keep_end) are
/// the ones used after restoration.
struct Window {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t keep_begin = 0;
  std::size_t keep_end = 0;

  std::size_t size() const { return end - begin + 2; }
  bool operator==(const Window&) const = default;
};

struct WindowPlan {
  std::size_t length = 0;
  std::size_t max_size = 0;
  std::size_t stride = 0;
  std::size_t offset = 0;
  std::vector<Window> windows;

  /// Position of original index `p` inside window `w`.
  std::size_t local_index(const Window& w, std::size_t p) const;
};

/// Plans windows of at most `max_size` positions over a framed sequence of
/// `length` positions. Middles are `max_size - 2` wide and advance by the
/// stride ceil((m-2)/2); each window keeps the stride-wide run starting at
/// offset ceil(stride/2) of its framed input, the first window also keeps
/// everything before that run and the last window everything after it.
WindowPlan plan_windows(std::size_t length, std::size_t max_size);

template <typename T>
std::vector<std::vector<T>> apply_windows(std::span<const T> seq, const WindowPlan& plan) {
  if (seq.size() != plan.length) {
    throw std::invalid_argument("apply_windows: sequence length " + std::to_string(seq.size()) +
                                " does not match plan length " + std::to_string(plan.length));
  }
  std::vector<std::vector<T>> out;
  out.reserve(plan.windows.size());
  for (const Window& w : plan.windows) {
    std::vector<T> window;
    window.reserve(w.size());
    window.push_back(seq.front());
    window.insert(window.end(), seq.begin() + static_cast<std::ptrdiff_t>(w.begin),
                  seq.begin() + static_cast<std::ptrdiff_t>(w.end));
    window.push_back(seq.back());
    out.push_back(std::move(window));
  }
  return out;
}

template <typename V>
std::vector<V> restore(const std::vector<std::vector<V>>& outputs, const WindowPlan& plan) {
  if (outputs.size() != plan.windows.size()) {
    throw std::invalid_argument("restore: expected " + std::to_string(plan.windows.size()) +
                                " windows, got " + std::to_string(outputs.size()));
  }
  std::vector<V> out;
  out.reserve(plan.length);
  for (std::size_t k = 0; k < outputs.size(); ++k) {
    const Window& w = plan.windows[k];
    if (outputs[k].size() != w.size()) {
      throw std::invalid_argument("restore: window " + std::to_string(k) + " has " +
                                  std::to_string(outputs[k].size()) + " outputs, expected " +
                                  std::to_string(w.size()));
    }
    for (std::size_t p = w.keep_begin; p < w.keep_end; ++p) {
      out.push_back(outputs[k][plan.local_index(w, p)]);
    }
  }
  return out;
}

/// Token vector = component-wise mean of its sub-token vectors.
std::vector<Vector> pool_subtokens(std::span<const TokenRange> alignment,
                                   std::span<const Vector> subtoken_vectors);

}  // namespace mtl
