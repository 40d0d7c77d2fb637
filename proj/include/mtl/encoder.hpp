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

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "mtl/windowing.hpp"

namespace mtl {

/// Maps windows of sub-token ids to one vector per position. A pipeline
/// calls encode() once per batch of windows.
class Encoder {
 public:
  virtual ~Encoder() = default;

  virtual std::size_t dim() const = 0;

  virtual std::vector<std::vector<Vector>> encode(
      const std::vector<std::vector<SubtokenId>>& windows) const = 0;
};

/// Deterministic stand-in for a transformer. Each position gets a hashed
/// embedding of its id mixed with half the embeddings of its neighbours in
/// the window, so outputs depend on context like a real encoder's would.
class HashEncoder final : public Encoder {
 public:
  explicit HashEncoder(std::size_t dim = 32, std::uint64_t seed = 0x5EED);

  std::size_t dim() const override { return dim_; }
  std::vector<std::vector<Vector>> encode(
      const std::vector<std::vector<SubtokenId>>& windows) const override;

  Vector embed(SubtokenId id) const;

 private:
  std::size_t dim_;
  std::uint64_t seed_;
};

/// Forwards to another encoder and counts calls and windows.
class CountingEncoder final : public Encoder {
 public:
  explicit CountingEncoder(std::shared_ptr<const Encoder> inner);

  std::size_t dim() const override { return inner_->dim(); }
  std::vector<std::vector<Vector>> encode(
      const std::vector<std::vector<SubtokenId>>& windows) const override;

  std::size_t calls() const { return calls_.load(); }
  std::size_t windows() const { return windows_.load(); }
  void reset();

 private:
  std::shared_ptr<const Encoder> inner_;
  mutable std::atomic<std::size_t> calls_{0};
  mutable std::atomic<std::size_t> windows_{0};
};

}  // namespace mtl
