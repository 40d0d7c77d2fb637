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

#include "mtl/encoder.hpp"

#include <stdexcept>

#include "internal/hash.hpp"

namespace mtl {

HashEncoder::HashEncoder(std::size_t dim, std::uint64_t seed) : dim_(dim), seed_(seed) {
  if (dim == 0) throw std::invalid_argument("HashEncoder: dim must be positive");
}

Vector HashEncoder::embed(SubtokenId id) const {
  Vector v(dim_);
  const std::uint64_t key = internal::splitmix64(seed_ ^ static_cast<std::uint64_t>(id));
  for (std::size_t d = 0; d < dim_; ++d) v[d] = internal::hashed_unit(key, d);
  return v;
}

std::vector<std::vector<Vector>> HashEncoder::encode(
    const std::vector<std::vector<SubtokenId>>& windows) const {
  std::vector<std::vector<Vector>> out;
  out.reserve(windows.size());
  for (const auto& window : windows) {
    std::vector<Vector> base;
    base.reserve(window.size());
    for (SubtokenId id : window) base.push_back(embed(id));
    std::vector<Vector> mixed = base;
    for (std::size_t i = 0; i < window.size(); ++i) {
      for (std::size_t d = 0; d < dim_; ++d) {
        if (i > 0) mixed[i][d] += 0.5 * base[i - 1][d];
        if (i + 1 < window.size()) mixed[i][d] += 0.5 * base[i + 1][d];
      }
    }
    out.push_back(std::move(mixed));
  }
  return out;
}

CountingEncoder::CountingEncoder(std::shared_ptr<const Encoder> inner) : inner_(std::move(inner)) {
  if (!inner_) throw std::invalid_argument("CountingEncoder: null encoder");
}

std::vector<std::vector<Vector>> CountingEncoder::encode(
    const std::vector<std::vector<SubtokenId>>& windows) const {
  calls_.fetch_add(1);
  windows_.fetch_add(windows.size());
  return inner_->encode(windows);
}

void CountingEncoder::reset() {
  calls_.store(0);
  windows_.store(0);
}

}  // namespace mtl
