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

#include "mtl/sampler.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <utility>

namespace mtl {

void BatchSpec::validate() const {
  if (batch_size == 0 || batch_max_tokens == 0) {
    throw std::invalid_argument("batch_size and batch_max_tokens must be positive");
  }
}

std::size_t BatchAssignment::padded_tokens() const {
  std::size_t total = 0;
  for (const auto& b : batches) total += b.padded_tokens();
  return total;
}

std::size_t BatchAssignment::item_count() const {
  std::size_t total = 0;
  for (const auto& b : batches) total += b.indices.size();
  return total;
}

BatchAssignment build_batches(std::span<const std::size_t> lengths, const BatchSpec& spec) {
  spec.validate();
  const std::size_t n = lengths.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (lengths[i] == 0) {
      throw std::invalid_argument("sequence " + std::to_string(i) + " is empty");
    }
    if (lengths[i] > spec.batch_max_tokens) {
      throw std::invalid_argument("sequence " + std::to_string(i) + " has length " +
                                  std::to_string(lengths[i]) + " exceeding batch_max_tokens " +
                                  std::to_string(spec.batch_max_tokens));
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return lengths[a] < lengths[b]; });

  // cost[i]: (batches, padded tokens) of the best cutting of order[i..n).
  using Cost = std::pair<std::size_t, std::size_t>;
  constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max();
  std::vector<Cost> cost(n + 1, Cost{kInf, kInf});
  std::vector<std::size_t> cut(n + 1, n);
  cost[n] = Cost{0, 0};
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = i + 1; j <= n; ++j) {
      const std::size_t count = j - i;
      const std::size_t longest = lengths[order[j - 1]];
      if (count > spec.batch_size || count * longest > spec.batch_max_tokens) break;
      const Cost candidate{cost[j].first + 1, cost[j].second + count * longest};
      if (candidate <= cost[i]) {
        cost[i] = candidate;
        cut[i] = j;
      }
    }
  }

  BatchAssignment out;
  for (std::size_t i = 0; i < n; i = cut[i]) {
    Batch batch;
    batch.indices.assign(order.begin() + static_cast<std::ptrdiff_t>(i),
                         order.begin() + static_cast<std::ptrdiff_t>(cut[i]));
    batch.max_length = lengths[order[cut[i] - 1]];
    out.batches.push_back(std::move(batch));
  }
  return out;
}

}  // namespace mtl
