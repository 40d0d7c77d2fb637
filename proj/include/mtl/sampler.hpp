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
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mtl {

struct BatchSpec {
  std::size_t batch_size = 128;
  // Padded budget: items in a batch times the longest item.
  std::size_t batch_max_tokens = 12800;

  void validate() const;
};

struct Batch {
  std::vector<std::size_t> indices;
  std::size_t max_length = 0;

  std::size_t padded_tokens() const { return indices.size() * max_length; }
};

struct BatchAssignment {
  std::vector<Batch> batches;

  std::size_t padded_tokens() const;
  std::size_t item_count() const;
};

/// Groups sequences of similar length. Indices are stably sorted by length
/// and cut into contiguous runs that respect both caps. Among the cuttings
/// with the fewest batches, the one with the least padding is chosen, and
/// remaining ties go to the cutting whose earlier batches are larger.
///
/// Runs in O(N log N + N * batch_size).
BatchAssignment build_batches(std::span<const std::size_t> lengths, const BatchSpec& spec);

/// Inverse of the batching permutation: `batched[b][k]` is the output for
/// `assignment.batches[b].indices[k]`.
template <typename T>
std::vector<T> restore_order(std::vector<std::vector<T>> batched,
                             const BatchAssignment& assignment) {
  if (batched.size() != assignment.batches.size()) {
    throw std::invalid_argument("restore_order: " + std::to_string(batched.size()) +
                                " batches of outputs for " +
                                std::to_string(assignment.batches.size()) + " batches");
  }
  const std::size_t n = assignment.item_count();
  std::vector<T*> slots(n, nullptr);
  for (std::size_t b = 0; b < batched.size(); ++b) {
    const auto& indices = assignment.batches[b].indices;
    if (batched[b].size() != indices.size()) {
      throw std::invalid_argument("restore_order: batch " + std::to_string(b) + " has " +
                                  std::to_string(batched[b].size()) + " outputs, expected " +
                                  std::to_string(indices.size()));
    }
    for (std::size_t k = 0; k < indices.size(); ++k) {
      if (indices[k] >= n || slots[indices[k]] != nullptr) {
        throw std::invalid_argument("restore_order: assignment is not a permutation");
      }
      slots[indices[k]] = &batched[b][k];
    }
  }
  std::vector<T> out;
  out.reserve(n);
  for (T* slot : slots) out.push_back(std::move(*slot));
  return out;
}

}  // namespace mtl
