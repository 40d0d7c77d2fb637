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
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mtl/clock.hpp"
#include "mtl/document.hpp"
#include "mtl/task.hpp"

namespace mtl {

/// One accepted request, tokenized at ingress.
struct RequestEnvelope {
  std::uint64_t id = 0;
  TimePoint arrival;
  std::vector<Task> tasks;  // canonical order
  std::string language;
  std::vector<Sentence> sentences;

  /// Requests may share a batch only when their signatures are equal.
  std::string signature() const;
  /// Document-level tasks (dcr) see the whole input, so such requests are
  /// never merged with others.
  bool mergeable() const;
};

struct TicketMember {
  std::uint64_t id = 0;
  std::size_t begin = 0;
  std::size_t end = 0;
};

/// A homogeneous batch: members' sentences concatenated in arrival order.
struct BatchTicket {
  std::uint64_t sequence = 0;
  std::string signature;
  std::vector<Task> tasks;
  std::string language;
  std::vector<TicketMember> members;
  std::vector<Sentence> sentences;
  TimePoint opened;
};

/// Merges requests with equal signatures that arrive within `window` of
/// the first one, up to `max_sentences` per batch. A batch closes when its
/// window has elapsed, or at once when it reaches the cap. A request that
/// would overflow the open batch closes it and opens the next one. A zero
/// window disables merging.
///
/// Not thread-safe; owned by one scheduler.
class BatchFormer {
 public:
  BatchFormer(Duration window, std::size_t max_sentences);

  /// Feed requests in arrival order. Returns the batches this closes.
  std::vector<BatchTicket> add(RequestEnvelope request);
  /// Closes batches whose window ended at or before `now`, oldest first.
  std::vector<BatchTicket> poll(TimePoint now);
  std::vector<BatchTicket> flush();

  std::optional<TimePoint> next_deadline() const;
  std::size_t open_batches() const { return open_.size(); }

 private:
  BatchTicket close(std::map<std::string, BatchTicket>::iterator it);

  Duration window_;
  std::size_t max_sentences_;
  std::uint64_t next_sequence_ = 0;
  std::map<std::string, BatchTicket> open_;
};

struct RoutedResponse {
  std::uint64_t id = 0;
  std::variant<Document, std::string> result;  // document or error message

  bool ok() const { return result.index() == 0; }
};

/// Slices a batch result into one Document per member. A member whose
/// range does not fit the result, or whose sentences came back altered,
/// fails alone.
std::vector<RoutedResponse> route_responses(const Document& batch, const BatchTicket& ticket);

// Discrete-event model of the scheduler: the BatchFormer, a FIFO ticket
// queue and `workers` servers that each take the oldest waiting ticket.

struct SimulatedRequest {
  std::uint64_t id = 0;
  Duration arrival{};
  std::vector<Task> tasks;
  std::string language = "en";
  std::size_t sentences = 1;
};

struct SimulatedCompletion {
  std::uint64_t id = 0;
  std::uint64_t ticket = 0;
  std::size_t worker = 0;
  Duration dispatched{};
  Duration finished{};
};

struct SimulationConfig {
  std::size_t workers = 4;
  Duration window = std::chrono::milliseconds(5);
  std::size_t max_sentences = 128;
};

/// Completions ordered by finish time, then dispatch order.
std::vector<SimulatedCompletion> simulate_schedule(
    std::vector<SimulatedRequest> requests, const SimulationConfig& config,
    const std::function<Duration(const BatchTicket&)>& latency);

}  // namespace mtl
