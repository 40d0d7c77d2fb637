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

#include "mtl/batching.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace mtl {

std::string RequestEnvelope::signature() const { return task_key(tasks) + "@" + language; }

bool RequestEnvelope::mergeable() const {
  return std::ranges::find(tasks, Task::dcr) == tasks.end();
}

BatchFormer::BatchFormer(Duration window, std::size_t max_sentences)
    : window_(window), max_sentences_(max_sentences) {
  if (window < Duration::zero()) throw std::invalid_argument("BatchFormer: negative window");
  if (max_sentences == 0) throw std::invalid_argument("BatchFormer: max_sentences must be positive");
}

BatchTicket BatchFormer::close(std::map<std::string, BatchTicket>::iterator it) {
  BatchTicket ticket = std::move(it->second);
  open_.erase(it);
  ticket.sequence = next_sequence_++;
  return ticket;
}

std::vector<BatchTicket> BatchFormer::add(RequestEnvelope request) {
  std::vector<BatchTicket> out = poll(request.arrival);
  const std::string signature = request.signature();
  auto append = [&](BatchTicket& ticket) {
    const std::size_t begin = ticket.sentences.size();
    ticket.sentences.insert(ticket.sentences.end(),
                            std::make_move_iterator(request.sentences.begin()),
                            std::make_move_iterator(request.sentences.end()));
    ticket.members.push_back(TicketMember{request.id, begin, ticket.sentences.size()});
  };
  auto fresh = [&] {
    BatchTicket ticket;
    ticket.signature = signature;
    ticket.tasks = request.tasks;
    ticket.language = request.language;
    ticket.opened = request.arrival;
    return ticket;
  };

  if (!request.mergeable()) {
    BatchTicket ticket = fresh();
    append(ticket);
    ticket.sequence = next_sequence_++;
    out.push_back(std::move(ticket));
    return out;
  }
  auto it = open_.find(signature);
  if (it != open_.end() && it->second.sentences.size() + request.sentences.size() > max_sentences_) {
    out.push_back(close(it));
    it = open_.end();
  }
  if (it == open_.end()) it = open_.emplace(signature, fresh()).first;
  append(it->second);
  if (it->second.sentences.size() >= max_sentences_ || window_ == Duration::zero()) {
    out.push_back(close(it));
  }
  return out;
}

std::vector<BatchTicket> BatchFormer::poll(TimePoint now) {
  std::vector<std::map<std::string, BatchTicket>::iterator> due;
  for (auto it = open_.begin(); it != open_.end(); ++it) {
    if (it->second.opened + window_ <= now) due.push_back(it);
  }
  // Oldest first; a member id breaks ties between batches opened together.
  std::ranges::sort(due, [](const auto& a, const auto& b) {
    if (a->second.opened != b->second.opened) return a->second.opened < b->second.opened;
    return a->second.members.front().id < b->second.members.front().id;
  });
  std::vector<BatchTicket> out;
  for (auto it : due) out.push_back(close(it));
  return out;
}

std::vector<BatchTicket> BatchFormer::flush() {
  return poll(TimePoint::max() - window_);
}

std::optional<TimePoint> BatchFormer::next_deadline() const {
  std::optional<TimePoint> best;
  for (const auto& [signature, ticket] : open_) {
    const TimePoint deadline = ticket.opened + window_;
    if (!best || deadline < *best) best = deadline;
  }
  return best;
}

std::vector<RoutedResponse> route_responses(const Document& batch, const BatchTicket& ticket) {
  std::vector<RoutedResponse> out;
  out.reserve(ticket.members.size());
  for (const TicketMember& m : ticket.members) {
    RoutedResponse r{m.id, std::string()};
    if (m.begin > m.end || m.end > batch.tok.size() || m.end > ticket.sentences.size()) {
      r.result = "batch result has " + std::to_string(batch.tok.size()) +
                 " sentences; request range [" + std::to_string(m.begin) + ", " +
                 std::to_string(m.end) + ") does not fit";
    } else if (!std::equal(batch.tok.begin() + static_cast<std::ptrdiff_t>(m.begin),
                           batch.tok.begin() + static_cast<std::ptrdiff_t>(m.end),
                           ticket.sentences.begin() + static_cast<std::ptrdiff_t>(m.begin))) {
      r.result = std::string("batch result does not match the request's sentences");
    } else {
      try {
        r.result = batch.slice(m.begin, m.end);
      } catch (const std::exception& e) {
        r.result = std::string(e.what());
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<SimulatedCompletion> simulate_schedule(
    std::vector<SimulatedRequest> requests, const SimulationConfig& config,
    const std::function<Duration(const BatchTicket&)>& latency) {
  if (config.workers == 0) throw std::invalid_argument("simulate_schedule: no workers");
  std::ranges::stable_sort(requests, {}, &SimulatedRequest::arrival);
  BatchFormer former(config.window, config.max_sentences);
  std::deque<BatchTicket> queue;
  std::vector<std::optional<Duration>> busy_until(config.workers);
  std::vector<SimulatedCompletion> done;
  const TimePoint epoch{};
  auto enqueue = [&](std::vector<BatchTicket> tickets) {
    for (auto& t : tickets) queue.push_back(std::move(t));
  };

  std::size_t next = 0;
  Duration now{};
  while (true) {
    // Advance to the earliest pending event.
    std::optional<Duration> when;
    auto consider = [&](Duration t) {
      if (!when || t < *when) when = t;
    };
    if (next < requests.size()) consider(requests[next].arrival);
    if (auto d = former.next_deadline()) consider(*d - epoch);
    for (const auto& b : busy_until) {
      if (b) consider(*b);
    }
    if (!when) break;
    now = std::max(now, *when);

    for (auto& b : busy_until) {
      if (b && *b <= now) b.reset();
    }
    while (next < requests.size() && requests[next].arrival <= now) {
      const SimulatedRequest& r = requests[next++];
      RequestEnvelope envelope{r.id, epoch + r.arrival, r.tasks, r.language,
                               std::vector<Sentence>(r.sentences, Sentence{"x"})};
      enqueue(former.add(std::move(envelope)));
    }
    enqueue(former.poll(epoch + now));

    for (std::size_t w = 0; w < busy_until.size() && !queue.empty(); ++w) {
      if (busy_until[w]) continue;
      BatchTicket ticket = std::move(queue.front());
      queue.pop_front();
      const Duration finish = now + latency(ticket);
      busy_until[w] = finish;
      for (const TicketMember& m : ticket.members) {
        done.push_back(SimulatedCompletion{m.id, ticket.sequence, w, now, finish});
      }
    }
  }
  std::ranges::stable_sort(done, {}, &SimulatedCompletion::finished);
  return done;
}

}  // namespace mtl
