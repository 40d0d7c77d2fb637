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

#include <algorithm>
#include <map>

#include "doctest.h"
#include "mtl/batching.hpp"
#include "support/generators.hpp"

using namespace mtl;
using namespace std::chrono_literals;

namespace {

RequestEnvelope request(std::uint64_t id, Duration at, std::vector<Task> tasks,
                        std::size_t sentences = 1) {
  RequestEnvelope r;
  r.id = id;
  r.arrival = TimePoint(at);
  r.tasks = std::move(tasks);
  r.language = "en";
  for (std::size_t i = 0; i < sentences; ++i) r.sentences.push_back({"s" + std::to_string(id), std::to_string(i)});
  return r;
}

std::vector<std::uint64_t> member_ids(const BatchTicket& t) {
  std::vector<std::uint64_t> ids;
  for (const auto& m : t.members) ids.push_back(m.id);
  return ids;
}

}  // namespace

TEST_CASE("signatures") {
  CHECK(request(1, 0ms, {Task::pos, Task::dep}).signature() == "pos+dep@en");
  CHECK(request(1, 0ms, {Task::dep, Task::pos}).signature() == "pos+dep@en");
  CHECK(request(1, 0ms, {Task::pos}).mergeable());
  CHECK_FALSE(request(1, 0ms, {Task::dcr}).mergeable());
}

TEST_CASE("requests inside one window with equal tasks share a batch") {
  BatchFormer former(10ms, 128);
  CHECK(former.add(request(1, 0ms, {Task::pos})).empty());
  CHECK(former.add(request(2, 1ms, {Task::pos})).empty());
  CHECK(former.next_deadline() == TimePoint(10ms));
  CHECK(former.poll(TimePoint(9ms)).empty());
  const auto tickets = former.poll(TimePoint(10ms));
  REQUIRE(tickets.size() == 1);
  CHECK(member_ids(tickets[0]) == std::vector<std::uint64_t>{1, 2});
  CHECK(tickets[0].sentences.size() == 2);
  CHECK(tickets[0].members[1].begin == 1);
  CHECK(tickets[0].members[1].end == 2);
  CHECK(former.open_batches() == 0);
}

TEST_CASE("different tasks never share a batch") {
  BatchFormer former(10ms, 128);
  former.add(request(1, 0ms, {Task::pos}));
  former.add(request(2, 1ms, {Task::dep}));
  const auto tickets = former.poll(TimePoint(20ms));
  REQUIRE(tickets.size() == 2);
  CHECK(member_ids(tickets[0]) == std::vector<std::uint64_t>{1});
  CHECK(member_ids(tickets[1]) == std::vector<std::uint64_t>{2});
  CHECK(tickets[0].sequence < tickets[1].sequence);
}

TEST_CASE("a late arrival starts a new window") {
  BatchFormer former(10ms, 128);
  former.add(request(1, 0ms, {Task::pos}));
  const auto closed = former.add(request(2, 10ms, {Task::pos}));
  REQUIRE(closed.size() == 1);
  CHECK(member_ids(closed[0]) == std::vector<std::uint64_t>{1});
  CHECK(former.next_deadline() == TimePoint(20ms));
}

TEST_CASE("the sentence cap closes batches early") {
  BatchFormer former(10ms, 4);
  CHECK(former.add(request(1, 0ms, {Task::pos}, 2)).empty());
  auto closed = former.add(request(2, 1ms, {Task::pos}, 2));
  REQUIRE(closed.size() == 1);  // exactly full
  CHECK(member_ids(closed[0]) == std::vector<std::uint64_t>{1, 2});

  former.add(request(3, 2ms, {Task::pos}, 3));
  closed = former.add(request(4, 3ms, {Task::pos}, 2));  // would overflow
  REQUIRE(closed.size() == 1);
  CHECK(member_ids(closed[0]) == std::vector<std::uint64_t>{3});
  closed = former.add(request(5, 4ms, {Task::pos}, 9));  // larger than the cap
  REQUIRE(closed.size() == 2);
  CHECK(member_ids(closed[0]) == std::vector<std::uint64_t>{4});
  CHECK(member_ids(closed[1]) == std::vector<std::uint64_t>{5});
}

TEST_CASE("zero window and document-level tasks do not merge") {
  BatchFormer unbatched(0ms, 128);
  CHECK(unbatched.add(request(1, 0ms, {Task::pos})).size() == 1);
  CHECK(unbatched.add(request(2, 0ms, {Task::pos})).size() == 1);

  BatchFormer former(10ms, 128);
  CHECK(former.add(request(1, 0ms, {Task::dcr})).size() == 1);
  CHECK(former.add(request(2, 0ms, {Task::dcr})).size() == 1);
  CHECK(former.open_batches() == 0);
}

TEST_CASE("flush closes everything oldest first") {
  BatchFormer former(10ms, 128);
  former.add(request(1, 2ms, {Task::dep}));
  former.add(request(2, 3ms, {Task::pos}));
  former.add(request(3, 4ms, {Task::lem}));
  const auto tickets = former.flush();
  REQUIRE(tickets.size() == 3);
  CHECK(member_ids(tickets[0]) == std::vector<std::uint64_t>{1});
  CHECK(member_ids(tickets[2]) == std::vector<std::uint64_t>{3});
}

TEST_CASE("random arrivals: tickets partition requests and stay homogeneous") {
  testing::Rng rng(21);
  const std::vector<std::vector<Task>> kinds = {{Task::pos}, {Task::dep}, {Task::pos, Task::dep}};
  for (int trial = 0; trial < 200; ++trial) {
    const Duration window = std::chrono::milliseconds(testing::uniform(rng, 0, 8));
    const auto cap = static_cast<std::size_t>(testing::uniform(rng, 1, 10));
    BatchFormer former(window, cap);
    std::vector<BatchTicket> tickets;
    std::map<std::uint64_t, std::string> signature_of;
    std::map<std::uint64_t, std::size_t> size_of;
    Duration t{};
    const int count = testing::uniform(rng, 1, 60);
    for (int i = 0; i < count; ++i) {
      t += std::chrono::microseconds(testing::uniform(rng, 0, 3000));
      auto r = request(static_cast<std::uint64_t>(i), t,
                       kinds[static_cast<std::size_t>(testing::uniform(rng, 0, 2))],
                       static_cast<std::size_t>(testing::uniform(rng, 1, 4)));
      signature_of[r.id] = r.signature();
      size_of[r.id] = r.sentences.size();
      for (auto& k : former.add(std::move(r))) tickets.push_back(std::move(k));
      if (testing::uniform(rng, 0, 3) == 0) {
        for (auto& k : former.poll(TimePoint(t))) tickets.push_back(std::move(k));
      }
    }
    for (auto& k : former.flush()) tickets.push_back(std::move(k));

    std::map<std::uint64_t, int> seen;
    std::map<std::string, std::uint64_t> last_in_class;
    for (std::size_t k = 0; k < tickets.size(); ++k) {
      const auto& ticket = tickets[k];
      REQUIRE(ticket.sequence == k);
      std::size_t expect_begin = 0;
      for (const auto& m : ticket.members) {
        ++seen[m.id];
        REQUIRE(signature_of[m.id] == ticket.signature);
        REQUIRE(m.begin == expect_begin);
        REQUIRE(m.end - m.begin == size_of[m.id]);
        expect_begin = m.end;
        // Within a signature, tickets carry requests in arrival order.
        auto it = last_in_class.find(ticket.signature);
        if (it != last_in_class.end()) REQUIRE(m.id > it->second);
        last_in_class[ticket.signature] = m.id;
      }
      REQUIRE(expect_begin == ticket.sentences.size());
      REQUIRE((ticket.members.size() == 1 || ticket.sentences.size() <= cap));
    }
    REQUIRE(seen.size() == static_cast<std::size_t>(count));
    for (const auto& [id, n] : seen) REQUIRE(n == 1);
  }
}

TEST_CASE("route_responses slices per member") {
  BatchFormer former(10ms, 128);
  former.add(request(7, 0ms, {Task::pos}, 2));
  former.add(request(8, 1ms, {Task::pos}, 3));
  const BatchTicket ticket = former.flush().at(0);
  Document batch;
  batch.tok = ticket.sentences;
  batch.pos = std::vector<std::vector<std::string>>();
  for (const auto& s : batch.tok) batch.pos->push_back(std::vector<std::string>(s.size(), "NN"));

  const auto routed = route_responses(batch, ticket);
  REQUIRE(routed.size() == 2);
  CHECK(routed[0].id == 7);
  REQUIRE(routed[0].ok());
  REQUIRE(routed[1].ok());
  CHECK(std::get<Document>(routed[0].result).tok.size() == 2);
  CHECK(std::get<Document>(routed[1].result).tok.size() == 3);
  CHECK(std::get<Document>(routed[1].result) == batch.slice(2, 5));

  BatchTicket single = ticket;
  single.members.resize(1);
  CHECK(route_responses(batch.slice(0, 2), single).at(0).ok());

  // A truncated result fails only the member it cannot cover.
  const auto partial = route_responses(batch.slice(0, 3), ticket);
  CHECK(partial[0].ok());
  CHECK_FALSE(partial[1].ok());

  // So does a result whose sentences do not match the request.
  Document altered = batch;
  altered.tok[3][0] = "changed";
  const auto mismatch = route_responses(altered, ticket);
  CHECK(mismatch[0].ok());
  CHECK_FALSE(mismatch[1].ok());
}

TEST_CASE("simulated schedule: equal latencies complete in arrival order per class") {
  testing::Rng rng(22);
  const std::vector<std::vector<Task>> kinds = {{Task::pos}, {Task::dep}, {Task::ner}};
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<SimulatedRequest> requests;
    Duration t{};
    const int count = testing::uniform(rng, 1, 80);
    for (int i = 0; i < count; ++i) {
      t += std::chrono::microseconds(testing::uniform(rng, 0, 4000));
      requests.push_back(SimulatedRequest{static_cast<std::uint64_t>(i), t,
                                          kinds[static_cast<std::size_t>(testing::uniform(rng, 0, 2))],
                                          "en", static_cast<std::size_t>(testing::uniform(rng, 1, 3))});
    }
    SimulationConfig config;
    config.workers = static_cast<std::size_t>(testing::uniform(rng, 1, 4));
    config.window = std::chrono::milliseconds(testing::uniform(rng, 0, 10));
    config.max_sentences = static_cast<std::size_t>(testing::uniform(rng, 1, 16));
    const auto done = simulate_schedule(requests, config, [](const BatchTicket&) { return 7ms; });

    REQUIRE(done.size() == requests.size());
    std::map<std::string, std::vector<std::uint64_t>> order;
    std::map<std::uint64_t, const SimulatedRequest*> by_id;
    for (const auto& r : requests) by_id[r.id] = &r;
    for (const auto& c : done) {
      const auto& r = *by_id.at(c.id);
      REQUIRE(c.dispatched >= r.arrival);
      order[task_key(r.tasks)].push_back(c.id);
    }
    for (const auto& [signature, ids] : order) {
      REQUIRE(std::is_sorted(ids.begin(), ids.end()));
    }
  }
}

TEST_CASE("simulated schedule: one worker runs batches back to back") {
  std::vector<SimulatedRequest> requests;
  for (int i = 0; i < 6; ++i) {
    requests.push_back(SimulatedRequest{static_cast<std::uint64_t>(i), std::chrono::milliseconds(i),
                                        {Task::pos}, "en", 1});
  }
  SimulationConfig config;
  config.workers = 1;
  config.window = 0ms;
  const auto done = simulate_schedule(requests, config, [](const BatchTicket&) { return 10ms; });
  for (std::size_t i = 0; i < done.size(); ++i) {
    CHECK(done[i].id == i);
    CHECK(done[i].finished == std::chrono::milliseconds(10 * (i + 1)));
  }

  config.window = 10ms;
  const auto merged = simulate_schedule(requests, config, [](const BatchTicket&) { return 10ms; });
  for (const auto& c : merged) CHECK(c.ticket == 0);
}
