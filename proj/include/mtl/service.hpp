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
#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "mtl/batching.hpp"
#include "mtl/clock.hpp"
#include "mtl/pipeline.hpp"

namespace mtl {

struct ServiceConfig {
  std::size_t workers = 4;
  Duration batch_window = std::chrono::milliseconds(5);
  // 0 takes the batch_size of the pipeline's BatchSpec.
  std::size_t max_batch_sentences = 0;
  // Requests accepted but not yet picked up by a worker.
  std::size_t queue_depth = 1024;

  void validate() const;
};

/// HTTP-shaped outcome: 200 with a Document, or an error status with
/// {"error": message}.
struct ParseResult {
  int status = 200;
  std::string body;
};

/// Runs one batch. The default runner calls Pipeline::parse.
using BatchRunner = std::function<Document(const Pipeline&, const BatchTicket&)>;

/// Per-batch record kept for inspection.
struct TicketRecord {
  std::uint64_t sequence = 0;
  std::string signature;
  std::vector<std::uint64_t> members;
  std::vector<std::string> member_signatures;
  std::size_t sentences = 0;
  std::size_t worker = 0;
};

/// Request batching service. Ingress threads call handle_parse() or
/// submit(); one scheduler thread forms batches; `workers` threads run
/// them in FIFO order and answer each request through its own promise.
class Service {
 public:
  /// One pipeline per language; the first language is the default.
  Service(ServiceConfig config, std::vector<std::shared_ptr<const Pipeline>> pipelines,
          std::shared_ptr<const Clock> clock = std::make_shared<SteadyClock>(),
          BatchRunner runner = {});
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// POST /parse: body {"text": s} or {"tokens": [[s]]}, optional
  /// "models": [task names] and "language". Blocks until answered.
  /// 400 malformed body, 422 unknown task or language, 503 queue full.
  ParseResult handle_parse(std::string_view body);

  /// Enqueues already validated sentences. The future is ready at once
  /// with 503 when the queue is full.
  std::future<ParseResult> submit(std::vector<Sentence> sentences, std::vector<Task> tasks,
                                  std::string language);

  /// GET /healthz body.
  std::string health_json() const;

  std::vector<TicketRecord> tickets() const;
  std::size_t pending() const { return pending_.load(); }
  const ServiceConfig& config() const { return config_; }

  /// Stops accepting, finishes queued work and joins all threads.
  void stop();

 private:
  struct Reply {
    std::promise<ParseResult> promise;
    std::string signature;
  };

  void scheduler_loop();
  void worker_loop(std::size_t worker);
  void run_ticket(const BatchTicket& ticket, std::size_t worker);
  void answer(std::uint64_t id, ParseResult result);
  const Pipeline* pipeline_for(const std::string& language) const;

  ServiceConfig config_;
  std::vector<std::shared_ptr<const Pipeline>> pipelines_;
  std::shared_ptr<const Clock> clock_;
  BatchRunner runner_;
  const std::size_t max_batch_sentences_;

  std::atomic<std::uint64_t> next_id_{1};
  std::atomic<std::size_t> pending_{0};

  mutable std::mutex ingress_mu_;
  std::condition_variable ingress_cv_;
  std::deque<RequestEnvelope> ingress_;
  bool stopping_ = false;

  std::mutex queue_mu_;
  std::condition_variable queue_cv_;
  std::deque<BatchTicket> queue_;
  bool drained_ = false;

  std::mutex replies_mu_;
  std::map<std::uint64_t, Reply> replies_;

  mutable std::mutex log_mu_;
  std::vector<TicketRecord> log_;

  std::mutex stop_mu_;
  std::thread scheduler_;
  std::vector<std::thread> workers_;
};

}  // namespace mtl
