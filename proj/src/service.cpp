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

#include "mtl/service.hpp"

#include <algorithm>

#include "json.hpp"

namespace mtl {
namespace {

using nlohmann::json;

ParseResult error(int status, const std::string& message) {
  return ParseResult{status, nlohmann::ordered_json{{"error", message}}.dump()};
}

class BadRequest : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<Sentence> read_tokens(const json& tokens) {
  if (!tokens.is_array()) throw BadRequest("\"tokens\" must be a list of token lists");
  std::vector<Sentence> sentences;
  for (std::size_t s = 0; s < tokens.size(); ++s) {
    const json& row = tokens[s];
    if (!row.is_array()) throw BadRequest("tokens[" + std::to_string(s) + "] is not a list");
    if (row.empty()) throw BadRequest("tokens[" + std::to_string(s) + "] is empty");
    Sentence sentence;
    for (const json& token : row) {
      if (!token.is_string()) {
        throw BadRequest("tokens[" + std::to_string(s) + "] has a non-string token");
      }
      sentence.push_back(token.get<std::string>());
      if (sentence.back().empty()) {
        throw BadRequest("tokens[" + std::to_string(s) + "] has an empty token");
      }
    }
    sentences.push_back(std::move(sentence));
  }
  return sentences;
}

}  // namespace

void ServiceConfig::validate() const {
  if (workers == 0) throw std::invalid_argument("workers must be positive");
  if (batch_window < Duration::zero()) throw std::invalid_argument("batch window is negative");
  if (queue_depth == 0) throw std::invalid_argument("queue depth must be positive");
}

Service::Service(ServiceConfig config, std::vector<std::shared_ptr<const Pipeline>> pipelines,
                 std::shared_ptr<const Clock> clock, BatchRunner runner)
    : config_(std::move(config)),
      pipelines_(std::move(pipelines)),
      clock_(std::move(clock)),
      runner_(std::move(runner)),
      max_batch_sentences_(config_.max_batch_sentences != 0 || pipelines_.empty()
                               ? config_.max_batch_sentences
                               : pipelines_.front()->config().batch.batch_size) {
  config_.validate();
  if (pipelines_.empty()) throw std::invalid_argument("Service: no pipelines");
  for (const auto& p : pipelines_) {
    if (!p) throw std::invalid_argument("Service: null pipeline");
  }
  if (!clock_) throw std::invalid_argument("Service: null clock");
  if (!runner_) {
    runner_ = [](const Pipeline& p, const BatchTicket& t) { return p.parse(t.sentences, t.tasks); };
  }
  scheduler_ = std::thread([this] { scheduler_loop(); });
  for (std::size_t w = 0; w < config_.workers; ++w) {
    workers_.emplace_back([this, w] { worker_loop(w); });
  }
}

Service::~Service() { stop(); }

void Service::stop() {
  std::lock_guard stop_lock(stop_mu_);
  {
    std::lock_guard lock(ingress_mu_);
    if (stopping_ && !scheduler_.joinable()) return;
    stopping_ = true;
  }
  ingress_cv_.notify_all();
  if (scheduler_.joinable()) scheduler_.join();
  for (auto& w : workers_) {
    if (w.joinable()) w.join();
  }
  std::lock_guard lock(replies_mu_);
  for (auto& [id, reply] : replies_) {
    reply.promise.set_value(error(503, "service stopped"));
  }
  replies_.clear();
}

const Pipeline* Service::pipeline_for(const std::string& language) const {
  for (const auto& p : pipelines_) {
    if (p->config().language == language) return p.get();
  }
  return nullptr;
}

ParseResult Service::handle_parse(std::string_view body) {
  json request;
  try {
    request = json::parse(body);
  } catch (const json::exception& e) {
    return error(400, std::string("malformed JSON: ") + e.what());
  }
  std::vector<Sentence> sentences;
  std::vector<Task> tasks;
  std::string language;
  try {
    if (!request.is_object()) throw BadRequest("request body must be a JSON object");
    for (const auto& [key, value] : request.items()) {
      if (key != "text" && key != "tokens" && key != "models" && key != "language") {
        throw BadRequest("unknown field \"" + key + "\"");
      }
    }
    if (request.contains("text") == request.contains("tokens")) {
      throw BadRequest("exactly one of \"text\" and \"tokens\" is required");
    }
    language = pipelines_.front()->config().language;
    if (request.contains("language")) {
      if (!request["language"].is_string()) throw BadRequest("\"language\" must be a string");
      language = request["language"].get<std::string>();
    }
    std::vector<std::string> models;
    if (request.contains("models")) {
      const json& m = request["models"];
      if (!m.is_array() || !std::ranges::all_of(m, [](const json& x) { return x.is_string(); })) {
        throw BadRequest("\"models\" must be a list of task names");
      }
      models = m.get<std::vector<std::string>>();
    }
    const Pipeline* pipeline = pipeline_for(language);
    if (pipeline == nullptr) {
      std::string served;
      for (const auto& p : pipelines_) served += (served.empty() ? "" : ", ") + p->config().language;
      return error(422, "language '" + language + "' is not served (serves: " + served + ")");
    }
    tasks = pipeline->resolve_tasks(models);
    if (request.contains("text")) {
      if (!request["text"].is_string()) throw BadRequest("\"text\" must be a string");
      sentences = pipeline->tokenize(request["text"].get<std::string>());
    } else {
      sentences = read_tokens(request["tokens"]);
    }
  } catch (const BadRequest& e) {
    return error(400, e.what());
  } catch (const UnknownTaskError& e) {
    return error(422, e.what());
  }
  if (sentences.empty()) return ParseResult{200, doc_to_json(Document{})};
  return submit(std::move(sentences), std::move(tasks), std::move(language)).get();
}

std::future<ParseResult> Service::submit(std::vector<Sentence> sentences, std::vector<Task> tasks,
                                         std::string language) {
  std::promise<ParseResult> promise;
  std::future<ParseResult> future = promise.get_future();
  if (pending_.fetch_add(1) >= config_.queue_depth) {
    pending_.fetch_sub(1);
    promise.set_value(error(503, "queue is full (" + std::to_string(config_.queue_depth) +
                                     " requests waiting); retry later"));
    return future;
  }
  RequestEnvelope envelope;
  envelope.id = next_id_.fetch_add(1);
  envelope.tasks = std::move(tasks);
  envelope.language = std::move(language);
  envelope.sentences = std::move(sentences);
  {
    std::lock_guard lock(replies_mu_);
    replies_.emplace(envelope.id, Reply{std::move(promise), envelope.signature()});
  }
  {
    std::lock_guard lock(ingress_mu_);
    if (stopping_) {
      pending_.fetch_sub(1);
      std::lock_guard replies_lock(replies_mu_);
      auto node = replies_.extract(envelope.id);
      node.mapped().promise.set_value(error(503, "service is shutting down"));
      return future;
    }
    // Stamped under the ingress lock, so queue order is arrival order.
    envelope.arrival = clock_->now();
    ingress_.push_back(std::move(envelope));
  }
  ingress_cv_.notify_one();
  return future;
}

void Service::scheduler_loop() {
  BatchFormer former(config_.batch_window, max_batch_sentences_);
  std::unique_lock lock(ingress_mu_);
  while (true) {
    if (ingress_.empty() && !stopping_) {
      if (const auto deadline = former.next_deadline()) {
        clock_->wait_until(ingress_cv_, lock, *deadline);
      } else {
        ingress_cv_.wait(lock);
      }
    }
    std::deque<RequestEnvelope> arrived;
    arrived.swap(ingress_);
    const bool stop = stopping_;
    lock.unlock();

    std::vector<BatchTicket> ready;
    auto take = [&](std::vector<BatchTicket> tickets) {
      for (auto& t : tickets) ready.push_back(std::move(t));
    };
    for (auto& envelope : arrived) take(former.add(std::move(envelope)));
    take(former.poll(clock_->now()));
    if (stop) take(former.flush());
    {
      std::lock_guard queue_lock(queue_mu_);
      for (auto& t : ready) queue_.push_back(std::move(t));
      if (stop) drained_ = true;
    }
    if (stop) {
      queue_cv_.notify_all();
      return;
    }
    if (!ready.empty()) queue_cv_.notify_all();
    lock.lock();
  }
}

void Service::worker_loop(std::size_t worker) {
  while (true) {
    BatchTicket ticket;
    {
      std::unique_lock lock(queue_mu_);
      queue_cv_.wait(lock, [&] { return !queue_.empty() || drained_; });
      if (queue_.empty()) return;
      ticket = std::move(queue_.front());
      queue_.pop_front();
      TicketRecord record{ticket.sequence, ticket.signature, {}, {}, ticket.sentences.size(), worker};
      {
        std::lock_guard replies_lock(replies_mu_);
        for (const auto& m : ticket.members) {
          record.members.push_back(m.id);
          auto it = replies_.find(m.id);
          record.member_signatures.push_back(it == replies_.end() ? "" : it->second.signature);
        }
      }
      std::lock_guard log_lock(log_mu_);
      log_.push_back(std::move(record));
    }
    pending_.fetch_sub(ticket.members.size());
    run_ticket(ticket, worker);
  }
}

void Service::run_ticket(const BatchTicket& ticket, std::size_t worker) {
  const Pipeline* pipeline = pipeline_for(ticket.language);
  std::vector<RoutedResponse> routed;
  std::string failure;
  try {
    if (pipeline == nullptr) throw std::runtime_error("no pipeline for " + ticket.language);
    routed = route_responses(runner_(*pipeline, ticket), ticket);
  } catch (const std::exception& e) {
    failure = e.what();
  }
  if (!failure.empty()) {
    if (ticket.members.size() == 1) {
      answer(ticket.members.front().id, error(500, failure));
      return;
    }
    // Re-run members one by one so a bad request fails alone.
    for (const TicketMember& m : ticket.members) {
      BatchTicket single = ticket;
      single.members = {TicketMember{m.id, 0, m.end - m.begin}};
      single.sentences.assign(ticket.sentences.begin() + static_cast<std::ptrdiff_t>(m.begin),
                              ticket.sentences.begin() + static_cast<std::ptrdiff_t>(m.end));
      run_ticket(single, worker);
    }
    return;
  }
  for (auto& r : routed) {
    if (!r.ok()) {
      answer(r.id, error(500, std::get<std::string>(r.result)));
      continue;
    }
    try {
      answer(r.id, ParseResult{200, doc_to_json(std::get<Document>(r.result))});
    } catch (const std::exception& e) {
      answer(r.id, error(500, e.what()));
    }
  }
}

void Service::answer(std::uint64_t id, ParseResult result) {
  std::unique_lock lock(replies_mu_);
  auto node = replies_.extract(id);
  lock.unlock();
  if (node) node.mapped().promise.set_value(std::move(result));
}

std::vector<TicketRecord> Service::tickets() const {
  std::lock_guard lock(log_mu_);
  return log_;
}

std::string Service::health_json() const {
  nlohmann::ordered_json out;
  out["status"] = "ok";
  out["workers"] = config_.workers;
  out["batch_window_ms"] =
      std::chrono::duration<double, std::milli>(config_.batch_window).count();
  out["max_batch_sentences"] = max_batch_sentences_;
  out["queue_depth"] = config_.queue_depth;
  out["pending"] = pending_.load();
  out["pipelines"] = nlohmann::ordered_json::array();
  for (const auto& p : pipelines_) {
    std::vector<std::string> tasks;
    for (Task t : p->config().tasks) tasks.emplace_back(task_name(t));
    out["pipelines"].push_back({{"identifier", p->config().identifier},
                                {"language", p->config().language},
                                {"tasks", tasks}});
  }
  return out.dump();
}

}  // namespace mtl
