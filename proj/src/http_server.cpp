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

#include "mtl/http_server.hpp"

#include <stdexcept>

#include "httplib.h"
#include "json.hpp"

namespace mtl {

HttpServer::HttpServer(HttpConfig config, Service& service)
    : config_(std::move(config)), service_(service), server_(std::make_unique<httplib::Server>()) {
  const std::size_t threads = config_.http_threads == 0 ? 1 : config_.http_threads;
  server_->new_task_queue = [threads] { return new httplib::ThreadPool(threads); };

  server_->Post("/parse", [this](const httplib::Request& req, httplib::Response& res) {
    const ParseResult result = service_.handle_parse(req.body);
    res.status = result.status;
    if (result.status == 503) res.set_header("Retry-After", "1");
    res.set_content(result.body, "application/json");
  });

  server_->Get("/healthz", [this](const httplib::Request&, httplib::Response& res) {
    auto body = nlohmann::ordered_json::parse(service_.health_json());
    if (!config_.manifest_json.empty()) {
      body["manifest"] = nlohmann::ordered_json::parse(config_.manifest_json);
    }
    res.set_content(body.dump(), "application/json");
  });

  server_->set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) {
      res.set_content(nlohmann::ordered_json{{"error", httplib::status_message(res.status)}}.dump(),
                      "application/json");
    }
  });
}

HttpServer::~HttpServer() { stop(); }

void HttpServer::bind() {
  if (config_.port == 0) {
    port_ = server_->bind_to_any_port(config_.host);
  } else if (server_->bind_to_port(config_.host, config_.port)) {
    port_ = config_.port;
  } else {
    port_ = -1;
  }
  if (port_ < 0) {
    throw std::runtime_error("cannot bind " + config_.host + ":" + std::to_string(config_.port));
  }
}

void HttpServer::start() {
  bind();
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
}

void HttpServer::run() {
  bind();
  server_->listen_after_bind();
}

void HttpServer::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace mtl
