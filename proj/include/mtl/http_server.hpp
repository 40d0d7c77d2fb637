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

#include <memory>
#include <string>
#include <thread>

#include "mtl/service.hpp"

namespace httplib {
class Server;
}

namespace mtl {

struct HttpConfig {
  std::string host = "0.0.0.0";
  int port = 8000;  // 0 picks a free port
  // Connection threads; each blocks while its request waits for a batch.
  std::size_t http_threads = 128;
  // Extra object merged into the /healthz body under "manifest".
  std::string manifest_json;
};

/// POST /parse and GET /healthz in front of a Service.
class HttpServer {
 public:
  HttpServer(HttpConfig config, Service& service);
  ~HttpServer();

  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds and serves on a background thread. Throws std::runtime_error
  /// when the address cannot be bound.
  void start();
  /// Binds and serves on the calling thread until stop().
  void run();
  void stop();

  int port() const { return port_; }
  const std::string& host() const { return config_.host; }

 private:
  void bind();

  HttpConfig config_;
  Service& service_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = 0;
};

}  // namespace mtl
