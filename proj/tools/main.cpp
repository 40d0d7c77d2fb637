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

// Command-line entry points: `serve` runs the HTTP service, `parse` annotates
// text or token lists offline, one JSON document per input line.

#include <csignal>
#include <fstream>
#include <iostream>
#include <pthread.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "mtl/http_server.hpp"
#include "mtl/registry.hpp"
#include "mtl/service.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kConfigError = 2;

constexpr const char* kDefaultModel = "LEM_POS_NER_DEP_SDP_CON_AMR_EN";

struct ServeOptions {
  std::string host = "0.0.0.0";
  int port = 8000;
  std::size_t workers = 4;
  double batch_window_ms = 5.0;
  std::size_t queue_depth = 1024;
  std::size_t max_batch_sentences = 0;
  std::size_t http_threads = 128;
  std::string manifest;
  std::vector<std::string> models{kDefaultModel};
};

struct ParseOptions {
  std::string model = kDefaultModel;
  std::string tasks;
  std::string manifest;
  std::string input = "-";
};

std::vector<std::string> split_tasks(const std::string& list) {
  std::vector<std::string> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::unique_ptr<mtl::Registry> open_registry(const std::string& manifest) {
  return std::make_unique<mtl::Registry>(mtl::Manifest::load(manifest.empty() ? mtl::default_manifest_path()
                                                            : std::filesystem::path(manifest)));
}

// A line starting with '[' holds token lists; anything else is raw text.
std::vector<mtl::Sentence> read_line(const mtl::Pipeline& pipeline, const std::string& line) {
  const auto first = line.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  if (line[first] != '[') return pipeline.tokenize(line);
  const auto tokens = nlohmann::json::parse(line);
  std::vector<mtl::Sentence> sentences;
  for (const auto& row : tokens) {
    if (!row.is_array() || row.empty()) throw std::invalid_argument("expected non-empty token lists");
    mtl::Sentence sentence;
    for (const auto& token : row) {
      if (!token.is_string() || token.get<std::string>().empty()) {
        throw std::invalid_argument("tokens must be non-empty strings");
      }
      sentence.push_back(token.get<std::string>());
    }
    sentences.push_back(std::move(sentence));
  }
  return sentences;
}

int cmd_parse(const ParseOptions& opt) {
  std::shared_ptr<const mtl::Pipeline> pipeline;
  std::vector<mtl::Task> tasks;
  try {
    pipeline = open_registry(opt.manifest)->load(opt.model);
    tasks = pipeline->resolve_tasks(split_tasks(opt.tasks));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }

  std::ifstream file;
  std::istream* in = &std::cin;
  if (opt.input != "-") {
    file.open(opt.input);
    if (!file) {
      std::cerr << "error: cannot read " << opt.input << "\n";
      return kInputError;
    }
    in = &file;
  }
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(*in, line)) {
    ++line_no;
    try {
      std::cout << mtl::doc_to_json(pipeline->parse(read_line(*pipeline, line), tasks)) << "\n";
    } catch (const std::exception& e) {
      std::cout.flush();
      std::cerr << "error: line " << line_no << ": " << e.what() << "\n";
      return kInputError;
    }
  }
  return kOk;
}

int cmd_serve(const ServeOptions& opt) {
  // Block the shutdown signals before any thread starts; the main thread
  // collects them with sigwait.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  std::unique_ptr<mtl::Registry> registry;
  std::vector<std::shared_ptr<const mtl::Pipeline>> pipelines;
  mtl::ServiceConfig config;
  try {
    registry = open_registry(opt.manifest);
    for (const auto& id : opt.models) pipelines.push_back(registry->load(id));
    config.workers = opt.workers;
    config.batch_window = std::chrono::duration_cast<mtl::Duration>(
        std::chrono::duration<double, std::milli>(opt.batch_window_ms));
    config.queue_depth = opt.queue_depth;
    config.max_batch_sentences = opt.max_batch_sentences;
    config.validate();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }

  mtl::Service service(config, pipelines);
  mtl::HttpConfig http;
  http.host = opt.host;
  http.port = opt.port;
  http.http_threads = opt.http_threads;
  http.manifest_json = registry->manifest().summary_json();
  mtl::HttpServer server(http, service);
  try {
    server.start();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }
  std::cerr << "listening on http://" << server.host() << ":" << server.port() << "\n";

  int signal = 0;
  sigwait(&signals, &signal);
  std::cerr << "shutting down\n";
  server.stop();
  service.stop();
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-task NLP annotation: HTTP service and offline parser"};
  app.require_subcommand(1);

  ServeOptions serve;
  CLI::App* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
  serve_cmd->add_option("--host", serve.host, "Bind address")->envname("MTL_HOST")->capture_default_str();
  serve_cmd->add_option("--port", serve.port, "Port; 0 picks a free one")
      ->envname("MTL_PORT")
      ->check(CLI::Range(0, 65535))
      ->capture_default_str();
  serve_cmd->add_option("--workers", serve.workers, "Batch worker threads")
      ->envname("MTL_WORKERS")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  serve_cmd->add_option("--batch-window-ms", serve.batch_window_ms,
                        "How long a batch waits for more requests; 0 disables merging")
      ->envname("MTL_BATCH_WINDOW_MS")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  serve_cmd->add_option("--queue-depth", serve.queue_depth,
                        "Requests waiting for a worker before new ones get 503")
      ->envname("MTL_QUEUE_DEPTH")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  serve_cmd->add_option("--max-batch-sentences", serve.max_batch_sentences,
                        "Sentence cap per batch; 0 uses the model's batch size")
      ->envname("MTL_MAX_BATCH_SENTENCES")
      ->capture_default_str();
  serve_cmd->add_option("--http-threads", serve.http_threads, "Connection threads")
      ->envname("MTL_HTTP_THREADS")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  serve_cmd->add_option("--manifest", serve.manifest, "Model manifest (default: bundled)")
      ->envname("MTL_MANIFEST");
  serve_cmd->add_option("--model", serve.models,
                        "Model identifier; repeat to serve one model per language")
      ->envname("MTL_MODEL")
      ->capture_default_str();

  ParseOptions parse;
  CLI::App* parse_cmd = app.add_subcommand("parse", "Annotate lines of text or token lists");
  parse_cmd->add_option("--model", parse.model, "Model identifier")->capture_default_str();
  parse_cmd->add_option("--tasks", parse.tasks, "Comma-separated tasks (default: all)");
  parse_cmd->add_option("--manifest", parse.manifest, "Model manifest (default: bundled)")
      ->envname("MTL_MANIFEST");
  parse_cmd->add_option("input", parse.input, "Input file, or - for stdin")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }
  if (*serve_cmd) return cmd_serve(serve);
  return cmd_parse(parse);
}
