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

// Acceptance checks. Prints one PASS or FAIL line per criterion and exits
// non-zero if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "httplib.h"
#include "json.hpp"
#include "mtl/batching.hpp"
#include "mtl/con_tree.hpp"
#include "mtl/edit_script.hpp"
#include "mtl/http_server.hpp"
#include "mtl/mst.hpp"
#include "mtl/penman.hpp"
#include "mtl/registry.hpp"
#include "mtl/sampler.hpp"
#include "mtl/service.hpp"
#include "mtl/windowing.hpp"
#include "support/baselines.hpp"
#include "support/files.hpp"
#include "support/generators.hpp"

using namespace mtl;
using namespace std::chrono_literals;
using nlohmann::json;
namespace t = mtl::testing;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, auto... args) {
  char buffer[512];
  std::snprintf(buffer, sizeof buffer, format, args...);
  return buffer;
}

const Registry& registry() {
  static const Registry r(Manifest::load(t::data_path("manifest.json")));
  return r;
}

std::shared_ptr<const Pipeline> full_pipeline() {
  return registry().load("LEM_POS_NER_DEP_SDP_CON_AMR_EN");
}

// ---------------------------------------------------------------------------

Outcome windowing_partition() {
  const auto start = Clock::now();
  std::size_t plans = 0;
  for (std::size_t n = 2; n <= 200; ++n) {
    std::vector<long> seq(n);
    std::iota(seq.begin(), seq.end(), 0L);
    for (std::size_t m = 4; m <= 32; ++m) {
      const WindowPlan plan = plan_windows(n, m);
      std::size_t cursor = 0;
      for (const Window& w : plan.windows) {
        if (w.size() > m || w.keep_begin != cursor || w.keep_end <= w.keep_begin) {
          return {false, fmt("n=%zu m=%zu: bad window or gap at %zu", n, m, cursor)};
        }
        for (std::size_t p = w.keep_begin; p < w.keep_end; ++p) {
          if (p != 0 && p != n - 1 && (p < w.begin || p >= w.end)) {
            return {false, fmt("n=%zu m=%zu: kept position %zu outside its window", n, m, p)};
          }
        }
        cursor = w.keep_end;
      }
      if (cursor != n) return {false, fmt("n=%zu m=%zu: kept ranges end at %zu", n, m, cursor)};
      // Identity encoder: every window's outputs are its inputs.
      const auto windows = apply_windows<long>(seq, plan);
      if (restore(windows, plan) != seq) return {false, fmt("n=%zu m=%zu: restore differs", n, m)};
      ++plans;
    }
  }
  const double elapsed = seconds_since(start);
  return {elapsed < 10.0, fmt("%zu (n, m) plans partition and restore exactly in %.2f s (limit 10 s)",
                             plans, elapsed)};
}

Outcome mst_brute_force() {
  const auto start = Clock::now();
  t::Rng rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = t::uniform(rng, 1, 5);
    const Matrix arcs = t::random_arc_scores(rng, n);
    const auto heads = mst_decode(arcs);
    if (!t::is_single_root_tree(heads)) return {false, fmt("trial %d: not a single-root tree", trial)};
    const double got = tree_score(arcs, heads);
    const double best = t::brute_force_best_tree(arcs);
    if (got != best) return {false, fmt("trial %d (n=%d): score %g, brute force %g", trial, n, got, best)};
  }
  const double elapsed = seconds_since(start);
  return {elapsed < 30.0, fmt("1000 integer matrices, n<=5, equal to brute force in %.2f s", elapsed)};
}

Outcome edit_script_lexicon() {
  std::ifstream in(t::data_path("lemma_lexicon.tsv"));
  std::string line;
  std::size_t pairs = 0;
  bool is_be = false, atlanta = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    const std::string form = line.substr(0, tab), lemma = line.substr(tab + 1);
    is_be |= form == "is" && lemma == "be";
    atlanta |= form == "Atlanta" && lemma == "atlanta";
    ++pairs;
    if (apply_edit_script(derive_edit_script(form, lemma), form) != lemma) {
      return {false, "'" + form + "' does not reconstruct '" + lemma + "'"};
    }
  }
  if (pairs < 500 || !is_be || !atlanta) {
    return {false, fmt("lexicon has %zu pairs; is->be %d, Atlanta->atlanta %d", pairs, is_be, atlanta)};
  }
  return {true, fmt("%zu/%zu pairs reconstruct, including is->be and Atlanta->atlanta", pairs, pairs)};
}

Outcome golden_json() {
  const auto pipeline = full_pipeline();
  const Document doc = pipeline->parse({{"Emory", "NLP", "is", "in", "Atlanta"}},
                                       {Task::lem, Task::pos, Task::ner, Task::dep});
  const std::string got = doc_to_json(doc) + "\n";
  const std::string want = t::slurp(t::data_path("golden/emory_nlp_tok_lem_pos_ner_dep.json"));
  if (got != want) return {false, "output differs from golden file: " + got};
  return {true, fmt("%zu bytes identical to data/golden/emory_nlp_tok_lem_pos_ner_dep.json", got.size())};
}

Outcome format_round_trips() {
  t::Rng rng(77);
  for (int i = 0; i < 1000; ++i) {
    const Document doc = t::random_document(rng);
    if (doc_from_json(doc_to_json(doc)) != doc) return {false, fmt("document %d differs", i)};
  }
  for (int i = 0; i < 1000; ++i) {
    const Sentence tokens = t::random_sentence(rng, 1, 12);
    const ConNode tree = t::random_tree(rng, tokens, 0, tokens.size());
    if (bracketed_to_con(con_to_bracketed(tree)) != tree) return {false, fmt("tree %d differs", i)};
  }
  for (int i = 0; i < 1000; ++i) {
    auto graph = t::random_amr(rng);
    auto back = penman_to_amr(amr_to_penman(graph));
    std::ranges::sort(graph);
    std::ranges::sort(back);
    if (back != graph) return {false, fmt("graph %d differs", i)};
  }
  return {true, "1000 documents, 1000 bracketed trees, 1000 Penman graphs"};
}

Outcome sampler_caps() {
  t::Rng rng(1234);
  std::size_t default_config = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    BatchSpec spec{128, 12800};
    std::size_t max_len = 200;
    if (trial % 2 == 1) {
      spec = BatchSpec{static_cast<std::size_t>(t::uniform(rng, 1, 64)),
                       static_cast<std::size_t>(t::uniform(rng, 100, 4000))};
      max_len = std::min<std::size_t>(100, spec.batch_max_tokens);
    } else {
      ++default_config;
    }
    std::vector<std::size_t> lengths(static_cast<std::size_t>(t::uniform(rng, 0, 600)));
    for (auto& l : lengths) l = static_cast<std::size_t>(t::uniform(rng, 1, static_cast<int>(max_len)));
    const BatchAssignment a = build_batches(lengths, spec);

    std::vector<std::size_t> seen;
    for (const Batch& b : a.batches) {
      std::size_t longest = 0;
      for (std::size_t i : b.indices) longest = std::max(longest, lengths.at(i));
      if (b.indices.size() > spec.batch_size || b.indices.size() * longest > spec.batch_max_tokens) {
        return {false, fmt("trial %d: batch breaks a cap", trial)};
      }
      seen.insert(seen.end(), b.indices.begin(), b.indices.end());
    }
    std::ranges::sort(seen);
    for (std::size_t i = 0; i < seen.size(); ++i) {
      if (seen[i] != i) return {false, fmt("trial %d: not a permutation", trial)};
    }
    if (seen.size() != lengths.size()) return {false, fmt("trial %d: not a permutation", trial)};

    std::vector<std::size_t> order(lengths.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    const std::size_t baseline = t::greedy_padding(lengths, order, spec);
    if (a.padded_tokens() > baseline) {
      return {false, fmt("trial %d: %zu padded tokens, random-order baseline %zu", trial,
                         a.padded_tokens(), baseline)};
    }
  }
  return {true, fmt("1000 vectors (%zu at batch_size=128, batch_max_tokens=12800): caps, "
                    "permutation, padding <= random order", default_config)};
}

Outcome server_concurrency() {
  const auto start = Clock::now();
  const auto pipeline = full_pipeline();
  ServiceConfig config;
  config.workers = 4;
  Service service(config, {pipeline});
  HttpServer server(HttpConfig{"127.0.0.1", 0, 128, ""}, service);
  server.start();

  const std::vector<std::vector<std::string>> task_sets = {
      {"pos"}, {"pos", "dep"}, {"lem", "ner"}, {}, {"con", "amr"}};
  constexpr int kClients = 100;
  std::vector<std::string> sent(kClients), got(kClients);
  std::vector<int> status(kClients, 0);
  std::vector<std::thread> threads;
  for (int i = 0; i < kClients; ++i) {
    threads.emplace_back([&, i] {
      std::mt19937 rng(static_cast<unsigned>(i) + 1);
      json body;
      const std::string nonce = "N" + std::to_string(i) + "q" + std::to_string(rng() % 100000);
      if (i % 3 == 0) {
        body["text"] = "The report from " + nonce + " arrived. It was short.";
      } else {
        json tokens = json::array();
        for (unsigned s = 0; s <= rng() % 3; ++s) tokens.push_back({nonce, "is", "in", "Atlanta"});
        body["tokens"] = tokens;
      }
      const auto& tasks = task_sets[static_cast<std::size_t>(i) % task_sets.size()];
      if (!tasks.empty()) body["models"] = tasks;
      sent[i] = body.dump();
      httplib::Client client("127.0.0.1", server.port());
      client.set_read_timeout(60, 0);
      if (auto res = client.Post("/parse", sent[i], "application/json")) {
        status[i] = res->status;
        got[i] = res->body;
      }
    });
  }
  for (auto& th : threads) th.join();
  server.stop();
  service.stop();

  for (int i = 0; i < kClients; ++i) {
    if (status[i] != 200) return {false, fmt("client %d got status %d", i, status[i])};
    const json request = json::parse(sent[i]);
    std::vector<std::string> names;
    if (request.contains("models")) names = request["models"].get<std::vector<std::string>>();
    const auto tasks = pipeline->resolve_tasks(names);
    const Document expected = request.contains("text")
                                  ? pipeline->parse_text(request["text"].get<std::string>(), tasks)
                                  : pipeline->parse(request["tokens"].get<std::vector<Sentence>>(), tasks);
    if (got[i] != doc_to_json(expected)) return {false, fmt("client %d received another document", i)};
  }
  std::map<std::uint64_t, int> answered;
  std::size_t merged = 0;
  const auto tickets = service.tickets();
  for (const auto& ticket : tickets) {
    merged += ticket.members.size() > 1;
    for (std::size_t k = 0; k < ticket.members.size(); ++k) {
      ++answered[ticket.members[k]];
      if (ticket.member_signatures[k] != ticket.signature) {
        return {false, fmt("ticket %llu mixes task signatures",
                           static_cast<unsigned long long>(ticket.sequence))};
      }
    }
  }
  if (answered.size() != kClients) return {false, fmt("%zu requests scheduled", answered.size())};
  for (const auto& [id, n] : answered) {
    if (n != 1) return {false, "a request was scheduled twice"};
  }

  // FIFO: deterministic simulation with equal batch latencies.
  t::Rng rng(5);
  const std::vector<std::vector<Task>> kinds = {{Task::pos}, {Task::dep}, {Task::pos, Task::dep}};
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<SimulatedRequest> requests;
    Duration at{};
    for (int i = 0; i < 100; ++i) {
      at += std::chrono::microseconds(t::uniform(rng, 0, 3000));
      requests.push_back({static_cast<std::uint64_t>(i), at, kinds[static_cast<std::size_t>(i) % 3], "en",
                          static_cast<std::size_t>(t::uniform(rng, 1, 3))});
    }
    SimulationConfig sim;
    sim.workers = 4;
    sim.window = std::chrono::milliseconds(t::uniform(rng, 0, 10));
    sim.max_sentences = static_cast<std::size_t>(t::uniform(rng, 1, 32));
    const auto done = simulate_schedule(requests, sim, [](const BatchTicket&) { return 9ms; });
    std::map<std::string, std::uint64_t> last;
    for (const auto& c : done) {
      const std::string cls = task_key(requests[c.id].tasks);
      if (last.contains(cls) && last[cls] > c.id) {
        return {false, fmt("simulation %d: completion order differs from arrival order", trial)};
      }
      last[cls] = c.id;
    }
    if (done.size() != requests.size()) return {false, "simulation lost a request"};
  }

  // FIFO on the running service: manual clock, one worker.
  auto manual = std::make_shared<ManualClock>();
  std::vector<std::string> order;
  std::mutex mu;
  ServiceConfig serial;
  serial.workers = 1;
  serial.batch_window = 0ms;
  Service fifo(serial, {pipeline}, manual, [&](const Pipeline& p, const BatchTicket& ticket) {
    std::lock_guard lock(mu);
    order.push_back(ticket.sentences.front().front());
    return p.parse(ticket.sentences, ticket.tasks);
  });
  std::vector<std::future<ParseResult>> futures;
  std::vector<std::string> expected;
  for (int i = 0; i < 30; ++i) {
    expected.push_back("r" + std::to_string(i));
    futures.push_back(fifo.submit({{expected.back()}}, {i % 3 ? Task::pos : Task::dep}, "en"));
    manual->advance(1ms);
  }
  for (auto& f : futures) f.get();
  if (order != expected) return {false, "service executed requests out of arrival order"};

  const double elapsed = seconds_since(start);
  return {elapsed < 60.0,
          fmt("100 clients answered once with their own documents; %zu tickets (%zu merged), all "
              "homogeneous; FIFO in 300 simulations and on a manual clock; %.2f s",
              tickets.size(), merged, elapsed)};
}

// Requests per second for 64 concurrent single-sentence requests against a
// pipeline that costs 20 ms per batch plus 1 ms per sentence.
double throughput(Duration window) {
  BatchRunner cost_model = [](const Pipeline&, const BatchTicket& ticket) {
    std::this_thread::sleep_for(20ms + 1ms * ticket.sentences.size());
    Document doc;
    doc.tok = ticket.sentences;
    return doc;
  };
  ServiceConfig config;
  config.workers = 4;
  config.batch_window = window;
  Service service(config, {full_pipeline()}, std::make_shared<SteadyClock>(), cost_model);
  HttpServer server(HttpConfig{"127.0.0.1", 0, 128, ""}, service);
  server.start();

  constexpr int kRequests = 64;
  std::vector<httplib::Client> clients;
  clients.reserve(kRequests);
  for (int i = 0; i < kRequests; ++i) {
    clients.emplace_back("127.0.0.1", server.port());
    clients.back().set_read_timeout(60, 0);
  }
  std::atomic<int> ok{0};
  std::vector<std::thread> threads;
  std::atomic<bool> go{false};
  for (int i = 0; i < kRequests; ++i) {
    threads.emplace_back([&, i] {
      while (!go.load()) std::this_thread::yield();
      const std::string body = R"({"tokens": [["request)" + std::to_string(i) + R"("]], "models": ["pos"]})";
      auto res = clients[static_cast<std::size_t>(i)].Post("/parse", body, "application/json");
      if (res && res->status == 200) ++ok;
    });
  }
  const auto start = Clock::now();
  go = true;
  for (auto& th : threads) th.join();
  const double elapsed = seconds_since(start);
  server.stop();
  return ok == kRequests ? kRequests / elapsed : 0.0;
}

Outcome batching_throughput() {
  std::string detail;
  bool pass = true;
  for (int run = 0; run < 3; ++run) {
    const double unbatched = throughput(0ms);
    const double batched = throughput(5ms);
    const double ratio = unbatched > 0 ? batched / unbatched : 0.0;
    pass &= ratio >= 2.0;
    detail += fmt("%srun %d: %.0f vs %.0f req/s, x%.2f", run ? "; " : "", run + 1, batched,
                  unbatched, ratio);
  }
  return {pass, detail};
}

Outcome encoder_sharing() {
  const auto base = full_pipeline();
  auto counter = std::make_shared<CountingEncoder>(base->components().encoder);
  PipelineComponents components = base->components();
  components.encoder = counter;
  PipelineConfig config = base->config();
  config.window = 8;
  config.batch = BatchSpec{4, 64};
  const Pipeline pipeline(config, components);

  t::Rng rng(9);
  std::vector<Sentence> sentences{{"Emory", "NLP", "is", "in", "Atlanta"}};
  for (int i = 0; i < 20; ++i) sentences.push_back(t::random_sentence(rng, 1, 30));

  pipeline.parse(sentences, {Task::pos});
  const std::size_t one = counter->calls();
  counter->reset();
  pipeline.parse(sentences);
  const std::size_t seven = counter->calls();
  if (config.tasks.size() != 7) return {false, "pipeline does not serve seven tasks"};
  return {one == seven && one > 1,
          fmt("%zu encoder calls for 1 task, %zu for 7 tasks (%zu windows, %zu sentences)", one,
              seven, counter->windows(), sentences.size())};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"sliding-window partition and restore", windowing_partition},
      {"MST equals brute force", mst_brute_force},
      {"edit-script lexicon round trip", edit_script_lexicon},
      {"golden JSON for tok/lem/pos/ner/dep", golden_json},
      {"document, tree and graph format round trips", format_round_trips},
      {"sampler caps, permutation and padding", sampler_caps},
      {"server routing, homogeneity and FIFO under concurrency", server_concurrency},
      {"batched throughput at least 2x unbatched", batching_throughput},
      {"encoder calls independent of task count", encoder_sharing},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    failed += !outcome.pass;
    std::printf("%s [%zu/%zu] %s: %s\n", outcome.pass ? "PASS" : "FAIL", i + 1, criteria.size(),
                criteria[i].first.c_str(), outcome.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
