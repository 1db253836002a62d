// Copyright 2026 The gaitforge Authors
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

// HTTP+JSON front end. Routing lives in Service::handle so it can be driven
// without a socket; listen() only adapts httplib to it.

#pragma once

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <condition_variable>
#include <future>
#include <memory>
#include <mutex>
#include <regex>
#include <string>
#include <thread>

// Eigen first: httplib pulls in <resolv.h>, whose _res macro breaks Eigen.
#include "gaitforge/catalog.hpp"

#include <httplib.h>

namespace gaitforge {

struct HttpResponse {
  int status = 200;
  std::string body;
};

struct ServiceOptions {
  std::chrono::milliseconds solve_timeout{120000};
  int max_concurrent = std::clamp(static_cast<int>(std::thread::hardware_concurrency()), 1, 4);
  int queue_capacity = 8;  // solves allowed to wait for a slot
  std::string persist_path;  // when set, the catalog is saved here after every change
  SynthesisOptions synthesis;
};

class Service {
 public:
  explicit Service(GaitCatalog catalog = {}, ServiceOptions opts = {})
      : catalog_(std::make_shared<const GaitCatalog>(std::move(catalog))), opts_(std::move(opts)) {
    install_routes();
  }

  HttpResponse handle(const std::string& method, const std::string& path, const std::string& body) {
    static const std::regex kGait(R"(/api/gait/([^/]+))");
    std::smatch m;
    try {
      if (path == "/api/solve") return method == "POST" ? solve(body) : not_allowed();
      if (path == "/api/catalog") return method == "GET" ? catalog_summary() : not_allowed();
      if (path == "/api/params") return method == "GET" ? params() : not_allowed();
      if (path == "/api/label") return method == "POST" ? set_label(body) : not_allowed();
      if (std::regex_match(path, m, kGait)) return method == "GET" ? gait(url_decode(m[1].str())) : not_allowed();
      return error(404, "no route for " + path);
    } catch (const std::exception& e) {
      return error(500, e.what());
    }
  }

  std::shared_ptr<const GaitCatalog> catalog() const {
    std::lock_guard<std::mutex> lock(catalog_mutex_);
    return catalog_;
  }

  /// Blocks serving on host:port until stop() is called.
  bool listen(const std::string& host, int port) { return server_.listen(host, port); }
  /// Binds an ephemeral port and returns it (-1 on failure); serve with
  /// listen_after_bind().
  int bind_any_port(const std::string& host) { return server_.bind_to_any_port(host); }
  bool listen_after_bind() { return server_.listen_after_bind(); }
  void stop() { server_.stop(); }
  void wait_until_ready() const { server_.wait_until_ready(); }

 private:
  void install_routes() {
    auto adapt = [this](const httplib::Request& req, httplib::Response& res) {
      const HttpResponse r = handle(req.method, req.path, req.body);
      res.status = r.status;
      res.set_header("Access-Control-Allow-Origin", "*");
      res.set_content(r.body, "application/json");
    };
    server_.Get(".*", adapt);
    server_.Post(".*", adapt);
    server_.Put(".*", adapt);
    server_.Delete(".*", adapt);
    server_.Options(".*", [](const httplib::Request&, httplib::Response& res) {
      res.set_header("Access-Control-Allow-Origin", "*");
      res.set_header("Access-Control-Allow-Headers", "Content-Type");
      res.set_header("Access-Control-Allow-Methods", "GET, POST");
      res.status = 204;
    });
    const int workers = opts_.max_concurrent + opts_.queue_capacity + 4;
    server_.new_task_queue = [workers] { return new httplib::ThreadPool(workers); };
  }

  static HttpResponse ok(const json& j) { return {200, j.dump()}; }
  static HttpResponse error(int status, const std::string& message) {
    return {status, json{{"error", message}}.dump()};
  }
  static HttpResponse not_allowed() { return error(405, "method not allowed"); }

  static std::string url_decode(const std::string& s) {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '%' && i + 2 < s.size() && std::isxdigit(s[i + 1]) && std::isxdigit(s[i + 2])) {
        out.push_back(static_cast<char>(std::stoi(s.substr(i + 1, 2), nullptr, 16)));
        i += 2;
      } else {
        out.push_back(s[i]);
      }
    }
    return out;
  }

  static std::string gait_payload(const Gait& g) {
    return "{\"frames\":" + dump_frames(animation_frames(g)) + ",\"gait\":" + dump_gait(g) + "}";
  }

  HttpResponse params() const { return ok(to_json(catalog()->params)); }

  HttpResponse catalog_summary() const {
    const auto cat = catalog();
    json list = json::array();
    for (const Gait& g : cat->entries) {
      json e = {{"tl", g.spec.TL},          {"cost_mode", cost_name(g.spec.cost)}, {"status", to_string(g.status)},
                {"verified", g.verified},   {"J_star", g.J_star},                  {"t_f", g.t_f}};
      if (g.label) e["label"] = *g.label;
      list.push_back(std::move(e));
    }
    return ok({{"schema", kCatalogSchema}, {"count", cat->entries.size()}, {"entries", list}});
  }

  HttpResponse gait(const std::string& key_text) const {
    CatalogKey key;
    try {
      key = parse_key(key_text);
    } catch (const std::invalid_argument& e) {
      return error(400, e.what());
    }
    const auto cat = catalog();
    const Gait* g = cat->find(key);
    if (!g) return error(404, "no catalog entry for " + key_text);
    return {200, gait_payload(*g)};
  }

  HttpResponse set_label(const std::string& body) {
    json req;
    try {
      req = json::parse(body);
      CatalogKey key;
      key.tl = req.at("tl").get<double>();
      const auto cost = parse_cost_mode(req.at("cost_mode").get<std::string>());
      if (!cost) return error(400, "unknown cost_mode");
      key.cost = *cost;
      const std::string text = req.at("label").get<std::string>();
      std::lock_guard<std::mutex> lock(catalog_mutex_);
      auto next = std::make_shared<GaitCatalog>(*catalog_);
      try {
        label(*next, key, text);
      } catch (const std::out_of_range& e) {
        return error(404, e.what());
      }
      publish(next);
      return ok({{"tl", key.tl}, {"cost_mode", cost_name(key.cost)}, {"label", text}});
    } catch (const json::exception& e) {
      return error(400, std::string("malformed label request: ") + e.what());
    }
  }

  /// SolveRequest -> GaitSpec; throws std::invalid_argument with a message.
  GaitSpec parse_solve_request(const std::string& body) const {
    json req;
    try {
      req = json::parse(body);
    } catch (const json::parse_error& e) {
      throw std::invalid_argument(std::string("body is not JSON: ") + e.what());
    }
    if (!req.is_object()) throw std::invalid_argument("body must be a JSON object");
    for (const auto& [k, v] : req.items()) {
      if (k != "tl" && k != "cost_mode" && k != "v" && k != "params_override") {
        throw std::invalid_argument("unknown field '" + k + "'");
      }
    }
    GaitSpec spec;
    spec.params = catalog()->params;
    if (!req.contains("tl") || !req["tl"].is_number()) throw std::invalid_argument("'tl' must be a number");
    spec.TL = req["tl"].get<double>();
    if (req.contains("cost_mode")) {
      if (!req["cost_mode"].is_string()) throw std::invalid_argument("'cost_mode' must be a string");
      const auto cost = parse_cost_mode(req["cost_mode"].get<std::string>());
      if (!cost) throw std::invalid_argument("unknown cost_mode '" + req["cost_mode"].get<std::string>() + "'");
      spec.cost = *cost;
    }
    if (req.contains("v")) {
      if (!req["v"].is_number_integer()) throw std::invalid_argument("'v' must be an integer");
      spec.v = req["v"].get<int>();
    }
    if (req.contains("params_override")) spec.params = params_from_json(req["params_override"], spec.params);
    spec.validate();
    return spec;
  }

  // Bounded admission: at most max_concurrent running, queue_capacity waiting.
  class Slot {
   public:
    explicit Slot(Service& s) : s_(s) {}
    bool acquire() {
      std::unique_lock<std::mutex> lock(s_.slots_mutex_);
      if (s_.active_ + s_.waiting_ >= s_.opts_.max_concurrent + s_.opts_.queue_capacity) return false;
      ++s_.waiting_;
      s_.slots_cv_.wait(lock, [&] { return s_.active_ < s_.opts_.max_concurrent; });
      --s_.waiting_;
      ++s_.active_;
      held_ = true;
      return true;
    }
    ~Slot() {
      if (!held_) return;
      {
        std::lock_guard<std::mutex> lock(s_.slots_mutex_);
        --s_.active_;
      }
      s_.slots_cv_.notify_one();
    }

   private:
    Service& s_;
    bool held_ = false;
  };

  HttpResponse solve(const std::string& body) {
    GaitSpec spec;
    try {
      spec = parse_solve_request(body);
    } catch (const std::invalid_argument& e) {
      return error(400, e.what());
    }
    Slot slot(*this);
    if (!slot.acquire()) return error(429, "too many concurrent solves");

    auto cancel = std::make_shared<std::atomic<bool>>(false);
    SynthesisOptions so = opts_.synthesis;
    so.solver.should_stop = [cancel] { return cancel->load(); };
    std::packaged_task<Gait()> task([spec, so] { return attempt_synthesis(spec, std::nullopt, so); });
    std::future<Gait> result = task.get_future();
    std::thread worker(std::move(task));
    if (result.wait_for(opts_.solve_timeout) == std::future_status::timeout) {
      cancel->store(true);
      worker.join();
      return error(504, "solve exceeded the timeout");
    }
    worker.join();
    Gait g = result.get();
    if (!g.verified) return {422, failure_report(g).dump()};
    store(g);
    return {200, gait_payload(g)};
  }

  // Solved gaits join the in-memory catalog, replacing the same key.
  void store(const Gait& g) {
    std::lock_guard<std::mutex> lock(catalog_mutex_);
    auto next = std::make_shared<GaitCatalog>(*catalog_);
    if (Gait* old = next->find(g.spec.TL, g.spec.cost); old && std::abs(old->spec.TL - g.spec.TL) < 1e-12) {
      Gait copy = g;
      if (!copy.label) copy.label = old->label;
      *old = std::move(copy);
    } else {
      next->entries.push_back(g);
    }
    publish(next);
  }

  // Caller holds catalog_mutex_.
  void publish(std::shared_ptr<const GaitCatalog> next) {
    catalog_ = std::move(next);
    if (!opts_.persist_path.empty()) save(*catalog_, opts_.persist_path);
  }

  mutable std::mutex catalog_mutex_;
  std::shared_ptr<const GaitCatalog> catalog_;
  ServiceOptions opts_;
  std::mutex slots_mutex_;
  std::condition_variable slots_cv_;
  int active_ = 0;
  int waiting_ = 0;
  httplib::Server server_;
};

}  // namespace gaitforge
