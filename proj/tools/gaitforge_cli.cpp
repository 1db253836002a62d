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

// gaitforge: synth | sweep | simulate | export | serve
// Exit status: 0 success, 1 synthesis/simulation failure, 2 usage error.

#include <chrono>
#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "gaitforge/catalog.hpp"
#include "gaitforge/service.hpp"

namespace {

using namespace gaitforge;

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError(path + ": " + e.what());
  }
}

/// A gait file, or one entry of a catalog file selected by key.
Gait load_gait(const std::string& path, const std::string& key) {
  const json j = read_json(path);
  const std::string schema = j.value("schema", "");
  if (schema == kCatalogSchema) {
    if (key.empty()) throw UsageError(path + " is a catalog; pass --key tl,cost");
    const GaitCatalog cat = catalog_from_json(j);
    const Gait* g = cat.find(parse_key(key));
    if (!g) throw UsageError("no catalog entry for " + key);
    return *g;
  }
  return gait_from_json(j);
}

ModelParams params_from(const std::string& path) { return path.empty() ? ModelParams{} : load_params(path); }

std::vector<CostMode> parse_costs(const std::string& text) {
  if (text == "all") return {std::begin(kAllCostModes), std::end(kAllCostModes)};
  std::vector<CostMode> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto c = parse_cost_mode(item);
    if (!c) throw UsageError("unknown cost '" + item + "' (angle, rate2, const, torque2 or all)");
    out.push_back(*c);
  }
  if (out.empty()) throw UsageError("--costs is empty");
  return out;
}

int usage(const CLI::App& app, const std::string& message) {
  std::cerr << "usage error: " << message << "\n\n";
  for (const CLI::App* sub : app.get_subcommands()) std::cerr << sub->help();
  return kUsage;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compass-gait gait synthesis: solve, sweep, simulate, export and serve gaits."};
  app.require_subcommand(1);
  app.set_version_flag("--version", kCodeVersion);
  app.failure_message(CLI::FailureMessage::help);

  // synth
  auto* synth = app.add_subcommand("synth", "Solve one gait and print its JSON");
  double tl = 0.5;
  std::string cost = "torque2", params_path, out_path, warm_path;
  int v = 25, verbosity = 0;
  double tf_min = 0.2, tf_max = 2.0;
  synth->add_option("--tl", tl, "Step length, m")->required();
  synth->add_option("--cost", cost, "angle | rate2 | const | torque2")->capture_default_str();
  synth->add_option("--v", v, "Collocation nodes")->capture_default_str();
  synth->add_option("--tf-min", tf_min, "Lower step-duration bound, s")->capture_default_str();
  synth->add_option("--tf-max", tf_max, "Upper step-duration bound, s")->capture_default_str();
  synth->add_option("--params", params_path, "Model parameter file (key = value lines)");
  synth->add_option("--warm", warm_path, "Gait JSON to warm-start from");
  synth->add_option("-o,--output", out_path, "Output file (default stdout)");
  synth->add_flag("--verbose", verbosity, "Solver log to stderr (repeat for inner iterations)");

  // sweep
  auto* sw = app.add_subcommand("sweep", "Solve a TL grid for several costs and write a catalog");
  CatalogGrid grid;
  std::string costs = "all", labels_path;
  int threads = 1;
  bool cold = false;
  sw->add_option("--tl-min", grid.tl_min)->capture_default_str();
  sw->add_option("--tl-max", grid.tl_max)->capture_default_str();
  sw->add_option("--tl-step", grid.tl_step)->capture_default_str();
  sw->add_option("--costs", costs, "Comma list or 'all'")->capture_default_str();
  sw->add_option("--v", grid.v, "Collocation nodes")->capture_default_str();
  sw->add_option("--params", params_path, "Model parameter file");
  sw->add_option("--threads", threads, "Concurrent cost lanes")->capture_default_str();
  sw->add_option("--labels", labels_path, "Style-label fixture to apply");
  sw->add_flag("--cold", cold, "Solve every entry from the stock guess");
  sw->add_option("-o,--output", out_path, "Catalog file")->required();

  // simulate
  auto* sim = app.add_subcommand("simulate", "Replay a gait's control for several steps; CSV out");
  std::string gait_path, key;
  int steps = 1;
  bool refine = false;
  sim->add_option("--gait", gait_path, "Gait or catalog JSON")->required();
  sim->add_option("--key", key, "tl,cost when --gait is a catalog");
  sim->add_option("--steps", steps, "Number of steps")->capture_default_str()->check(CLI::PositiveNumber);
  sim->add_flag("--refine", refine, "Start from the fixed point of the simulated step map");
  sim->add_option("-o,--output", out_path, "CSV file (default stdout)");

  // export
  auto* ex = app.add_subcommand("export", "Animation frames (JSON or CSV) or the gait JSON itself");
  std::string format = "json";
  ex->add_option("--from", gait_path, "Gait or catalog JSON")->required();
  ex->add_option("--key", key, "tl,cost when --from is a catalog");
  ex->add_option("--format", format, "json | csv | gait")->check(CLI::IsMember({"json", "csv", "gait"}))->capture_default_str();
  ex->add_option("-o,--output", out_path, "Output file (default stdout)");

  // serve
  auto* srv = app.add_subcommand("serve", "Run the HTTP+JSON service");
  std::string host = "127.0.0.1", catalog_path;
  int port = 8080, max_concurrent = 0;
  double timeout_s = 120.0;
  srv->add_option("--host", host)->capture_default_str();
  srv->add_option("--port", port)->capture_default_str();
  bool persist = false;
  srv->add_option("--catalog", catalog_path, "Catalog to serve");
  srv->add_flag("--persist", persist, "Write solves and labels back to the --catalog file");
  srv->add_option("--params", params_path, "Model parameters when no catalog is given");
  srv->add_option("--timeout", timeout_s, "Per-solve timeout, s")->capture_default_str();
  srv->add_option("--max-concurrent", max_concurrent, "Concurrent solves (default min(cores, 4))");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*synth) {
      GaitSpec spec;
      spec.TL = tl;
      const auto c = parse_cost_mode(cost);
      if (!c) throw UsageError("unknown cost '" + cost + "'");
      spec.cost = *c;
      spec.v = v;
      spec.tf_min = tf_min;
      spec.tf_max = tf_max;
      spec.params = params_from(params_path);
      try {
        spec.validate();
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      SynthesisOptions opts;
      opts.solver.verbosity = verbosity;
      opts.solver.log = &std::cerr;
      std::optional<Trajectory> warm;
      if (!warm_path.empty()) warm = gait_from_json(read_json(warm_path)).trajectory();
      const Gait g = attempt_synthesis(spec, warm, opts);
      if (!g.verified) {
        std::cerr << failure_report(g).dump(2) << '\n';
        return kFailed;
      }
      write_output(out_path, dump_gait(g) + "\n");
      return kOk;
    }

    if (*sw) {
      grid.costs = parse_costs(costs);
      const ModelParams params = params_from(params_path);
      SweepOptions opts;
      opts.threads = threads;
      opts.warm_start = !cold;
      const auto t0 = std::chrono::steady_clock::now();
      opts.on_entry = [&](const Gait& g) {
        const double el = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::fprintf(stderr, "%-8s TL %-5g %-10s %-8s J % .6g  t_f %.4g  [%.1fs]\n", cost_name(g.spec.cost), g.spec.TL,
                     to_string(g.status), g.verified ? "verified" : "-", g.J_star, g.t_f, el);
      };
      GaitCatalog cat;
      try {
        cat = sweep(grid, params, opts);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      if (!labels_path.empty()) apply_style_labels(cat, load_style_labels(labels_path));
      save(cat, out_path);
      std::fprintf(stderr, "%zu entries, %d converged, %d verified -> %s\n", cat.entries.size(), cat.converged(),
                   cat.verified(), out_path.c_str());
      return kOk;
    }

    if (*sim) {
      const Gait g = load_gait(gait_path, key);
      if (g.states.empty()) throw UsageError("gait has no trajectory");
      SwingState x0 = g.states.front();
      const ControlSignal u = g.control();
      if (refine) x0 = refine_periodic_start(x0, u, g.spec.params).x;
      const RolloutResult r = rollout(x0, u, steps, g.spec.params);
      std::ostringstream os;
      write_csv(os, r.steps);
      write_output(out_path, os.str());
      if (r.failure) {
        std::cerr << "simulation stopped at step " << r.failure->step << ": " << r.failure->message << '\n';
        return kFailed;
      }
      return kOk;
    }

    if (*ex) {
      const Gait g = load_gait(gait_path, key);
      if (format == "gait") {
        write_output(out_path, dump_gait(g) + "\n");
        return kOk;
      }
      const AnimationFrames frames = animation_frames(g);
      if (format == "csv") {
        std::ostringstream os;
        write_frames_csv(os, frames);
        write_output(out_path, os.str());
      } else {
        write_output(out_path, dump_frames(frames) + "\n");
      }
      return kOk;
    }

    if (*srv) {
      GaitCatalog cat;
      if (!catalog_path.empty()) {
        cat = load(catalog_path);
      } else {
        cat.params = params_from(params_path);
      }
      ServiceOptions opts;
      opts.solve_timeout = std::chrono::milliseconds(static_cast<long long>(timeout_s * 1000.0));
      if (max_concurrent > 0) opts.max_concurrent = max_concurrent;
      if (persist) {
        if (catalog_path.empty()) throw UsageError("--persist needs --catalog");
        opts.persist_path = catalog_path;
      }
      static Service* running = nullptr;
      Service service(std::move(cat), opts);
      running = &service;
      std::signal(SIGINT, [](int) { running->stop(); });
      std::signal(SIGTERM, [](int) { running->stop(); });
      std::cerr << "serving on http://" << host << ':' << port << '\n';
      if (!service.listen(host, port)) {
        std::cerr << "cannot listen on " << host << ':' << port << '\n';
        return kFailed;
      }
      return kOk;
    }
  } catch (const UsageError& e) {
    return usage(app, e.what());
  } catch (const SchemaError& e) {
    return usage(app, e.what());
  } catch (const std::invalid_argument& e) {
    return usage(app, e.what());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailed;
  }
  return kUsage;
}
