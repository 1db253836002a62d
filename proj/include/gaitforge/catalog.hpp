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

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iterator>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "gaitforge/serialize.hpp"

namespace gaitforge {

inline constexpr const char* kCatalogSchema = "gaitforge-catalog/1";
inline constexpr const char* kCodeVersion = "gaitforge 0.1.0";

/// TL values written in decimal and read back, so 0.1 + 2 * 0.1 is stored as
/// the double nearest 0.3.
inline std::vector<double> tl_grid(double tl_min, double tl_max, double tl_step) {
  if (!(tl_step > 0.0) || !(tl_min > 0.0) || !(tl_max >= tl_min)) {
    throw std::invalid_argument("tl grid: need 0 < min <= max and step > 0");
  }
  std::vector<double> out;
  const int n = static_cast<int>(std::floor((tl_max - tl_min) / tl_step + 1e-9)) + 1;
  for (int i = 0; i < n; ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", tl_min + i * tl_step);
    out.push_back(std::stod(buf));
  }
  return out;
}

struct CatalogGrid {
  double tl_min = 0.1;
  double tl_max = 0.9;
  double tl_step = 0.1;
  std::vector<CostMode> costs{std::begin(kAllCostModes), std::end(kAllCostModes)};
  int v = 25;

  bool operator==(const CatalogGrid&) const = default;
};

struct CatalogKey {
  double tl = 0.0;
  CostMode cost = CostMode::TorqueSquared;
};

/// "0.5,torque2" (either cost spelling).
inline CatalogKey parse_key(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw std::invalid_argument("catalog key must be 'tl,cost': " + text);
  CatalogKey k;
  std::size_t used = 0;
  const std::string tl = text.substr(0, comma);
  try {
    k.tl = std::stod(tl, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != tl.size()) throw std::invalid_argument("catalog key: bad TL '" + tl + "'");
  const auto cost = parse_cost_mode(text.substr(comma + 1));
  if (!cost) throw std::invalid_argument("catalog key: unknown cost '" + text.substr(comma + 1) + "'");
  k.cost = *cost;
  return k;
}

struct GaitCatalog {
  ModelParams params;
  json solver_opts = json::object();
  std::string code_version = kCodeVersion;
  CatalogGrid grid;
  std::vector<Gait> entries;  // cost-major, TL ascending

  /// Entry whose TL is within half a grid step (or 1e-9) of `tl`.
  const Gait* find(double tl, CostMode cost) const {
    const double tol = std::max(1e-9, 0.5 * grid.tl_step - 1e-12);
    const Gait* best = nullptr;
    for (const Gait& g : entries) {
      if (g.spec.cost != cost || std::abs(g.spec.TL - tl) > tol) continue;
      if (!best || std::abs(g.spec.TL - tl) < std::abs(best->spec.TL - tl)) best = &g;
    }
    return best;
  }
  Gait* find(double tl, CostMode cost) {
    return const_cast<Gait*>(static_cast<const GaitCatalog*>(this)->find(tl, cost));
  }
  const Gait* find(const CatalogKey& k) const { return find(k.tl, k.cost); }

  int converged() const {
    return static_cast<int>(std::count_if(entries.begin(), entries.end(),
                                          [](const Gait& g) { return g.status == SolveStatus::Converged; }));
  }
  int verified() const {
    return static_cast<int>(std::count_if(entries.begin(), entries.end(), [](const Gait& g) { return g.verified; }));
  }

  bool operator==(const GaitCatalog&) const = default;
};

/// Attaches or overwrites a free-form label. Throws std::out_of_range for a
/// missing key.
inline void label(GaitCatalog& cat, const CatalogKey& key, const std::string& text) {
  Gait* g = cat.find(key.tl, key.cost);
  if (!g) {
    std::ostringstream os;
    os << "no catalog entry for TL " << key.tl << ", cost " << cost_name(key.cost);
    throw std::out_of_range(os.str());
  }
  g->label = text;
}

struct SweepOptions {
  SynthesisOptions synthesis;
  double tf_min = 0.2;
  double tf_max = 2.0;
  bool warm_start = true;
  int threads = 1;  // concurrent cost lanes
  // Called after each entry, from the lane's thread, serialized by the sweep.
  std::function<void(const Gait&)> on_entry;
  std::function<bool()> should_stop;
};

/// Solves the grid cost-major, TL ascending. Each solve in a lane warm-starts
/// from the nearest already converged TL of that lane. Failures are stored,
/// not thrown.
inline GaitCatalog sweep(const CatalogGrid& grid, const ModelParams& params, const SweepOptions& opts = {}) {
  params.validate();
  const std::vector<double> tls = tl_grid(grid.tl_min, grid.tl_max, grid.tl_step);
  const double reach = kinematic_reach(params);
  if (tls.back() >= reach) throw std::invalid_argument("sweep: TL grid must lie inside (0, 2r)");

  GaitCatalog cat;
  cat.params = params;
  cat.grid = grid;
  cat.solver_opts = to_json(opts.synthesis.solver);
  cat.entries.resize(tls.size() * grid.costs.size());

  std::mutex report;
  auto lane = [&](std::size_t c) {
    std::optional<Trajectory> warm;
    for (std::size_t i = 0; i < tls.size(); ++i) {
      GaitSpec spec;
      spec.TL = tls[i];
      spec.cost = grid.costs[c];
      spec.v = grid.v;
      spec.tf_min = opts.tf_min;
      spec.tf_max = opts.tf_max;
      spec.params = params;
      SynthesisOptions so = opts.synthesis;
      if (opts.should_stop) so.solver.should_stop = opts.should_stop;
      Gait g = attempt_synthesis(spec, opts.warm_start ? warm : std::nullopt, so);
      if (g.status == SolveStatus::Converged) warm = g.trajectory();
      Gait& slot = cat.entries[c * tls.size() + i];
      slot = std::move(g);
      if (opts.on_entry) {
        std::lock_guard<std::mutex> lock(report);
        opts.on_entry(slot);
      }
    }
  };

  const int workers = std::clamp(opts.threads, 1, static_cast<int>(grid.costs.size()));
  if (workers == 1) {
    for (std::size_t c = 0; c < grid.costs.size(); ++c) lane(c);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t c = next++; c < grid.costs.size(); c = next++) lane(c);
      });
    }
    for (auto& t : pool) t.join();
  }
  return cat;
}

inline json to_json(const GaitCatalog& cat) {
  json costs = json::array();
  for (CostMode c : cat.grid.costs) costs.push_back(cost_name(c));
  json entries = json::array();
  for (const Gait& g : cat.entries) entries.push_back(entry_to_json(g));
  return {{"schema", kCatalogSchema},
          {"code_version", cat.code_version},
          {"params", to_json(cat.params)},
          {"solver_opts", cat.solver_opts},
          {"grid",
           {{"tl_min", cat.grid.tl_min},
            {"tl_max", cat.grid.tl_max},
            {"tl_step", cat.grid.tl_step},
            {"costs", costs},
            {"v", cat.grid.v}}},
          {"entries", entries}};
}

/// Parses a whole catalog or throws; a schema mismatch is reported before
/// any entry is read.
inline GaitCatalog catalog_from_json(const json& j) {
  if (!j.is_object() || !j.contains("schema")) throw SchemaError("catalog: missing schema field");
  const std::string schema = j.at("schema").get<std::string>();
  if (schema != kCatalogSchema) {
    throw SchemaError("catalog: unsupported schema version '" + schema + "' (expected " + kCatalogSchema + ")");
  }
  GaitCatalog cat;
  cat.params = params_from_json(j.at("params"));
  cat.solver_opts = j.at("solver_opts");
  cat.code_version = j.at("code_version").get<std::string>();
  const json& grid = j.at("grid");
  cat.grid.tl_min = grid.at("tl_min").get<double>();
  cat.grid.tl_max = grid.at("tl_max").get<double>();
  cat.grid.tl_step = grid.at("tl_step").get<double>();
  cat.grid.v = grid.at("v").get<int>();
  cat.grid.costs.clear();
  for (const json& c : grid.at("costs")) {
    const auto mode = parse_cost_mode(c.get<std::string>());
    if (!mode) throw std::invalid_argument("catalog: unknown cost '" + c.get<std::string>() + "'");
    cat.grid.costs.push_back(*mode);
  }
  for (const json& e : j.at("entries")) cat.entries.push_back(entry_from_json(e, cat.params));
  return cat;
}

inline void save(const GaitCatalog& cat, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write catalog: " + path);
  out << to_json(cat).dump(1) << '\n';
  if (!out) throw std::runtime_error("error writing catalog: " + path);
}

inline GaitCatalog load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read catalog: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error("catalog " + path + ": " + e.what());
  }
  return catalog_from_json(j);
}

/// A (label, TL, cost) row of a style-label fixture.
struct StyleLabel {
  std::string label;
  double tl = 0.0;
  CostMode cost = CostMode::TorqueSquared;
};

/// Reads {"labels": [{"label", "tl", "cost_mode"}, ...]}.
inline std::vector<StyleLabel> style_labels_from_json(const json& j) {
  std::vector<StyleLabel> out;
  for (const json& row : j.at("labels")) {
    const auto cost = parse_cost_mode(row.at("cost_mode").get<std::string>());
    if (!cost) throw std::invalid_argument("style labels: unknown cost '" + row.at("cost_mode").get<std::string>() + "'");
    out.push_back({row.at("label").get<std::string>(), row.at("tl").get<double>(), *cost});
  }
  return out;
}

inline std::vector<StyleLabel> load_style_labels(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read style labels: " + path);
  return style_labels_from_json(json::parse(in));
}

/// Applies the labels whose keys exist in the catalog; returns how many.
inline int apply_style_labels(GaitCatalog& cat, const std::vector<StyleLabel>& labels) {
  int n = 0;
  for (const StyleLabel& s : labels) {
    if (Gait* g = cat.find(s.tl, s.cost)) {
      g->label = s.label;
      ++n;
    }
  }
  return n;
}

}  // namespace gaitforge
