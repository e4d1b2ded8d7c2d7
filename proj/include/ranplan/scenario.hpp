// Copyright 2026 The ranplan Authors
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

// Planning instances: the deployment area, candidate sites (CS), test
// points (TP), fixed obstacles, and the planning parameters that go with
// them. Instances persist as a versioned JSON document:
//
//   {
//     "version": 1,
//     "area": {"width": 300, "height": 400},
//     "candidate_sites": [[x, y], ...],
//     "test_points": [[x, y], ...],
//     "fixed_obstacles": [[[x0, y0], [x1, y1]], ...],
//     "seed": 7,
//     "planning": {...}            // optional, see PlanningConfig
//   }

#ifndef RANPLAN_SCENARIO_HPP
#define RANPLAN_SCENARIO_HPP

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "ranplan/geometry.hpp"
#include "ranplan/random.hpp"

namespace ranplan {

inline constexpr int kScenarioFormatVersion = 1;

/// Raised for unreadable or malformed files; the message names the key.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a value violates a documented invariant.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Scenario {
  double area_width = 0.0;
  double area_height = 0.0;
  std::vector<Point2D> candidate_sites;
  std::vector<Point2D> test_points;
  std::vector<Segment2D> fixed_obstacles;
  std::uint64_t seed = 0;

  int num_sites() const { return static_cast<int>(candidate_sites.size()); }
  int num_test_points() const { return static_cast<int>(test_points.size()); }
  double diagonal() const { return std::hypot(area_width, area_height); }

  bool contains(const Point2D& p) const {
    return p.x >= 0.0 && p.x <= area_width && p.y >= 0.0 && p.y <= area_height;
  }

  void validate() const {
    if (!(area_width > 0.0) || !(area_height > 0.0) ||
        !std::isfinite(area_width) || !std::isfinite(area_height))
      throw ValidationError("area must have positive finite extent");
    if (candidate_sites.empty())
      throw ValidationError("at least one candidate site is required");
    if (test_points.empty())
      throw ValidationError("at least one test point is required");
    for (std::size_t i = 0; i < candidate_sites.size(); ++i) {
      if (!contains(candidate_sites[i]))
        throw ValidationError("candidate site " + std::to_string(i) +
                              " lies outside the area");
      for (std::size_t j = 0; j < i; ++j)
        if (candidate_sites[i] == candidate_sites[j])
          throw ValidationError("candidate sites " + std::to_string(j) +
                                " and " + std::to_string(i) + " coincide");
    }
    for (std::size_t t = 0; t < test_points.size(); ++t) {
      if (!contains(test_points[t]))
        throw ValidationError("test point " + std::to_string(t) +
                              " lies outside the area");
      for (std::size_t c = 0; c < candidate_sites.size(); ++c)
        if (test_points[t] == candidate_sites[c])
          throw ValidationError("test point " + std::to_string(t) +
                                " coincides with candidate site " +
                                std::to_string(c));
    }
  }

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Planning parameters. Unset optionals resolve against a scenario through
/// the helpers below.
struct PlanningConfig {
  double mu = 0.5;
  double budget = 5.0;
  double demand = 100.0;  // Mbps per TP on the primary link
  double xi = 0.5;        // fraction of demand guaranteed on the backup link
  double price_iab = 1.0;
  double price_ris = 0.1;
  double fov = 2.0 * kPi / 3.0;
  std::optional<double> theta_norm;      // default: pi * |T|
  std::optional<double> len_norm;        // default: |T| * area diagonal
  std::optional<double> wired_capacity;  // default: (1 + xi) * D * |T|

  void validate() const {
    auto non_negative = [](double v, const char* name) {
      if (!(v >= 0.0) || !std::isfinite(v))
        throw ValidationError(std::string(name) + " must be finite and >= 0");
    };
    non_negative(budget, "budget");
    non_negative(demand, "demand");
    non_negative(price_iab, "price_iab");
    non_negative(price_ris, "price_ris");
    if (!(mu >= 0.0 && mu <= 1.0)) throw ValidationError("mu must be in [0,1]");
    if (!(xi >= 0.0 && xi <= 1.0)) throw ValidationError("xi must be in [0,1]");
    if (!(fov > 0.0 && fov <= kTwoPi))
      throw ValidationError("fov must be in (0, 2*pi]");
    if (theta_norm && !(*theta_norm > 0.0))
      throw ValidationError("theta_norm must be > 0");
    if (len_norm && !(*len_norm > 0.0))
      throw ValidationError("len_norm must be > 0");
    if (wired_capacity && !(*wired_capacity >= 0.0))
      throw ValidationError("wired_capacity must be >= 0");
  }

  friend bool operator==(const PlanningConfig&, const PlanningConfig&) = default;
};

inline double resolved_theta_norm(const PlanningConfig& cfg, const Scenario& s) {
  return cfg.theta_norm.value_or(kPi * s.num_test_points());
}

inline double resolved_len_norm(const PlanningConfig& cfg, const Scenario& s) {
  return cfg.len_norm.value_or(s.num_test_points() * s.diagonal());
}

inline double resolved_wired_capacity(const PlanningConfig& cfg,
                                      const Scenario& s) {
  return cfg.wired_capacity.value_or((1.0 + cfg.xi) * cfg.demand *
                                     s.num_test_points());
}

// ---------------------------------------------------------------------------
// Generation

inline constexpr double kMinPointSeparation = 1.0;  // meters
inline constexpr int kPlacementRetries = 10000;

/// Uniform i.i.d. placement of `n_cs` sites then `n_tp` test points in
/// [0,width]x[0,height]; points closer than kMinPointSeparation to an
/// already placed point are re-drawn.
inline Scenario generate(double width, double height, int n_cs, int n_tp,
                         std::uint64_t seed) {
  if (n_cs < 1) throw ValidationError("n_cs must be >= 1");
  if (n_tp < 1) throw ValidationError("n_tp must be >= 1");
  if (!(width > 0.0) || !(height > 0.0))
    throw ValidationError("area must have positive extent");

  Scenario s;
  s.area_width = width;
  s.area_height = height;
  s.seed = seed;
  Rng rng(seed);
  std::vector<Point2D> placed;
  auto draw = [&]() {
    for (int attempt = 0; attempt < kPlacementRetries; ++attempt) {
      const Point2D p{uniform(rng, 0.0, width), uniform(rng, 0.0, height)};
      bool ok = true;
      for (const auto& q : placed)
        if (distance(p, q) < kMinPointSeparation) {
          ok = false;
          break;
        }
      if (ok) {
        placed.push_back(p);
        return p;
      }
    }
    throw ValidationError("impossible placement: area too small for " +
                          std::to_string(n_cs + n_tp) +
                          " points at the minimum separation");
  };
  for (int i = 0; i < n_cs; ++i) s.candidate_sites.push_back(draw());
  for (int i = 0; i < n_tp; ++i) s.test_points.push_back(draw());
  return s;
}

// ---------------------------------------------------------------------------
// Serialization

namespace detail {

inline const nlohmann::json& require(const nlohmann::json& j,
                                     const std::string& key) {
  if (!j.is_object() || !j.contains(key))
    throw FormatError("missing field " + key);
  return j.at(key);
}

inline double as_number(const nlohmann::json& j, const std::string& key) {
  if (!j.is_number()) throw FormatError("field " + key + " must be a number");
  return j.get<double>();
}

inline Point2D as_point(const nlohmann::json& j, const std::string& key) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw FormatError("field " + key + " must hold [x, y] pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline std::vector<Point2D> as_points(const nlohmann::json& j,
                                      const std::string& key) {
  if (!j.is_array()) throw FormatError("field " + key + " must be an array");
  std::vector<Point2D> out;
  out.reserve(j.size());
  for (const auto& e : j) out.push_back(as_point(e, key));
  return out;
}

inline nlohmann::json point_json(const Point2D& p) {
  return nlohmann::json::array({p.x, p.y});
}

inline std::optional<double> optional_number(const nlohmann::json& j,
                                             const std::string& key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return as_number(j.at(key), "planning." + key);
}

}  // namespace detail

inline nlohmann::json to_json(const PlanningConfig& cfg) {
  auto opt = [](const std::optional<double>& v) -> nlohmann::json {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  return {{"mu", cfg.mu},
          {"budget", cfg.budget},
          {"demand", cfg.demand},
          {"xi", cfg.xi},
          {"price_iab", cfg.price_iab},
          {"price_ris", cfg.price_ris},
          {"fov", cfg.fov},
          {"theta_norm", opt(cfg.theta_norm)},
          {"len_norm", opt(cfg.len_norm)},
          {"wired_capacity", opt(cfg.wired_capacity)}};
}

/// Keys absent from `j` keep the values already in `base`.
inline PlanningConfig planning_from_json(const nlohmann::json& j,
                                         PlanningConfig base = {}) {
  if (!j.is_object()) throw FormatError("field planning must be an object");
  auto num = [&](const char* key, double& dst) {
    if (j.contains(key))
      dst = detail::as_number(j.at(key), std::string("planning.") + key);
  };
  num("mu", base.mu);
  num("budget", base.budget);
  num("demand", base.demand);
  num("xi", base.xi);
  num("price_iab", base.price_iab);
  num("price_ris", base.price_ris);
  num("fov", base.fov);
  if (j.contains("theta_norm")) base.theta_norm = detail::optional_number(j, "theta_norm");
  if (j.contains("len_norm")) base.len_norm = detail::optional_number(j, "len_norm");
  if (j.contains("wired_capacity"))
    base.wired_capacity = detail::optional_number(j, "wired_capacity");
  base.validate();
  return base;
}

inline nlohmann::json to_json(const Scenario& s,
                              const std::optional<PlanningConfig>& planning = {}) {
  nlohmann::json j;
  j["version"] = kScenarioFormatVersion;
  j["area"] = {{"width", s.area_width}, {"height", s.area_height}};
  j["candidate_sites"] = nlohmann::json::array();
  for (const auto& p : s.candidate_sites) j["candidate_sites"].push_back(detail::point_json(p));
  j["test_points"] = nlohmann::json::array();
  for (const auto& p : s.test_points) j["test_points"].push_back(detail::point_json(p));
  j["fixed_obstacles"] = nlohmann::json::array();
  for (const auto& o : s.fixed_obstacles)
    j["fixed_obstacles"].push_back({detail::point_json(o.a()), detail::point_json(o.b())});
  j["seed"] = s.seed;
  if (planning) j["planning"] = to_json(*planning);
  return j;
}

struct ScenarioDocument {
  Scenario scenario;
  std::optional<PlanningConfig> planning;
};

inline ScenarioDocument scenario_from_json(const nlohmann::json& j) {
  using detail::require;
  const auto& version = require(j, "version");
  if (!version.is_number_integer() || version.get<int>() != kScenarioFormatVersion)
    throw FormatError("unsupported version " + version.dump());

  ScenarioDocument doc;
  Scenario& s = doc.scenario;
  const auto& area = require(j, "area");
  s.area_width = detail::as_number(require(area, "width"), "area.width");
  s.area_height = detail::as_number(require(area, "height"), "area.height");
  s.candidate_sites = detail::as_points(require(j, "candidate_sites"), "candidate_sites");
  s.test_points = detail::as_points(require(j, "test_points"), "test_points");
  const auto& obstacles = require(j, "fixed_obstacles");
  if (!obstacles.is_array()) throw FormatError("field fixed_obstacles must be an array");
  for (const auto& o : obstacles) {
    if (!o.is_array() || o.size() != 2)
      throw FormatError("field fixed_obstacles must hold [[x,y],[x,y]] segments");
    try {
      s.fixed_obstacles.emplace_back(detail::as_point(o[0], "fixed_obstacles"),
                                     detail::as_point(o[1], "fixed_obstacles"));
    } catch (const GeometryError& e) {
      throw ValidationError(std::string("fixed_obstacles: ") + e.what());
    }
  }
  const auto& seed = require(j, "seed");
  if (!seed.is_number_integer()) throw FormatError("field seed must be an integer");
  s.seed = seed.get<std::uint64_t>();
  if (j.contains("planning")) doc.planning = planning_from_json(j.at("planning"));
  s.validate();
  return doc;
}

inline void write_text_file(const std::string& path, const std::string& text) {
  // Write-then-rename so readers never observe a partial file.
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
    out << text;
    if (!out) throw std::runtime_error("failed writing " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("cannot rename " + tmp + " to " + path);
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline nlohmann::json parse_json_text(const std::string& text,
                                      const std::string& origin) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(origin + ": " + e.what());
  }
}

inline void save(const Scenario& s, const std::string& path,
                 const std::optional<PlanningConfig>& planning = {}) {
  s.validate();
  write_text_file(path, to_json(s, planning).dump(2) + "\n");
}

inline ScenarioDocument load_document(const std::string& path) {
  return scenario_from_json(parse_json_text(read_text_file(path), path));
}

inline Scenario load(const std::string& path) { return load_document(path).scenario; }

}  // namespace ranplan

#endif  // RANPLAN_SCENARIO_HPP
