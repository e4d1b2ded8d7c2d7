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

// Randomized geometry and radio properties shared by the unit tests and the
// acceptance runner. Each check returns how many cases it ran and the first
// failing case, if any.

#ifndef RANPLAN_TESTS_PROPERTIES_HPP
#define RANPLAN_TESTS_PROPERTIES_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ranplan/geometry.hpp"
#include "ranplan/radio.hpp"
#include "ranplan/random.hpp"
#include "ranplan/scenario.hpp"

namespace ranplan::testing {

struct PropertyResult {
  std::string name;
  int cases = 0;
  int failures = 0;
  std::string first_failure;

  bool ok() const { return failures == 0 && cases > 0; }
};

using Property = std::function<PropertyResult(int cases, std::uint64_t seed)>;

namespace detail {

inline Point2D random_point(Rng& rng, double lo = -100.0, double hi = 100.0) {
  return {uniform(rng, lo, hi), uniform(rng, lo, hi)};
}

inline Point2D distinct_point(Rng& rng, const Point2D& from) {
  for (;;) {
    auto p = random_point(rng);
    if (distance(p, from) > 1e-3) return p;
  }
}

inline void fail(PropertyResult& r, const std::string& what) {
  if (r.failures++ == 0) r.first_failure = what;
}

inline Point2D rotate(const Point2D& p, double a) {
  return {p.x * std::cos(a) - p.y * std::sin(a), p.x * std::sin(a) + p.y * std::cos(a)};
}

// Exact test on integer coordinates: parametric line intersection with
// rational parameters, interval overlap for the collinear case.
inline bool integer_segments_meet(long long ax, long long ay, long long bx, long long by,
                                  long long cx, long long cy, long long dx, long long dy) {
  const long long rx = bx - ax, ry = by - ay, sx = dx - cx, sy = dy - cy;
  const long long den = rx * sy - ry * sx;
  const long long qpx = cx - ax, qpy = cy - ay;
  if (den != 0) {
    long long tn = qpx * sy - qpy * sx;  // t = tn / den
    long long un = qpx * ry - qpy * rx;  // u = un / den
    long long d = den;
    if (d < 0) {
      d = -d;
      tn = -tn;
      un = -un;
    }
    return tn >= 0 && tn <= d && un >= 0 && un <= d;
  }
  if (qpx * ry - qpy * rx != 0) return false;  // parallel, distinct lines
  // Collinear: project onto the direction of the first segment.
  const long long rr = rx * rx + ry * ry;
  const long long t0 = qpx * rx + qpy * ry;
  const long long t1 = (dx - ax) * rx + (dy - ay) * ry;
  return std::max(std::min(t0, t1), 0LL) <= std::min(std::max(t0, t1), rr);
}

inline Scenario random_small_scenario(Rng& rng, std::uint64_t seed, bool with_obstacles) {
  const int C = 2 + static_cast<int>(uniform01(rng) * 3);
  const int T = 1 + static_cast<int>(uniform01(rng) * 3);
  const double w = uniform(rng, 20.0, 400.0), h = uniform(rng, 20.0, 400.0);
  auto s = generate(w, h, C, T, seed);
  if (with_obstacles) {
    const int n = static_cast<int>(uniform01(rng) * 3);
    for (int i = 0; i < n; ++i) {
      const Point2D a{uniform(rng, 0.0, w), uniform(rng, 0.0, h)};
      const Point2D b{uniform(rng, 0.0, w), uniform(rng, 0.0, h)};
      if (a != b) s.fixed_obstacles.emplace_back(a, b);
    }
  }
  return s;
}

inline RadioConfig random_radio(Rng& rng) {
  RadioConfig cfg;
  cfg.tx_power_dbm = uniform(rng, 0.0, 40.0);
  cfg.bandwidth_hz = uniform(rng, 50e6, 800e6);
  cfg.noise_figure_db = uniform(rng, 3.0, 12.0);
  cfg.pathloss_exponent = uniform(rng, 1.5, 4.0);
  cfg.ris_elements = 100 + static_cast<int>(uniform01(rng) * 9900);
  cfg.ris_aperture_gain_db = uniform(rng, -20.0, 10.0);
  return cfg;
}

template <typename Table>
bool zero_capacity_consistent(const Table& flags, const auto& caps) {
  for (std::size_t i = 0; i < flags.data().size(); ++i)
    if (flags.data()[i] == 0 && caps.data()[i] != 0.0) return false;
  return true;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Geometry

inline PropertyResult prop_translation_invariance(int cases, std::uint64_t seed) {
  PropertyResult r{"azimuth/angular_separation translation invariance", 0, 0, {}};
  Rng rng(seed);
  for (; r.cases < cases; ++r.cases) {
    const auto v = detail::random_point(rng);
    const auto p1 = detail::distinct_point(rng, v), p2 = detail::distinct_point(rng, v);
    const Point2D d = detail::random_point(rng, -1000.0, 1000.0);
    auto shift = [&](const Point2D& p) { return Point2D{p.x + d.x, p.y + d.y}; };
    const double az = circular_distance(azimuth(v, p1), azimuth(shift(v), shift(p1)));
    const double sep =
        std::fabs(angular_separation(v, p1, p2) - angular_separation(shift(v), shift(p1), shift(p2)));
    if (az > 1e-9 || sep > 1e-9)
      detail::fail(r, "case " + std::to_string(r.cases) + ": azimuth drift " + std::to_string(az) +
                          ", separation drift " + std::to_string(sep));
  }
  return r;
}

inline PropertyResult prop_rotation_invariance(int cases, std::uint64_t seed) {
  PropertyResult r{"angular_separation rotation invariance", 0, 0, {}};
  Rng rng(seed);
  for (; r.cases < cases; ++r.cases) {
    const auto v = detail::random_point(rng);
    const auto p1 = detail::distinct_point(rng, v), p2 = detail::distinct_point(rng, v);
    const double a = uniform(rng, 0.0, kTwoPi);
    const double before = angular_separation(v, p1, p2);
    const double after = angular_separation(detail::rotate(v, a), detail::rotate(p1, a),
                                            detail::rotate(p2, a));
    if (std::fabs(before - after) > 1e-9)
      detail::fail(r, "case " + std::to_string(r.cases) + ": " + std::to_string(before) +
                          " vs " + std::to_string(after));
  }
  return r;
}

inline PropertyResult prop_intersection_symmetric(int cases, std::uint64_t seed) {
  PropertyResult r{"segments_intersect symmetry", 0, 0, {}};
  Rng rng(seed);
  for (; r.cases < cases; ++r.cases) {
    // Small integer grid: many touching and collinear configurations.
    auto grid = [&] {
      return Point2D{std::floor(uniform(rng, 0.0, 5.0)), std::floor(uniform(rng, 0.0, 5.0))};
    };
    Point2D a = grid(), b = grid(), c = grid(), d = grid();
    if (a == b || c == d) {
      --r.cases;
      continue;
    }
    const Segment2D s1(a, b), s2(c, d);
    if (segments_intersect(s1, s2) != segments_intersect(s2, s1))
      detail::fail(r, "case " + std::to_string(r.cases) + " is asymmetric");
  }
  return r;
}

inline PropertyResult prop_intersection_exact(int cases, std::uint64_t seed) {
  PropertyResult r{"segments_intersect agrees with exact integer test", 0, 0, {}};
  Rng rng(seed);
  for (; r.cases < cases; ++r.cases) {
    long long v[8];
    for (auto& x : v) x = static_cast<long long>(uniform(rng, 0.0, 7.0));
    if ((v[0] == v[2] && v[1] == v[3]) || (v[4] == v[6] && v[5] == v[7])) {
      --r.cases;
      continue;
    }
    auto pt = [&](int i) { return Point2D{static_cast<double>(v[i]), static_cast<double>(v[i + 1])}; };
    const bool got = segments_intersect(Segment2D(pt(0), pt(2)), Segment2D(pt(4), pt(6)));
    const bool want = detail::integer_segments_meet(v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7]);
    if (got != want) detail::fail(r, "case " + std::to_string(r.cases) + " disagrees");
  }
  return r;
}

inline PropertyResult prop_fov_extremes(int cases, std::uint64_t seed) {
  PropertyResult r{"within_fov full circle and on-axis", 0, 0, {}};
  Rng rng(seed);
  for (; r.cases < cases; ++r.cases) {
    const double o = uniform(rng, -10.0, 10.0), ray = uniform(rng, -10.0, 10.0);
    const double f = uniform(rng, 1e-9, kTwoPi);
    if (!within_fov(o, ray, kTwoPi) || !within_fov(o, o, f))
      detail::fail(r, "case " + std::to_string(r.cases));
  }
  return r;
}

inline PropertyResult prop_sector_full_span(int cases, std::uint64_t seed) {
  PropertyResult r{"sector_contains as span approaches 2pi", 0, 0, {}};
  Rng rng(seed);
  for (; r.cases < cases; ++r.cases) {
    const auto o = detail::random_point(rng);
    const auto t = detail::distinct_point(rng, o);
    const double center = uniform(rng, 0.0, kTwoPi);
    for (double span : {kTwoPi, kTwoPi * (1.0 - 1e-14)})
      if (!sector_contains({o, center, span}, t))
        detail::fail(r, "case " + std::to_string(r.cases) + " span " + std::to_string(span));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Radio

inline PropertyResult prop_zero_capacity(int cases, std::uint64_t seed) {
  PropertyResult r{"zero-capacity consistency of link tables", 0, 0, {}};
  Rng rng(seed);
  for (; r.cases < cases; ++r.cases) {
    const auto s = detail::random_small_scenario(rng, derive_seed(seed, r.cases), true);
    const auto tab = build_link_tables(s, detail::random_radio(rng));
    using detail::zero_capacity_consistent;
    if (!zero_capacity_consistent(tab.delta_acc, tab.cap_acc) ||
        !zero_capacity_consistent(tab.delta_bh, tab.cap_bh) ||
        !zero_capacity_consistent(tab.delta_src, tab.cap_dir) ||
        !zero_capacity_consistent(tab.delta_src, tab.cap_ref))
      detail::fail(r, "case " + std::to_string(r.cases));
  }
  return r;
}

inline PropertyResult prop_rate_monotone(int cases, std::uint64_t seed) {
  PropertyResult r{"snr_to_rate monotone", 0, 0, {}};
  Rng rng(seed);
  const RadioConfig cfg;
  for (; r.cases < cases; ++r.cases) {
    double a = uniform(rng, -20.0, 40.0), b = uniform(rng, -20.0, 40.0);
    if (a > b) std::swap(a, b);
    if (snr_to_rate_mbps(a, cfg) > snr_to_rate_mbps(b, cfg))
      detail::fail(r, "rate(" + std::to_string(a) + ") > rate(" + std::to_string(b) + ")");
  }
  return r;
}

inline PropertyResult prop_path_loss_increasing(int cases, std::uint64_t seed) {
  PropertyResult r{"path_loss strictly increasing", 0, 0, {}};
  Rng rng(seed);
  for (; r.cases < cases; ++r.cases) {
    RadioConfig cfg;
    cfg.pathloss_exponent = uniform(rng, 0.1, 5.0);
    const double d1 = uniform(rng, 0.01, 1000.0);
    const double d2 = d1 * (1.0 + uniform(rng, 1e-6, 10.0));
    if (!(path_loss_db(d1, cfg) < path_loss_db(d2, cfg)))
      detail::fail(r, "d=" + std::to_string(d1) + " vs " + std::to_string(d2));
  }
  return r;
}

inline PropertyResult prop_tables_deterministic(int cases, std::uint64_t seed) {
  PropertyResult r{"build_link_tables deterministic", 0, 0, {}};
  Rng rng(seed);
  for (; r.cases < cases; ++r.cases) {
    const auto s = detail::random_small_scenario(rng, derive_seed(seed, r.cases), true);
    const auto cfg = detail::random_radio(rng);
    if (!(build_link_tables(s, cfg) == build_link_tables(s, cfg)))
      detail::fail(r, "case " + std::to_string(r.cases));
  }
  return r;
}

inline PropertyResult prop_obstacle_masking(int cases, std::uint64_t seed) {
  PropertyResult r{"fixed obstacles only remove links", 0, 0, {}};
  Rng rng(seed);
  for (; r.cases < cases; ++r.cases) {
    auto s = detail::random_small_scenario(rng, derive_seed(seed, r.cases), true);
    const RadioConfig cfg;
    const auto before = build_link_tables(s, cfg);
    // Obstacle through the area center so that it usually cuts something.
    const Point2D c{s.area_width / 2, s.area_height / 2};
    const double a = uniform(rng, 0.0, kPi), half = uniform(rng, 1.0, 200.0);
    s.fixed_obstacles.emplace_back(Point2D{c.x - half * std::cos(a), c.y - half * std::sin(a)},
                                   Point2D{c.x + half * std::cos(a), c.y + half * std::sin(a)});
    const auto after = build_link_tables(s, cfg);
    auto no_new = [](const auto& b, const auto& a2) {
      for (std::size_t i = 0; i < b.data().size(); ++i)
        if (b.data()[i] == 0 && a2.data()[i] != 0) return false;
      return true;
    };
    if (!no_new(before.delta_acc, after.delta_acc) || !no_new(before.delta_bh, after.delta_bh) ||
        !no_new(before.delta_src, after.delta_src))
      detail::fail(r, "case " + std::to_string(r.cases));
  }
  return r;
}

inline std::vector<std::pair<std::string, Property>> geometry_properties() {
  return {{"translation", prop_translation_invariance}, {"rotation", prop_rotation_invariance},
          {"symmetry", prop_intersection_symmetric},    {"exact", prop_intersection_exact},
          {"fov", prop_fov_extremes},                   {"sector", prop_sector_full_span}};
}

inline std::vector<std::pair<std::string, Property>> radio_properties() {
  return {{"zero_capacity", prop_zero_capacity},
          {"rate_monotone", prop_rate_monotone},
          {"path_loss", prop_path_loss_increasing},
          {"deterministic", prop_tables_deterministic},
          {"masking", prop_obstacle_masking}};
}

}  // namespace ranplan::testing

#endif  // RANPLAN_TESTS_PROPERTIES_HPP
