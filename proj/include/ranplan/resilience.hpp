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

// Monte Carlo blockage evaluation.
//
// Each trial draws one self-blockage sector per TP, then the largest
// requested number of obstacles; the evaluation at k obstacles uses the
// first k of them, so per-trial served counts can only fall as k grows.
// Only TP-side links can be blocked: BS-RIS legs and backhaul are exempt.

#ifndef RANPLAN_RESILIENCE_HPP
#define RANPLAN_RESILIENCE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "ranplan/geometry.hpp"
#include "ranplan/planner.hpp"
#include "ranplan/random.hpp"
#include "ranplan/scenario.hpp"

namespace ranplan {

struct BlockageOptions {
  double obstacle_length = 5.0;  // meters
  bool self_blockage = true;
  std::vector<double> sector_spans{2.0 * kPi / 3.0, 8.0 * kPi / 9.0};  // equally likely
  int threads = 1;
};

struct BlockageTrial {
  std::uint64_t trial_seed = 0;
  std::vector<Segment2D> obstacles;
  std::vector<Sector> self_blockage;  // one per TP, empty when disabled
};

enum class LinkKind { access_direct, access_reflected_tp_leg, bs_ris_leg, backhaul };

inline BlockageTrial sample_trial(double width, double height, int max_obstacles,
                                  const std::vector<Point2D>& tp_positions, std::uint64_t seed,
                                  const BlockageOptions& opts = {}) {
  if (max_obstacles < 0) throw std::invalid_argument("max_obstacles must be >= 0");
  if (!(opts.obstacle_length > 0.0)) throw std::invalid_argument("obstacle_length must be > 0");
  BlockageTrial trial;
  trial.trial_seed = seed;
  Rng rng(seed);
  // Sectors first: the obstacle count then never shifts the sector draws.
  for (const auto& tp : tp_positions) {
    const double span = opts.sector_spans.at(static_cast<std::size_t>(
        std::min<double>(opts.sector_spans.size() - 1,
                         std::floor(uniform01(rng) * opts.sector_spans.size()))));
    const double center = uniform(rng, 0.0, kTwoPi);
    if (opts.self_blockage) trial.self_blockage.push_back({tp, center, span});
  }
  const double half = 0.5 * opts.obstacle_length;
  for (int i = 0; i < max_obstacles; ++i) {
    const Point2D c{uniform(rng, 0.0, width), uniform(rng, 0.0, height)};
    const double a = uniform(rng, 0.0, kPi);
    const Point2D d{half * std::cos(a), half * std::sin(a)};
    trial.obstacles.emplace_back(Point2D{c.x - d.x, c.y - d.y}, Point2D{c.x + d.x, c.y + d.y});
  }
  return trial;
}

/// `link.a()` is the TP end for access kinds. Only the first
/// `active_obstacles` obstacles of the trial are considered.
inline bool is_link_blocked(const Segment2D& link, const BlockageTrial& trial, int tp_index,
                            LinkKind kind,
                            std::size_t active_obstacles = std::numeric_limits<std::size_t>::max()) {
  if (kind == LinkKind::bs_ris_leg || kind == LinkKind::backhaul) return false;
  if (!trial.self_blockage.empty() &&
      sector_contains(trial.self_blockage.at(static_cast<std::size_t>(tp_index)), link.b()))
    return true;
  const std::size_t n = std::min(active_obstacles, trial.obstacles.size());
  for (std::size_t i = 0; i < n; ++i)
    if (segments_intersect(link, trial.obstacles[i])) return true;
  return false;
}

struct ResilienceReport {
  std::vector<int> obstacle_counts;
  std::vector<double> mean;                        // per count
  std::vector<double> stddev;                      // per count, sample (n - 1)
  std::vector<std::vector<double>> per_trial;      // [count][trial] served fraction
  std::vector<std::vector<int>> served_counts;     // [count][trial] served TPs
  std::vector<std::uint64_t> trial_seeds;
  int n_trials = 0;
  std::uint64_t base_seed = 0;
  int n_test_points = 0;
};

namespace detail {

/// Index of the first obstacle crossing the link, or the obstacle count.
inline std::size_t first_blocking_obstacle(const Segment2D& link, const BlockageTrial& trial) {
  for (std::size_t i = 0; i < trial.obstacles.size(); ++i)
    if (segments_intersect(link, trial.obstacles[i])) return i;
  return trial.obstacles.size();
}

inline void check_evaluable(const NetworkPlan& plan, const Scenario& s) {
  const int C = s.num_sites();
  if (static_cast<int>(plan.assignments.size()) != s.num_test_points())
    throw PlanError("plan does not assign every test point");
  for (const auto& a : plan.assignments)
    if (a.serving < 0 || a.serving >= C || a.secondary < 0 || a.secondary >= C ||
        a.serving == a.secondary)
      throw PlanError("plan has an invalid assignment");
}

}  // namespace detail

/// Served-TP statistics over `n_trials` trials. The plan must already have
/// passed validate_plan; only its assignment structure is checked here.
inline ResilienceReport evaluate(const NetworkPlan& plan, const Scenario& s,
                                 const std::vector<int>& obstacle_counts, int n_trials,
                                 std::uint64_t base_seed, const BlockageOptions& opts = {}) {
  detail::check_evaluable(plan, s);
  if (n_trials < 1) throw std::invalid_argument("n_trials must be >= 1");
  if (obstacle_counts.empty()) throw std::invalid_argument("obstacle_counts is empty");
  for (std::size_t i = 0; i < obstacle_counts.size(); ++i)
    if (obstacle_counts[i] < 0 || (i > 0 && obstacle_counts[i] < obstacle_counts[i - 1]))
      throw std::invalid_argument("obstacle_counts must be non-negative and ascending");

  const int T = s.num_test_points();
  const int kmax = obstacle_counts.back();
  const std::size_t K = obstacle_counts.size();
  ResilienceReport rep;
  rep.obstacle_counts = obstacle_counts;
  rep.n_trials = n_trials;
  rep.base_seed = base_seed;
  rep.n_test_points = T;
  rep.per_trial.assign(K, std::vector<double>(static_cast<std::size_t>(n_trials), 0.0));
  rep.served_counts.assign(K, std::vector<int>(static_cast<std::size_t>(n_trials), 0));
  rep.trial_seeds.resize(static_cast<std::size_t>(n_trials));

  const auto secondary_kind =
      plan.mode == PlanMode::ris ? LinkKind::access_reflected_tp_leg : LinkKind::access_direct;
  auto run_trial = [&](int n) {
    const std::uint64_t seed = derive_seed(base_seed, static_cast<std::uint64_t>(n));
    rep.trial_seeds[static_cast<std::size_t>(n)] = seed;
    const auto trial = sample_trial(s.area_width, s.area_height, kmax, s.test_points, seed, opts);
    // A link dies at the first obstacle crossing it, or always under the sector.
    std::vector<std::size_t> survives_until(static_cast<std::size_t>(T), 0);
    for (int t = 0; t < T; ++t) {
      const auto& tp = s.test_points[static_cast<std::size_t>(t)];
      const auto& a = plan.assignments[static_cast<std::size_t>(t)];
      std::size_t best = 0;
      for (auto [site, kind] : {std::pair{a.serving, LinkKind::access_direct},
                                std::pair{a.secondary, secondary_kind}}) {
        const Segment2D link(tp, s.candidate_sites[static_cast<std::size_t>(site)]);
        if (is_link_blocked(link, trial, t, kind, 0)) continue;
        best = std::max(best, detail::first_blocking_obstacle(link, trial) + 1);
      }
      survives_until[static_cast<std::size_t>(t)] = best;  // served while k < best
    }
    for (std::size_t k = 0; k < K; ++k) {
      int served = 0;
      for (int t = 0; t < T; ++t)
        if (static_cast<std::size_t>(obstacle_counts[k]) < survives_until[static_cast<std::size_t>(t)])
          ++served;
      rep.served_counts[k][static_cast<std::size_t>(n)] = served;
      rep.per_trial[k][static_cast<std::size_t>(n)] = static_cast<double>(served) / T;
    }
  };

  const int workers = std::max(1, std::min(opts.threads, n_trials));
  if (workers == 1) {
    for (int n = 0; n < n_trials; ++n) run_trial(n);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (int n = w; n < n_trials; n += workers) run_trial(n);
      });
    for (auto& th : pool) th.join();
  }

  // Fixed-order reductions.
  for (std::size_t k = 0; k < K; ++k) {
    double sum = 0.0;
    for (double v : rep.per_trial[k]) sum += v;
    const double m = sum / n_trials;
    double ss = 0.0;
    for (double v : rep.per_trial[k]) ss += (v - m) * (v - m);
    rep.mean.push_back(m);
    rep.stddev.push_back(n_trials > 1 ? std::sqrt(ss / (n_trials - 1)) : 0.0);
  }
  return rep;
}

/// gain(k) = mean_ris(k) / mean_base(k) - 1; 0 when both means are 0 and
/// +infinity when only the baseline mean is 0.
inline std::vector<double> resilience_gain(const ResilienceReport& ris,
                                           const ResilienceReport& base) {
  if (ris.obstacle_counts != base.obstacle_counts || ris.n_trials != base.n_trials)
    throw std::invalid_argument("mismatched grids: reports differ in obstacle counts or trials");
  std::vector<double> g;
  for (std::size_t k = 0; k < ris.mean.size(); ++k) {
    const double a = ris.mean[k], b = base.mean[k];
    if (b == 0.0) g.push_back(a == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
    else g.push_back(a / b - 1.0);
  }
  return g;
}

// ---------------------------------------------------------------------------
// Serialization

inline std::string per_trial_csv(const ResilienceReport& r, const std::string& comment = {}) {
  std::string out = comment.empty() ? "" : "# " + comment + "\n";
  out += "obstacle_count,trial,served_fraction\n";
  for (std::size_t k = 0; k < r.obstacle_counts.size(); ++k)
    for (int n = 0; n < r.n_trials; ++n)
      out += std::to_string(r.obstacle_counts[k]) + "," + std::to_string(n) + "," +
             detail::format_number(r.per_trial[k][static_cast<std::size_t>(n)]) + "\n";
  return out;
}

inline std::string summary_csv(const ResilienceReport& r, const std::string& comment = {}) {
  std::string out = comment.empty() ? "" : "# " + comment + "\n";
  out += "obstacle_count,mean,std\n";
  for (std::size_t k = 0; k < r.obstacle_counts.size(); ++k)
    out += std::to_string(r.obstacle_counts[k]) + "," + detail::format_number(r.mean[k]) + "," +
           detail::format_number(r.stddev[k]) + "\n";
  return out;
}

inline nlohmann::json to_json(const ResilienceReport& r, const std::string& plan_digest = {}) {
  nlohmann::json j;
  j["obstacle_counts"] = r.obstacle_counts;
  j["mean"] = r.mean;
  j["std"] = r.stddev;
  j["per_trial"] = r.per_trial;
  j["served_counts"] = r.served_counts;
  j["n_trials"] = r.n_trials;
  j["n_test_points"] = r.n_test_points;
  j["base_seed"] = r.base_seed;
  j["trial_seeds"] = r.trial_seeds;
  if (!plan_digest.empty()) j["plan_digest"] = plan_digest;
  return j;
}

}  // namespace ranplan

#endif  // RANPLAN_RESILIENCE_HPP
