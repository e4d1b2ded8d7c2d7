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

// Hand-built instances and solve helpers for the tests.

#ifndef RANPLAN_TESTS_FIXTURES_HPP
#define RANPLAN_TESTS_FIXTURES_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ranplan/ranplan.hpp"

namespace ranplan::testing {

/// Two sites and one TP, all links well above the top MCS threshold.
inline Scenario two_site_scenario() {
  Scenario s;
  s.area_width = 100.0;
  s.area_height = 100.0;
  s.candidate_sites = {{10.0, 10.0}, {60.0, 10.0}};
  s.test_points = {{30.0, 40.0}};
  s.seed = 1;
  return s;
}

/// Tables of two_site_scenario with only the SRC (0, 0, 1) left active.
inline LinkBudgetTable forced_src_tables(const Scenario& s) {
  auto tab = build_link_tables(s, RadioConfig{});
  tab.delta_src(0, 1, 0) = 0;
  tab.cap_dir(0, 1, 0) = 0.0;
  tab.cap_ref(0, 1, 0) = 0.0;
  return tab;
}

inline Scenario one_site_scenario() {
  Scenario s;
  s.area_width = 100.0;
  s.area_height = 100.0;
  s.candidate_sites = {{10.0, 10.0}};
  s.test_points = {{30.0, 40.0}};
  return s;
}

struct Solved {
  SolveResult result;
  std::optional<NetworkPlan> plan;
  MilpModel model;
};

inline Solved solve_instance(PlanMode mode, const Scenario& s, const LinkBudgetTable& tab,
                             const PlanningConfig& cfg, bool strengthen = false,
                             std::string_view backend = "highs", double time_limit = 120.0) {
  Solved out;
  out.model = build_model(mode, s, tab, cfg, ModelOptions{strengthen});
  SolveOptions o;
  o.time_limit = time_limit;
  out.result = solve(out.model, o, backend);
  if (out.result.has_solution())
    out.plan = extract_plan(out.model, out.result.variable_values, out.result.objective_value, s,
                            tab, cfg, out.result.status == SolveStatus::optimal);
  return out;
}

/// Small random instance of the oracle sweep: 3 to 6 sites, 1 to 3 TPs.
struct OracleCase {
  Scenario scenario;
  double budget;
};

inline OracleCase oracle_case(int seed) {
  Rng rng(static_cast<std::uint64_t>(seed));
  const int C = 3 + seed % 4, T = 1 + seed % 3;
  const double w = 60 + 140 * uniform01(rng), h = 60 + 140 * uniform01(rng);
  return {generate(w, h, C, T, static_cast<std::uint64_t>(seed)), 1.0 + seed % 3};
}

struct EquivalenceTally {
  int compared = 0;
  int agree = 0;
  int wraparound = 0;
  int feasible = 0;
  int plan_violations = 0;
  std::vector<std::string> mismatches;
};

/// MILP vs oracle over seeds [first, first + count), both modes and
/// mu in {0, 0.5, 1}.
inline EquivalenceTally oracle_equivalence(int first, int count, bool strengthen) {
  EquivalenceTally tally;
  for (int seed = first; seed < first + count; ++seed) {
    const auto oc = oracle_case(seed);
    const auto& s = oc.scenario;
    const auto tab = build_link_tables(s, RadioConfig{});
    for (PlanMode mode : {PlanMode::ris, PlanMode::baseline})
      for (double mu : {0.0, 0.5, 1.0}) {
        PlanningConfig cfg;
        cfg.mu = mu;
        cfg.budget = oc.budget;
        if (has_wraparound_discrepancy(s, tab, cfg, mode)) {
          ++tally.wraparound;
          continue;
        }
        ++tally.compared;
        const auto got = solve_instance(mode, s, tab, cfg, strengthen);
        const auto want = brute_force_plan(s, tab, cfg, mode);
        const bool milp_feasible = got.result.status == SolveStatus::optimal;
        const bool same = milp_feasible == want.feasible &&
                          (!milp_feasible || objectives_match(got.result.objective_value, want.objective));
        if (same) ++tally.agree;
        else
          tally.mismatches.push_back("seed " + std::to_string(seed) + " " +
                                     std::string(to_string(mode)) + " mu " + std::to_string(mu) +
                                     ": milp " + std::string(to_string(got.result.status)) + " " +
                                     std::to_string(got.result.objective_value) + ", oracle " +
                                     (want.feasible ? std::to_string(want.objective) : "infeasible"));
        if (got.plan) {
          ++tally.feasible;
          tally.plan_violations += static_cast<int>(validate_plan(*got.plan, s, tab, cfg).size());
        }
      }
  }
  return tally;
}

}  // namespace ranplan::testing

#endif  // RANPLAN_TESTS_FIXTURES_HPP
