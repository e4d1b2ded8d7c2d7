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

#include <gtest/gtest.h>

#include <set>

#include "ranplan/ranplan.hpp"
#include "support/fixtures.hpp"

#ifndef RANPLAN_LP_SOLVE_PATH
#error "RANPLAN_LP_SOLVE_PATH must point at the ranplan_lp_solve tool"
#endif

namespace ranplan {
namespace {

using testing::forced_src_tables;
using testing::solve_instance;
using testing::two_site_scenario;

TEST(Solve, ForcedFixtureIsOptimal) {
  const auto s = two_site_scenario();
  const auto tab = forced_src_tables(s);
  PlanningConfig cfg;
  cfg.budget = 1.1;
  const auto m = build_ris_model(s, tab, cfg);
  const auto r = solve(m, SolveOptions{});
  ASSERT_EQ(r.status, SolveStatus::optimal);
  EXPECT_EQ(r.variable_values.at(*m.find({Symbol::x, {0, 0, 1}})), 1.0);
  EXPECT_GE(r.gap, 0.0);
  EXPECT_LE(m.max_violation(r.variable_values), 1e-6);
}

TEST(Solve, SingleSiteBaselineIsInfeasible) {
  const auto s = testing::one_site_scenario();
  const auto tab = build_link_tables(s, RadioConfig{});
  const auto r = solve(build_baseline_model(s, tab, PlanningConfig{}), SolveOptions{});
  EXPECT_EQ(r.status, SolveStatus::infeasible);
  EXPECT_FALSE(r.has_solution());
}

TEST(Solve, UnknownBackendThrows) {
  EXPECT_THROW(solve(MilpModel{}, SolveOptions{}, "cplex"), SolverError);
  EXPECT_THROW(make_backend(""), SolverError);
}

TEST(Solve, FailingExternalCommandIsError) {
  const auto s = two_site_scenario();
  const auto tab = forced_src_tables(s);
  SolveOptions o;
  o.external_command = "false";
  const auto r = solve(build_ris_model(s, tab, PlanningConfig{}), o, "external");
  EXPECT_EQ(r.status, SolveStatus::error);
  EXPECT_FALSE(r.message.empty());
}

TEST(Solve, DeterministicValues) {
  const auto s = generate(200, 200, 6, 3, 12);
  const auto tab = build_link_tables(s, RadioConfig{});
  PlanningConfig cfg;
  cfg.budget = 3;
  const auto m = build_ris_model(s, tab, cfg);
  const auto a = solve(m, SolveOptions{});
  const auto b = solve(m, SolveOptions{});
  ASSERT_EQ(a.status, SolveStatus::optimal);
  EXPECT_EQ(a.variable_values, b.variable_values);
  EXPECT_EQ(a.objective_value, b.objective_value);
}

TEST(Solve, TimeLimitKeepsResultInvariants) {
  const auto s = generate(300 * std::sqrt(0.48), 400 * std::sqrt(0.48), 12, 8, 1000);
  const auto tab = build_link_tables(s, RadioConfig{});
  PlanningConfig cfg;
  cfg.budget = 3;
  SolveOptions o;
  o.time_limit = 0.5;
  const auto r = solve(build_ris_model(s, tab, cfg), o);
  ASSERT_TRUE(r.status == SolveStatus::time_limit || r.status == SolveStatus::optimal);
  EXPECT_GE(r.gap, 0.0);
  if (r.status == SolveStatus::optimal) {
    EXPECT_TRUE(r.has_solution());
  }
}

TEST(SolveStatus, StringRoundTrip) {
  for (auto st : {SolveStatus::optimal, SolveStatus::infeasible, SolveStatus::time_limit,
                  SolveStatus::error})
    EXPECT_EQ(parse_status(to_string(st)), st);
  EXPECT_THROW(parse_status("unknown"), FormatError);
}

TEST(SolutionText, Parsing) {
  MilpModel m;
  m.add_variable({Symbol::l, {0, -1, -1}}, VarKind::continuous, 0, 10);
  m.add_variable({Symbol::y_iab, {3, -1, -1}}, VarKind::binary, 0, 1);
  m.set_objective({{0, 2.0}, {1, 1.0}});
  const auto r = parse_solution_text("# comment\nstatus optimal\nobjective 99\ngap 0.01\nl_t0 4\ny_iab_c3 1\n", m);
  EXPECT_EQ(r.status, SolveStatus::optimal);
  EXPECT_EQ(r.variable_values, (std::vector<double>{4.0, 1.0}));
  EXPECT_DOUBLE_EQ(r.objective_value, 9.0);
  EXPECT_DOUBLE_EQ(r.gap, 0.01);
  EXPECT_FALSE(parse_solution_text("status infeasible\n", m).has_solution());
  EXPECT_FALSE(parse_solution_text("status time_limit\n", m).has_solution());
  EXPECT_THROW(parse_solution_text("l_t0 1\n", m), FormatError);
  EXPECT_THROW(parse_solution_text("status optimal\nbogus 1\n", m), FormatError);
  EXPECT_THROW(parse_solution_text("status optimal\nl_t0 x\n", m), FormatError);
}

// Same optimum through the in-process matrix, the LP text and the external
// process protocol.
TEST(Backends, AgreeOnFixtures) {
  SolveOptions ext;
  ext.external_command = RANPLAN_LP_SOLVE_PATH;
  int compared = 0;
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto s = generate(180, 180, 5, 3, 40 + seed);
    const auto tab = build_link_tables(s, RadioConfig{});
    for (PlanMode mode : {PlanMode::ris, PlanMode::baseline}) {
      PlanningConfig cfg;
      cfg.budget = 1.0 + static_cast<double>(seed);
      const auto m = build_model(mode, s, tab, cfg);
      const auto a = solve(m, SolveOptions{}, "highs");
      const auto b = solve(m, SolveOptions{}, "highs-lp");
      const auto c = solve(m, ext, "external");
      EXPECT_EQ(a.status, b.status);
      EXPECT_EQ(a.status, c.status) << c.message;
      if (a.status == SolveStatus::optimal) {
        ++compared;
        EXPECT_TRUE(objectives_match(a.objective_value, b.objective_value));
        EXPECT_TRUE(objectives_match(a.objective_value, c.objective_value));
        for (const auto* r : {&b, &c}) {
          const auto p = extract_plan(m, r->variable_values, r->objective_value, s, tab, cfg);
          EXPECT_TRUE(validate_plan(p, s, tab, cfg).empty());
        }
      }
    }
  }
  EXPECT_GE(compared, 3);
}

TEST(Oracle, ForcedFixtureMatchesSolver) {
  const auto s = two_site_scenario();
  const auto tab = forced_src_tables(s);
  PlanningConfig cfg;
  cfg.budget = 1.1;
  const auto o = brute_force_plan(s, tab, cfg, PlanMode::ris);
  ASSERT_TRUE(o.feasible);
  const auto r = solve(build_ris_model(s, tab, cfg), SolveOptions{});
  EXPECT_NEAR(o.objective, r.objective_value, 1e-6);
  EXPECT_EQ(o.plan.assignments.at(0), (TpAssignment{0, 1}));
  EXPECT_TRUE(validate_plan(o.plan, s, tab, cfg).empty());
}

TEST(Oracle, ZeroBudgetIsInfeasible) {
  const auto oc = testing::oracle_case(5);
  const auto tab = build_link_tables(oc.scenario, RadioConfig{});
  PlanningConfig cfg;
  cfg.budget = 0;
  for (PlanMode mode : {PlanMode::ris, PlanMode::baseline}) {
    EXPECT_FALSE(brute_force_plan(oc.scenario, tab, cfg, mode).feasible);
    EXPECT_EQ(solve(build_model(mode, oc.scenario, tab, cfg), SolveOptions{}).status,
              SolveStatus::infeasible);
  }
}

TEST(Oracle, OnlyAffordableSubsetIsChosen) {
  const auto s = two_site_scenario();
  const auto tab = build_link_tables(s, RadioConfig{});
  PlanningConfig cfg;
  cfg.budget = 2.0;
  const auto o = brute_force_plan(s, tab, cfg, PlanMode::baseline);
  ASSERT_TRUE(o.feasible);
  EXPECT_EQ(o.plan.iab_nodes, (std::vector<int>{0, 1}));
}

TEST(Oracle, GuardAndDeterminism) {
  const auto big = generate(100, 100, 8, 2, 1);
  const auto tab = build_link_tables(big, RadioConfig{});
  try {
    brute_force_plan(big, tab, PlanningConfig{}, PlanMode::ris);
    FAIL() << "expected OracleError";
  } catch (const OracleError& e) {
    EXPECT_STREQ(e.what(), "instance too large for oracle");
  }
  const auto many_tp = generate(100, 100, 3, 5, 1);
  EXPECT_THROW(brute_force_plan(many_tp, build_link_tables(many_tp, RadioConfig{}),
                                PlanningConfig{}, PlanMode::baseline),
               OracleError);
  const auto oc = testing::oracle_case(10);
  const auto t2 = build_link_tables(oc.scenario, RadioConfig{});
  PlanningConfig cfg;
  cfg.budget = 3;
  const auto a = brute_force_plan(oc.scenario, t2, cfg, PlanMode::ris);
  const auto b = brute_force_plan(oc.scenario, t2, cfg, PlanMode::ris);
  EXPECT_EQ(a.feasible, b.feasible);
  EXPECT_EQ(a.plan, b.plan);
}

TEST(Oracle, EquivalenceOnRandomInstances) {
  for (bool strengthen : {false, true}) {
    const auto tally = testing::oracle_equivalence(0, 16, strengthen);
    EXPECT_EQ(tally.agree, tally.compared);
    for (const auto& m : tally.mismatches) ADD_FAILURE() << m;
    EXPECT_GT(tally.feasible, 20);
    EXPECT_EQ(tally.plan_violations, 0);
  }
}

TEST(Validate, OptimalPlansHaveNoViolations) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto s = generate(220, 220, 7, 4, 300 + seed);
    const auto tab = build_link_tables(s, RadioConfig{});
    for (PlanMode mode : {PlanMode::ris, PlanMode::baseline}) {
      PlanningConfig cfg;
      cfg.budget = 4.5;
      const auto solved = solve_instance(mode, s, tab, cfg, true);
      if (!solved.plan) continue;
      for (const auto& v : validate_plan(*solved.plan, s, tab, cfg)) ADD_FAILURE() << describe(v);
    }
  }
}

TEST(Validate, BudgetOverrunIsSingleViolation) {
  const auto s = generate(220, 220, 6, 3, 5);
  const auto tab = build_link_tables(s, RadioConfig{});
  PlanningConfig cfg;
  cfg.budget = 4;
  const auto solved = solve_instance(PlanMode::ris, s, tab, cfg);
  ASSERT_TRUE(solved.plan);
  cfg.budget = solved.plan->total_cost - 0.1;
  const auto v = validate_plan(*solved.plan, s, tab, cfg);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].constraint_name, "budget");
  EXPECT_NEAR(v[0].magnitude, 0.1, 1e-9);
}

TEST(Validate, FlowOverCapacityByOneMbps) {
  // Donor 0 feeds IAB node 1, which serves the TP with the RIS at 2. The
  // demand exceeds the 0->1 backhaul capacity by exactly 1 Mbps.
  Scenario s;
  s.area_width = 40;
  s.area_height = 40;
  s.candidate_sites = {{5, 5}, {15, 5}, {10, 14}};
  s.test_points = {{12, 9}};
  const auto tab = build_link_tables(s, RadioConfig{});
  ASSERT_EQ(tab.delta_bh(0, 1), 1);
  ASSERT_EQ(tab.delta_src(0, 1, 2), 1);
  PlanningConfig cfg;
  cfg.budget = 3;
  cfg.fov = kTwoPi;
  cfg.demand = tab.cap_bh(0, 1) + 1.0;
  NetworkPlan p;
  p.mode = PlanMode::ris;
  p.donor = 0;
  p.iab_nodes = {0, 1};
  p.ris_sites = {2};
  p.assignments = {{1, 2}};
  p.backhaul = {{0, 1, cfg.demand}};
  p.wired_inflow = cfg.demand;
  p.orientations[2] = 0.0;
  finalize_plan(p, s, tab, cfg);
  const auto v = validate_plan(p, s, tab, cfg);
  int flow = 0;
  for (const auto& x : v)
    if (x.constraint_name == "flow_capacity") {
      ++flow;
      EXPECT_NEAR(x.magnitude, 1.0, 1e-9);
      EXPECT_NEAR(x.lhs_value - x.rhs_value, 1.0, 1e-9);
    }
  EXPECT_EQ(flow, 1);
  // At a demand within capacity the same tree has no flow violation.
  cfg.demand = tab.cap_bh(0, 1) - 1.0;
  p.backhaul[0].flow = cfg.demand;
  p.wired_inflow = cfg.demand;
  for (const auto& x : validate_plan(p, s, tab, cfg)) EXPECT_NE(x.constraint_name, "flow_capacity");
}

TEST(Validate, StructuralDefectsReported) {
  const auto s = generate(220, 220, 6, 3, 5);
  const auto tab = build_link_tables(s, RadioConfig{});
  PlanningConfig cfg;
  cfg.budget = 4;
  const auto solved = solve_instance(PlanMode::baseline, s, tab, cfg);
  ASSERT_TRUE(solved.plan);
  auto names = [&](const NetworkPlan& p) {
    std::set<std::string> out;
    for (const auto& v : validate_plan(p, s, tab, cfg)) out.insert(v.constraint_name);
    return out;
  };
  auto p = *solved.plan;
  p.assignments[0].secondary = p.assignments[0].serving;
  EXPECT_TRUE(names(p).contains("distinct_backup"));
  p = *solved.plan;
  p.theta_per_tp[1] += 0.5;
  EXPECT_TRUE(names(p).contains("theta"));
  p = *solved.plan;
  p.donor = -1;
  EXPECT_FALSE(names(p).empty());
}

TEST(Monotonicity, ObjectiveNonDecreasingInBudget) {
  for (int seed = 0; seed < 8; ++seed) {
    const auto oc = testing::oracle_case(seed + 100);
    const auto tab = build_link_tables(oc.scenario, RadioConfig{});
    for (PlanMode mode : {PlanMode::ris, PlanMode::baseline}) {
      double last = -kInf;
      for (double B : {0.0, 1.0, 1.1, 1.5, 2.0, 2.2, 3.0, 4.0, 6.0}) {
        PlanningConfig cfg;
        cfg.budget = B;
        const auto r = solve(build_model(mode, oc.scenario, tab, cfg), SolveOptions{});
        ASSERT_TRUE(r.status == SolveStatus::optimal || r.status == SolveStatus::infeasible);
        const double v = r.status == SolveStatus::optimal ? r.objective_value : -kInf;
        EXPECT_GE(v, last - 1e-6 * std::max(1.0, std::fabs(last))) << "seed " << seed << " B " << B;
        last = std::max(last, v);
      }
    }
  }
}

}  // namespace
}  // namespace ranplan
