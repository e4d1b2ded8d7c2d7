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

// Independent plan checker. Works on the NetworkPlan alone, never on model
// variables, and uses circular geometry for the RIS field of view.

#ifndef RANPLAN_VALIDATE_HPP
#define RANPLAN_VALIDATE_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "ranplan/planner.hpp"

namespace ranplan {

/// Absolute feasibility tolerance. Flow rows are scaled by the total demand.
inline constexpr double kFeasibilityTolerance = 1e-6;

struct Violation {
  std::string constraint_name;
  double lhs_value = 0.0;
  Sense sense = Sense::le;
  double rhs_value = 0.0;
  double magnitude = 0.0;
  std::string detail;
};

namespace detail {

class ViolationSink {
 public:
  explicit ViolationSink(std::vector<Violation>& out) : out_(out) {}

  void check(const std::string& name, double lhs, Sense sense, double rhs, double tol,
             std::string what = {}) {
    double m = 0.0;
    switch (sense) {
      case Sense::le: m = lhs - rhs; break;
      case Sense::ge: m = rhs - lhs; break;
      case Sense::eq: m = std::fabs(lhs - rhs); break;
    }
    if (m > tol || std::isnan(m)) out_.push_back({name, lhs, sense, rhs, m, std::move(what)});
  }

  // Logical requirement: recorded as 0 = 1.
  void require(const std::string& name, bool ok, std::string what) {
    if (!ok) out_.push_back({name, 0.0, Sense::eq, 1.0, 1.0, std::move(what)});
  }

 private:
  std::vector<Violation>& out_;
};

}  // namespace detail

inline std::vector<Violation> validate_plan(const NetworkPlan& p, const Scenario& s,
                                            const LinkBudgetTable& tab,
                                            const PlanningConfig& cfg) {
  std::vector<Violation> out;
  detail::ViolationSink v(out);
  const double tol = kFeasibilityTolerance;
  const int T = tab.num_tp, C = tab.num_cs;
  const bool ris = p.mode == PlanMode::ris;
  const double D = cfg.demand;
  const double flow_tol = tol * std::max(1.0, T * D);
  auto site_ok = [&](int c) { return c >= 0 && c < C; };

  // Structure first: later checks index the tables with these ids.
  bool sound = T == s.num_test_points() && C == s.num_sites();
  v.require("structure", sound, "link tables do not match the scenario");
  v.require("structure", static_cast<int>(p.assignments.size()) == T,
            "assignment count differs from the number of test points");
  sound = sound && static_cast<int>(p.assignments.size()) == T;
  for (int c : p.iab_nodes) sound = sound && site_ok(c);
  for (int c : p.ris_sites) sound = sound && site_ok(c);
  for (const auto& a : p.assignments) sound = sound && site_ok(a.serving) && site_ok(a.secondary);
  for (const auto& e : p.backhaul) sound = sound && site_ok(e.parent) && site_ok(e.child);
  v.require("structure", sound, "site index out of range");
  const std::set<int> iab(p.iab_nodes.begin(), p.iab_nodes.end());
  const std::set<int> rset(p.ris_sites.begin(), p.ris_sites.end());
  v.require("structure", iab.size() == p.iab_nodes.size() && rset.size() == p.ris_sites.size(),
            "duplicate installation");
  v.require("structure", ris || p.ris_sites.empty(), "baseline plan installs RIS");
  if (!sound) return out;

  const double cost =
      cfg.price_iab * static_cast<double>(iab.size()) + cfg.price_ris * static_cast<double>(rset.size());
  v.check("budget", cost, Sense::le, cfg.budget, tol);
  v.check("cost", p.total_cost, Sense::eq, cost, tol, "reported total cost");

  for (int c : rset)
    v.require("colocation", !iab.contains(c), "site " + std::to_string(c) + " hosts IAB and RIS");
  v.require("donor", iab.contains(p.donor), "donor is not an installed IAB node");

  // Access links and per-node demand.
  std::vector<double> demand(C, 0.0), tx_access(C, 0.0), ris_air(C, 0.0);
  for (int t = 0; t < T; ++t) {
    const auto [c, r] = p.assignments[t];
    const std::string who = "tp " + std::to_string(t);
    if (ris) {
      v.require("src_activation", c != r && tab.delta_src(t, c, r) != 0,
                who + ": SRC not available");
      v.require("src_activation", iab.contains(c), who + ": serving site has no IAB node");
      v.require("src_activation", rset.contains(r), who + ": assisting site has no RIS");
      if (c == r || !tab.delta_src(t, c, r)) continue;
      demand[c] += D;
      tx_access[c] += src_airtime(tab, cfg, t, c, r);
      ris_air[r] += ris_airtime(tab, cfg, t, c, r);
      auto phi = p.orientations.find(r);
      if (phi == p.orientations.end()) {
        v.require("fov", false, who + ": RIS " + std::to_string(r) + " has no orientation");
      } else {
        const double dt = circular_distance(phi->second, tab.phi_a(r, t));
        const double dc = circular_distance(phi->second, tab.phi_b(r, c));
        v.check("fov", dt, Sense::le, cfg.fov / 2, tol, who + ": TP outside RIS field of view");
        v.check("fov", dc, Sense::le, cfg.fov / 2, tol, who + ": BS outside RIS field of view");
      }
    } else {
      v.require("distinct_backup", c != r, who + ": primary and backup on the same site");
      for (int node : {c, r}) {
        v.require("access_activation", tab.delta_acc(t, node) != 0,
                  who + ": no access link to site " + std::to_string(node));
        v.require("access_activation", iab.contains(node),
                  who + ": site " + std::to_string(node) + " has no IAB node");
      }
      if (!tab.delta_acc(t, c) || !tab.delta_acc(t, r) || c == r) continue;
      demand[c] += D;
      demand[r] += cfg.xi * D;
      tx_access[c] += D / tab.cap_acc(t, c);
      tx_access[r] += cfg.xi * D / tab.cap_acc(t, r);
    }
  }
  for (int r : rset)
    v.check("ris_airtime", ris_air[r], Sense::le, 1.0, tol, "RIS " + std::to_string(r));

  // Backhaul tree rooted at the donor over exactly the installed IAB nodes.
  std::map<int, int> parent;
  std::vector<double> inflow(C, 0.0), outflow(C, 0.0), rx(C, 0.0), tx_bh(C, 0.0);
  std::set<std::pair<int, int>> seen;
  for (const auto& e : p.backhaul) {
    const std::string arc = std::to_string(e.parent) + "->" + std::to_string(e.child);
    v.require("tree", seen.insert({e.parent, e.child}).second, "duplicate edge " + arc);
    v.require("tree", iab.contains(e.parent) && iab.contains(e.child),
              "edge " + arc + " touches a site without IAB node");
    v.require("tree", e.child != p.donor, "edge " + arc + " enters the donor");
    v.require("tree", parent.emplace(e.child, e.parent).second,
              "node " + std::to_string(e.child) + " has several parents");
    const bool usable = e.parent != e.child && tab.delta_bh(e.parent, e.child);
    v.require("backhaul_activation", usable, "edge " + arc + " has no backhaul link");
    v.check("flow_capacity", e.flow, Sense::ge, 0.0, flow_tol, "edge " + arc);
    if (!usable) continue;
    v.check("flow_capacity", e.flow, Sense::le, tab.cap_bh(e.parent, e.child), flow_tol,
            "edge " + arc);
    outflow[e.parent] += e.flow;
    inflow[e.child] += e.flow;
    tx_bh[e.parent] += e.flow / tab.cap_bh(e.parent, e.child);
    rx[e.child] += e.flow / tab.cap_bh(e.parent, e.child);
  }
  for (int c : iab) {
    if (c == p.donor) continue;
    int hops = 0, at = c;
    while (at != p.donor && parent.contains(at) && hops <= C) {
      at = parent[at];
      ++hops;
    }
    v.require("tree", at == p.donor, "node " + std::to_string(c) + " is not connected to the donor");
  }

  const double injection = ris ? T * D : p.wired_inflow;
  if (!ris)
    v.check("wired_capacity", p.wired_inflow, Sense::le, resolved_wired_capacity(cfg, s), flow_tol);
  for (int c = 0; c < C; ++c) {
    if (!iab.contains(c)) continue;
    const double net = (c == p.donor ? injection : 0.0) + inflow[c] - outflow[c] - demand[c];
    v.check("flow_balance", net, Sense::eq, 0.0, flow_tol, "node " + std::to_string(c));
    v.check("half_duplex", rx[c] + tx_bh[c] + tx_access[c], Sense::le, 1.0, tol,
            "node " + std::to_string(c));
  }

  // Reported per-TP metrics and objective.
  const bool metrics_sized = static_cast<int>(p.theta_per_tp.size()) == T &&
                             static_cast<int>(p.len_per_tp.size()) == T;
  v.require("structure", metrics_sized, "per-TP metrics missing");
  if (metrics_sized) {
    for (int t = 0; t < T; ++t) {
      const auto [c, r] = p.assignments[t];
      if (c == r) continue;
      v.check("theta", p.theta_per_tp[t], Sense::le, tab.theta(t, c, r), tol,
              "tp " + std::to_string(t));
      v.check("length", p.len_per_tp[t], Sense::ge, 0.5 * (tab.len(t, c) + tab.len(t, r)), tol,
              "tp " + std::to_string(t));
    }
    const double obj = plan_objective(p.theta_per_tp, p.len_per_tp, s, cfg);
    v.check("objective", p.objective_value, Sense::eq, obj,
            kObjectiveTolerance * std::max(1.0, std::fabs(obj)));
  }
  return out;
}

inline std::string describe(const Violation& v) {
  const char* op = v.sense == Sense::le ? "<=" : v.sense == Sense::ge ? ">=" : "=";
  std::string out = v.constraint_name + ": " + std::to_string(v.lhs_value) + " " + op + " " +
                    std::to_string(v.rhs_value) + " violated by " + std::to_string(v.magnitude);
  if (!v.detail.empty()) out += " (" + v.detail + ")";
  return out;
}

}  // namespace ranplan

#endif  // RANPLAN_VALIDATE_HPP
