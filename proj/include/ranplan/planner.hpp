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

// The two planning formulations and the decoder from solver values to a
// NetworkPlan.
//
// RIS mode. Every TP is covered by one smart radio connection (t, c, r):
// a direct link from the IAB node (or donor) at c plus a backup path
// reflected by the RIS at r. Installed IAB nodes form a backhaul tree rooted
// at the single donor; the donor injects |T| * D of core traffic.
//
//   max  mu/Theta * sum_t theta_t - (1 - mu)/L * sum_t l_t
//   colocation        y_iab_c + y_ris_c <= 1
//   donor_requires_iab y_don_c <= y_iab_c
//   budget            sum_c P_iab y_iab_c + P_ris y_ris_c <= B
//   backhaul_activation z_cd <= (y_iab_c + y_iab_d) / 2
//   src_activation    x_tcr <= (y_iab_c + y_ris_r) / 2
//   one_src           sum_{c,r} x_tcr = 1
//   spanning_tree     sum_d z_dc <= 1 - y_don_c
//   flow_balance      |T| D y_don_c + sum_d (f_dc - f_cd) - sum_{t,r} D x_tcr = 0
//   flow_capacity     f_cd <= C_bh_cd z_cd
//   tx_time           t_c = sum_d f_cd / C_bh_cd + sum_{t,r} A_tcr x_tcr,
//                     A_tcr = max(D / C_dir_tcr, xi D / C_ref_tcr)
//   half_duplex       sum_d f_dc / C_bh_dc + t_c <= 1
//   ris_airtime       sum_{t,c} xi D / C_ref_tcr x_tcr <= 1
//   orient_*          phi_r within F/2 of the azimuths r->t and r->c when
//                     x_tcr = 1 (linear big-M 2 pi, no wraparound)
//   angular_separation theta_t <= Theta_tcr + 2 pi (1 - x_tcr)
//   link_length       l_t >= 1/2 sum_{c,r} x_tcr (L_tc + L_tr)
//
// Baseline mode replaces the RIS with a backup IAB node: x_tc/s_tc select
// the primary and backup node of each TP, the core traffic enters the
// donor through w_c <= U y_don_c, and the backup carries xi D.
//
// Variables whose activation parameter is zero (x for Delta_src = 0, z/f
// for Delta_bh = 0, x/s for Delta_acc = 0) are not created at all.

#ifndef RANPLAN_PLANNER_HPP
#define RANPLAN_PLANNER_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "ranplan/milp.hpp"
#include "ranplan/radio.hpp"
#include "ranplan/scenario.hpp"

namespace ranplan {

enum class PlanMode { ris, baseline };

inline std::string_view to_string(PlanMode m) {
  return m == PlanMode::ris ? "ris" : "baseline";
}

inline PlanMode parse_mode(std::string_view s) {
  if (s == "ris") return PlanMode::ris;
  if (s == "baseline") return PlanMode::baseline;
  throw ValidationError("unknown mode '" + std::string(s) + "' (expected ris or baseline)");
}

/// Ris mode: (serving CS, assisting RIS). Baseline: (primary CS, backup CS).
struct TpAssignment {
  int serving = -1;
  int secondary = -1;

  friend bool operator==(const TpAssignment&, const TpAssignment&) = default;
};

struct BackhaulEdge {
  int parent = -1;
  int child = -1;
  double flow = 0.0;  // Mbps

  friend bool operator==(const BackhaulEdge&, const BackhaulEdge&) = default;
};

struct NetworkPlan {
  PlanMode mode = PlanMode::ris;
  int donor = -1;
  std::vector<int> iab_nodes;  // sorted, includes the donor
  std::vector<int> ris_sites;  // sorted, empty in baseline mode
  std::vector<TpAssignment> assignments;
  std::vector<BackhaulEdge> backhaul;
  double wired_inflow = 0.0;
  std::map<int, double> orientations;  // RIS site -> azimuth
  std::vector<double> theta_per_tp;
  std::vector<double> len_per_tp;
  double total_cost = 0.0;
  double objective_value = 0.0;

  double mean_theta() const { return mean(theta_per_tp); }
  double mean_len() const { return mean(len_per_tp); }

  friend bool operator==(const NetworkPlan&, const NetworkPlan&) = default;

 private:
  static double mean(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  }
};

class PlanError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void check_dimensions(const Scenario& s, const LinkBudgetTable& tab) {
  if (tab.num_tp != s.num_test_points() || tab.num_cs != s.num_sites())
    throw ModelError("dimension mismatch between scenario (" +
                     std::to_string(s.num_test_points()) + " TP, " +
                     std::to_string(s.num_sites()) + " CS) and link tables (" +
                     std::to_string(tab.num_tp) + " TP, " + std::to_string(tab.num_cs) +
                     " CS)");
}

inline std::string idx(std::string_view prefix, std::initializer_list<int> v,
                       std::string_view letters) {
  std::string out(prefix);
  auto it = letters.begin();
  for (int i : v) {
    out += '_';
    out += *it++;
    out += std::to_string(i);
  }
  return out;
}

inline VarKey key(Symbol s, int a, int b = -1, int c = -1) { return {s, {a, b, c}}; }

/// Installation variables, backhaul variables, node time fractions and the
/// per-TP theta/l variables shared by both formulations.
inline void add_common_variables(MilpModel& m, const LinkBudgetTable& tab, bool with_ris) {
  const int C = tab.num_cs, T = tab.num_tp;
  for (int c = 0; c < C; ++c) {
    m.add_variable(key(Symbol::y_don, c), VarKind::binary, 0, 1);
    m.add_variable(key(Symbol::y_iab, c), VarKind::binary, 0, 1);
    if (with_ris) m.add_variable(key(Symbol::y_ris, c), VarKind::binary, 0, 1);
  }
  for (int c = 0; c < C; ++c)
    for (int d = 0; d < C; ++d)
      if (c != d && tab.delta_bh(c, d)) {
        m.add_variable(key(Symbol::z, c, d), VarKind::binary, 0, 1);
        m.add_variable(key(Symbol::f, c, d), VarKind::continuous, 0, kInf);
      }
  for (int c = 0; c < C; ++c) m.add_variable(key(Symbol::t_tx, c), VarKind::continuous, 0, 1);
  for (int t = 0; t < T; ++t) {
    m.add_variable(key(Symbol::l, t), VarKind::continuous, 0, kInf);
    m.add_variable(key(Symbol::theta, t), VarKind::continuous, 0, kPi);
  }
}

inline void add_objective(MilpModel& m, const Scenario& s, const PlanningConfig& cfg) {
  const double tn = resolved_theta_norm(cfg, s), ln = resolved_len_norm(cfg, s);
  std::vector<Term> obj;
  for (int t = 0; t < s.num_test_points(); ++t) {
    obj.push_back({m.at(key(Symbol::theta, t)), cfg.mu / tn});
    obj.push_back({m.at(key(Symbol::l, t)), -(1.0 - cfg.mu) / ln});
  }
  m.set_objective(std::move(obj), true);
}

/// Rows on backhaul structure common to both models: link activation,
/// in-tree degree and flow capacity.
inline void add_backhaul_rows(MilpModel& m, const LinkBudgetTable& tab) {
  const int C = tab.num_cs;
  for (int c = 0; c < C; ++c)
    for (int d = 0; d < C; ++d) {
      auto z = m.find(key(Symbol::z, c, d));
      if (!z) continue;
      m.add_constraint("backhaul_activation", idx("bh_act", {c, d}, "cd"),
                       {{*z, 1.0},
                        {m.at(key(Symbol::y_iab, c)), -0.5},
                        {m.at(key(Symbol::y_iab, d)), -0.5}},
                       Sense::le, 0.0);
    }
  for (int c = 0; c < C; ++c) {
    std::vector<Term> terms{{m.at(key(Symbol::y_don, c)), 1.0}};
    for (int d = 0; d < C; ++d)
      if (auto z = m.find(key(Symbol::z, d, c))) terms.push_back({*z, 1.0});
    m.add_constraint("spanning_tree", idx("tree", {c}, "c"), std::move(terms), Sense::le, 1.0);
  }
  for (int c = 0; c < C; ++c)
    for (int d = 0; d < C; ++d) {
      auto z = m.find(key(Symbol::z, c, d));
      if (!z) continue;
      m.add_constraint("flow_capacity", idx("flow_cap", {c, d}, "cd"),
                       {{m.at(key(Symbol::f, c, d)), 1.0}, {*z, -tab.cap_bh(c, d)}},
                       Sense::le, 0.0);
    }
}

/// Backhaul airtime terms of node c: transmit (outgoing) and receive (incoming).
inline std::vector<Term> backhaul_tx_terms(const MilpModel& m, const LinkBudgetTable& tab,
                                           int c, double sign) {
  std::vector<Term> terms;
  for (int d = 0; d < tab.num_cs; ++d)
    if (auto f = m.find(key(Symbol::f, c, d))) terms.push_back({*f, sign / tab.cap_bh(c, d)});
  return terms;
}

inline std::vector<Term> backhaul_rx_terms(const MilpModel& m, const LinkBudgetTable& tab,
                                           int c) {
  std::vector<Term> terms;
  for (int d = 0; d < tab.num_cs; ++d)
    if (auto f = m.find(key(Symbol::f, d, c))) terms.push_back({*f, 1.0 / tab.cap_bh(d, c)});
  return terms;
}

}  // namespace detail

/// Access airtime of one SRC at its serving node: the longer of the direct
/// and reflected transmissions.
inline double src_airtime(const LinkBudgetTable& tab, const PlanningConfig& cfg, int t, int c,
                          int r) {
  const double direct = cfg.demand / tab.cap_dir(t, c, r);
  const double reflected = cfg.xi * cfg.demand / tab.cap_ref(t, c, r);
  return std::max(direct, reflected);
}

/// RIS airtime consumed by one SRC.
inline double ris_airtime(const LinkBudgetTable& tab, const PlanningConfig& cfg, int t, int c,
                          int r) {
  return cfg.xi * cfg.demand / tab.cap_ref(t, c, r);
}

/// strengthen: append valid inequalities (families prefixed "cut_") that
/// tighten the LP relaxation without changing the set of integer-feasible
/// plans. The rows listed at the top of this header are always present.
struct ModelOptions {
  bool strengthen = false;
};

namespace detail {

inline void add_cuts(MilpModel& m, const LinkBudgetTable& tab, const PlanningConfig& cfg,
                     bool ris) {
  const int T = tab.num_tp, C = tab.num_cs;
  if (cfg.demand > 0.0) {
    std::vector<Term> terms;
    for (int c = 0; c < C; ++c) terms.push_back({m.at(key(Symbol::y_don, c)), 1.0});
    m.add_constraint("cut_one_donor", "cut_one_donor", std::move(terms), Sense::eq, 1.0);
  }
  const double total = (ris ? 1.0 : 1.0 + cfg.xi) * T * cfg.demand;
  for (int c = 0; c < C; ++c)
    for (int d = 0; d < C; ++d) {
      auto z = m.find(key(Symbol::z, c, d));
      if (!z) continue;
      m.add_constraint("cut_backhaul_end", idx("cut_bh_src", {c, d}, "cd"),
                       {{*z, 1.0}, {m.at(key(Symbol::y_iab, c)), -1.0}}, Sense::le, 0.0);
      m.add_constraint("cut_backhaul_end", idx("cut_bh_dst", {c, d}, "cd"),
                       {{*z, 1.0}, {m.at(key(Symbol::y_iab, d)), -1.0}}, Sense::le, 0.0);
      if (total < tab.cap_bh(c, d))
        m.add_constraint("cut_flow_total", idx("cut_flow", {c, d}, "cd"),
                         {{m.at(key(Symbol::f, c, d)), 1.0}, {*z, -total}}, Sense::le, 0.0);
    }
  for (int t = 0; t < T; ++t) {
    const int theta = m.at(key(Symbol::theta, t));
    if (ris) {
      std::vector<Term> agg{{theta, 1.0}};
      for (int c = 0; c < C; ++c)
        for (int r = 0; r < C; ++r) {
          auto x = m.find(key(Symbol::x, t, c, r));
          if (!x) continue;
          agg.push_back({*x, -tab.theta(t, c, r)});
          m.add_constraint("cut_src_end", idx("cut_src_iab", {t, c, r}, "tcr"),
                           {{*x, 1.0}, {m.at(key(Symbol::y_iab, c)), -1.0}}, Sense::le, 0.0);
          m.add_constraint("cut_src_end", idx("cut_src_ris", {t, c, r}, "tcr"),
                           {{*x, 1.0}, {m.at(key(Symbol::y_ris, r)), -1.0}}, Sense::le, 0.0);
          // Orientation rows with the smallest big-M allowed by 0 <= phi <= 2 pi.
          const int phi = m.at(key(Symbol::phi, r));
          for (auto [end, ray] : {std::pair{"tp", tab.phi_a(r, t)}, std::pair{"bs", tab.phi_b(r, c)}}) {
            const double lo = ray - cfg.fov / 2, hi = ray + cfg.fov / 2;
            const std::string tag = std::string("cut_or_") + end;
            if (lo > 0.0)
              m.add_constraint("cut_orient", idx(tag + "_lo", {t, c, r}, "tcr"),
                               {{phi, 1.0}, {*x, -lo}}, Sense::ge, 0.0);
            if (hi < kTwoPi)
              m.add_constraint("cut_orient", idx(tag + "_up", {t, c, r}, "tcr"),
                               {{phi, 1.0}, {*x, kTwoPi - hi}}, Sense::le, kTwoPi);
          }
        }
      m.add_constraint("cut_theta", idx("cut_theta", {t}, "t"), std::move(agg), Sense::le, 0.0);
    } else {
      // theta_t is bounded by the best partner of the chosen primary, and
      // of the chosen backup.
      std::vector<Term> by_primary{{theta, 1.0}}, by_backup{{theta, 1.0}};
      for (int c = 0; c < C; ++c) {
        double best_p = 0.0, best_b = 0.0;
        for (int r = 0; r < C; ++r) {
          if (r == c) continue;
          if (tab.delta_acc(t, r)) best_p = std::max(best_p, tab.theta(t, c, r));
          if (tab.delta_acc(t, r)) best_b = std::max(best_b, tab.theta(t, r, c));
        }
        if (auto x = m.find(key(Symbol::x, t, c))) by_primary.push_back({*x, -best_p});
        if (auto sb = m.find(key(Symbol::s, t, c))) by_backup.push_back({*sb, -best_b});
      }
      m.add_constraint("cut_theta", idx("cut_theta_prim", {t}, "t"), std::move(by_primary),
                       Sense::le, 0.0);
      m.add_constraint("cut_theta", idx("cut_theta_bkp", {t}, "t"), std::move(by_backup),
                       Sense::le, 0.0);
    }
  }
}

}  // namespace detail

inline MilpModel build_ris_model(const Scenario& s, const LinkBudgetTable& tab,
                                 const PlanningConfig& cfg,
                                 const ModelOptions& opts = {}) {
  using detail::idx;
  using detail::key;
  cfg.validate();
  detail::check_dimensions(s, tab);
  const int T = tab.num_tp, C = tab.num_cs;
  const double D = cfg.demand, F = cfg.fov;

  MilpModel m;
  m.set_label("ris");
  detail::add_common_variables(m, tab, true);
  for (int t = 0; t < T; ++t)
    for (int c = 0; c < C; ++c)
      for (int r = 0; r < C; ++r)
        if (c != r && tab.delta_src(t, c, r))
          m.add_variable(key(Symbol::x, t, c, r), VarKind::binary, 0, 1);
  for (int r = 0; r < C; ++r) m.add_variable(key(Symbol::phi, r), VarKind::continuous, 0, kTwoPi);
  detail::add_objective(m, s, cfg);

  auto x_of = [&](int t, int c, int r) { return m.find(key(Symbol::x, t, c, r)); };

  for (int c = 0; c < C; ++c)
    m.add_constraint("colocation", idx("coloc", {c}, "c"),
                     {{m.at(key(Symbol::y_iab, c)), 1.0}, {m.at(key(Symbol::y_ris, c)), 1.0}},
                     Sense::le, 1.0);
  for (int c = 0; c < C; ++c)
    m.add_constraint("donor_requires_iab", idx("donor", {c}, "c"),
                     {{m.at(key(Symbol::y_don, c)), 1.0}, {m.at(key(Symbol::y_iab, c)), -1.0}},
                     Sense::le, 0.0);
  {
    std::vector<Term> terms;
    for (int c = 0; c < C; ++c) {
      terms.push_back({m.at(key(Symbol::y_iab, c)), cfg.price_iab});
      terms.push_back({m.at(key(Symbol::y_ris, c)), cfg.price_ris});
    }
    m.add_constraint("budget", "budget", std::move(terms), Sense::le, cfg.budget);
  }
  detail::add_backhaul_rows(m, tab);

  for (int t = 0; t < T; ++t)
    for (int c = 0; c < C; ++c)
      for (int r = 0; r < C; ++r)
        if (auto x = x_of(t, c, r))
          m.add_constraint("src_activation", idx("src_act", {t, c, r}, "tcr"),
                           {{*x, 1.0},
                            {m.at(key(Symbol::y_iab, c)), -0.5},
                            {m.at(key(Symbol::y_ris, r)), -0.5}},
                           Sense::le, 0.0);

  for (int t = 0; t < T; ++t) {
    std::vector<Term> terms;
    for (int c = 0; c < C; ++c)
      for (int r = 0; r < C; ++r)
        if (auto x = x_of(t, c, r)) terms.push_back({*x, 1.0});
    m.add_constraint("one_src", idx("one_src", {t}, "t"), std::move(terms), Sense::eq, 1.0);
  }

  for (int c = 0; c < C; ++c) {
    std::vector<Term> terms{{m.at(key(Symbol::y_don, c)), T * D}};
    for (int d = 0; d < C; ++d) {
      if (auto f = m.find(key(Symbol::f, d, c))) terms.push_back({*f, 1.0});
      if (auto f = m.find(key(Symbol::f, c, d))) terms.push_back({*f, -1.0});
    }
    for (int t = 0; t < T; ++t)
      for (int r = 0; r < C; ++r)
        if (auto x = x_of(t, c, r)) terms.push_back({*x, -D});
    m.add_constraint("flow_balance", idx("flow_bal", {c}, "c"), std::move(terms), Sense::eq, 0.0);
  }

  for (int c = 0; c < C; ++c) {
    auto terms = detail::backhaul_tx_terms(m, tab, c, -1.0);
    terms.push_back({m.at(key(Symbol::t_tx, c)), 1.0});
    for (int t = 0; t < T; ++t)
      for (int r = 0; r < C; ++r)
        if (auto x = x_of(t, c, r)) terms.push_back({*x, -src_airtime(tab, cfg, t, c, r)});
    m.add_constraint("tx_time", idx("tx_time", {c}, "c"), std::move(terms), Sense::eq, 0.0);
  }
  for (int c = 0; c < C; ++c) {
    auto terms = detail::backhaul_rx_terms(m, tab, c);
    terms.push_back({m.at(key(Symbol::t_tx, c)), 1.0});
    m.add_constraint("half_duplex", idx("half_duplex", {c}, "c"), std::move(terms), Sense::le,
                     1.0);
  }
  for (int r = 0; r < C; ++r) {
    std::vector<Term> terms;
    for (int t = 0; t < T; ++t)
      for (int c = 0; c < C; ++c)
        if (auto x = x_of(t, c, r)) terms.push_back({*x, ris_airtime(tab, cfg, t, c, r)});
    m.add_constraint("ris_airtime", idx("ris_air", {r}, "r"), std::move(terms), Sense::le, 1.0);
  }

  // phi_r - 2pi x >= Phi - F/2 - 2pi and phi_r + 2pi x <= Phi + F/2 + 2pi.
  for (int t = 0; t < T; ++t)
    for (int c = 0; c < C; ++c)
      for (int r = 0; r < C; ++r) {
        auto x = x_of(t, c, r);
        if (!x) continue;
        const int phi = m.at(key(Symbol::phi, r));
        const double pa = tab.phi_a(r, t), pb = tab.phi_b(r, c);
        m.add_constraint("orient_tp_lower", idx("or_tp_lo", {t, c, r}, "tcr"),
                         {{phi, 1.0}, {*x, -kTwoPi}}, Sense::ge, pa - F / 2 - kTwoPi);
        m.add_constraint("orient_tp_upper", idx("or_tp_up", {t, c, r}, "tcr"),
                         {{phi, 1.0}, {*x, kTwoPi}}, Sense::le, pa + F / 2 + kTwoPi);
        m.add_constraint("orient_bs_lower", idx("or_bs_lo", {t, c, r}, "tcr"),
                         {{phi, 1.0}, {*x, -kTwoPi}}, Sense::ge, pb - F / 2 - kTwoPi);
        m.add_constraint("orient_bs_upper", idx("or_bs_up", {t, c, r}, "tcr"),
                         {{phi, 1.0}, {*x, kTwoPi}}, Sense::le, pb + F / 2 + kTwoPi);
      }

  for (int t = 0; t < T; ++t)
    for (int c = 0; c < C; ++c)
      for (int r = 0; r < C; ++r)
        if (auto x = x_of(t, c, r))
          m.add_constraint("angular_separation", idx("ang_sep", {t, c, r}, "tcr"),
                           {{m.at(key(Symbol::theta, t)), 1.0}, {*x, kTwoPi}}, Sense::le,
                           tab.theta(t, c, r) + kTwoPi);

  for (int t = 0; t < T; ++t) {
    std::vector<Term> terms{{m.at(key(Symbol::l, t)), 1.0}};
    for (int c = 0; c < C; ++c)
      for (int r = 0; r < C; ++r)
        if (auto x = x_of(t, c, r))
          terms.push_back({*x, -0.5 * (tab.len(t, c) + tab.len(t, r))});
    m.add_constraint("link_length", idx("len", {t}, "t"), std::move(terms), Sense::ge, 0.0);
  }
  if (opts.strengthen) detail::add_cuts(m, tab, cfg, true);
  m.check();
  return m;
}

inline MilpModel build_baseline_model(const Scenario& s, const LinkBudgetTable& tab,
                                      const PlanningConfig& cfg,
                                      const ModelOptions& opts = {}) {
  using detail::idx;
  using detail::key;
  cfg.validate();
  detail::check_dimensions(s, tab);
  const int T = tab.num_tp, C = tab.num_cs;
  const double D = cfg.demand;

  MilpModel m;
  m.set_label("baseline");
  detail::add_common_variables(m, tab, false);
  for (int t = 0; t < T; ++t)
    for (int c = 0; c < C; ++c)
      if (tab.delta_acc(t, c)) {
        m.add_variable(key(Symbol::x, t, c), VarKind::binary, 0, 1);
        m.add_variable(key(Symbol::s, t, c), VarKind::binary, 0, 1);
      }
  for (int c = 0; c < C; ++c) m.add_variable(key(Symbol::w, c), VarKind::continuous, 0, kInf);
  detail::add_objective(m, s, cfg);

  auto x_of = [&](int t, int c) { return m.find(key(Symbol::x, t, c)); };
  auto s_of = [&](int t, int c) { return m.find(key(Symbol::s, t, c)); };

  for (int c = 0; c < C; ++c)
    m.add_constraint("donor_requires_iab", idx("donor", {c}, "c"),
                     {{m.at(key(Symbol::y_don, c)), 1.0}, {m.at(key(Symbol::y_iab, c)), -1.0}},
                     Sense::le, 0.0);
  {
    std::vector<Term> terms;
    for (int c = 0; c < C; ++c) terms.push_back({m.at(key(Symbol::y_don, c)), 1.0});
    m.add_constraint("single_donor", "single_donor", std::move(terms), Sense::le, 1.0);
  }
  {
    std::vector<Term> terms;
    for (int c = 0; c < C; ++c) terms.push_back({m.at(key(Symbol::y_iab, c)), cfg.price_iab});
    m.add_constraint("budget", "budget", std::move(terms), Sense::le, cfg.budget);
  }
  detail::add_backhaul_rows(m, tab);

  for (int t = 0; t < T; ++t)
    for (int c = 0; c < C; ++c) {
      auto x = x_of(t, c);
      if (!x) continue;
      const int y = m.at(key(Symbol::y_iab, c));
      m.add_constraint("primary_activation", idx("prim_act", {t, c}, "tc"),
                       {{*x, 1.0}, {y, -1.0}}, Sense::le, 0.0);
      m.add_constraint("backup_activation", idx("bkp_act", {t, c}, "tc"),
                       {{*s_of(t, c), 1.0}, {y, -1.0}}, Sense::le, 0.0);
      m.add_constraint("distinct_backup", idx("distinct", {t, c}, "tc"),
                       {{*x, 1.0}, {*s_of(t, c), 1.0}}, Sense::le, 1.0);
    }
  for (int t = 0; t < T; ++t) {
    std::vector<Term> prim, bkp;
    for (int c = 0; c < C; ++c)
      if (auto x = x_of(t, c)) {
        prim.push_back({*x, 1.0});
        bkp.push_back({*s_of(t, c), 1.0});
      }
    m.add_constraint("one_primary", idx("one_prim", {t}, "t"), std::move(prim), Sense::eq, 1.0);
    m.add_constraint("one_backup", idx("one_bkp", {t}, "t"), std::move(bkp), Sense::eq, 1.0);
  }

  for (int c = 0; c < C; ++c) {
    std::vector<Term> terms{{m.at(key(Symbol::w, c)), 1.0}};
    for (int d = 0; d < C; ++d) {
      if (auto f = m.find(key(Symbol::f, d, c))) terms.push_back({*f, 1.0});
      if (auto f = m.find(key(Symbol::f, c, d))) terms.push_back({*f, -1.0});
    }
    for (int t = 0; t < T; ++t)
      if (auto x = x_of(t, c)) {
        terms.push_back({*x, -D});
        terms.push_back({*s_of(t, c), -cfg.xi * D});
      }
    m.add_constraint("flow_balance", idx("flow_bal", {c}, "c"), std::move(terms), Sense::eq, 0.0);
  }
  const double U = resolved_wired_capacity(cfg, s);
  for (int c = 0; c < C; ++c)
    m.add_constraint("wired_capacity", idx("wired", {c}, "c"),
                     {{m.at(key(Symbol::w, c)), 1.0}, {m.at(key(Symbol::y_don, c)), -U}},
                     Sense::le, 0.0);

  for (int c = 0; c < C; ++c) {
    auto terms = detail::backhaul_tx_terms(m, tab, c, -1.0);
    terms.push_back({m.at(key(Symbol::t_tx, c)), 1.0});
    for (int t = 0; t < T; ++t)
      if (auto x = x_of(t, c)) {
        terms.push_back({*x, -D / tab.cap_acc(t, c)});
        terms.push_back({*s_of(t, c), -cfg.xi * D / tab.cap_acc(t, c)});
      }
    m.add_constraint("tx_time", idx("tx_time", {c}, "c"), std::move(terms), Sense::eq, 0.0);
  }
  for (int c = 0; c < C; ++c) {
    auto terms = detail::backhaul_rx_terms(m, tab, c);
    terms.push_back({m.at(key(Symbol::t_tx, c)), 1.0});
    m.add_constraint("half_duplex", idx("half_duplex", {c}, "c"), std::move(terms), Sense::le,
                     1.0);
  }

  // theta_t + 2pi x_tc + 2pi s_tr <= Theta_tcr + 4pi
  for (int t = 0; t < T; ++t)
    for (int c = 0; c < C; ++c)
      for (int r = 0; r < C; ++r) {
        if (c == r) continue;
        auto x = x_of(t, c);
        auto sb = s_of(t, r);
        if (!x || !sb) continue;
        m.add_constraint("angular_separation", idx("ang_sep", {t, c, r}, "tcr"),
                         {{m.at(key(Symbol::theta, t)), 1.0}, {*x, kTwoPi}, {*sb, kTwoPi}},
                         Sense::le, tab.theta(t, c, r) + 2.0 * kTwoPi);
      }

  for (int t = 0; t < T; ++t) {
    std::vector<Term> terms{{m.at(key(Symbol::l, t)), 1.0}};
    for (int c = 0; c < C; ++c)
      if (auto x = x_of(t, c)) {
        terms.push_back({*x, -0.5 * tab.len(t, c)});
        terms.push_back({*s_of(t, c), -0.5 * tab.len(t, c)});
      }
    m.add_constraint("link_length", idx("len", {t}, "t"), std::move(terms), Sense::ge, 0.0);
  }
  if (opts.strengthen) detail::add_cuts(m, tab, cfg, false);
  m.check();
  return m;
}

inline MilpModel build_model(PlanMode mode, const Scenario& s, const LinkBudgetTable& tab,
                             const PlanningConfig& cfg, const ModelOptions& opts = {}) {
  return mode == PlanMode::ris ? build_ris_model(s, tab, cfg, opts)
                               : build_baseline_model(s, tab, cfg, opts);
}

// ---------------------------------------------------------------------------
// Decoding

inline constexpr double kIntegralityTolerance = 1e-6;
inline constexpr double kObjectiveTolerance = 1e-6;  // relative

/// Objective of a plan from its assignments alone:
/// mu/Theta * sum theta - (1-mu)/L * sum l.
inline double plan_objective(const std::vector<double>& theta, const std::vector<double>& len,
                             const Scenario& s, const PlanningConfig& cfg) {
  double st = 0.0, sl = 0.0;
  for (double v : theta) st += v;
  for (double v : len) sl += v;
  return cfg.mu * st / resolved_theta_norm(cfg, s) -
         (1.0 - cfg.mu) * sl / resolved_len_norm(cfg, s);
}

inline bool objectives_match(double a, double b) {
  return std::fabs(a - b) <= kObjectiveTolerance * std::max({1.0, std::fabs(a), std::fabs(b)});
}

/// Fills the derived fields of a plan (per-TP theta/len, cost, objective)
/// from its installations and assignments.
inline void finalize_plan(NetworkPlan& p, const Scenario& s, const LinkBudgetTable& tab,
                          const PlanningConfig& cfg) {
  const int T = tab.num_tp;
  p.theta_per_tp.assign(T, 0.0);
  p.len_per_tp.assign(T, 0.0);
  for (int t = 0; t < T; ++t) {
    const auto& a = p.assignments.at(t);
    p.theta_per_tp[t] = tab.theta(t, a.serving, a.secondary);
    p.len_per_tp[t] = 0.5 * (tab.len(t, a.serving) + tab.len(t, a.secondary));
  }
  p.total_cost = cfg.price_iab * static_cast<double>(p.iab_nodes.size()) +
                 cfg.price_ris * static_cast<double>(p.ris_sites.size());
  p.objective_value = plan_objective(p.theta_per_tp, p.len_per_tp, s, cfg);
}

/// Decodes solver values into a plan.
///
/// IAB nodes that the solution installs but never connects to the donor
/// serve no traffic (flow conservation) and are dropped, together with any
/// backhaul arcs among them. When `tight` is set the recomputed objective
/// must equal the solver objective; otherwise (incumbents) it may only be
/// larger, since theta/l variables of a non-optimal point need not be tight.
inline NetworkPlan extract_plan(const MilpModel& m, const std::vector<double>& values,
                                double solver_objective, const Scenario& s,
                                const LinkBudgetTable& tab, const PlanningConfig& cfg,
                                bool tight = true) {
  using detail::key;
  detail::check_dimensions(s, tab);
  if (static_cast<int>(values.size()) != m.num_variables())
    throw PlanError("solution does not assign every model variable");
  const auto& vars = m.variables();
  for (std::size_t j = 0; j < vars.size(); ++j)
    if (vars[j].kind == VarKind::binary &&
        std::fabs(values[j] - std::round(values[j])) > kIntegralityTolerance)
      throw PlanError("non-integral solution: " + vars[j].name + " = " +
                      std::to_string(values[j]));
  auto on = [&](const VarKey& k) {
    auto id = m.find(k);
    return id && std::round(values[static_cast<std::size_t>(*id)]) == 1.0;
  };
  auto value = [&](const VarKey& k) {
    auto id = m.find(k);
    return id ? values[static_cast<std::size_t>(*id)] : 0.0;
  };

  const int T = tab.num_tp, C = tab.num_cs;
  NetworkPlan p;
  p.mode = m.label() == "baseline" ? PlanMode::baseline : PlanMode::ris;
  const bool ris = p.mode == PlanMode::ris;

  std::vector<int> donors;
  std::set<int> iab;
  for (int c = 0; c < C; ++c) {
    if (on(key(Symbol::y_don, c))) donors.push_back(c);
    if (on(key(Symbol::y_iab, c))) iab.insert(c);
    if (ris && on(key(Symbol::y_ris, c))) p.ris_sites.push_back(c);
  }
  if (donors.size() != 1)
    throw PlanError("infeasible decode: expected exactly one donor, found " +
                    std::to_string(donors.size()));
  p.donor = donors.front();

  p.assignments.resize(T);
  for (int t = 0; t < T; ++t) {
    int found = 0;
    if (ris) {
      for (int c = 0; c < C; ++c)
        for (int r = 0; r < C; ++r)
          if (on(key(Symbol::x, t, c, r))) {
            p.assignments[t] = {c, r};
            ++found;
          }
      if (found != 1)
        throw PlanError("infeasible decode: TP " + std::to_string(t) + " has " +
                        std::to_string(found) + " active SRCs");
    } else {
      int backups = 0;
      for (int c = 0; c < C; ++c) {
        if (on(key(Symbol::x, t, c))) {
          p.assignments[t].serving = c;
          ++found;
        }
        if (on(key(Symbol::s, t, c))) {
          p.assignments[t].secondary = c;
          ++backups;
        }
      }
      if (found != 1 || backups != 1)
        throw PlanError("infeasible decode: TP " + std::to_string(t) + " has " +
                        std::to_string(found) + " primary and " + std::to_string(backups) +
                        " backup links");
    }
  }

  // Keep only the arcs reachable from the donor.
  std::vector<std::vector<int>> children(C);
  for (int c = 0; c < C; ++c)
    for (int d = 0; d < C; ++d)
      if (on(key(Symbol::z, c, d))) children[c].push_back(d);
  std::set<int> reached{p.donor};
  std::queue<int> frontier;
  frontier.push(p.donor);
  while (!frontier.empty()) {
    const int c = frontier.front();
    frontier.pop();
    for (int d : children[c]) {
      if (reached.contains(d)) continue;
      reached.insert(d);
      frontier.push(d);
      p.backhaul.push_back({c, d, std::max(0.0, value(key(Symbol::f, c, d)))});
    }
  }
  std::sort(p.backhaul.begin(), p.backhaul.end(), [](const auto& a, const auto& b) {
    return std::pair(a.parent, a.child) < std::pair(b.parent, b.child);
  });
  for (int c : iab) {
    if (reached.contains(c)) {
      p.iab_nodes.push_back(c);
      continue;
    }
    for (const auto& a : p.assignments)
      if (a.serving == c || (!ris && a.secondary == c))
        throw PlanError("infeasible decode: node " + std::to_string(c) +
                        " serves test points but is not connected to the donor");
  }

  p.wired_inflow = ris ? T * cfg.demand : value(key(Symbol::w, p.donor));
  for (int r : p.ris_sites) p.orientations[r] = normalize_angle(value(key(Symbol::phi, r)));

  finalize_plan(p, s, tab, cfg);
  const double tol =
      kObjectiveTolerance * std::max({1.0, std::fabs(p.objective_value), std::fabs(solver_objective)});
  if (p.objective_value < solver_objective - tol ||
      (tight && p.objective_value > solver_objective + tol))
    throw PlanError("decode drift: recomputed objective " + std::to_string(p.objective_value) +
                    " vs solver objective " + std::to_string(solver_objective));
  return p;
}

// ---------------------------------------------------------------------------
// Serialization

inline nlohmann::json to_json(const NetworkPlan& p) {
  nlohmann::json j;
  j["mode"] = std::string(to_string(p.mode));
  j["donor"] = p.donor;
  j["iab_nodes"] = p.iab_nodes;
  j["ris_sites"] = p.ris_sites;
  j["assignments"] = nlohmann::json::array();
  const char* second = p.mode == PlanMode::ris ? "ris" : "backup";
  for (const auto& a : p.assignments)
    j["assignments"].push_back({{"serving", a.serving}, {second, a.secondary}});
  j["backhaul"] = nlohmann::json::array();
  j["flows"] = nlohmann::json::array();
  for (const auto& e : p.backhaul) {
    j["backhaul"].push_back({e.parent, e.child});
    j["flows"].push_back(e.flow);
  }
  j["orientations"] = nlohmann::json::object();
  for (const auto& [r, phi] : p.orientations) j["orientations"][std::to_string(r)] = phi;
  j["metrics"] = {{"total_cost", p.total_cost},
                  {"objective_value", p.objective_value},
                  {"wired_inflow", p.wired_inflow},
                  {"mean_theta", p.mean_theta()},
                  {"mean_len", p.mean_len()},
                  {"theta_per_tp", p.theta_per_tp},
                  {"len_per_tp", p.len_per_tp}};
  return j;
}

inline NetworkPlan plan_from_json(const nlohmann::json& j) {
  using detail::require;
  NetworkPlan p;
  try {
    p.mode = parse_mode(require(j, "mode").get<std::string>());
    p.donor = require(j, "donor").get<int>();
    p.iab_nodes = require(j, "iab_nodes").get<std::vector<int>>();
    p.ris_sites = require(j, "ris_sites").get<std::vector<int>>();
    const char* second = p.mode == PlanMode::ris ? "ris" : "backup";
    for (const auto& a : require(j, "assignments"))
      p.assignments.push_back({require(a, "serving").get<int>(), require(a, second).get<int>()});
    const auto& edges = require(j, "backhaul");
    const auto& flows = require(j, "flows");
    if (!edges.is_array() || !flows.is_array() || edges.size() != flows.size())
      throw FormatError("fields backhaul and flows must be arrays of equal length");
    for (std::size_t i = 0; i < edges.size(); ++i)
      p.backhaul.push_back({edges[i].at(0).get<int>(), edges[i].at(1).get<int>(),
                            flows[i].get<double>()});
    for (const auto& [k, v] : require(j, "orientations").items())
      p.orientations[std::stoi(k)] = v.get<double>();
    const auto& metrics = require(j, "metrics");
    p.total_cost = require(metrics, "total_cost").get<double>();
    p.objective_value = require(metrics, "objective_value").get<double>();
    p.wired_inflow = require(metrics, "wired_inflow").get<double>();
    p.theta_per_tp = require(metrics, "theta_per_tp").get<std::vector<double>>();
    p.len_per_tp = require(metrics, "len_per_tp").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed plan: ") + e.what());
  }
  return p;
}

}  // namespace ranplan

#endif  // RANPLAN_PLANNER_HPP
