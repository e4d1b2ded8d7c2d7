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

// Exhaustive planner for tiny instances. Shares no code with the MILP
// builders: it enumerates IAB node sets with every rooted backhaul tree,
// RIS sets and per-TP assignments, derives flows from subtree demand and
// checks airtime and field of view arithmetically.
//
// Installing an IAB node outside the backhaul tree, or a RIS that serves
// no TP, never changes the objective, so only IAB sets that form a tree
// and budget-maximal RIS sets are visited. The first plan reaching the
// best objective in enumeration order wins (IAB set mask ascending, RIS
// combinations in lexicographic order, assignments in odometer order).

#ifndef RANPLAN_ORACLE_HPP
#define RANPLAN_ORACLE_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ranplan/planner.hpp"

namespace ranplan {

inline constexpr int kOracleMaxSites = 7;
inline constexpr int kOracleMaxTestPoints = 4;

/// circular: true circular field of view (validator geometry).
/// linear: the MILP's encoding, phi in [0, 2pi] with no wraparound.
enum class FovMode { circular, linear };

struct OracleResult {
  bool feasible = false;
  double objective = 0.0;
  NetworkPlan plan;
};

class OracleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline constexpr double kOracleSlack = 1e-9;

struct RootedTree {
  int donor;
  std::vector<int> parent;  // indexed by site, -1 for the donor and non-members
  std::vector<int> order;   // members, children before parents
};

/// All arborescences spanning `members` over backhaul-capable arcs.
inline std::vector<RootedTree> rooted_trees(const std::vector<int>& members,
                                            const LinkBudgetTable& tab) {
  std::vector<RootedTree> out;
  const int k = static_cast<int>(members.size());
  const int C = tab.num_cs;
  for (int root : members) {
    std::vector<int> others;
    for (int c : members)
      if (c != root) others.push_back(c);
    std::vector<std::vector<int>> options(others.size());
    bool possible = true;
    for (std::size_t i = 0; i < others.size(); ++i) {
      for (int p : members)
        if (p != others[i] && tab.delta_bh(p, others[i])) options[i].push_back(p);
      possible = possible && !options[i].empty();
    }
    if (!possible) continue;
    std::vector<std::size_t> pick(others.size(), 0);
    while (true) {
      RootedTree t{root, std::vector<int>(C, -1), {}};
      for (std::size_t i = 0; i < others.size(); ++i) t.parent[others[i]] = options[i][pick[i]];
      // Acyclic iff every member reaches the root within k steps.
      std::vector<int> depth(C, -1);
      depth[root] = 0;
      bool ok = true;
      for (int c : others) {
        int at = c, steps = 0;
        while (at != root && steps <= k) {
          at = t.parent[at];
          ++steps;
        }
        if (at != root) {
          ok = false;
          break;
        }
        depth[c] = steps;
      }
      if (ok) {
        t.order = members;
        std::sort(t.order.begin(), t.order.end(),
                  [&](int a, int b) { return depth[a] != depth[b] ? depth[a] > depth[b] : a < b; });
        out.push_back(std::move(t));
      }
      std::size_t i = 0;
      while (i < pick.size() && ++pick[i] == options[i].size()) pick[i++] = 0;
      if (i == pick.size()) break;
    }
  }
  return out;
}

/// Whether all azimuths fit one RIS orientation; sets `phi` when they do.
inline bool fov_feasible(std::vector<double> rays, double fov, FovMode mode, double& phi) {
  if (rays.empty()) {
    phi = 0.0;
    return true;
  }
  std::sort(rays.begin(), rays.end());
  if (mode == FovMode::linear) {
    phi = 0.5 * (rays.front() + rays.back());
    return rays.back() - rays.front() <= fov + kOracleSlack;
  }
  // Smallest covering arc: complement of the widest gap between neighbours.
  double best_gap = kTwoPi - (rays.back() - rays.front());
  std::size_t after = 0;  // index of the arc start
  for (std::size_t i = 1; i < rays.size(); ++i)
    if (rays[i] - rays[i - 1] > best_gap) {
      best_gap = rays[i] - rays[i - 1];
      after = i;
    }
  const double width = kTwoPi - best_gap;
  phi = normalize_angle(rays[after] + 0.5 * width);
  return width <= fov + kOracleSlack;
}

struct Option {
  int serving;
  int secondary;
  double theta;
  double len;
};

}  // namespace detail

inline OracleResult brute_force_plan(const Scenario& s, const LinkBudgetTable& tab,
                                     const PlanningConfig& cfg, PlanMode mode,
                                     FovMode fov_mode = FovMode::circular) {
  detail::check_dimensions(s, tab);
  cfg.validate();
  const int T = tab.num_tp, C = tab.num_cs;
  if (C > kOracleMaxSites || T > kOracleMaxTestPoints)
    throw OracleError("instance too large for oracle");
  const bool ris = mode == PlanMode::ris;
  const double D = cfg.demand;
  const double tn = resolved_theta_norm(cfg, s), ln = resolved_len_norm(cfg, s);
  const double slack = detail::kOracleSlack;

  OracleResult best;
  double best_obj = -kInf;

  for (unsigned mask = 1; mask < (1u << C); ++mask) {
    std::vector<int> W;
    for (int c = 0; c < C; ++c)
      if (mask & (1u << c)) W.push_back(c);
    const double iab_cost = cfg.price_iab * static_cast<double>(W.size());
    if (iab_cost > cfg.budget + slack) continue;
    if (!ris && W.size() < 2) continue;
    const auto trees = detail::rooted_trees(W, tab);
    if (trees.empty()) continue;

    std::vector<int> free_sites;
    for (int c = 0; c < C; ++c)
      if (!(mask & (1u << c))) free_sites.push_back(c);
    std::size_t n_ris = 0;
    if (ris) {
      if (cfg.price_ris <= 0.0) {
        n_ris = free_sites.size();
      } else {
        while (n_ris < free_sites.size() &&
               iab_cost + cfg.price_ris * static_cast<double>(n_ris + 1) <= cfg.budget + slack)
          ++n_ris;
      }
      if (n_ris == 0) continue;
    }

    // RIS combinations of size n_ris in lexicographic order (one empty set
    // in baseline mode).
    std::vector<std::size_t> comb(n_ris);
    for (std::size_t i = 0; i < n_ris; ++i) comb[i] = i;
    while (true) {
      std::vector<int> R;
      for (std::size_t i : comb) R.push_back(free_sites[i]);

      std::vector<std::vector<detail::Option>> options(T);
      bool coverable = true;
      for (int t = 0; t < T && coverable; ++t) {
        for (int c : W) {
          if (ris) {
            for (int r : R)
              if (tab.delta_src(t, c, r))
                options[t].push_back(
                    {c, r, tab.theta(t, c, r), 0.5 * (tab.len(t, c) + tab.len(t, r))});
          } else {
            for (int r : W)
              if (r != c && tab.delta_acc(t, c) && tab.delta_acc(t, r))
                options[t].push_back(
                    {c, r, tab.theta(t, c, r), 0.5 * (tab.len(t, c) + tab.len(t, r))});
          }
        }
        coverable = !options[t].empty();
      }

      if (coverable) {
        std::vector<std::size_t> pick(T, 0);
        while (true) {
          double st = 0.0, sl = 0.0;
          for (int t = 0; t < T; ++t) {
            st += options[t][pick[t]].theta;
            sl += options[t][pick[t]].len;
          }
          const double obj = cfg.mu * st / tn - (1.0 - cfg.mu) * sl / ln;
          if (obj > best_obj + 1e-12) {
            // Access-side loads.
            std::vector<double> demand(C, 0.0), tx(C, 0.0), ris_air(C, 0.0);
            std::vector<std::vector<double>> rays(C);
            for (int t = 0; t < T; ++t) {
              const auto& o = options[t][pick[t]];
              if (ris) {
                demand[o.serving] += D;
                tx[o.serving] += src_airtime(tab, cfg, t, o.serving, o.secondary);
                ris_air[o.secondary] += ris_airtime(tab, cfg, t, o.serving, o.secondary);
                rays[o.secondary].push_back(tab.phi_a(o.secondary, t));
                rays[o.secondary].push_back(tab.phi_b(o.secondary, o.serving));
              } else {
                demand[o.serving] += D;
                demand[o.secondary] += cfg.xi * D;
                tx[o.serving] += D / tab.cap_acc(t, o.serving);
                tx[o.secondary] += cfg.xi * D / tab.cap_acc(t, o.secondary);
              }
            }
            bool ok = true;
            std::map<int, double> orient;
            for (int r : R) {
              double phi = 0.0;
              ok = ok && ris_air[r] <= 1.0 + slack &&
                   detail::fov_feasible(rays[r], cfg.fov, fov_mode, phi);
              orient[r] = phi;
            }
            double total = 0.0;
            for (double d : demand) total += d;
            if (!ris) ok = ok && total <= resolved_wired_capacity(cfg, s) + slack;

            const detail::RootedTree* chosen = nullptr;
            std::vector<double> flow_in(C, 0.0);
            for (std::size_t k = 0; ok && k < trees.size() && !chosen; ++k) {
              const auto& tr = trees[k];
              std::vector<double> sub = demand, rx(C, 0.0), busy = tx;
              bool fits = true;
              for (int c : tr.order) {
                if (c == tr.donor) continue;
                const int p = tr.parent[c];
                const double cap = tab.cap_bh(p, c);
                if (sub[c] > cap + slack) {
                  fits = false;
                  break;
                }
                sub[p] += sub[c];
                rx[c] += sub[c] / cap;
                busy[p] += sub[c] / cap;
              }
              for (int c : W) fits = fits && rx[c] + busy[c] <= 1.0 + slack;
              if (fits) {
                chosen = &tr;
                for (int c : W)
                  if (c != tr.donor) flow_in[c] = sub[c];
              }
            }

            if (ok && chosen) {
              best_obj = obj;
              NetworkPlan p;
              p.mode = mode;
              p.donor = chosen->donor;
              p.iab_nodes = W;
              p.ris_sites = R;
              for (int t = 0; t < T; ++t)
                p.assignments.push_back({options[t][pick[t]].serving, options[t][pick[t]].secondary});
              for (int c : W)
                if (c != chosen->donor) p.backhaul.push_back({chosen->parent[c], c, flow_in[c]});
              std::sort(p.backhaul.begin(), p.backhaul.end(), [](const auto& a, const auto& b) {
                return std::pair(a.parent, a.child) < std::pair(b.parent, b.child);
              });
              p.wired_inflow = total;
              p.orientations = orient;
              finalize_plan(p, s, tab, cfg);
              best.feasible = true;
              best.objective = obj;
              best.plan = std::move(p);
            }
          }
          int t = 0;
          while (t < T && ++pick[t] == options[t].size()) pick[t++] = 0;
          if (t == T) break;
        }
      }

      // Next combination.
      if (n_ris == 0) break;
      std::size_t i = n_ris;
      while (i > 0 && comb[i - 1] == free_sites.size() - n_ris + (i - 1)) --i;
      if (i == 0) break;
      ++comb[i - 1];
      for (std::size_t j = i; j < n_ris; ++j) comb[j] = comb[j - 1] + 1;
    }
  }
  return best;
}

/// True when the MILP's linear orientation encoding and the circular field
/// of view disagree on this instance (verdict or optimum).
inline bool has_wraparound_discrepancy(const Scenario& s, const LinkBudgetTable& tab,
                                       const PlanningConfig& cfg, PlanMode mode) {
  if (mode != PlanMode::ris) return false;
  const auto circ = brute_force_plan(s, tab, cfg, mode, FovMode::circular);
  const auto lin = brute_force_plan(s, tab, cfg, mode, FovMode::linear);
  if (circ.feasible != lin.feasible) return true;
  return circ.feasible && !objectives_match(circ.objective, lin.objective);
}

}  // namespace ranplan

#endif  // RANPLAN_ORACLE_HPP
