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

// Deterministic mm-Wave link budgets and the precomputed parameter tables
// consumed by the planning models.
//
// Direct link (BS array gain at the transmitter, omni receiver):
//   SNR = P_tx + 10 log10(N_bs) - PL(d) - N_0
// RIS-reflected link (far-field, two hops multiply in linear scale):
//   SNR = P_tx + 10 log10(N_bs) + 20 log10(N_ris) + G_el
//         - PL(d_bs_ris) - PL(d_ris_tp) - N_0
// with PL(d) = a + 10 b log10(d), N_0 = -174 + 10 log10(W) + NF and G_el
// the per-element aperture gain 20 log10(4 pi dx dy / lambda^2) of a
// square surface of side `ris_side` split into sqrt(N_ris) x sqrt(N_ris)
// elements.

#ifndef RANPLAN_RADIO_HPP
#define RANPLAN_RADIO_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ranplan/geometry.hpp"
#include "ranplan/scenario.hpp"

namespace ranplan {

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kThermalNoiseDbmPerHz = -174.0;

struct McsEntry {
  double min_snr_db;
  double spectral_efficiency;  // bit/s/Hz
};

/// 15-entry NR CQI ladder (4-bit CQI table 1 efficiencies) with the usual
/// 10% BLER SNR switching points.
inline std::vector<McsEntry> nr_cqi_table() {
  return {{-6.7, 0.1523}, {-4.7, 0.2344}, {-2.3, 0.3770}, {0.2, 0.6016},
          {2.4, 0.8770},  {4.3, 1.1758},  {5.9, 1.4766},  {8.1, 1.9141},
          {10.3, 2.4063}, {11.7, 2.7305}, {14.1, 3.3223}, {16.3, 3.9023},
          {18.7, 4.5234}, {21.0, 5.1152}, {22.7, 5.5547}};
}

struct RadioConfig {
  double tx_power_dbm = 30.0;
  double carrier_freq_hz = 28e9;
  int bs_array_elements = 64;
  int ris_elements = 10000;
  double ris_side_m = 0.5;
  double bandwidth_hz = 400e6;
  double noise_figure_db = 7.0;
  double pathloss_intercept_db = 61.4;
  double pathloss_exponent = 2.0;
  // Overrides the element gain derived from ris_side/ris_elements.
  std::optional<double> ris_aperture_gain_db;
  std::vector<McsEntry> mcs_table = nr_cqi_table();

  double wavelength() const { return kSpeedOfLight / carrier_freq_hz; }
  double ris_element_spacing() const {
    return ris_side_m / std::sqrt(static_cast<double>(ris_elements));
  }

  void validate() const {
    auto finite = [](double v, const char* name) {
      if (!std::isfinite(v)) throw ValidationError(std::string(name) + " must be finite");
    };
    finite(tx_power_dbm, "tx_power");
    finite(noise_figure_db, "noise_figure");
    finite(pathloss_intercept_db, "pathloss_intercept");
    finite(pathloss_exponent, "pathloss_exponent");
    if (!(carrier_freq_hz > 0.0)) throw ValidationError("carrier_freq must be > 0");
    if (!(bandwidth_hz > 0.0)) throw ValidationError("bandwidth must be > 0");
    if (bs_array_elements < 1) throw ValidationError("bs_array_elements must be >= 1");
    if (ris_elements < 1) throw ValidationError("ris_elements must be >= 1");
    if (ris_aperture_gain_db) {
      finite(*ris_aperture_gain_db, "ris_aperture_gain");
    } else {
      if (!(ris_side_m > 0.0)) throw ValidationError("ris_side must be > 0");
      if (ris_element_spacing() > wavelength() / 2.0 * (1.0 + 1e-9))
        throw ValidationError("RIS element spacing exceeds half a wavelength");
    }
    if (mcs_table.empty()) throw ValidationError("mcs_table must not be empty");
    for (std::size_t i = 0; i < mcs_table.size(); ++i) {
      finite(mcs_table[i].min_snr_db, "mcs min_snr");
      if (!(mcs_table[i].spectral_efficiency > 0.0))
        throw ValidationError("mcs spectral efficiency must be > 0");
      if (i > 0 && !(mcs_table[i].min_snr_db > mcs_table[i - 1].min_snr_db &&
                     mcs_table[i].spectral_efficiency >
                         mcs_table[i - 1].spectral_efficiency))
        throw ValidationError("mcs_table must be strictly increasing");
    }
  }
};

inline double noise_power_dbm(const RadioConfig& cfg) {
  return kThermalNoiseDbmPerHz + 10.0 * std::log10(cfg.bandwidth_hz) +
         cfg.noise_figure_db;
}

inline double path_loss_db(double distance_m, const RadioConfig& cfg) {
  if (!(distance_m > 0.0)) throw GeometryError("path loss needs a positive distance");
  return cfg.pathloss_intercept_db +
         10.0 * cfg.pathloss_exponent * std::log10(distance_m);
}

inline double ris_aperture_gain_db(const RadioConfig& cfg) {
  if (cfg.ris_aperture_gain_db) return *cfg.ris_aperture_gain_db;
  const double d = cfg.ris_element_spacing();
  const double lambda = cfg.wavelength();
  return 20.0 * std::log10(4.0 * kPi * d * d / (lambda * lambda));
}

inline double bs_array_gain_db(const RadioConfig& cfg) {
  return 10.0 * std::log10(static_cast<double>(cfg.bs_array_elements));
}

inline double direct_snr_db(const Point2D& tp, const Point2D& cs,
                            const RadioConfig& cfg) {
  if (tp == cs) throw GeometryError("degenerate direction");
  return cfg.tx_power_dbm + bs_array_gain_db(cfg) - path_loss_db(distance(tp, cs), cfg) -
         noise_power_dbm(cfg);
}

/// BS-to-BS link: the array gain applies on both ends.
inline double backhaul_snr_db(const Point2D& c, const Point2D& d,
                              const RadioConfig& cfg) {
  return direct_snr_db(c, d, cfg) + bs_array_gain_db(cfg);
}

inline double reflected_snr_db(const Point2D& tp, const Point2D& cs,
                               const Point2D& ris, const RadioConfig& cfg) {
  if (tp == cs || tp == ris || cs == ris) throw GeometryError("degenerate direction");
  return cfg.tx_power_dbm + bs_array_gain_db(cfg) +
         20.0 * std::log10(static_cast<double>(cfg.ris_elements)) +
         ris_aperture_gain_db(cfg) - path_loss_db(distance(cs, ris), cfg) -
         path_loss_db(distance(ris, tp), cfg) - noise_power_dbm(cfg);
}

/// Rate of the highest MCS whose threshold is met, in Mbps; 0 below the table.
inline double snr_to_rate_mbps(double snr_db, const RadioConfig& cfg) {
  double eff = 0.0;
  for (const auto& m : cfg.mcs_table) {
    if (m.min_snr_db <= snr_db) eff = m.spectral_efficiency;
    else break;
  }
  return eff * cfg.bandwidth_hz / 1e6;
}

// ---------------------------------------------------------------------------
// Parameter tables

/// Dense row-major N-d array.
template <typename T, std::size_t Rank>
class DenseTable {
 public:
  DenseTable() = default;
  explicit DenseTable(std::array<int, Rank> dims, T init = T{}) : dims_(dims) {
    std::size_t n = 1;
    for (int d : dims) n *= static_cast<std::size_t>(d);
    data_.assign(n, init);
  }

  template <typename... I>
  T& operator()(I... idx) { return data_[offset({static_cast<int>(idx)...})]; }
  template <typename... I>
  const T& operator()(I... idx) const { return data_[offset({static_cast<int>(idx)...})]; }

  const std::array<int, Rank>& dims() const { return dims_; }
  const std::vector<T>& data() const { return data_; }

  friend bool operator==(const DenseTable&, const DenseTable&) = default;

 private:
  std::size_t offset(std::array<int, Rank> idx) const {
    std::size_t o = 0;
    for (std::size_t k = 0; k < Rank; ++k) o = o * dims_[k] + idx[k];
    return o;
  }

  std::array<int, Rank> dims_{};
  std::vector<T> data_;
};

/// Every radio parameter of the planning models for one scenario.
/// Activation flags are 0/1 bytes; capacities are Mbps and are zero wherever
/// the matching flag is zero.
struct LinkBudgetTable {
  int num_tp = 0;
  int num_cs = 0;
  DenseTable<unsigned char, 3> delta_src;  // [t][c][r]
  DenseTable<unsigned char, 2> delta_bh;   // [c][d], symmetric
  DenseTable<unsigned char, 2> delta_acc;  // [t][c]
  DenseTable<double, 3> cap_dir;           // [t][c][r]
  DenseTable<double, 3> cap_ref;           // [t][c][r]
  DenseTable<double, 2> cap_bh;            // [c][d]
  DenseTable<double, 2> cap_acc;           // [t][c]
  DenseTable<double, 3> theta;             // [t][c][r], angle between c and r seen from t
  DenseTable<double, 2> len;               // [t][c]
  DenseTable<double, 2> phi_a;             // [r][t], azimuth of t seen from r
  DenseTable<double, 2> phi_b;             // [r][c], azimuth of c seen from r

  friend bool operator==(const LinkBudgetTable&, const LinkBudgetTable&) = default;
};

inline bool line_of_sight(const Point2D& a, const Point2D& b,
                          const std::vector<Segment2D>& obstacles) {
  const Segment2D link(a, b);
  for (const auto& o : obstacles)
    if (segments_intersect(link, o)) return false;
  return true;
}

inline LinkBudgetTable build_link_tables(const Scenario& s, const RadioConfig& cfg) {
  s.validate();
  cfg.validate();
  const int T = s.num_test_points();
  const int C = s.num_sites();
  const auto& tp = s.test_points;
  const auto& cs = s.candidate_sites;
  const auto& obs = s.fixed_obstacles;

  LinkBudgetTable tab;
  tab.num_tp = T;
  tab.num_cs = C;
  tab.delta_src = DenseTable<unsigned char, 3>({T, C, C}, 0);
  tab.delta_bh = DenseTable<unsigned char, 2>({C, C}, 0);
  tab.delta_acc = DenseTable<unsigned char, 2>({T, C}, 0);
  tab.cap_dir = DenseTable<double, 3>({T, C, C}, 0.0);
  tab.cap_ref = DenseTable<double, 3>({T, C, C}, 0.0);
  tab.cap_bh = DenseTable<double, 2>({C, C}, 0.0);
  tab.cap_acc = DenseTable<double, 2>({T, C}, 0.0);
  tab.theta = DenseTable<double, 3>({T, C, C}, 0.0);
  tab.len = DenseTable<double, 2>({T, C}, 0.0);
  tab.phi_a = DenseTable<double, 2>({C, T}, 0.0);
  tab.phi_b = DenseTable<double, 2>({C, C}, 0.0);

  // LOS between sites, reused by backhaul and BS-RIS legs.
  DenseTable<unsigned char, 2> los_cs({C, C}, 0);
  for (int c = 0; c < C; ++c)
    for (int d = c + 1; d < C; ++d)
      los_cs(c, d) = los_cs(d, c) = line_of_sight(cs[c], cs[d], obs) ? 1 : 0;
  DenseTable<unsigned char, 2> los_tc({T, C}, 0);
  for (int t = 0; t < T; ++t)
    for (int c = 0; c < C; ++c) los_tc(t, c) = line_of_sight(tp[t], cs[c], obs) ? 1 : 0;

  for (int t = 0; t < T; ++t)
    for (int c = 0; c < C; ++c) {
      tab.len(t, c) = distance(tp[t], cs[c]);
      const double rate = snr_to_rate_mbps(direct_snr_db(tp[t], cs[c], cfg), cfg);
      if (rate > 0.0 && los_tc(t, c)) {
        tab.delta_acc(t, c) = 1;
        tab.cap_acc(t, c) = rate;
      }
    }

  for (int c = 0; c < C; ++c)
    for (int d = 0; d < C; ++d) {
      if (c == d) continue;
      const double fwd = snr_to_rate_mbps(backhaul_snr_db(cs[c], cs[d], cfg), cfg);
      const double rev = snr_to_rate_mbps(backhaul_snr_db(cs[d], cs[c], cfg), cfg);
      if (fwd > 0.0 && rev > 0.0 && los_cs(c, d)) {
        tab.delta_bh(c, d) = 1;
        tab.cap_bh(c, d) = fwd;
      }
    }

  for (int r = 0; r < C; ++r) {
    for (int t = 0; t < T; ++t) tab.phi_a(r, t) = azimuth(cs[r], tp[t]);
    for (int c = 0; c < C; ++c)
      if (c != r) tab.phi_b(r, c) = azimuth(cs[r], cs[c]);
  }

  for (int t = 0; t < T; ++t)
    for (int c = 0; c < C; ++c)
      for (int r = 0; r < C; ++r) {
        if (c == r) continue;
        tab.theta(t, c, r) = angular_separation(tp[t], cs[c], cs[r]);
        if (!tab.delta_acc(t, c) || !los_cs(c, r) || !los_tc(t, r)) continue;
        const double ref = snr_to_rate_mbps(reflected_snr_db(tp[t], cs[c], cs[r], cfg), cfg);
        if (ref > 0.0) {
          tab.delta_src(t, c, r) = 1;
          tab.cap_dir(t, c, r) = tab.cap_acc(t, c);
          tab.cap_ref(t, c, r) = ref;
        }
      }
  return tab;
}

}  // namespace ranplan

#endif  // RANPLAN_RADIO_HPP
