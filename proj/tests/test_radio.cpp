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

#include <cmath>

#include "ranplan/radio.hpp"
#include "support/properties.hpp"

namespace ranplan {
namespace {

TEST(PathLoss, Examples) {
  const RadioConfig cfg;
  EXPECT_DOUBLE_EQ(path_loss_db(1.0, cfg), 61.4);
  EXPECT_DOUBLE_EQ(path_loss_db(10.0, cfg), 81.4);
  EXPECT_NEAR(path_loss_db(100.0, cfg) - path_loss_db(10.0, cfg), 20.0, 1e-12);
  EXPECT_THROW(path_loss_db(0.0, cfg), GeometryError);
  EXPECT_THROW(path_loss_db(-1.0, cfg), GeometryError);
}

TEST(DirectSnr, HandComputedValue) {
  RadioConfig cfg;  // 30 dBm, 64 elements, 61.4 + 20 log10 d, 400 MHz, NF 7
  // 30 + 18.06 - 101.4 - (-174 + 86.02 + 7)
  EXPECT_NEAR(direct_snr_db({0, 0}, {100, 0}, cfg), 27.64, 0.01);
  EXPECT_NEAR(direct_snr_db({0, 0}, {100, 0}, cfg),
              30.0 + 10 * std::log10(64.0) - 101.4 - (-174.0 + 10 * std::log10(400e6) + 7.0), 1e-12);
}

TEST(DirectSnr, LinearInTxPowerAndDistance) {
  RadioConfig a, b;
  b.tx_power_dbm = a.tx_power_dbm + 3.0;
  EXPECT_NEAR(direct_snr_db({0, 0}, {37, 12}, b) - direct_snr_db({0, 0}, {37, 12}, a), 3.0, 1e-12);
  EXPECT_NEAR(direct_snr_db({0, 0}, {40, 0}, a) - direct_snr_db({0, 0}, {80, 0}, a),
              20 * std::log10(2.0), 1e-12);
  EXPECT_NEAR(20 * std::log10(2.0), 6.02, 0.001);
  EXPECT_THROW(direct_snr_db({1, 1}, {1, 1}, a), GeometryError);
}

TEST(ReflectedSnr, SquareLawInElements) {
  RadioConfig a, b;
  a.ris_aperture_gain_db = 5.0;
  b.ris_aperture_gain_db = 5.0;
  b.ris_elements = 2 * a.ris_elements;
  const Point2D tp{0, 0}, cs{120, 30}, ris{60, 80};
  EXPECT_NEAR(reflected_snr_db(tp, cs, ris, b) - reflected_snr_db(tp, cs, ris, a),
              20 * std::log10(2.0), 1e-12);
}

TEST(ReflectedSnr, SymmetricInEndpoints) {
  const RadioConfig cfg;
  const Point2D tp{3, 7}, cs{150, 20}, ris{70, 90};
  EXPECT_NEAR(reflected_snr_db(tp, cs, ris, cfg), reflected_snr_db(cs, tp, ris, cfg), 1e-12);
  EXPECT_THROW(reflected_snr_db(tp, tp, ris, cfg), GeometryError);
}

TEST(ReflectedSnr, BelowDirectWhenRisGainBelowHopLoss) {
  // Reflected over two hops of length d versus direct at d: the RIS path is
  // weaker exactly when 20 log10 N + G_el < PL(d).
  int checked = 0;
  for (int n : {100, 1000, 10000})
    for (double gel : {-10.0, 0.0, 8.75})
      for (double d : {5.0, 20.0, 50.0, 100.0, 200.0, 400.0}) {
        RadioConfig cfg;
        cfg.ris_elements = n;
        cfg.ris_aperture_gain_db = gel;
        const double ris_gain = 20 * std::log10(static_cast<double>(n)) + gel;
        if (!(ris_gain < path_loss_db(d, cfg))) continue;
        const Point2D tp{0, 0}, ris{d, 0}, cs{d, d};  // |cs - ris| = d
        EXPECT_LT(reflected_snr_db(tp, cs, ris, cfg), direct_snr_db(tp, {d, 0}, cfg));
        ++checked;
      }
  EXPECT_GT(checked, 20);
  // Default config at desk-scale hop lengths.
  const RadioConfig cfg;
  for (double d = 50.0; d <= 400.0; d += 10.0)
    EXPECT_LT(reflected_snr_db({0, 0}, {d, d}, {d, 0}, cfg), direct_snr_db({0, 0}, {d, 0}, cfg));
}

TEST(RisApertureGain, DerivedFromSpacing) {
  RadioConfig cfg;
  const double dx = 0.5 / 100.0, lambda = kSpeedOfLight / 28e9;
  EXPECT_NEAR(ris_aperture_gain_db(cfg), 20 * std::log10(4 * kPi * dx * dx / (lambda * lambda)), 1e-12);
  EXPECT_NEAR(ris_aperture_gain_db(cfg), 8.75, 0.05);
  cfg.ris_side_m = 2.0;  // 2 cm spacing > lambda / 2
  EXPECT_THROW(cfg.validate(), ValidationError);
}

TEST(SnrToRate, TableBoundaries) {
  const RadioConfig cfg;
  const auto& t = cfg.mcs_table;
  EXPECT_EQ(snr_to_rate_mbps(t.front().min_snr_db - 0.01, cfg), 0.0);
  EXPECT_DOUBLE_EQ(snr_to_rate_mbps(t[5].min_snr_db, cfg), t[5].spectral_efficiency * 400.0);
  EXPECT_DOUBLE_EQ(snr_to_rate_mbps(t[5].min_snr_db - 1e-9, cfg), t[4].spectral_efficiency * 400.0);
  EXPECT_DOUBLE_EQ(snr_to_rate_mbps(100.0, cfg), 5.5547 * 400.0);
  EXPECT_EQ(t.size(), 15u);
  EXPECT_DOUBLE_EQ(t.front().spectral_efficiency, 0.1523);
}

TEST(RadioConfig, RejectsNonMonotoneTable) {
  RadioConfig cfg;
  cfg.mcs_table = {{0.0, 1.0}, {0.0, 2.0}};
  EXPECT_THROW(cfg.validate(), ValidationError);
  cfg.mcs_table = {{0.0, 2.0}, {1.0, 1.0}};
  EXPECT_THROW(cfg.validate(), ValidationError);
  cfg = RadioConfig{};
  cfg.bs_array_elements = 0;
  EXPECT_THROW(cfg.validate(), ValidationError);
}

Scenario saturated_scenario() {
  Scenario s;
  s.area_width = 30;
  s.area_height = 30;
  s.candidate_sites = {{5, 5}, {15, 5}, {10, 14}};
  s.test_points = {{10, 8}, {12, 11}};
  return s;
}

TEST(BuildLinkTables, SaturatedInstanceActivatesEverything) {
  const auto s = saturated_scenario();
  const RadioConfig cfg;
  const auto tab = build_link_tables(s, cfg);
  const double cap = 5.5547 * 400.0;
  for (int t = 0; t < 2; ++t)
    for (int c = 0; c < 3; ++c) {
      EXPECT_EQ(tab.delta_acc(t, c), 1);
      EXPECT_DOUBLE_EQ(tab.cap_acc(t, c), cap);
      for (int r = 0; r < 3; ++r) {
        if (r == c) continue;
        EXPECT_EQ(tab.delta_src(t, c, r), 1);
        EXPECT_DOUBLE_EQ(tab.cap_dir(t, c, r), cap);
        EXPECT_DOUBLE_EQ(tab.cap_ref(t, c, r), cap);
      }
    }
  for (int c = 0; c < 3; ++c)
    for (int d = 0; d < 3; ++d)
      if (c != d) {
        EXPECT_EQ(tab.delta_bh(c, d), 1);
        EXPECT_DOUBLE_EQ(tab.cap_bh(c, d), cap);
      }
}

TEST(BuildLinkTables, FixedObstacleMasksAccessAndSrc) {
  auto s = saturated_scenario();
  // Cuts TP 0 -> CS 0 only.
  s.fixed_obstacles.emplace_back(Point2D{6.0, 8.0}, Point2D{9.0, 4.0});
  ASSERT_TRUE(segments_intersect({s.test_points[0], s.candidate_sites[0]}, s.fixed_obstacles[0]));
  const auto tab = build_link_tables(s, RadioConfig{});
  EXPECT_EQ(tab.delta_acc(0, 0), 0);
  EXPECT_EQ(tab.cap_acc(0, 0), 0.0);
  for (int r = 1; r < 3; ++r) {
    EXPECT_EQ(tab.delta_src(0, 0, r), 0);
    EXPECT_EQ(tab.cap_dir(0, 0, r), 0.0);
    EXPECT_EQ(tab.cap_ref(0, 0, r), 0.0);
  }
  // CS 0 used as the RIS for TP 0 needs the same blocked leg.
  EXPECT_EQ(tab.delta_src(0, 1, 0), 0);
  EXPECT_EQ(tab.delta_src(0, 1, 2), 1);
}

TEST(BuildLinkTables, MatchesScalarOperations) {
  Scenario s;
  s.area_width = 400;
  s.area_height = 400;
  s.candidate_sites = {{20, 30}, {310, 290}};
  s.test_points = {{150, 60}};
  RadioConfig cfg;
  const auto tab = build_link_tables(s, cfg);
  const auto& tp = s.test_points[0];
  const auto& cs = s.candidate_sites;
  for (int c = 0; c < 2; ++c) {
    const double acc = snr_to_rate_mbps(direct_snr_db(tp, cs[c], cfg), cfg);
    EXPECT_EQ(tab.cap_acc(0, c), acc);
    EXPECT_EQ(tab.delta_acc(0, c), acc > 0 ? 1 : 0);
    EXPECT_EQ(tab.len(0, c), distance(tp, cs[c]));
    const int r = 1 - c;
    const double ref = snr_to_rate_mbps(reflected_snr_db(tp, cs[c], cs[r], cfg), cfg);
    EXPECT_EQ(tab.delta_src(0, c, r), acc > 0 && ref > 0 ? 1 : 0);
    EXPECT_EQ(tab.cap_ref(0, c, r), acc > 0 && ref > 0 ? ref : 0.0);
    EXPECT_EQ(tab.theta(0, c, r), angular_separation(tp, cs[c], cs[r]));
    EXPECT_EQ(tab.phi_a(r, 0), azimuth(cs[r], tp));
    EXPECT_EQ(tab.phi_b(r, c), azimuth(cs[r], cs[c]));
    const double bh = snr_to_rate_mbps(backhaul_snr_db(cs[c], cs[r], cfg), cfg);
    EXPECT_EQ(tab.cap_bh(c, r), bh);
    EXPECT_EQ(tab.delta_bh(c, r), tab.delta_bh(r, c));
  }
}

class RadioProperty : public ::testing::TestWithParam<std::string> {};

TEST_P(RadioProperty, Holds) {
  for (const auto& [name, prop] : testing::radio_properties()) {
    if (name != GetParam()) continue;
    const auto r = prop(1000, 20260202);
    EXPECT_GE(r.cases, 1000);
    EXPECT_EQ(r.failures, 0) << r.name << ": " << r.first_failure;
  }
}

INSTANTIATE_TEST_SUITE_P(Random, RadioProperty,
                         ::testing::Values("zero_capacity", "rate_monotone", "path_loss",
                                           "deterministic", "masking"));

}  // namespace
}  // namespace ranplan
