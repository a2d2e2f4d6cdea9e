#include <gtest/gtest.h>

#include <cmath>

#include "ftlink/direct_gates.hpp"

namespace ftlink {
namespace {

struct ScanBest {
  bool feasible = false;
  int distance = 0;
  double rate = 0.0;
};

// Every (L, N) that fits, with the rate and idling formulas written out.
ScanBest exhaustive_scan(DirectMethod method, const HardwareParams& hw, const SurfaceModel& m,
                         double p_bell, double r_bell, double memory) {
  ScanBest best;
  const double rho = m.round_time;
  for (int L = 3; 2.0 * L * L <= memory; L += 2) {
    const double bell = method == DirectMethod::transversal ? double(L) * L : double(L);
    for (long n = 1; n * 2.0 * L * L <= memory; ++n) {
      const double p_s = p_bell + hw.p_idle * n * bell / r_bell;
      if (p_s >= m.seam_threshold) break;
      if (seam_logical_error(L, hw.p_physical, p_s, m) > hw.p_target) break;
      const double rate = method == DirectMethod::transversal
                              ? n / (n * double(L) * L / r_bell + rho)
                              : n / (L * std::max(rho, n * double(L) / r_bell));
      if (!best.feasible || rate > best.rate) {
        best = {true, L, rate};
      }
    }
  }
  return best;
}

HardwareParams fig3() {
  HardwareParams hw;
  hw.p_physical = 1e-3;
  hw.p_bell = 0.01;
  hw.p_idle = 1e-6;
  hw.memory = 10000;
  hw.p_target = 1e-12;
  hw.r_bell = 1.0;
  return hw;
}

TEST(DirectGates, IdlingPenaltyExamples) {
  EXPECT_NEAR(idling_penalty(625, 1.0, 1e-6, 1), 6.25e-4, 1e-18);
  EXPECT_EQ(idling_penalty(625, 1.0, 0.0, 3), 0.0);
  EXPECT_NEAR(idling_penalty(25, 0.01, 1e-6, 4), 1e-2, 1e-16);
  EXPECT_EQ(bell_pairs_per_gate(DirectMethod::transversal, 25), 625.0);
  EXPECT_EQ(bell_pairs_per_gate(DirectMethod::lattice_surgery, 25), 25.0);
}

TEST(DirectGates, RateFormulas) {
  EXPECT_NEAR(direct_gate_rate(DirectMethod::transversal, 5, 2, 1.0, 6), 2.0 / 56.0, 1e-15);
  EXPECT_NEAR(direct_gate_rate(DirectMethod::lattice_surgery, 5, 2, 1.0, 6), 2.0 / 50.0, 1e-15);
  EXPECT_NEAR(direct_gate_rate(DirectMethod::lattice_surgery, 5, 1, 10.0, 6), 1.0 / 30.0, 1e-15);
  // Each transversal gate eats L^2 pairs.
  for (double r : {1e-3, 0.1, 1.0, 100.0}) {
    for (int L : {3, 9, 25}) {
      for (double n : {1.0, 10.0, 1000.0}) {
        EXPECT_LE(direct_gate_rate(DirectMethod::transversal, L, n, r, 6), r / (L * L) * (1 + 1e-12));
        // Supply-bound lattice surgery runs at r / L^2, never below transversal.
        if (6 <= n * L / r) {
          EXPECT_NEAR(direct_gate_rate(DirectMethod::lattice_surgery, L, n, r, 6), r / (L * L),
                      1e-12 * r / (L * L));
          EXPECT_GE(direct_gate_rate(DirectMethod::lattice_surgery, L, n, r, 6),
                    direct_gate_rate(DirectMethod::transversal, L, n, r, 6));
        }
      }
    }
  }
  // Supply-limited transversal limit with no idling.
  EXPECT_NEAR(direct_gate_rate(DirectMethod::transversal, 7, 1e6, 1.0, 6), 1.0 / 49.0, 1e-8);
}

TEST(DirectGates, MatchesExhaustiveScan) {
  for (auto method : {DirectMethod::transversal, DirectMethod::lattice_surgery}) {
    for (double r : {1e-3, 3e-3, 0.01, 0.05, 0.2, 1.0, 10.0, 300.0}) {
      for (std::int64_t memory : {500, 3000, 10000, 40000}) {
        for (double p_bell : {0.001, 0.01, 0.03}) {
          auto hw = fig3();
          hw.r_bell = r;
          hw.memory = memory;
          hw.p_bell = p_bell;
          const ModelConfig config;
          const auto plan = plan_direct_gate(method, hw, config);
          const auto oracle = exhaustive_scan(method, hw, config.surface, p_bell, r, double(memory));
          ASSERT_EQ(plan.feasible, oracle.feasible) << to_string(method) << " r=" << r << " M=" << memory;
          if (!oracle.feasible) continue;
          EXPECT_NEAR(plan.rate, oracle.rate, 1e-14 * oracle.rate);
          EXPECT_EQ(plan.distance, oracle.distance);
          EXPECT_LE(plan.achieved_error, hw.p_target);
          EXPECT_GE(plan.lanes, 1);
          EXPECT_LE(plan.lanes * patch_qubits(plan.distance, config.surface), memory);
        }
      }
    }
  }
}

TEST(DirectGates, Fig3Point) {
  const auto hw = fig3();
  const ModelConfig config;
  const auto tv = plan_direct_gate(DirectMethod::transversal, hw, config);
  const auto ls = plan_direct_gate(DirectMethod::lattice_surgery, hw, config);
  ASSERT_TRUE(tv.feasible);
  ASSERT_TRUE(ls.feasible);
  // Frozen plans.
  EXPECT_EQ(tv.distance, 27);
  EXPECT_EQ(ls.distance, 27);
  auto fast = hw;
  fast.r_bell = 1e6;
  const auto tv_plateau = plan_direct_gate(DirectMethod::transversal, fast, config);
  const auto ls_plateau = plan_direct_gate(DirectMethod::lattice_surgery, fast, config);
  EXPECT_LT(ls_plateau.rate, tv_plateau.rate);
}

TEST(DirectGates, CutoffsOrdered) {
  const ModelConfig config;
  auto cutoff = [&](DirectMethod method) {
    double lo = 1e-8, hi = 1e3;
    for (int i = 0; i < 200; ++i) {
      const double mid = std::sqrt(lo * hi);
      auto hw = fig3();
      hw.r_bell = mid;
      (plan_direct_gate(method, hw, config).feasible ? hi : lo) = mid;
    }
    return hi;
  };
  EXPECT_LT(cutoff(DirectMethod::lattice_surgery), cutoff(DirectMethod::transversal));
}

TEST(DirectGates, FeasibilityAndDistanceMonotone) {
  const ModelConfig config;
  for (auto method : {DirectMethod::transversal, DirectMethod::lattice_surgery}) {
    for (std::int64_t memory : {2000, 10000, 50000}) {
      bool was_feasible = false;
      int previous_distance = 1 << 30;
      for (double r = 1e-5; r < 1e4; r *= 1.25) {
        auto hw = fig3();
        hw.memory = memory;
        hw.r_bell = r;
        const auto plan = plan_direct_gate(method, hw, config);
        if (was_feasible) EXPECT_TRUE(plan.feasible) << r;
        if (plan.feasible) {
          EXPECT_LE(plan.distance, previous_distance) << to_string(method) << " r=" << r;
          previous_distance = plan.distance;
        }
        was_feasible = plan.feasible;
      }
    }
    for (double r : {0.01, 1.0}) {
      bool was_feasible = false;
      for (std::int64_t memory = 100; memory < 200000; memory = memory * 5 / 4) {
        auto hw = fig3();
        hw.memory = memory;
        hw.r_bell = r;
        const bool feasible = plan_direct_gate(method, hw, config).feasible;
        if (was_feasible) EXPECT_TRUE(feasible);
        was_feasible = feasible;
      }
      was_feasible = false;
      for (double p_bell = 0.1; p_bell > 1e-4; p_bell /= 1.3) {
        auto hw = fig3();
        hw.r_bell = r;
        hw.p_bell = p_bell;
        const bool feasible = plan_direct_gate(method, hw, config).feasible;
        if (was_feasible) EXPECT_TRUE(feasible);
        was_feasible = feasible;
      }
      was_feasible = false;
      for (double p_idle = 1e-2; p_idle > 1e-10; p_idle /= 2) {
        auto hw = fig3();
        hw.r_bell = r;
        hw.p_idle = p_idle;
        const bool feasible = plan_direct_gate(method, hw, config).feasible;
        if (was_feasible) EXPECT_TRUE(feasible);
        was_feasible = feasible;
      }
    }
  }
}

TEST(DirectGates, PreDistilledInputReplacesSupply) {
  auto hw = fig3();
  hw.p_bell = 0.05;
  hw.p_target = 1e-6;
  const ModelConfig config;
  const PreDistilledInput input{0.3, 0.009, 2000.0};
  const auto plan = plan_direct_gate(DirectMethod::transversal, hw, config, input);
  ASSERT_TRUE(plan.feasible);
  EXPECT_TRUE(plan.pre_distilled);
  const auto oracle = exhaustive_scan(DirectMethod::transversal, hw, config.surface, 0.009, 0.3, 8000.0);
  EXPECT_NEAR(plan.rate, oracle.rate, 1e-14 * oracle.rate);
  EXPECT_EQ(plan.distance, oracle.distance);
  const PreDistilledInput hog{0.3, 0.009, 10000.0};
  EXPECT_FALSE(plan_direct_gate(DirectMethod::transversal, hw, config, hog).feasible);
}

TEST(DirectGates, ErrorRejectsAboveThreshold) {
  const auto hw = fig3();
  const SurfaceModel m;
  EXPECT_FALSE(direct_gate_error(DirectMethod::transversal, 5, 1, 0.2, 1.0, hw, m));
  EXPECT_FALSE(direct_gate_error(DirectMethod::transversal, 5, 1e9, 0.01, 1.0, hw, m));
  EXPECT_TRUE(direct_gate_error(DirectMethod::transversal, 5, 1, 0.01, 1.0, hw, m));
}

}  // namespace
}  // namespace ftlink
