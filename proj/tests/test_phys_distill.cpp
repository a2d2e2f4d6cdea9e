#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ftlink/distill_bounds.hpp"
#include "ftlink/phys_distill.hpp"
#include "oracles.hpp"

namespace ftlink {
namespace {

using test_oracles::parity_enumeration;
using test_oracles::parity_oracle;

void expect_mix_near(const PauliMix& a, const PauliMix& b, double tol) {
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(a[i], b[i], tol) << "component " << i;
}

TEST(PhysDistill, AllSixteenPauliCases) {
  for (auto basis : {CheckBasis::z_check, CheckBasis::x_check}) {
    for (int ea = 0; ea < 4; ++ea) {
      for (int eb = 0; eb < 4; ++eb) {
        const auto r = parity_check(pure_pauli(ea), pure_pauli(eb), basis);
        const auto [ok, kept] = parity_oracle(ea, eb, basis);
        EXPECT_EQ(r.success, ok ? 1.0 : 0.0) << ea << " " << eb;
        if (ok) EXPECT_EQ(r.out, pure_pauli(kept)) << ea << " " << eb;
      }
    }
  }
}

TEST(PhysDistill, RandomMixesMatchEnumeration) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    PauliMix a{}, b{};
    double sa = 0, sb = 0;
    for (int i = 0; i < 4; ++i) {
      a[i] = u(rng);
      b[i] = u(rng);
      sa += a[i];
      sb += b[i];
    }
    for (int i = 0; i < 4; ++i) {
      a[i] /= sa;
      b[i] /= sb;
    }
    for (auto basis : {CheckBasis::z_check, CheckBasis::x_check}) {
      const auto r = parity_check(a, b, basis);
      const auto o = parity_enumeration(a, b, basis);
      EXPECT_NEAR(r.success, o.success, 1e-15);
      expect_mix_near(r.out, o.out, 1e-15);
    }
  }
}

TEST(PhysDistill, NoiselessRound) {
  const auto r = parity_round(depolarizing(0.0), 0.0, 0.0, CheckBasis::z_check);
  EXPECT_EQ(r.success, 1.0);
  EXPECT_EQ(total_error(r.out), 0.0);
}

TEST(PhysDistill, FivePercentZCheckGolden) {
  const auto r = parity_round(depolarizing(0.05), 0.0, 0.0, CheckBasis::z_check);
  const auto o = parity_enumeration(depolarizing(0.05), depolarizing(0.05), CheckBasis::z_check);
  EXPECT_NEAR(r.success, o.success, 1e-15);
  expect_mix_near(r.out, o.out, 1e-15);
  EXPECT_NEAR(r.success, 0.9355555555555558, 1e-15);
  EXPECT_NEAR(r.out[1], 5.938242280285034e-4, 1e-17);
  EXPECT_NEAR(r.out[2], 0.03384798099762469, 1e-16);
  EXPECT_NEAR(r.out[3], 5.938242280285034e-4, 1e-17);
}

TEST(PhysDistill, ComposeIsXorConvolution) {
  const auto c = compose(pure_pauli(1), pure_pauli(2));
  EXPECT_EQ(c, pure_pauli(3));
  const auto d = compose(depolarizing(0.1), depolarizing(0.0));
  expect_mix_near(d, depolarizing(0.1), 1e-17);
  // Two depolarizing channels: 1 - p = (1 - 4p1/3)(1 - 4p2/3) scaled.
  const auto e = compose(depolarizing(0.03), depolarizing(0.06));
  const double p = 0.75 * (1 - (1 - 4 * 0.03 / 3) * (1 - 4 * 0.06 / 3));
  EXPECT_NEAR(total_error(e), p, 1e-15);
  EXPECT_THROW(pure_pauli(4), std::out_of_range);
}

// Two single-type rounds together detect what one scalar [[2,1,2]] stage
// detects. With gate noise the last round's undetected errors break the
// comparison, so it holds only for a noiseless circuit.
TEST(PhysDistill, NoiselessRoundsWithinScalarBound) {
  const CodeSpec parity{2, 1, 2, ""};
  for (double p : {0.001, 0.01, 0.03, 0.05, 0.1, 0.2}) {
    const auto two = evaluate_strategy(2, p, 0.0, 0.0, 1.0);
    const double q = effective_error(p, 0.0, parity);
    EXPECT_LE(two.output_error, stage_bounds_from_q(q, parity).p_out) << p;
    EXPECT_LE(two.output_error, q * q / ((1 - q) * (1 - q))) << p;
  }
}

TEST(PhysDistill, QuadraticSuppressionWithoutNoise) {
  for (double p : {1e-4, 1e-3, 1e-2}) {
    const double out = evaluate_strategy(2, p, 0.0, 0.0, 1.0).output_error;
    EXPECT_GT(out / (p * p), 0.5);
    EXPECT_LT(out / (p * p), 2.0);
  }
}

TEST(PhysDistill, CrossoverGolden) {
  auto gain = [](double p) { return evaluate_strategy(2, p, 0.0, 0.0, 1.0).output_error - p; };
  double lo = 0.05, hi = 0.74;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (gain(mid) < 0 ? lo : hi) = mid;
  }
  EXPECT_NEAR(lo, 0.5, 1e-9);
  for (double p = 0.001; p < 0.5; p += 0.01) EXPECT_LE(gain(p), 0.0) << p;
}

TEST(PhysDistill, ThroughputBookkeeping) {
  for (int rounds = 0; rounds <= 3; ++rounds) {
    const auto s = evaluate_strategy(rounds, 0.05, 1e-3, 1e-6, 0.7);
    EXPECT_LE(s.output_rate, 0.7 / std::pow(2.0, rounds) * (1 + 1e-15));
    double product = 0.7 / std::pow(2.0, rounds);
    for (double x : s.success) product *= x;
    EXPECT_NEAR(s.output_rate, product, 1e-15);
    if (rounds > 0) EXPECT_LT(s.output_rate, 0.7 / std::pow(2.0, rounds));
  }
  const auto clean = evaluate_strategy(2, 0.0, 0.0, 0.0, 0.7);
  EXPECT_EQ(clean.output_rate, 0.7 / 4);
}

TEST(PhysDistill, MemoryAccounting) {
  const double r = 0.4;
  const auto s = evaluate_strategy(2, 0.05, 1e-3, 1e-6, r);
  const double idle = 0.5 * 2 + 0.5 * 2;
  const double active = kParityRoundTime + kParityRoundTime * s.success[0] / 2;
  EXPECT_NEAR(s.memory_used, idle + active * r, 1e-12);
  EXPECT_EQ(evaluate_strategy(0, 0.05, 1e-3, 1e-6, r).memory_used, 0.0);
}

TEST(PhysDistill, ChooseStrategyExamples) {
  const auto two = choose_strategy(0.05, 1e-3, 1e-9, 1.0, 1e6);
  ASSERT_TRUE(two.feasible);
  EXPECT_EQ(two.rounds, 2);
  EXPECT_LE(two.output_error, 0.01);
  const auto none = choose_strategy(0.005, 1e-3, 1e-9, 1.0, 1e6);
  ASSERT_TRUE(none.feasible);
  EXPECT_EQ(none.rounds, 0);
  EXPECT_EQ(none.output_rate, 1.0);
  const auto swamped = choose_strategy(0.05, 1e-3, 1e-3, 0.01, 1e6);
  EXPECT_FALSE(swamped.feasible);
}

TEST(PhysDistill, ThrottlesToFitMemory) {
  const auto s = choose_strategy(0.05, 1e-3, 1e-7, 100.0, 50.0);
  ASSERT_TRUE(s.feasible);
  EXPECT_LE(s.memory_used, 50.0);
  EXPECT_LT(s.input_rate, 100.0);
  EXPECT_GT(s.memory_used, 49.0);
  EXPECT_FALSE(choose_strategy(0.05, 1e-3, 1e-7, 100.0, 1.0).feasible);
}

}  // namespace
}  // namespace ftlink
