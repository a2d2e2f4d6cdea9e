#include "ftlink/phys_distill.hpp"

#include <cmath>
#include <stdexcept>

#include "ftlink/pipeline.hpp"

namespace ftlink {

PauliMix depolarizing(double p) { return {1.0 - p, p / 3.0, p / 3.0, p / 3.0}; }

PauliMix pure_pauli(int index) {
  if (index < 0 || index > 3) {
    throw std::out_of_range("Pauli index must be in 0..3");
  }
  PauliMix mix{};
  mix[index] = 1.0;
  return mix;
}

double total_error(const PauliMix& mix) { return mix[1] + mix[2] + mix[3]; }

PauliMix compose(const PauliMix& a, const PauliMix& b) {
  PauliMix out{};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      out[i ^ j] += a[i] * b[j];
    }
  }
  return out;
}

ParityRoundResult parity_check(const PauliMix& a, const PauliMix& b, CheckBasis basis) {
  ParityRoundResult result;
  result.out = {};
  double accepted = 0.0;
  for (int ea = 0; ea < 4; ++ea) {
    for (int eb = 0; eb < 4; ++eb) {
      const double w = a[ea] * b[eb];
      const int xa = ea & 1, za = ea >> 1;
      const int xb = eb & 1, zb = eb >> 1;
      int out = 0;
      if (basis == CheckBasis::z_check) {
        if (xa != xb) continue;
        out = xa | ((za ^ zb) << 1);
      } else {
        if (za != zb) continue;
        out = (xa ^ xb) | (za << 1);
      }
      result.out[out] += w;
      accepted += w;
    }
  }
  result.success = accepted;
  if (accepted > 0.0) {
    for (auto& v : result.out) v /= accepted;
  }
  return result;
}

ParityRoundResult parity_round(const PauliMix& in, double p_gate, double p_idle_eff,
                               CheckBasis basis) {
  const double p_circuit = -std::expm1(3.0 * std::log1p(-p_gate));
  const PauliMix noisy = compose(in, depolarizing(p_circuit));
  const PauliMix kept = compose(noisy, depolarizing(std::min(p_idle_eff, 0.75)));
  return parity_check(kept, noisy, basis);
}

PhysDistillStrategy evaluate_strategy(int rounds, double p_in, double p_gate, double p_idle,
                                      double r_in) {
  if (rounds < 0) {
    throw std::invalid_argument("rounds must be non-negative");
  }
  if (r_in <= 0.0) {
    throw std::invalid_argument("input rate must be positive");
  }
  PhysDistillStrategy s;
  s.rounds = rounds;
  s.input_rate = r_in;
  PauliMix mix = depolarizing(p_in);
  double rate = r_in;
  MetricsAccumulator acc;
  for (int i = 0; i < rounds; ++i) {
    const auto basis = i % 2 == 0 ? CheckBasis::z_check : CheckBasis::x_check;
    const auto res = parity_round(mix, p_gate, p_idle * 2.0 / rate, basis);
    Stage stage;
    stage.n = 2;
    stage.k = 1;
    stage.size = 1.0;
    stage.duration = kParityRoundTime;
    stage.p_fail = 1.0 - res.success;
    acc.push(stage);
    s.success.push_back(res.success);
    mix = res.out;
    rate *= res.success / 2.0;
  }
  s.output_rate = rate;
  s.output_error = total_error(mix);
  s.memory_used = acc.idle_memory + acc.active_memory * r_in;
  return s;
}

PhysDistillStrategy choose_strategy(double p_in, double p_gate, double p_idle, double r_bell,
                                    double memory_budget, double target, int max_rounds) {
  PhysDistillStrategy best;
  for (int rounds = 0; rounds <= max_rounds; ++rounds) {
    auto s = evaluate_strategy(rounds, p_in, p_gate, p_idle, r_bell);
    if (s.memory_used > memory_budget) {
      // Memory grows with the input rate; bisect for the largest rate that fits.
      double lo = 0.0;
      double hi = r_bell;
      for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= 0.0 ||
            evaluate_strategy(rounds, p_in, p_gate, p_idle, mid).memory_used <= memory_budget) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      if (lo <= 0.0) {
        continue;
      }
      s = evaluate_strategy(rounds, p_in, p_gate, p_idle, lo);
    }
    s.feasible = s.output_error <= target && s.memory_used <= memory_budget;
    if (s.feasible && (!best.feasible || s.output_rate > best.output_rate)) {
      best = s;
    }
  }
  return best;
}

}  // namespace ftlink
