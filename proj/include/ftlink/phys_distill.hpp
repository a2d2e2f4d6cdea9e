#pragma once

#include <array>
#include <vector>

namespace ftlink {

/// Probabilities of the Pauli error on a Bell pair, indexed by x | (z << 1):
/// I, X, Z, Y.
using PauliMix = std::array<double, 4>;

PauliMix depolarizing(double p);
PauliMix pure_pauli(int index);
double total_error(const PauliMix& mix);

/// Distribution of the product of two independent Pauli errors.
PauliMix compose(const PauliMix& a, const PauliMix& b);

enum class CheckBasis { z_check, x_check };

struct ParityRoundResult {
  PauliMix out{};
  double success = 1.0;
};

/// Noiseless 2 -> 1 parity check on pairs a (kept) and b (measured). The
/// Z-check compares X-type parities, the X-check Z-type parities.
ParityRoundResult parity_check(const PauliMix& a, const PauliMix& b, CheckBasis basis);

/// One round on two copies of `in`: depolarizing noise 1 - (1 - p_gate)^3 on
/// both pairs, `p_idle_eff` on the kept pair (it waits for its partner),
/// then the check.
ParityRoundResult parity_round(const PauliMix& in, double p_gate, double p_idle_eff,
                               CheckBasis basis);

/// Physical-gate times per round: three gate layers plus measurement and compare.
inline constexpr double kParityRoundTime = 5.0;

struct PhysDistillStrategy {
  bool feasible = false;
  int rounds = 0;
  double input_rate = 0.0;
  double output_rate = 0.0;
  double output_error = 0.0;
  double memory_used = 0.0;
  std::vector<double> success;
};

/// Output of `rounds` alternating rounds (Z-check first) fed at `r_in`.
/// Memory follows the balanced-pipeline accounting with one qubit per pair half.
PhysDistillStrategy evaluate_strategy(int rounds, double p_in, double p_gate, double p_idle,
                                      double r_in);

/// Scans 0..max_rounds rounds and keeps the highest-rate strategy reaching
/// `target` within `memory_budget`, throttling the input rate when the
/// pipeline would not fit.
PhysDistillStrategy choose_strategy(double p_in, double p_gate, double p_idle, double r_bell,
                                    double memory_budget, double target = 0.01,
                                    int max_rounds = 3);

}  // namespace ftlink
