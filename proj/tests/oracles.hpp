#pragma once

// Independent reference implementations shared by the unit tests and the
// acceptance binary.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ftlink/codes.hpp"
#include "ftlink/model.hpp"
#include "ftlink/optimizer.hpp"
#include "ftlink/phys_distill.hpp"
#include "ftlink/pipeline.hpp"

namespace ftlink::test_oracles {

// Rate-optimal sequence at the default hardware point, r_bell = 1.
inline const std::string kFig3RateOptimal =
    "inject@3 | grow 3->5 | distill 5.1.3 | grow 5->15 | distill 5.1.3 | grow 15->25 | distill 6.4.2";
inline constexpr double kFig3RateOptimalValue = 0.02230018849584139;

struct Instance {
  HardwareParams hw;
  ModelConfig config;
  CodeRegistry registry;
  double lambda = 1.0;

  std::string describe() const {
    std::ostringstream out;
    out << "p_b=" << hw.p_physical << " p_bell=" << hw.p_bell << " M=" << hw.memory
        << " p_target=" << hw.p_target << " lambda=" << lambda << " codes=";
    for (const auto& c : registry.codes()) out << c.key() << ' ';
    return out.str();
  }
};

/// Small random instance: up to `max_codes` codes and a target distance of at
/// most `max_distance`. Returns nullopt when the draw overshoots the distance.
inline std::optional<Instance> random_instance(std::mt19937_64& rng, int max_codes,
                                               int max_distance) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto log_uniform = [&](double lo, double hi) { return lo * std::pow(hi / lo, u(rng)); };
  static const std::vector<CodeSpec> pool = {
      {2, 1, 2, ""}, {4, 2, 2, ""}, {6, 4, 2, ""}, {8, 6, 2, ""},  {10, 8, 2, ""},
      {5, 1, 3, ""}, {7, 1, 3, ""}, {8, 3, 3, ""}, {16, 6, 4, ""}, {12, 10, 2, ""}};
  Instance inst;
  inst.hw.p_physical = log_uniform(1e-4, 2e-3);
  inst.hw.p_bell = log_uniform(1e-3, 5e-2);
  inst.hw.p_target = log_uniform(1e-9, 1e-2);
  inst.hw.memory = static_cast<std::int64_t>(log_uniform(200, 20000));
  inst.lambda = log_uniform(1e-3, 10.0);
  inst.hw.r_bell = inst.lambda;
  if (target_distance(inst.hw.p_target, inst.hw.p_physical, inst.config.surface) > max_distance) {
    return std::nullopt;
  }
  std::vector<CodeSpec> shuffled = pool;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  const int count = 1 + static_cast<int>(u(rng) * max_codes) % max_codes;
  for (int i = 0; i < count; ++i) inst.registry.add(shuffled[i]);
  return inst;
}

struct BruteForceResult {
  bool feasible = false;
  double value = 0.0;
  std::string text;
  long sequences = 0;
};

/// Every grammatical sequence up to the depth limit, evaluated from scratch.
inline BruteForceResult brute_force(const HardwareParams& hw, const ModelConfig& config,
                                    const CodeRegistry& registry, const Objective& objective,
                                    const SearchOptions& options) {
  const int target = target_distance(hw.p_target, hw.p_physical, config.surface);
  const int start = config.injection.distance;
  BruteForceResult best;
  std::vector<StageSpec> path{StageSpec::inject(start)};

  auto evaluate = [&] {
    ++best.sequences;
    Sequence seq;
    try {
      seq = elaborate_sequence(path, hw, config);
    } catch (const std::exception&) {
      return;
    }
    for (const auto& s : seq.stages) {
      if (s.p_fail >= 1.0 || s.p_out >= 1.0) return;
    }
    if (seq.distance() != target || seq.p_out() > hw.p_target) return;
    const auto m = sequence_metrics(seq, hw);
    double value = 0.0;
    if (m.rate_cap > 0.0) {
      switch (objective.kind) {
        case ObjectiveKind::rate: value = m.encoding_rate * std::min(objective.lambda, m.rate_cap); break;
        case ObjectiveKind::encoding_rate: value = m.encoding_rate; break;
        case ObjectiveKind::capped_rate: value = m.encoding_rate * m.rate_cap; break;
      }
    }
    if (value <= 0.0) return;
    const std::string text = seq.str();
    if (!best.feasible || value > best.value || (value == best.value && text < best.text)) {
      best.feasible = true;
      best.value = value;
      best.text = text;
    }
  };

  auto recurse = [&](auto&& self) -> void {
    evaluate();
    if (static_cast<int>(path.size()) >= options.max_stages) return;
    const int distance = path.back().distance_out;
    const bool direct = options.growth == GrowthPolicy::direct_to_target;
    if (!direct || distance == target) {
      for (const auto& code : registry.codes()) {
        path.push_back(StageSpec::distill(code, distance));
        self(self);
        path.pop_back();
      }
    }
    for (int next = distance + 2; next <= target; next += 2) {
      if (direct && (path.size() != 1 || next != target)) continue;
      path.push_back(StageSpec::grow(distance, next));
      self(self);
      path.pop_back();
    }
  };
  recurse(recurse);
  return best;
}

// Pauli frame algebra for the 2 -> 1 parity check, by explicit conjugation.
// A two-qubit Pauli on (control, target) as x and z bits per qubit.
struct Pauli2 {
  int xc = 0, zc = 0, xt = 0, zt = 0;
};

inline Pauli2 conjugate_cnot(Pauli2 p) {
  // CNOT: X_c -> X_c X_t, Z_t -> Z_c Z_t.
  Pauli2 q = p;
  q.xt = p.xt ^ p.xc;
  q.zc = p.zc ^ p.zt;
  return q;
}

/// Outcome of the parity check for Bell-pair errors ea (kept) and eb
/// (measured), each an index x | z << 1 on one half of its pair. Both nodes
/// apply CNOT from the kept half to the measured half and measure the
/// measured halves in Z (z_check) or, after Hadamards on every qubit, the
/// same circuit checks the other parity (x_check). Returns {accepted, kept error}.
inline std::pair<bool, int> parity_oracle(int ea, int eb, CheckBasis basis) {
  auto xb = [](int e) { return e & 1; };
  auto zb = [](int e) { return (e >> 1) & 1; };
  int xa = xb(ea), za = zb(ea), xm = xb(eb), zm = zb(eb);
  if (basis == CheckBasis::x_check) {
    // Hadamard conjugation swaps the roles of X and Z.
    std::swap(xa, za);
    std::swap(xm, zm);
  }
  // The error sits on node A's halves; the CNOT on node B acts on error-free halves.
  const Pauli2 after = conjugate_cnot(Pauli2{xa, za, xm, zm});
  // Measuring both target halves in Z and comparing: the ideal outcomes agree,
  // an X on A's target half flips the comparison.
  const bool accepted = after.xt == 0;
  int kx = after.xc, kz = after.zc;
  if (basis == CheckBasis::x_check) std::swap(kx, kz);
  return {accepted, kx | (kz << 1)};
}

/// Reference parity check on distributions: sums the 16 error pairs.
inline ParityRoundResult parity_enumeration(const PauliMix& a, const PauliMix& b, CheckBasis basis) {
  ParityRoundResult r;
  r.out = {0, 0, 0, 0};
  double accepted = 0.0;
  for (int ea = 0; ea < 4; ++ea) {
    for (int eb = 0; eb < 4; ++eb) {
      const auto [ok, kept] = parity_oracle(ea, eb, basis);
      if (!ok) continue;
      const double w = a[ea] * b[eb];
      accepted += w;
      r.out[kept] += w;
    }
  }
  r.success = accepted;
  if (accepted > 0) {
    for (double& x : r.out) x /= accepted;
  }
  return r;
}

}  // namespace ftlink::test_oracles
