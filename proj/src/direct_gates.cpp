#include "ftlink/direct_gates.hpp"

#include <algorithm>
#include <cmath>

namespace ftlink {

std::string to_string(DirectMethod method) {
  return method == DirectMethod::transversal ? "transversal" : "lattice_surgery";
}

double idling_penalty(double bell_pairs, double r_bell, double p_idle, double lanes) {
  return p_idle * lanes * bell_pairs / r_bell;
}

double bell_pairs_per_gate(DirectMethod method, int distance) {
  const double L = distance;
  return method == DirectMethod::transversal ? L * L : L;
}

double direct_gate_rate(DirectMethod method, int distance, double lanes, double r_bell,
                        double round_time) {
  // Written so every operation is monotone in lanes, keeping the rounded
  // rate nondecreasing as lanes grow.
  const double L = distance;
  if (method == DirectMethod::transversal) {
    return 1.0 / (L * L / r_bell + round_time / lanes);
  }
  return std::min(lanes / (L * round_time), r_bell / (L * L));
}

std::optional<double> direct_gate_error(DirectMethod method, int distance, double lanes,
                                        double p_bell, double r_bell, const HardwareParams& hw,
                                        const SurfaceModel& model) {
  const double idle =
      idling_penalty(bell_pairs_per_gate(method, distance), r_bell, hw.p_idle, lanes);
  const double p_s = p_bell + idle;
  if (idle >= 1.0 || p_s >= model.seam_threshold || hw.p_physical >= model.bulk_threshold) {
    return std::nullopt;
  }
  return seam_logical_error(distance, hw.p_physical, p_s, model);
}

DirectGatePlan plan_direct_gate(DirectMethod method, const HardwareParams& hw,
                                const ModelConfig& config,
                                const std::optional<PreDistilledInput>& input) {
  hw.validate();
  const auto& surface = config.surface;
  DirectGatePlan best;
  best.method = method;
  best.pre_distilled = input.has_value();

  double p_bell = hw.p_bell;
  double r_bell = hw.r_bell;
  double memory = static_cast<double>(hw.memory);
  if (input) {
    p_bell = input->error;
    r_bell = input->rate;
    memory -= input->memory_used;
  }
  if (r_bell <= 0.0 || p_bell >= surface.seam_threshold) {
    return best;
  }

  for (int L = 3;; L += 2) {
    const double patch = static_cast<double>(patch_qubits(L, surface));
    if (patch > memory) {
      break;
    }
    const auto max_lanes = static_cast<std::int64_t>(std::floor(memory / patch));
    auto error_at = [&](std::int64_t lanes) {
      return direct_gate_error(method, L, static_cast<double>(lanes), p_bell, r_bell, hw, surface);
    };
    auto ok = [&](std::int64_t lanes) {
      const auto e = error_at(lanes);
      return e && *e <= hw.p_target;
    };
    if (!ok(1)) {
      continue;
    }
    // Error grows and rate grows with the lane count: take the largest
    // feasible one.
    std::int64_t lo = 1;
    std::int64_t hi = max_lanes;
    while (lo < hi) {
      const std::int64_t mid = lo + (hi - lo + 1) / 2;
      if (ok(mid)) {
        lo = mid;
      } else {
        hi = mid - 1;
      }
    }
    const double rate =
        direct_gate_rate(method, L, static_cast<double>(lo), r_bell, surface.round_time);
    if (!best.feasible || rate > best.rate) {
      best.feasible = true;
      best.distance = L;
      best.lanes = lo;
      best.rate = rate;
      best.seam_error = p_bell + idling_penalty(bell_pairs_per_gate(method, L), r_bell,
                                                hw.p_idle, static_cast<double>(lo));
      best.achieved_error = *error_at(lo);
    }
  }
  return best;
}

}  // namespace ftlink
