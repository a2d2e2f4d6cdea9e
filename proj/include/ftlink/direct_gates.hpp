#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "ftlink/model.hpp"

namespace ftlink {

enum class DirectMethod { transversal, lattice_surgery };

std::string to_string(DirectMethod method);

/// Bell pairs that went through physical distillation before use.
struct PreDistilledInput {
  double rate = 0.0;         // pairs per physical-gate time
  double error = 0.0;
  double memory_used = 0.0;  // physical qubits taken from the budget
};

struct DirectGatePlan {
  DirectMethod method = DirectMethod::transversal;
  bool feasible = false;
  int distance = 0;
  std::int64_t lanes = 0;
  double seam_error = 0.0;      // p_s: Bell error plus idling
  double rate = 0.0;            // logical Bell pairs per physical-gate time
  double achieved_error = 0.0;
  bool pre_distilled = false;
};

/// Added error from Bell pairs idling while a lane collects its share:
/// p_idle * lanes * bell_pairs / r_bell.
double idling_penalty(double bell_pairs, double r_bell, double p_idle, double lanes);

/// Bell pairs one logical gate consumes: L^2 transversally, L per round for
/// lattice surgery.
double bell_pairs_per_gate(DirectMethod method, int distance);

/// Steady-state gate rate with `lanes` gates in flight.
double direct_gate_rate(DirectMethod method, int distance, double lanes, double r_bell,
                        double round_time);

/// Error of one lane configuration, or nullopt when idling or the seam noise
/// pushes it above threshold.
std::optional<double> direct_gate_error(DirectMethod method, int distance, double lanes,
                                        double p_bell, double r_bell, const HardwareParams& hw,
                                        const SurfaceModel& model);

/// Best (L, lanes) for a method. Ties on rate go to the smaller distance.
DirectGatePlan plan_direct_gate(DirectMethod method, const HardwareParams& hw,
                                const ModelConfig& config,
                                const std::optional<PreDistilledInput>& input = std::nullopt);

}  // namespace ftlink
