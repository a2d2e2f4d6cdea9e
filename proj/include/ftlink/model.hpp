#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace ftlink {

/// Raised when a noise parameter sits at or above its threshold, where the
/// surface-code error model has no exponential suppression.
class AboveThresholdError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// One point of the hardware landscape. Rates are in units of the physical
/// gate rate; `p_idle` is the idling error per physical-gate time.
struct HardwareParams {
  double p_physical = 1e-3;
  double p_bell = 1e-2;
  double r_bell = 1.0;
  double p_idle = 1e-6;
  std::int64_t memory = 10000;
  double p_target = 1e-12;

  void validate() const;
};

/// Surface-code constants. Thresholds and prefactors default to the values the
/// direct-gate seam model was fitted with; `round_time` is the number of
/// physical-gate times in one syndrome-extraction round.
struct SurfaceModel {
  double bulk_threshold = 0.0075;
  double seam_threshold = 0.104;
  double bulk_prefactor = 0.08;
  double seam_prefactor = 0.1543;
  double cross_prefactor = 0.0104;
  double alpha_c = 1.4;
  double round_time = 6.0;
  double patch_size_factor = 2.0;

  void validate() const;
};

/// Durations of the elementary operations, in physical-gate times.
struct TimeModel {
  double round_time = 6.0;
  double unencoding_layer_time = 1.0;
  // Unencoding layers run as lattice-surgery CNOTs (L rounds each) instead of
  // transversal gates.
  bool lattice_surgery_unencoding = false;

  double injection() const { return round_time; }
  double growing() const { return round_time; }
  double distillation(int depth, int distance) const;
  double transversal_gate() const { return round_time; }
  double lattice_surgery_gate(int distance) const { return distance * round_time; }

  void validate() const;
};

/// Injection of a physical Bell pair into a small patch. When `error` is unset
/// the injection error is modelled like one growing step out of `distance`.
struct InjectionModel {
  int distance = 3;
  std::optional<double> error;
  double fail = 0.0;

  void validate() const;
};

/// Everything the rate models need besides the hardware point.
struct ModelConfig {
  SurfaceModel surface;
  TimeModel time;
  InjectionModel injection;

  void validate() const;
};

double logical_gate_error(int distance, double p_b, const SurfaceModel& model);

/// The effective seam threshold p_1s* entering the mixed bulk/seam terms.
double seam_cross_threshold(double p_b, const SurfaceModel& model);

double seam_logical_error(int distance, double p_b, double p_s, const SurfaceModel& model);

double growing_error(int distance_start, double p_b, const SurfaceModel& model);

double injection_error(double p_b, const ModelConfig& config);

/// Smallest odd distance whose local logical error meets `p_target`.
int target_distance(double p_target, double p_b, const SurfaceModel& model);

std::int64_t patch_qubits(int distance, const SurfaceModel& model);

/// Throws std::invalid_argument unless `distance` is odd and at least 3.
void require_odd_distance(int distance);

double clamp_probability(double p);

}  // namespace ftlink
