#include "ftlink/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ftlink {

namespace {

constexpr int kMaxDistance = 100001;

void require(bool condition, const std::string& message) {
  if (!condition) {
    throw std::invalid_argument(message);
  }
}

bool is_probability(double p) { return p >= 0.0 && p < 1.0; }

double suppression(double p, double threshold, double exponent) {
  if (p == 0.0) {
    return 0.0;
  }
  return std::exp(exponent * std::log(p / threshold));
}

}  // namespace

void HardwareParams::validate() const {
  require(is_probability(p_physical), "p_physical must lie in [0, 1)");
  require(is_probability(p_bell), "p_bell must lie in [0, 1)");
  require(is_probability(p_idle), "p_idle must lie in [0, 1)");
  require(p_target > 0.0 && p_target <= 1.0, "p_target must lie in (0, 1]");
  require(r_bell > 0.0 && std::isfinite(r_bell), "r_bell must be positive");
  require(memory >= 1, "memory must be at least 1");
}

void SurfaceModel::validate() const {
  require(bulk_threshold > 0.0 && bulk_threshold < 1.0, "bulk_threshold must lie in (0, 1)");
  require(seam_threshold > 0.0 && seam_threshold < 1.0, "seam_threshold must lie in (0, 1)");
  require(bulk_prefactor > 0.0 && seam_prefactor > 0.0 && cross_prefactor > 0.0,
          "prefactors must be positive");
  require(alpha_c >= 0.0, "alpha_c must be non-negative");
  require(round_time >= 1.0, "round_time must be at least 1");
  require(patch_size_factor >= 1.0, "patch_size_factor must be at least 1");
}

double TimeModel::distillation(int depth, int distance) const {
  const double layer = lattice_surgery_unencoding ? unencoding_layer_time * distance * round_time
                                                  : unencoding_layer_time;
  return depth * layer + round_time;
}

void TimeModel::validate() const {
  require(round_time >= 1.0, "round_time must be at least 1");
  require(unencoding_layer_time >= 1.0, "unencoding_layer_time must be at least 1");
}

void InjectionModel::validate() const {
  require_odd_distance(distance);
  if (error) {
    require(is_probability(*error), "injection error must lie in [0, 1)");
  }
  require(is_probability(fail), "injection fail must lie in [0, 1)");
}

void ModelConfig::validate() const {
  surface.validate();
  time.validate();
  injection.validate();
  require(time.round_time == surface.round_time, "time.round_time must equal surface.round_time");
}

void require_odd_distance(int distance) {
  if (distance < 3 || distance % 2 == 0) {
    throw std::invalid_argument("distance must be odd and >= 3, got " + std::to_string(distance));
  }
}

double clamp_probability(double p) { return std::clamp(p, 0.0, 1.0); }

double logical_gate_error(int distance, double p_b, const SurfaceModel& model) {
  require_odd_distance(distance);
  if (p_b >= model.bulk_threshold) {
    throw AboveThresholdError("physical gate error " + std::to_string(p_b) +
                              " is at or above the bulk threshold");
  }
  return clamp_probability(model.bulk_prefactor *
                           suppression(p_b, model.bulk_threshold, 0.5 * distance));
}

double seam_cross_threshold(double p_b, const SurfaceModel& model) {
  if (p_b >= model.bulk_threshold) {
    throw AboveThresholdError("physical gate error is at or above the bulk threshold");
  }
  const double root_seam = std::sqrt(model.seam_threshold);
  const double factor =
      1.0 + model.alpha_c * p_b * root_seam / (1.0 - std::sqrt(p_b / model.bulk_threshold));
  return model.seam_threshold / (factor * factor);
}

double seam_logical_error(int distance, double p_b, double p_s, const SurfaceModel& model) {
  require_odd_distance(distance);
  if (p_s >= model.seam_threshold) {
    throw AboveThresholdError("seam error " + std::to_string(p_s) +
                              " is at or above the seam threshold");
  }
  const double bulk = logical_gate_error(distance, p_b, model);
  if (p_s == 0.0) {
    return bulk;
  }
  const double seam = model.seam_prefactor * suppression(p_s, model.seam_threshold, 0.5 * distance);
  double cross = 0.0;
  if (p_b > 0.0) {
    const double cross_threshold = seam_cross_threshold(p_b, model);
    const double log_seam = std::log(p_s / cross_threshold);
    const double log_bulk = std::log(p_b / model.bulk_threshold);
    for (int j = 1; j <= distance; ++j) {
      cross += std::exp(0.5 * j * log_seam + 0.5 * (distance - j) * log_bulk);
    }
  } else {
    // Only the j = L term survives; p_1s* collapses to p_s*.
    cross = suppression(p_s, model.seam_threshold, 0.5 * distance);
  }
  return clamp_probability(seam + bulk + model.cross_prefactor * cross);
}

double growing_error(int distance_start, double p_b, const SurfaceModel& model) {
  return clamp_probability(2.0 * logical_gate_error(distance_start, p_b, model));
}

double injection_error(double p_b, const ModelConfig& config) {
  if (config.injection.error) {
    return *config.injection.error;
  }
  return growing_error(config.injection.distance, p_b, config.surface);
}

int target_distance(double p_target, double p_b, const SurfaceModel& model) {
  if (!(p_target > 0.0)) {
    throw std::invalid_argument("p_target must be positive");
  }
  for (int distance = 3; distance <= kMaxDistance; distance += 2) {
    if (logical_gate_error(distance, p_b, model) <= p_target) {
      return distance;
    }
  }
  throw std::invalid_argument("no distance below the search cap reaches p_target");
}

std::int64_t patch_qubits(int distance, const SurfaceModel& model) {
  require_odd_distance(distance);
  return std::llround(model.patch_size_factor * distance * distance);
}

}  // namespace ftlink
