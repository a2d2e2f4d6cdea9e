#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ftlink/model.hpp"
#include "ftlink/pipeline.hpp"

namespace ftlink {

enum class Arrival { deterministic, poisson };

std::string to_string(Arrival arrival);
Arrival parse_arrival(const std::string& text);

struct SimOptions {
  double duration = 1e6;  // physical-gate times
  std::uint64_t seed = 1;
  Arrival arrival = Arrival::deterministic;
  double warmup_fraction = 0.1;
  int batches = 20;
};

struct StageCounts {
  std::int64_t starts = 0;
  std::int64_t successes = 0;
  double expected_success = 1.0;
};

struct SimReport {
  std::string prng = "mt19937_64";
  std::uint64_t seed = 0;
  std::string arrival;
  double duration = 0.0;
  double warmup = 0.0;
  double input_rate = 0.0;
  std::int64_t arrivals = 0;
  std::int64_t blocked_arrivals = 0;  // pairs not generated while the link waited for space
  std::int64_t outputs = 0;  // after warmup
  double rate = 0.0;
  double rate_se = 0.0;
  bool low_confidence = false;
  bool stalled = false;  // ended with moves waiting and no instance running
  double analytic_rate = 0.0;
  double mean_occupancy = 0.0;
  double peak_occupancy = 0.0;
  double analytic_occupancy = 0.0;
  std::int64_t instance_starts = 0;
  std::int64_t violations = 0;
  double violation_fraction = 0.0;
  std::vector<StageCounts> stages;

  /// Chi-square statistic of per-stage success counts against 1 - p_fail
  /// (stages with p_fail in (0, 1) only), and its degrees of freedom.
  double success_chi_square(int* dof = nullptr) const;
  std::string to_json(const std::string& scenario_json = "") const;
};

/// Event-driven run of the balanced pipeline: pairs arrive at
/// min(r_bell, C_S), instances start once n_i inputs wait at stage i, and
/// transfers that would overflow the memory wait, downstream stages served first.
SimReport simulate(const Sequence& seq, const HardwareParams& hw, const SimOptions& options);

}  // namespace ftlink
