#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ftlink/model.hpp"

namespace ftlink {

/// Photonic interface of a neutral-atom node.
struct Interconnect {
  std::string name;
  double p_aa = 1.0;       // per-attempt success probability
  double t_base_us = 0.0;  // base attempt time
};

/// Bell pairs per second from N communication qubits.
double atom_bell_rate(double comm_qubits, const Interconnect& m);

/// Rate approached as N grows; infinite when t_base is zero.
double atom_rate_asymptote(const Interconnect& m);

struct CommQubitResult {
  bool feasible = false;
  std::int64_t qubits = 0;
  double asymptote_hz = 0.0;
};

/// Smallest N whose rate reaches `rate_hz`.
CommQubitResult required_comm_qubits(double rate_hz, const Interconnect& m);

std::int64_t total_memory(std::int64_t logic_qubits, std::int64_t comm_qubits);

struct PlatformValues {
  double local_gate_error = 0.0;
  double local_gate_time_us = 0.0;
  double distributed_gate_error = 0.0;
  std::array<double, 2> distributed_gate_rate_hz{};
  double idle_error_per_us = 0.0;
  std::array<std::int64_t, 2> memory{};

  /// Idling error per local gate time.
  double idle_per_gate() const { return idle_error_per_us * local_gate_time_us; }
  /// Distributed rate range in Bell pairs per local gate time.
  std::array<double, 2> r_bell_range() const;
};

struct PlatformPreset {
  std::string name;
  std::string label;
  PlatformValues demonstrated;
  PlatformValues future_goal;
  std::array<std::int64_t, 2> overlay_memory{};
  std::array<double, 2> overlay_r_bell{};

  /// Future-goal point; ranges collapse to their geometric mean.
  HardwareParams hardware(double p_target) const;
  bool future_no_worse() const;
};

struct PlatformData {
  int schema_version = 0;
  std::vector<PlatformPreset> presets;
  std::vector<Interconnect> interconnects;

  const PlatformPreset* find_preset(const std::string& name) const;
  const Interconnect* find_interconnect(const std::string& name) const;
  /// Order-sensitive sum over every numeric table entry, for pinning the data.
  double checksum() const;
};

std::string default_platforms_path();
PlatformData load_platforms(const std::string& path = default_platforms_path());

}  // namespace ftlink
