#include "ftlink/platforms.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "json.hpp"

namespace ftlink {

using nlohmann::json;

double atom_bell_rate(double comm_qubits, const Interconnect& m) {
  if (comm_qubits < 1.0) {
    throw std::invalid_argument("at least one communication qubit is required");
  }
  return m.p_aa / (m.t_base_us + 16.0 / comm_qubits + 100.0 * m.p_aa / comm_qubits) * 1e6;
}

double atom_rate_asymptote(const Interconnect& m) {
  if (m.t_base_us <= 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  return m.p_aa / m.t_base_us * 1e6;
}

CommQubitResult required_comm_qubits(double rate_hz, const Interconnect& m) {
  if (!(rate_hz > 0.0)) {
    throw std::invalid_argument("target rate must be positive");
  }
  CommQubitResult r;
  r.asymptote_hz = atom_rate_asymptote(m);
  if (rate_hz >= r.asymptote_hz) {
    return r;
  }
  const double denom = m.p_aa * 1e6 / rate_hz - m.t_base_us;
  double n = std::ceil((16.0 + 100.0 * m.p_aa) / denom);
  if (!(n < 9e18)) {
    return r;
  }
  auto N = std::max<std::int64_t>(1, static_cast<std::int64_t>(n));
  // Guard the ceiling against rounding in either direction.
  while (atom_bell_rate(static_cast<double>(N), m) < rate_hz) ++N;
  while (N > 1 && atom_bell_rate(static_cast<double>(N - 1), m) >= rate_hz) --N;
  r.feasible = true;
  r.qubits = N;
  return r;
}

std::int64_t total_memory(std::int64_t logic_qubits, std::int64_t comm_qubits) {
  return logic_qubits + comm_qubits;
}

std::array<double, 2> PlatformValues::r_bell_range() const {
  return {distributed_gate_rate_hz[0] * local_gate_time_us * 1e-6,
          distributed_gate_rate_hz[1] * local_gate_time_us * 1e-6};
}

HardwareParams PlatformPreset::hardware(double p_target) const {
  HardwareParams hw;
  hw.p_physical = future_goal.local_gate_error;
  hw.p_bell = future_goal.distributed_gate_error;
  hw.p_idle = future_goal.idle_per_gate();
  hw.r_bell = std::sqrt(overlay_r_bell[0] * overlay_r_bell[1]);
  hw.memory = std::llround(std::sqrt(static_cast<double>(overlay_memory[0]) *
                                     static_cast<double>(overlay_memory[1])));
  hw.p_target = p_target;
  return hw;
}

bool PlatformPreset::future_no_worse() const {
  const auto& d = demonstrated;
  const auto& f = future_goal;
  return f.local_gate_error <= d.local_gate_error && f.local_gate_time_us <= d.local_gate_time_us &&
         f.distributed_gate_error <= d.distributed_gate_error &&
         f.distributed_gate_rate_hz[1] >= d.distributed_gate_rate_hz[1] &&
         f.idle_error_per_us <= d.idle_error_per_us && f.memory[1] >= d.memory[1];
}

const PlatformPreset* PlatformData::find_preset(const std::string& name) const {
  for (const auto& p : presets) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

const Interconnect* PlatformData::find_interconnect(const std::string& name) const {
  for (const auto& m : interconnects) {
    if (m.name == name) return &m;
  }
  return nullptr;
}

double PlatformData::checksum() const {
  double sum = 0.0;
  double weight = 1.0;
  auto add = [&](double v) {
    sum += weight * v;
    weight += 1.0;
  };
  auto add_values = [&](const PlatformValues& v) {
    add(v.local_gate_error);
    add(v.local_gate_time_us);
    add(v.distributed_gate_error);
    add(v.distributed_gate_rate_hz[0]);
    add(v.distributed_gate_rate_hz[1]);
    add(v.idle_error_per_us);
    add(static_cast<double>(v.memory[0]));
    add(static_cast<double>(v.memory[1]));
  };
  for (const auto& p : presets) {
    add_values(p.demonstrated);
    add_values(p.future_goal);
    add(static_cast<double>(p.overlay_memory[0]));
    add(static_cast<double>(p.overlay_memory[1]));
    add(p.overlay_r_bell[0]);
    add(p.overlay_r_bell[1]);
  }
  for (const auto& m : interconnects) {
    add(m.p_aa);
    add(m.t_base_us);
  }
  return sum;
}

std::string default_platforms_path() { return std::string(FTLINK_DATA_DIR) + "/platforms.json"; }

namespace {

PlatformValues parse_values(const json& j) {
  PlatformValues v;
  v.local_gate_error = j.at("local_gate_error").get<double>();
  v.local_gate_time_us = j.at("local_gate_time_us").get<double>();
  v.distributed_gate_error = j.at("distributed_gate_error").get<double>();
  v.distributed_gate_rate_hz = j.at("distributed_gate_rate_hz").get<std::array<double, 2>>();
  v.idle_error_per_us = j.at("idle_error_per_us").get<double>();
  v.memory = j.at("memory").get<std::array<std::int64_t, 2>>();
  return v;
}

}  // namespace

PlatformData load_platforms(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open platform data '" + path + "'");
  }
  PlatformData data;
  try {
    const json j = json::parse(in);
    data.schema_version = j.at("schema_version").get<int>();
    if (data.schema_version != 1) {
      throw std::runtime_error("unsupported schema_version " + std::to_string(data.schema_version));
    }
    for (const auto& p : j.at("presets")) {
      PlatformPreset preset;
      preset.name = p.at("name").get<std::string>();
      preset.label = p.at("label").get<std::string>();
      preset.demonstrated = parse_values(p.at("demonstrated"));
      preset.future_goal = parse_values(p.at("future_goal"));
      preset.overlay_memory = p.at("overlay").at("memory").get<std::array<std::int64_t, 2>>();
      preset.overlay_r_bell = p.at("overlay").at("r_bell").get<std::array<double, 2>>();
      data.presets.push_back(std::move(preset));
    }
    for (const auto& m : j.at("interconnects")) {
      data.interconnects.push_back({m.at("name").get<std::string>(), m.at("p_aa").get<double>(),
                                    m.at("t_base_us").get<double>()});
    }
  } catch (const json::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  return data;
}

}  // namespace ftlink
