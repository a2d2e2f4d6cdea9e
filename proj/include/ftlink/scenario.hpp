#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "ftlink/codes.hpp"
#include "ftlink/landscape.hpp"
#include "ftlink/mc_sim.hpp"
#include "ftlink/model.hpp"
#include "ftlink/optimizer.hpp"

namespace ftlink {

/// Malformed scenario; the message carries `origin:line:` when known.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SimulationSpec {
  double duration = 1e6;
  Arrival arrival = Arrival::deterministic;
  double warmup_fraction = 0.1;
  int batches = 20;
  std::string sequence;  // empty: use the rate-optimal sequence
};

struct OutputPaths {
  std::string csv;
  std::string json;
  std::string report;
};

struct Scenario {
  std::string name = "default";
  std::string platform;  // preset applied before "hardware" overrides
  HardwareParams hardware;
  ModelConfig model;
  std::string registry_path;  // empty: built-in registry
  GridSpec grid;
  LandscapeOptions landscape;  // landscape.search drives every search
  bool overlays = true;
  SimulationSpec simulation;
  OutputPaths output;
  std::uint64_t seed = 1;
  int jobs = 1;

  void validate() const;
  CodeRegistry registry() const;
  /// Fully resolved scenario as canonical JSON.
  std::string to_json() const;
};

Scenario parse_scenario(const std::string& text, const std::string& origin = "<scenario>");
Scenario load_scenario(const std::string& path);

std::string to_string(GrowthPolicy growth);
GrowthPolicy parse_growth(const std::string& text);

}  // namespace ftlink
