#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ftlink/codes.hpp"
#include "ftlink/direct_gates.hpp"
#include "ftlink/model.hpp"
#include "ftlink/optimizer.hpp"
#include "ftlink/phys_distill.hpp"
#include "ftlink/platforms.hpp"
#include "ftlink/regions.hpp"

namespace ftlink {

enum class Method { distillation = 0, lattice_surgery = 1, transversal = 2 };

std::string to_string(Method method);

struct MethodResult {
  bool feasible = false;
  double rate = 0.0;  // per physical-gate time
  double achieved_error = 0.0;
  int distance = 0;
  std::int64_t lanes = 0;
  int pre_distill_rounds = 0;
  std::string plan;  // sequence text or direct-gate plan
};

struct LandscapeCell {
  std::int64_t memory = 0;
  double r_bell = 0.0;
  MethodResult distillation;
  MethodResult lattice_surgery;
  MethodResult transversal;
  std::optional<Method> best;
  double best_rate = 0.0;

  bool feasible() const { return best.has_value(); }
  const MethodResult& result(Method m) const;
};

struct LandscapeOptions {
  SearchOptions search;
  // Direct methods also try physically distilled pairs when p_bell exceeds this.
  double pre_distill_threshold = 0.01;
  double pre_distill_target = 0.01;
  int pre_distill_max_rounds = 3;
  // Pre-distillation input rates tried: r_bell * 2^(-j/2), j = 0..steps.
  int pre_distill_throttle_steps = 40;
};

/// Best direct-gate plan, with and without physical pre-distillation.
MethodResult evaluate_direct(DirectMethod method, const HardwareParams& hw,
                             const ModelConfig& config, const LandscapeOptions& options = {});

/// Exact distillation optimum at hw.r_bell, reusing a reduced search done at
/// the same memory (the full search only runs between C_S' and C_S'').
MethodResult evaluate_distillation(const ReducedSearchResult& reduced, const HardwareParams& hw,
                                   const ModelConfig& config, const CodeRegistry& registry,
                                   const LandscapeOptions& options = {});

LandscapeCell evaluate_point(const HardwareParams& hw, const ModelConfig& config,
                             const CodeRegistry& registry, const LandscapeOptions& options = {});

struct GridSpec {
  std::int64_t memory_min = 1000;
  std::int64_t memory_max = 100000;
  int memory_count = 12;
  double r_bell_min = 1e-3;
  double r_bell_max = 1e3;
  int r_bell_count = 12;

  void validate() const;
  std::vector<std::int64_t> memory_values() const;  // log-spaced, rounded
  std::vector<double> r_bell_values() const;         // log-spaced
};

struct SweepResult {
  std::vector<std::int64_t> memory;
  std::vector<double> r_bell;
  std::vector<LandscapeCell> cells;  // row-major, memory x r_bell
  int target_distance = 0;
  std::int64_t target_patch = 0;
  double round_time = 0.0;

  std::size_t index(std::size_t i_memory, std::size_t i_rate) const {
    return i_memory * r_bell.size() + i_rate;
  }
  const LandscapeCell& at(std::size_t i_memory, std::size_t i_rate) const {
    return cells[index(i_memory, i_rate)];
  }
  /// Best-method labels (-1 = infeasible), rows = memory, columns = r_bell.
  LabelGrid labels() const;
  std::size_t count(std::optional<Method> label) const;
};

/// Reference implementation: every row and cell in order.
SweepResult sweep_serial(const GridSpec& grid, const HardwareParams& base,
                         const ModelConfig& config, const CodeRegistry& registry,
                         const LandscapeOptions& options = {});

/// Same result as sweep_serial, with rows and cells spread over `jobs` threads.
SweepResult sweep_parallel(const GridSpec& grid, const HardwareParams& base,
                           const ModelConfig& config, const CodeRegistry& registry,
                           const LandscapeOptions& options = {}, int jobs = 0);

inline constexpr int kLandscapeSchemaVersion = 1;

/// One row per cell: memory_physical, memory_logical, r_bell, rate_distill,
/// rate_ls, rate_tv, best_method, best_rate_rlogical, feasible, plan_summary.
void write_landscape_csv(std::ostream& out, const SweepResult& sweep);

/// JSON sidecar: schema version, the resolved scenario, axes, regions,
/// contours and platform overlay boxes.
std::string landscape_sidecar(const SweepResult& sweep, const std::string& scenario_json,
                              const std::vector<PlatformPreset>& overlays);

}  // namespace ftlink
