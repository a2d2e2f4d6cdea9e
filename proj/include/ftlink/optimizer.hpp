#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ftlink/codes.hpp"
#include "ftlink/model.hpp"
#include "ftlink/pipeline.hpp"

namespace ftlink {

/// The parameters of a partial sequence that fully determine how any
/// extension performs, plus the distance (vectors are only comparable at
/// equal distance) and the stage count (for the depth limit).
struct DominanceVector {
  double idle_memory = 0.0;
  double active_memory = 0.0;
  double multiplicity = 1.0;
  double encoding_rate = 1.0;
  double p_out = 0.0;
  int distance = 0;
  int stages = 0;
};

/// a dominates b when a is at least as good in every component (higher E_S,
/// lower everything else) and strictly better in one. Throws
/// std::invalid_argument when the distances differ.
bool dominates(const DominanceVector& a, const DominanceVector& b);

enum class GrowthPolicy {
  // Grow to any larger odd distance up to the target, at any point.
  free,
  // Grow once, straight from the injection distance to the target, then
  // distil only at the target distance.
  direct_to_target,
};

/// Candidate next stages, in enumeration order: each registry code at the
/// current distance, then every growing step to a larger odd distance up to
/// `target`. An empty partial yields the injection stage only.
std::vector<StageSpec> enumerate_extensions(std::span<const StageSpec> partial,
                                            const CodeRegistry& registry, int target,
                                            const ModelConfig& config,
                                            GrowthPolicy growth = GrowthPolicy::free);

enum class ObjectiveKind { rate, encoding_rate, capped_rate };

struct Objective {
  ObjectiveKind kind = ObjectiveKind::rate;
  double lambda = 1.0;  // Bell-pair rate used by ObjectiveKind::rate

  static Objective rate(double lambda) { return {ObjectiveKind::rate, lambda}; }
  static Objective encoding_rate() { return {ObjectiveKind::encoding_rate, 0.0}; }
  static Objective capped_rate() { return {ObjectiveKind::capped_rate, 0.0}; }
};

/// Objective of a complete sequence; 0 when it does not fit in memory.
double objective_value(const Objective& objective, const SequenceMetrics& metrics);

struct SearchOptions {
  int max_stages = 8;  // injection included
  GrowthPolicy growth = GrowthPolicy::free;
  bool dominance_pruning = true;
  bool bound_pruning = true;
};

struct SearchStats {
  std::uint64_t nodes = 0;
  std::uint64_t pruned_dominance = 0;
  std::uint64_t pruned_bound = 0;
  std::uint64_t pruned_memory = 0;
  std::uint64_t complete = 0;
};

struct OptimizeResult {
  bool feasible = false;
  Sequence best;
  SequenceMetrics metrics;
  double value = 0.0;
  SearchStats stats;
};

/// Depth-first search over grow-and-distil sequences. Ties on the objective
/// go to the lexicographically smallest sequence string.
OptimizeResult dfs_optimize(const HardwareParams& hw, const ModelConfig& config,
                            const CodeRegistry& registry, const Objective& objective,
                            const SearchOptions& options = {});

struct RateEnvelope {
  double lower = 0.0;
  double upper = 0.0;
  bool exact = false;
};

/// The two extremal sequences S' (max E_S) and S'' (max E_S C_S) and the
/// rate envelope they imply for every Bell-pair rate.
struct ReducedSearchResult {
  bool feasible = false;
  OptimizeResult max_encoding;
  OptimizeResult max_capped;

  RateEnvelope envelope(double lambda) const;
};

ReducedSearchResult reduced_search(const HardwareParams& hw, const ModelConfig& config,
                                   const CodeRegistry& registry, const SearchOptions& options = {});

/// Candidate sequence with its memory-independent aggregates, so it can be
/// re-evaluated at any memory budget.
struct PooledSequence {
  std::string text;
  double encoding_rate = 0.0;
  double idle_memory = 0.0;
  double active_memory = 0.0;

  double rate(double memory, double lambda) const;
};

struct DistillationLandscape {
  std::vector<std::int64_t> memory;
  std::vector<double> lambda;
  // Row-major, memory x lambda. Rates are achieved by `best_sequence`.
  std::vector<double> rate;
  std::vector<double> upper_bound;
  std::vector<std::string> best_sequence;
  std::vector<PooledSequence> pool;

  std::size_t index(std::size_t i_memory, std::size_t i_lambda) const {
    return i_memory * lambda.size() + i_lambda;
  }
};

/// Reduced search at each memory value, then every sequence found at a
/// smaller memory is re-evaluated and the pointwise maximum kept. The
/// per-memory searches run in parallel when `jobs` > 1.
DistillationLandscape landscape_distillation(std::span<const std::int64_t> memory,
                                             std::span<const double> lambda,
                                             const HardwareParams& base, const ModelConfig& config,
                                             const CodeRegistry& registry,
                                             const SearchOptions& options = {}, int jobs = 1);

}  // namespace ftlink
