#pragma once

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ftlink/codes.hpp"
#include "ftlink/model.hpp"

namespace ftlink {

enum class StageKind { injection, growing, distillation };

/// Unresolved stage descriptor: what the stage does, not what it yields.
struct StageSpec {
  StageKind kind = StageKind::injection;
  int distance_in = 3;
  int distance_out = 3;
  std::optional<CodeSpec> code;

  static StageSpec inject(int distance);
  static StageSpec grow(int from, int to);
  static StageSpec distill(const CodeSpec& code, int distance);

  std::string str() const;
};

/// A stage with every quantity the balanced-pipeline formulas need.
struct Stage {
  StageSpec spec;
  int n = 1;
  int k = 1;
  double duration = 0.0;  // T_i
  double size = 0.0;      // s_i, physical qubits per logical qubit held
  double p_fail = 0.0;
  double p_out = 0.0;     // error of the stage's outputs
};

struct Sequence {
  std::vector<Stage> stages;

  double p_out() const { return stages.empty() ? 0.0 : stages.back().p_out; }
  int distance() const { return stages.empty() ? 0 : stages.back().spec.distance_out; }
  std::vector<StageSpec> specs() const;
  std::string str() const;
};

/// Resolves one stage given the error of its inputs.
Stage resolve_stage(const StageSpec& spec, double p_in, const HardwareParams& hw,
                    const ModelConfig& config);

/// Chains errors and durations through the stage list. Checks the grammar:
/// injection first, growing strictly increases distance, distillation keeps it.
Sequence elaborate_sequence(std::span<const StageSpec> specs, const HardwareParams& hw,
                            const ModelConfig& config);

/// True when the sequence ends at the target distance with error <= p_target.
bool meets_target(const Sequence& seq, const HardwareParams& hw, const ModelConfig& config);

struct SequenceMetrics {
  double encoding_rate = 1.0;  // E_S
  double multiplicity = 1.0;   // K_S
  double idle_memory = 0.0;    // M_idle_S
  double active_memory = 0.0;  // M_S, active qubits per unit input rate
  double p_out = 0.0;
  int distance = 0;
  double rate_cap = 0.0;       // C_S against the memory budget

  bool fits() const { return rate_cap > 0.0; }
};

/// Running sums for the balanced-pipeline aggregates; push stages in order.
struct MetricsAccumulator {
  double encoding_rate = 1.0;
  double multiplicity = 1.0;
  double idle_memory = 0.0;
  double active_memory = 0.0;

  void push(const Stage& stage);
};

/// C_S = (memory - M_idle_S) / M_S, zero when the idle inputs alone do not fit.
double rate_cap(double idle_memory, double active_memory, double memory);

SequenceMetrics metrics_from_stages(std::span<const Stage> stages, double memory);
SequenceMetrics sequence_metrics(const Sequence& seq, const HardwareParams& hw);

/// Logical Bell pairs per physical-gate time: E_S * min(r_bell, C_S).
double output_rate(const SequenceMetrics& metrics, double r_bell);

/// Text form, e.g. `inject@3 | distill 4.2.2 | grow 3->7 | distill 7.1.3`.
/// Distillation codes must exist in `registry` when one is given.
std::vector<StageSpec> parse_sequence(const std::string& text,
                                      const CodeRegistry* registry = nullptr);
std::string format_sequence(std::span<const StageSpec> specs);

}  // namespace ftlink
