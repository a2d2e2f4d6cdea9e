#include "ftlink/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace ftlink {

bool dominates(const DominanceVector& a, const DominanceVector& b) {
  if (a.distance != b.distance) {
    throw std::invalid_argument("dominance is only defined between equal distances");
  }
  const bool no_worse = a.encoding_rate >= b.encoding_rate && a.p_out <= b.p_out &&
                        a.idle_memory <= b.idle_memory && a.active_memory <= b.active_memory &&
                        a.multiplicity <= b.multiplicity;
  const bool strictly_better = a.encoding_rate > b.encoding_rate || a.p_out < b.p_out ||
                               a.idle_memory < b.idle_memory ||
                               a.active_memory < b.active_memory || a.multiplicity < b.multiplicity;
  return no_worse && strictly_better;
}

std::vector<StageSpec> enumerate_extensions(std::span<const StageSpec> partial,
                                            const CodeRegistry& registry, int target,
                                            const ModelConfig& config, GrowthPolicy growth) {
  std::vector<StageSpec> out;
  if (partial.empty()) {
    out.push_back(StageSpec::inject(config.injection.distance));
    return out;
  }
  const int distance = partial.back().distance_out;
  const bool just_injected = partial.back().kind == StageKind::injection;
  const bool may_distil = growth == GrowthPolicy::free || distance == target;
  if (may_distil) {
    for (const auto& code : registry.codes()) {
      out.push_back(StageSpec::distill(code, distance));
    }
  }
  if (growth == GrowthPolicy::free) {
    for (int next = distance + 2; next <= target; next += 2) {
      out.push_back(StageSpec::grow(distance, next));
    }
  } else if (just_injected && distance < target) {
    out.push_back(StageSpec::grow(distance, target));
  }
  return out;
}

double objective_value(const Objective& objective, const SequenceMetrics& metrics) {
  if (!metrics.fits()) {
    return 0.0;
  }
  switch (objective.kind) {
    case ObjectiveKind::rate:
      return metrics.encoding_rate * std::min(objective.lambda, metrics.rate_cap);
    case ObjectiveKind::encoding_rate:
      return metrics.encoding_rate;
    case ObjectiveKind::capped_rate:
      return metrics.encoding_rate * metrics.rate_cap;
  }
  return 0.0;
}

namespace {

// Pareto frontier per distance. A stored vector prunes a candidate only when
// it has no more stages, so the depth limit cannot make pruning unsound.
class Frontier {
 public:
  bool dominated(const DominanceVector& v) const {
    auto it = by_distance_.find(v.distance);
    if (it == by_distance_.end()) {
      return false;
    }
    for (const auto& member : it->second) {
      if (member.stages <= v.stages && dominates(member, v)) {
        return true;
      }
    }
    return false;
  }

  void insert(const DominanceVector& v) {
    auto& members = by_distance_[v.distance];
    std::erase_if(members, [&](const DominanceVector& m) {
      return v.stages <= m.stages && dominates(v, m);
    });
    members.push_back(v);
  }

 private:
  std::map<int, std::vector<DominanceVector>> by_distance_;
};

class Search {
 public:
  Search(const HardwareParams& hw, const ModelConfig& config, const CodeRegistry& registry,
         const Objective& objective, const SearchOptions& options)
      : hw_(hw),
        config_(config),
        registry_(registry),
        objective_(objective),
        options_(options),
        memory_(static_cast<double>(hw.memory)),
        target_(target_distance(hw.p_target, hw.p_physical, config.surface)),
        target_patch_(static_cast<double>(patch_qubits(target_, config.surface))) {
    min_block_ = registry.empty() ? 0 : registry.codes().front().n;
    for (const auto& code : registry.codes()) {
      min_block_ = std::min(min_block_, code.n);
    }
    // Growing into the target adds at least the error of growing out of the
    // largest smaller distance; past p_target a final distillation is forced.
    final_growth_needs_distill_ =
        target_ - 2 >= 3 &&
        growing_error(target_ - 2, hw.p_physical, config.surface) > hw.p_target;
  }

  OptimizeResult run() {
    path_.clear();
    const auto root = enumerate_extensions({}, registry_, target_, config_, options_.growth);
    for (const auto& spec : root) {
      descend(spec, 0.0, MetricsAccumulator{});
    }
    if (result_.feasible) {
      result_.best = elaborate_sequence(best_specs_, hw_, config_);
      result_.metrics = sequence_metrics(result_.best, hw_);
    }
    return std::move(result_);
  }

 private:
  // Idle memory any completion must still add, per unit of multiplicity.
  double completion_idle(int distance, double p_out) const {
    double idle = 0.0;
    bool distill_needed = false;
    if (distance < target_) {
      idle += 0.5 * target_patch_;
      distill_needed = final_growth_needs_distill_;
    } else {
      distill_needed = p_out > hw_.p_target;
    }
    if (distill_needed) {
      if (min_block_ == 0) {
        return std::numeric_limits<double>::infinity();
      }
      idle += 0.5 * min_block_ * target_patch_;
    }
    return idle;
  }

  void descend(const StageSpec& spec, double p_in, MetricsAccumulator acc) {
    {
      const int n = spec.kind == StageKind::distillation ? spec.code->n : 1;
      const double size = static_cast<double>(patch_qubits(spec.distance_out, config_.surface));
      if (acc.idle_memory + 0.5 * n * size * acc.multiplicity >= memory_) {
        ++result_.stats.nodes;
        ++result_.stats.pruned_memory;
        return;
      }
    }
    const Stage stage = resolve_stage(spec, p_in, hw_, config_);
    if (stage.p_fail >= 1.0 || stage.p_out >= 1.0) {
      return;
    }
    acc.push(stage);
    path_.push_back(spec);
    visit(stage, acc);
    path_.pop_back();
  }

  void visit(const Stage& last, const MetricsAccumulator& acc) {
    auto& stats = result_.stats;
    ++stats.nodes;
    const int distance = last.spec.distance_out;
    const int stage_count = static_cast<int>(path_.size());

    const double idle_floor =
        acc.idle_memory + acc.multiplicity * completion_idle(distance, last.p_out);
    if (idle_floor >= memory_) {
      ++stats.pruned_memory;
      return;
    }
    SequenceMetrics prefix;
    prefix.encoding_rate = acc.encoding_rate;
    prefix.multiplicity = acc.multiplicity;
    prefix.idle_memory = acc.idle_memory;
    prefix.active_memory = acc.active_memory;
    prefix.p_out = last.p_out;
    prefix.distance = distance;
    prefix.rate_cap = rate_cap(acc.idle_memory, acc.active_memory, memory_);

    // Extensions only lower E_S and C_S, so the prefix value, with the idle
    // memory every completion still needs, bounds the subtree.
    SequenceMetrics bound = prefix;
    bound.rate_cap = rate_cap(idle_floor, acc.active_memory, memory_);
    if (options_.bound_pruning && result_.feasible &&
        objective_value(objective_, bound) < result_.value) {
      ++stats.pruned_bound;
      return;
    }
    const DominanceVector vec{acc.idle_memory, acc.active_memory, acc.multiplicity,
                              acc.encoding_rate, last.p_out,        distance,
                              stage_count};
    if (options_.dominance_pruning) {
      if (frontier_.dominated(vec)) {
        ++stats.pruned_dominance;
        return;
      }
      frontier_.insert(vec);
    }

    if (distance == target_ && last.p_out <= hw_.p_target) {
      ++stats.complete;
      consider(prefix);
    }
    if (stage_count >= options_.max_stages) {
      return;
    }
    const auto children = enumerate_extensions(path_, registry_, target_, config_, options_.growth);
    for (const auto& child : children) {
      descend(child, last.p_out, acc);
    }
  }

  void consider(const SequenceMetrics& metrics) {
    const double value = objective_value(objective_, metrics);
    if (value <= 0.0) {
      return;
    }
    if (!result_.feasible || value > result_.value) {
      accept(value);
    } else if (value == result_.value) {
      if (format_sequence(path_) < format_sequence(best_specs_)) {
        accept(value);
      }
    }
  }

  void accept(double value) {
    result_.feasible = true;
    result_.value = value;
    best_specs_ = path_;
  }

  const HardwareParams& hw_;
  const ModelConfig& config_;
  const CodeRegistry& registry_;
  Objective objective_;
  SearchOptions options_;
  double memory_;
  int target_;
  double target_patch_;
  int min_block_ = 0;
  bool final_growth_needs_distill_ = false;

  std::vector<StageSpec> path_;
  std::vector<StageSpec> best_specs_;
  Frontier frontier_;
  OptimizeResult result_;
};

}  // namespace

OptimizeResult dfs_optimize(const HardwareParams& hw, const ModelConfig& config,
                            const CodeRegistry& registry, const Objective& objective,
                            const SearchOptions& options) {
  hw.validate();
  if (options.max_stages < 1) {
    throw std::invalid_argument("max_stages must be at least 1");
  }
  return Search(hw, config, registry, objective, options).run();
}

RateEnvelope ReducedSearchResult::envelope(double lambda) const {
  RateEnvelope env;
  if (!feasible) {
    env.exact = true;
    return env;
  }
  const auto& enc = max_encoding.metrics;
  const auto& cap = max_capped.metrics;
  if (lambda <= enc.rate_cap) {
    env.lower = env.upper = enc.encoding_rate * lambda;
    env.exact = true;
  } else if (lambda >= cap.rate_cap) {
    env.lower = env.upper = cap.encoding_rate * cap.rate_cap;
    env.exact = true;
  } else {
    env.lower = std::max(enc.encoding_rate * enc.rate_cap, cap.encoding_rate * lambda);
    env.upper = std::min(enc.encoding_rate * lambda, cap.encoding_rate * cap.rate_cap);
  }
  return env;
}

ReducedSearchResult reduced_search(const HardwareParams& hw, const ModelConfig& config,
                                   const CodeRegistry& registry, const SearchOptions& options) {
  ReducedSearchResult result;
  result.max_encoding = dfs_optimize(hw, config, registry, Objective::encoding_rate(), options);
  result.max_capped = dfs_optimize(hw, config, registry, Objective::capped_rate(), options);
  result.feasible = result.max_encoding.feasible && result.max_capped.feasible;
  return result;
}

double PooledSequence::rate(double memory, double lambda) const {
  const double cap = rate_cap(idle_memory, active_memory, memory);
  if (cap <= 0.0) {
    return 0.0;
  }
  return encoding_rate * std::min(lambda, cap);
}

DistillationLandscape landscape_distillation(std::span<const std::int64_t> memory,
                                             std::span<const double> lambda,
                                             const HardwareParams& base, const ModelConfig& config,
                                             const CodeRegistry& registry,
                                             const SearchOptions& options, int jobs) {
  if (!std::is_sorted(memory.begin(), memory.end()) ||
      !std::is_sorted(lambda.begin(), lambda.end())) {
    throw std::invalid_argument("landscape grids must be sorted ascending");
  }
  const auto rows = static_cast<std::ptrdiff_t>(memory.size());
  std::vector<ReducedSearchResult> searches(memory.size());

#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, jobs)) if (jobs > 1)
  for (std::ptrdiff_t i = 0; i < rows; ++i) {
    HardwareParams hw = base;
    hw.memory = memory[i];
    searches[i] = reduced_search(hw, config, registry, options);
  }

  DistillationLandscape out;
  out.memory.assign(memory.begin(), memory.end());
  out.lambda.assign(lambda.begin(), lambda.end());
  out.rate.assign(memory.size() * lambda.size(), 0.0);
  out.upper_bound.assign(memory.size() * lambda.size(), 0.0);
  out.best_sequence.assign(memory.size() * lambda.size(), "");

  auto add_to_pool = [&](const OptimizeResult& r) {
    if (!r.feasible) {
      return;
    }
    const std::string text = r.best.str();
    for (const auto& p : out.pool) {
      if (p.text == text) {
        return;
      }
    }
    out.pool.push_back({text, r.metrics.encoding_rate, r.metrics.idle_memory, r.metrics.active_memory});
  };

  for (std::size_t i = 0; i < memory.size(); ++i) {
    add_to_pool(searches[i].max_encoding);
    add_to_pool(searches[i].max_capped);
    const double m = static_cast<double>(memory[i]);
    for (std::size_t j = 0; j < lambda.size(); ++j) {
      const auto idx = out.index(i, j);
      const auto env = searches[i].envelope(lambda[j]);
      out.upper_bound[idx] = env.upper;
      for (const auto& candidate : out.pool) {
        const double r = candidate.rate(m, lambda[j]);
        if (r > out.rate[idx] || (r == out.rate[idx] && r > 0.0 &&
                                  candidate.text < out.best_sequence[idx])) {
          out.rate[idx] = r;
          out.best_sequence[idx] = candidate.text;
        }
      }
      // Rounding guard; pool rates never exceed the bound.
      out.upper_bound[idx] = std::max(out.upper_bound[idx], out.rate[idx]);
    }
  }
  return out;
}

}  // namespace ftlink
