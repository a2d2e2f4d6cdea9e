#include "ftlink/landscape.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <omp.h>

#include "json.hpp"

namespace ftlink {

using nlohmann::ordered_json;

std::string to_string(Method method) {
  switch (method) {
    case Method::distillation:
      return "distillation";
    case Method::lattice_surgery:
      return "lattice_surgery";
    case Method::transversal:
      return "transversal";
  }
  return "";
}

const MethodResult& LandscapeCell::result(Method m) const {
  switch (m) {
    case Method::distillation:
      return distillation;
    case Method::lattice_surgery:
      return lattice_surgery;
    case Method::transversal:
      return transversal;
  }
  throw std::invalid_argument("unknown method");
}

namespace {

MethodResult from_plan(const DirectGatePlan& plan, int rounds) {
  MethodResult r;
  r.feasible = plan.feasible;
  if (!plan.feasible) {
    return r;
  }
  r.rate = plan.rate;
  r.achieved_error = plan.achieved_error;
  r.distance = plan.distance;
  r.lanes = plan.lanes;
  r.pre_distill_rounds = rounds;
  r.plan = "L=" + std::to_string(plan.distance) + " lanes=" + std::to_string(plan.lanes);
  if (rounds > 0) {
    r.plan += " pre=" + std::to_string(rounds);
  }
  return r;
}

void pick_best(LandscapeCell& cell) {
  cell.best.reset();
  cell.best_rate = 0.0;
  for (Method m : {Method::distillation, Method::lattice_surgery, Method::transversal}) {
    const auto& r = cell.result(m);
    if (r.feasible && (!cell.best || r.rate > cell.best_rate)) {
      cell.best = m;
      cell.best_rate = r.rate;
    }
  }
}

}  // namespace

MethodResult evaluate_direct(DirectMethod method, const HardwareParams& hw,
                             const ModelConfig& config, const LandscapeOptions& options) {
  MethodResult best = from_plan(plan_direct_gate(method, hw, config), 0);
  if (hw.p_bell <= options.pre_distill_threshold) {
    return best;
  }
  // Distillation at full rate can crowd the lanes out of memory, so trade
  // its input rate against what is left for the gate.
  for (int j = 0; j <= options.pre_distill_throttle_steps; ++j) {
    const double r_in = hw.r_bell * std::exp2(-0.5 * j);
    const auto strategy = choose_strategy(hw.p_bell, hw.p_physical, hw.p_idle, r_in,
                                          static_cast<double>(hw.memory),
                                          options.pre_distill_target, options.pre_distill_max_rounds);
    if (!strategy.feasible || strategy.rounds == 0) {
      continue;
    }
    const PreDistilledInput input{strategy.output_rate, strategy.output_error,
                                  strategy.memory_used};
    const auto pre = from_plan(plan_direct_gate(method, hw, config, input), strategy.rounds);
    if (pre.feasible && (!best.feasible || pre.rate > best.rate)) {
      best = pre;
    }
  }
  return best;
}

MethodResult evaluate_distillation(const ReducedSearchResult& reduced, const HardwareParams& hw,
                                   const ModelConfig& config, const CodeRegistry& registry,
                                   const LandscapeOptions& options) {
  MethodResult r;
  if (!reduced.feasible) {
    return r;
  }
  const double lambda = hw.r_bell;
  const OptimizeResult* source = nullptr;
  OptimizeResult full;
  if (lambda <= reduced.max_encoding.metrics.rate_cap) {
    source = &reduced.max_encoding;
  } else if (lambda >= reduced.max_capped.metrics.rate_cap) {
    source = &reduced.max_capped;
  } else {
    full = dfs_optimize(hw, config, registry, Objective::rate(lambda), options.search);
    source = &full;
  }
  if (!source->feasible) {
    return r;
  }
  r.feasible = true;
  r.rate = output_rate(source->metrics, lambda);
  r.achieved_error = source->metrics.p_out;
  r.distance = source->metrics.distance;
  r.plan = source->best.str();
  return r;
}

LandscapeCell evaluate_point(const HardwareParams& hw, const ModelConfig& config,
                             const CodeRegistry& registry, const LandscapeOptions& options) {
  hw.validate();
  LandscapeCell cell;
  cell.memory = hw.memory;
  cell.r_bell = hw.r_bell;
  const auto reduced = reduced_search(hw, config, registry, options.search);
  cell.distillation = evaluate_distillation(reduced, hw, config, registry, options);
  cell.lattice_surgery = evaluate_direct(DirectMethod::lattice_surgery, hw, config, options);
  cell.transversal = evaluate_direct(DirectMethod::transversal, hw, config, options);
  pick_best(cell);
  return cell;
}

void GridSpec::validate() const {
  if (memory_min < 1 || memory_max < memory_min || memory_count < 1) {
    throw std::invalid_argument("memory grid needs 1 <= min <= max and count >= 1");
  }
  if (!(r_bell_min > 0.0) || r_bell_max < r_bell_min || r_bell_count < 1) {
    throw std::invalid_argument("r_bell grid needs 0 < min <= max and count >= 1");
  }
}

namespace {

std::vector<double> log_space(double lo, double hi, int count) {
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  const double step = std::log(hi / lo) / (count - 1);
  for (int i = 0; i < count; ++i) {
    out[i] = lo * std::exp(step * i);
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

}  // namespace

std::vector<std::int64_t> GridSpec::memory_values() const {
  validate();
  std::vector<std::int64_t> out;
  for (double v : log_space(static_cast<double>(memory_min), static_cast<double>(memory_max),
                            memory_count)) {
    out.push_back(std::llround(v));
  }
  return out;
}

std::vector<double> GridSpec::r_bell_values() const {
  validate();
  return log_space(r_bell_min, r_bell_max, r_bell_count);
}

LabelGrid SweepResult::labels() const {
  LabelGrid grid;
  grid.rows = static_cast<int>(memory.size());
  grid.cols = static_cast<int>(r_bell.size());
  grid.labels.reserve(cells.size());
  for (const auto& cell : cells) {
    grid.labels.push_back(cell.best ? static_cast<int>(*cell.best) : -1);
  }
  return grid;
}

std::size_t SweepResult::count(std::optional<Method> label) const {
  std::size_t n = 0;
  for (const auto& cell : cells) {
    n += cell.best == label;
  }
  return n;
}

namespace {

SweepResult prepare(const GridSpec& grid, const HardwareParams& base, const ModelConfig& config) {
  base.validate();
  config.validate();
  SweepResult s;
  s.memory = grid.memory_values();
  s.r_bell = grid.r_bell_values();
  s.cells.resize(s.memory.size() * s.r_bell.size());
  s.target_distance = target_distance(base.p_target, base.p_physical, config.surface);
  s.target_patch = patch_qubits(s.target_distance, config.surface);
  s.round_time = config.surface.round_time;
  return s;
}

HardwareParams cell_params(const SweepResult& s, const HardwareParams& base, std::size_t i,
                           std::size_t j) {
  HardwareParams hw = base;
  hw.memory = s.memory[i];
  hw.r_bell = s.r_bell[j];
  return hw;
}

ReducedSearchResult row_search(const SweepResult& s, const HardwareParams& base,
                               const ModelConfig& config, const CodeRegistry& registry,
                               const LandscapeOptions& options, std::size_t i) {
  return reduced_search(cell_params(s, base, i, 0), config, registry, options.search);
}

LandscapeCell cell_eval(const SweepResult& s, const ReducedSearchResult& row,
                        const HardwareParams& base, const ModelConfig& config,
                        const CodeRegistry& registry, const LandscapeOptions& options,
                        std::size_t i, std::size_t j) {
  const HardwareParams hw = cell_params(s, base, i, j);
  LandscapeCell cell;
  cell.memory = hw.memory;
  cell.r_bell = hw.r_bell;
  cell.distillation = evaluate_distillation(row, hw, config, registry, options);
  cell.lattice_surgery = evaluate_direct(DirectMethod::lattice_surgery, hw, config, options);
  cell.transversal = evaluate_direct(DirectMethod::transversal, hw, config, options);
  pick_best(cell);
  return cell;
}

}  // namespace

SweepResult sweep_serial(const GridSpec& grid, const HardwareParams& base,
                         const ModelConfig& config, const CodeRegistry& registry,
                         const LandscapeOptions& options) {
  SweepResult s = prepare(grid, base, config);
  for (std::size_t i = 0; i < s.memory.size(); ++i) {
    const auto row = row_search(s, base, config, registry, options, i);
    for (std::size_t j = 0; j < s.r_bell.size(); ++j) {
      s.cells[s.index(i, j)] = cell_eval(s, row, base, config, registry, options, i, j);
    }
  }
  return s;
}

SweepResult sweep_parallel(const GridSpec& grid, const HardwareParams& base,
                           const ModelConfig& config, const CodeRegistry& registry,
                           const LandscapeOptions& options, int jobs) {
  SweepResult s = prepare(grid, base, config);
  const auto rows = static_cast<std::ptrdiff_t>(s.memory.size());
  const auto cols = static_cast<std::ptrdiff_t>(s.r_bell.size());
  std::vector<ReducedSearchResult> row_results(s.memory.size());
  const int threads = jobs > 0 ? jobs : 0;

#pragma omp parallel num_threads(threads > 0 ? threads : omp_get_max_threads())
  {
#pragma omp for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < rows; ++i) {
      row_results[i] = row_search(s, base, config, registry, options, i);
    }
#pragma omp for schedule(dynamic)
    for (std::ptrdiff_t c = 0; c < rows * cols; ++c) {
      const auto i = static_cast<std::size_t>(c / cols);
      const auto j = static_cast<std::size_t>(c % cols);
      s.cells[c] = cell_eval(s, row_results[i], base, config, registry, options, i, j);
    }
  }
  return s;
}

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

void write_landscape_csv(std::ostream& out, const SweepResult& sweep) {
  out << "memory_physical,memory_logical,r_bell,rate_distill,rate_ls,rate_tv,best_method,"
         "best_rate_rlogical,feasible,plan_summary\n";
  for (const auto& cell : sweep.cells) {
    const double logical =
        static_cast<double>(cell.memory) / static_cast<double>(sweep.target_patch);
    const std::string label = cell.best ? to_string(*cell.best) : "infeasible";
    const std::string plan = cell.best ? cell.result(*cell.best).plan : "";
    out << cell.memory << ',' << num(logical) << ',' << num(cell.r_bell) << ','
        << num(cell.distillation.rate) << ',' << num(cell.lattice_surgery.rate) << ','
        << num(cell.transversal.rate) << ',' << label << ','
        << num(cell.best_rate * sweep.round_time) << ',' << (cell.feasible() ? 1 : 0) << ",\""
        << plan << "\"\n";
  }
}

std::string landscape_sidecar(const SweepResult& sweep, const std::string& scenario_json,
                              const std::vector<PlatformPreset>& overlays) {
  ordered_json j;
  j["schema_version"] = kLandscapeSchemaVersion;
  j["scenario"] = scenario_json.empty() ? ordered_json::object() : ordered_json::parse(scenario_json);
  j["target_distance"] = sweep.target_distance;
  j["target_patch_qubits"] = sweep.target_patch;
  j["round_time"] = sweep.round_time;
  j["axes"] = {{"rows", "memory_physical"},
               {"columns", "r_bell"},
               {"memory_physical", sweep.memory},
               {"r_bell", sweep.r_bell},
               {"coordinates", "cell (row r, column c) covers corners [c, c+1] x [r, r+1]"}};
  j["labels"] = {{"-1", "infeasible"},
                 {"0", "distillation"},
                 {"1", "lattice_surgery"},
                 {"2", "transversal"}};

  const LabelGrid grid = sweep.labels();
  j["label_grid"] = grid.labels;
  auto points = [](const std::vector<GridPoint>& pts) {
    ordered_json arr = ordered_json::array();
    for (const auto& p : pts) arr.push_back({p.x, p.y});
    return arr;
  };
  ordered_json regions = ordered_json::array();
  for (const auto& region : label_regions(grid)) {
    ordered_json rings = ordered_json::array();
    for (const auto& ring : region.rings) rings.push_back(points(ring));
    regions.push_back({{"label", region.label},
                       {"method", region.label < 0 ? "infeasible"
                                                   : to_string(static_cast<Method>(region.label))},
                       {"cells", region.cells},
                       {"rings", rings}});
  }
  j["regions"] = regions;
  ordered_json contours = ordered_json::array();
  for (const auto& c : label_contours(grid)) {
    contours.push_back({{"labels", {c.label_a, c.label_b}},
                        {"closed", c.closed},
                        {"points", points(c.points)}});
  }
  j["contours"] = contours;
  ordered_json boxes = ordered_json::array();
  for (const auto& p : overlays) {
    boxes.push_back({{"name", p.name},
                     {"label", p.label},
                     {"memory", p.overlay_memory},
                     {"r_bell", p.overlay_r_bell}});
  }
  j["overlays"] = boxes;
  return j.dump(2) + "\n";
}

}  // namespace ftlink
