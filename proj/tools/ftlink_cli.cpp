// ftlink: optimize, sweep, simulate and inspect fault-tolerant Bell-pair links.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "ftlink/codes.hpp"
#include "ftlink/distill_bounds.hpp"
#include "ftlink/landscape.hpp"
#include "ftlink/mc_sim.hpp"
#include "ftlink/optimizer.hpp"
#include "ftlink/pipeline.hpp"
#include "ftlink/platforms.hpp"
#include "ftlink/scenario.hpp"
#include "json.hpp"

using namespace ftlink;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitInternal = 2;

struct HardwareFlags {
  std::optional<double> p_physical, p_bell, r_bell, p_idle, p_target;
  std::optional<std::int64_t> memory;
  std::optional<std::string> registry;
  std::optional<int> max_stages;
  std::optional<std::string> growth;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;

  void add(CLI::App* app) {
    app->add_option("--p-physical", p_physical, "physical two-qubit gate error");
    app->add_option("--p-bell", p_bell, "raw Bell pair error");
    app->add_option("--r-bell", r_bell, "Bell pairs per physical-gate time");
    app->add_option("--p-idle", p_idle, "idling error per physical-gate time");
    app->add_option("--memory", memory, "physical qubits for networking");
    app->add_option("--p-target", p_target, "target logical Bell pair error");
    app->add_option("--registry", registry, "code registry CSV (n,k,d,label)");
    app->add_option("--max-stages", max_stages, "search depth limit, injection included");
    app->add_option("--growth", growth, "free | direct_to_target");
    app->add_option("--seed", seed, "random seed");
    app->add_option("--jobs", jobs, "worker threads (0 = all cores)");
  }

  void apply(Scenario& s) const {
    if (p_physical) s.hardware.p_physical = *p_physical;
    if (p_bell) s.hardware.p_bell = *p_bell;
    if (r_bell) s.hardware.r_bell = *r_bell;
    if (p_idle) s.hardware.p_idle = *p_idle;
    if (memory) s.hardware.memory = *memory;
    if (p_target) s.hardware.p_target = *p_target;
    if (registry) s.registry_path = *registry;
    if (max_stages) s.landscape.search.max_stages = *max_stages;
    if (growth) s.landscape.search.growth = parse_growth(*growth);
    if (seed) s.seed = *seed;
    if (jobs) s.jobs = *jobs;
  }
};

Scenario resolve(const std::string& path, const HardwareFlags& flags) {
  Scenario s = path.empty() ? Scenario{} : load_scenario(path);
  flags.apply(s);
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("after command-line overrides: ") + e.what());
  }
  return s;
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ConfigError("cannot write '" + path + "'");
  }
  out << body;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

nlohmann::ordered_json metrics_json(const SequenceMetrics& m, double r_bell, double round_time) {
  const double rate = output_rate(m, r_bell);
  return {{"encoding_rate", m.encoding_rate},
          {"multiplicity", m.multiplicity},
          {"idle_memory", m.idle_memory},
          {"active_memory", m.active_memory},
          {"rate_cap", m.rate_cap},
          {"p_out", m.p_out},
          {"distance", m.distance},
          {"rate", rate},
          {"rate_rlogical", rate * round_time}};
}

int run_optimize(const Scenario& s, const std::string& objective_name, const std::string& json_path) {
  const auto registry = s.registry();
  const auto& hw = s.hardware;
  Objective objective = Objective::rate(hw.r_bell);
  if (objective_name == "encoding") {
    objective = Objective::encoding_rate();
  } else if (objective_name == "capped") {
    objective = Objective::capped_rate();
  } else if (objective_name != "rate") {
    throw ConfigError("unknown objective '" + objective_name + "' (rate | encoding | capped)");
  }
  const auto result = dfs_optimize(hw, s.model, registry, objective, s.landscape.search);
  const double rho = s.model.surface.round_time;
  const int L = target_distance(hw.p_target, hw.p_physical, s.model.surface);

  nlohmann::ordered_json j;
  j["scenario"] = nlohmann::ordered_json::parse(s.to_json());
  j["objective"] = objective_name;
  j["target_distance"] = L;
  j["feasible"] = result.feasible;
  if (result.feasible) {
    j["sequence"] = result.best.str();
    j["value"] = result.value;
    j["metrics"] = metrics_json(result.metrics, hw.r_bell, rho);
  }
  j["search"] = {{"nodes", result.stats.nodes},
                 {"pruned_dominance", result.stats.pruned_dominance},
                 {"pruned_bound", result.stats.pruned_bound},
                 {"pruned_memory", result.stats.pruned_memory},
                 {"complete", result.stats.complete}};

  std::cout << "target distance  " << L << " (" << patch_qubits(L, s.model.surface)
            << " physical qubits per logical qubit)\n";
  if (!result.feasible) {
    std::cout << "infeasible: no sequence reaches p_target = " << fmt(hw.p_target)
              << " within memory " << hw.memory << "\n";
  } else {
    const auto& m = result.metrics;
    const double rate = output_rate(m, hw.r_bell);
    std::cout << "sequence         " << result.best.str() << "\n"
              << "objective        " << objective_name << " = " << fmt(result.value) << "\n"
              << "E_S              " << fmt(m.encoding_rate) << "\n"
              << "K_S              " << fmt(m.multiplicity) << "\n"
              << "M_idle           " << fmt(m.idle_memory) << "\n"
              << "M_S              " << fmt(m.active_memory) << "\n"
              << "C_S              " << fmt(m.rate_cap) << "\n"
              << "p_out            " << fmt(m.p_out) << "\n"
              << "rate             " << fmt(rate) << " per physical-gate time, " << fmt(rate * rho)
              << " per logical round\n";
  }
  if (!json_path.empty()) {
    write_file(json_path, j.dump(2) + "\n");
  }
  return 0;
}

int run_landscape(const Scenario& s) {
  const auto registry = s.registry();
  const auto sweep = s.jobs == 1
                         ? sweep_serial(s.grid, s.hardware, s.model, registry, s.landscape)
                         : sweep_parallel(s.grid, s.hardware, s.model, registry, s.landscape, s.jobs);
  const std::string scenario = s.to_json();
  std::ostringstream csv;
  csv << "# scenario " << nlohmann::ordered_json::parse(scenario).dump() << "\n";
  write_landscape_csv(csv, sweep);
  std::vector<PlatformPreset> overlays;
  if (s.overlays) {
    overlays = load_platforms().presets;
  }
  const std::string sidecar = landscape_sidecar(sweep, scenario, overlays);
  if (!s.output.csv.empty()) {
    write_file(s.output.csv, csv.str());
  } else {
    std::cout << csv.str();
  }
  if (!s.output.json.empty()) {
    write_file(s.output.json, sidecar);
  }
  std::cerr << "cells " << sweep.cells.size() << ": distillation "
            << sweep.count(Method::distillation) << ", lattice_surgery "
            << sweep.count(Method::lattice_surgery) << ", transversal "
            << sweep.count(Method::transversal) << ", infeasible " << sweep.count(std::nullopt)
            << "\n";
  return 0;
}

int run_simulate(const Scenario& s) {
  const auto registry = s.registry();
  Sequence seq;
  if (!s.simulation.sequence.empty()) {
    seq = elaborate_sequence(parse_sequence(s.simulation.sequence, &registry), s.hardware, s.model);
  } else {
    const auto best = dfs_optimize(s.hardware, s.model, registry, Objective::rate(s.hardware.r_bell),
                                   s.landscape.search);
    if (!best.feasible) {
      nlohmann::ordered_json j;
      j["scenario"] = nlohmann::ordered_json::parse(s.to_json());
      j["feasible"] = false;
      const std::string body = j.dump(2) + "\n";
      s.output.report.empty() ? void(std::cout << body) : write_file(s.output.report, body);
      return 0;
    }
    seq = best.best;
  }
  SimOptions opt;
  opt.duration = s.simulation.duration;
  opt.seed = s.seed;
  opt.arrival = s.simulation.arrival;
  opt.warmup_fraction = s.simulation.warmup_fraction;
  opt.batches = s.simulation.batches;
  const auto report = simulate(seq, s.hardware, opt);
  auto j = nlohmann::ordered_json::parse(report.to_json(s.to_json()));
  j["sequence"] = seq.str();
  j["feasible"] = true;
  const std::string body = j.dump(2) + "\n";
  if (s.output.report.empty()) {
    std::cout << body;
  } else {
    write_file(s.output.report, body);
  }
  return 0;
}

int run_platforms(const std::string& data_path, const std::string& interconnect,
                  std::optional<double> rate_hz, std::optional<double> comm_qubits,
                  std::optional<std::int64_t> logic_qubits) {
  const auto data = load_platforms(data_path.empty() ? default_platforms_path() : data_path);
  if (interconnect.empty()) {
    std::cout << "presets (future goals; idle and rates per local gate time)\n";
    for (const auto& p : data.presets) {
      const auto hw = p.hardware(1e-12);
      std::cout << "  " << p.name << ": p_physical " << fmt(hw.p_physical) << ", p_bell "
                << fmt(hw.p_bell) << ", p_idle " << fmt(hw.p_idle) << ", r_bell ["
                << fmt(p.overlay_r_bell[0]) << ", " << fmt(p.overlay_r_bell[1]) << "], memory ["
                << p.overlay_memory[0] << ", " << p.overlay_memory[1] << "]\n";
    }
    std::cout << "interconnects\n";
    for (const auto& m : data.interconnects) {
      std::cout << "  " << m.name << ": P_aa " << fmt(m.p_aa) << ", t_base " << fmt(m.t_base_us)
                << " us, asymptote " << fmt(atom_rate_asymptote(m)) << " Hz\n";
    }
    return 0;
  }
  const auto* m = data.find_interconnect(interconnect);
  if (!m) {
    throw ConfigError("unknown interconnect '" + interconnect + "'");
  }
  if (comm_qubits) {
    std::cout << "rate " << fmt(atom_bell_rate(*comm_qubits, *m)) << " Hz with N = "
              << fmt(*comm_qubits) << "\n";
  }
  if (rate_hz) {
    const auto r = required_comm_qubits(*rate_hz, *m);
    if (!r.feasible) {
      std::cout << "infeasible: " << interconnect << " saturates at " << fmt(r.asymptote_hz)
                << " Hz\n";
    } else {
      std::cout << "N = " << r.qubits << "\n";
      if (logic_qubits) {
        std::cout << "total memory = " << total_memory(*logic_qubits, r.qubits) << "\n";
      }
    }
  }
  return 0;
}

int run_codes(const std::string& path) {
  const auto registry = path.empty() ? default_registry() : load_registry(path);
  std::cout << "n,k,d,label,depth\n";
  for (const auto& c : registry.codes()) {
    std::cout << c.n << ',' << c.k << ',' << c.d << ',' << c.label << ',' << unencoding_depth(c)
              << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fault-tolerant logical Bell pair rates between modules"};
  app.require_subcommand(1);

  std::string scenario_path;
  HardwareFlags flags;

  auto* optimize = app.add_subcommand("optimize", "best grow-and-distil sequence");
  optimize->add_option("--scenario", scenario_path, "scenario JSON");
  flags.add(optimize);
  std::string objective = "rate";
  std::string optimize_json;
  optimize->add_option("--objective", objective, "rate | encoding | capped");
  optimize->add_option("--json", optimize_json, "write the result as JSON");

  auto* landscape = app.add_subcommand("landscape", "sweep memory x r_bell");
  landscape->add_option("--scenario", scenario_path, "scenario JSON");
  HardwareFlags landscape_flags;
  landscape_flags.add(landscape);
  std::optional<std::string> csv_path, json_path;
  landscape->add_option("--csv", csv_path, "CSV output (default stdout)");
  landscape->add_option("--json", json_path, "JSON sidecar output");

  auto* sim = app.add_subcommand("simulate", "Monte Carlo run of a sequence");
  sim->add_option("--scenario", scenario_path, "scenario JSON");
  HardwareFlags sim_flags;
  sim_flags.add(sim);
  std::optional<std::string> sequence, arrival, report_path;
  std::optional<double> duration;
  sim->add_option("--sequence", sequence, "sequence text; default: rate-optimal");
  sim->add_option("--duration", duration, "physical-gate times");
  sim->add_option("--arrival", arrival, "deterministic | poisson");
  sim->add_option("--out", report_path, "report output (default stdout)");

  auto* platforms = app.add_subcommand("platforms", "hardware presets and atom interconnects");
  std::string platforms_data, interconnect;
  std::optional<double> rate_hz, comm_qubits;
  std::optional<std::int64_t> logic_qubits;
  platforms->add_option("--data", platforms_data, "platform data JSON");
  platforms->add_option("--interconnect", interconnect, "micro_cavities | single_cavity | free_space");
  platforms->add_option("--rate", rate_hz, "target Bell rate in Hz");
  platforms->add_option("--comm-qubits", comm_qubits, "evaluate the rate at N");
  platforms->add_option("--logic-qubits", logic_qubits, "add to N for the total memory");

  auto* codes = app.add_subcommand("codes", "list the code registry");
  std::string codes_registry;
  codes->add_option("--registry", codes_registry, "registry CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*optimize) {
      return run_optimize(resolve(scenario_path, flags), objective, optimize_json);
    }
    if (*landscape) {
      Scenario s = resolve(scenario_path, landscape_flags);
      if (csv_path) s.output.csv = *csv_path;
      if (json_path) s.output.json = *json_path;
      return run_landscape(s);
    }
    if (*sim) {
      Scenario s = resolve(scenario_path, sim_flags);
      if (sequence) s.simulation.sequence = *sequence;
      if (duration) s.simulation.duration = *duration;
      if (arrival) s.simulation.arrival = parse_arrival(*arrival);
      if (report_path) s.output.report = *report_path;
      s.validate();
      return run_simulate(s);
    }
    if (*platforms) {
      return run_platforms(platforms_data, interconnect, rate_hz, comm_qubits, logic_qubits);
    }
    if (*codes) {
      return run_codes(codes_registry);
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}
