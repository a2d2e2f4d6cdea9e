#include "ftlink/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "ftlink/platforms.hpp"
#include "json.hpp"

namespace ftlink {

using nlohmann::json;
using nlohmann::ordered_json;

std::string to_string(GrowthPolicy growth) {
  return growth == GrowthPolicy::free ? "free" : "direct_to_target";
}

GrowthPolicy parse_growth(const std::string& text) {
  if (text == "free") return GrowthPolicy::free;
  if (text == "direct_to_target") return GrowthPolicy::direct_to_target;
  throw std::invalid_argument("unknown growth policy '" + text + "'");
}

namespace {

class Reader {
 public:
  Reader(const std::string& text, std::string origin) : text_(text), origin_(std::move(origin)) {}

  // Line of the first `"key"` followed by a colon, 0 when not found.
  int line_of(const std::string& key) const {
    const std::string quoted = "\"" + key + "\"";
    for (std::size_t pos = text_.find(quoted); pos != std::string::npos;
         pos = text_.find(quoted, pos + 1)) {
      std::size_t after = pos + quoted.size();
      while (after < text_.size() && std::isspace(static_cast<unsigned char>(text_[after]))) ++after;
      if (after < text_.size() && text_[after] == ':') {
        int line = 1;
        for (std::size_t i = 0; i < pos; ++i) line += text_[i] == '\n';
        return line;
      }
    }
    return 0;
  }

  [[noreturn]] void fail(const std::string& key, const std::string& message) const {
    const int line = key.empty() ? 0 : line_of(key);
    std::string where = origin_;
    if (line > 0) where += ":" + std::to_string(line);
    throw ConfigError(where + ": " + message);
  }

  void allow(const json& obj, const std::string& section, std::set<std::string> keys) const {
    if (!obj.is_object()) {
      fail(section, "'" + section + "' must be an object");
    }
    for (const auto& [key, value] : obj.items()) {
      if (!keys.count(key)) {
        fail(key, "unknown key '" + key + "'" + (section.empty() ? "" : " in '" + section + "'"));
      }
    }
  }

  template <typename T>
  void get(const json& obj, const std::string& key, T& out) const {
    if (!obj.contains(key)) return;
    try {
      out = obj.at(key).get<T>();
    } catch (const json::exception&) {
      fail(key, "key '" + key + "' has the wrong type");
    }
  }

  [[noreturn]] void parse_error(std::size_t byte) const {
    int line = 1;
    int col = 1;
    for (std::size_t i = 0; i < byte && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError(origin_ + ":" + std::to_string(line) + ":" + std::to_string(col) +
                      ": malformed JSON");
  }

 private:
  const std::string& text_;
  std::string origin_;
};

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& origin) {
  Reader reader(text, origin);
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    reader.parse_error(e.byte > 0 ? e.byte - 1 : 0);
  }
  reader.allow(root, "",
               {"name", "platform", "hardware", "surface", "time", "injection", "registry",
                "search", "grid", "landscape", "simulation", "output", "seed", "jobs"});

  Scenario s;
  reader.get(root, "name", s.name);
  reader.get(root, "platform", s.platform);
  if (!s.platform.empty()) {
    const auto data = load_platforms();
    const auto* preset = data.find_preset(s.platform);
    if (!preset) {
      reader.fail("platform", "unknown platform preset '" + s.platform + "'");
    }
    s.hardware = preset->hardware(s.hardware.p_target);
  }
  if (root.contains("hardware")) {
    const auto& h = root["hardware"];
    reader.allow(h, "hardware", {"p_physical", "p_bell", "r_bell", "p_idle", "memory", "p_target"});
    reader.get(h, "p_physical", s.hardware.p_physical);
    reader.get(h, "p_bell", s.hardware.p_bell);
    reader.get(h, "r_bell", s.hardware.r_bell);
    reader.get(h, "p_idle", s.hardware.p_idle);
    reader.get(h, "memory", s.hardware.memory);
    reader.get(h, "p_target", s.hardware.p_target);
  }
  auto& surface = s.model.surface;
  if (root.contains("surface")) {
    const auto& m = root["surface"];
    reader.allow(m, "surface",
                 {"bulk_threshold", "seam_threshold", "bulk_prefactor", "seam_prefactor",
                  "cross_prefactor", "alpha_c", "round_time", "patch_size_factor"});
    reader.get(m, "bulk_threshold", surface.bulk_threshold);
    reader.get(m, "seam_threshold", surface.seam_threshold);
    reader.get(m, "bulk_prefactor", surface.bulk_prefactor);
    reader.get(m, "seam_prefactor", surface.seam_prefactor);
    reader.get(m, "cross_prefactor", surface.cross_prefactor);
    reader.get(m, "alpha_c", surface.alpha_c);
    reader.get(m, "round_time", surface.round_time);
    reader.get(m, "patch_size_factor", surface.patch_size_factor);
  }
  s.model.time.round_time = surface.round_time;
  if (root.contains("time")) {
    const auto& t = root["time"];
    reader.allow(t, "time", {"unencoding_layer_time", "lattice_surgery_unencoding"});
    reader.get(t, "unencoding_layer_time", s.model.time.unencoding_layer_time);
    reader.get(t, "lattice_surgery_unencoding", s.model.time.lattice_surgery_unencoding);
  }
  if (root.contains("injection")) {
    const auto& i = root["injection"];
    reader.allow(i, "injection", {"distance", "error", "fail"});
    reader.get(i, "distance", s.model.injection.distance);
    if (i.contains("error") && !i["error"].is_null()) {
      double e = 0.0;
      reader.get(i, "error", e);
      s.model.injection.error = e;
    }
    reader.get(i, "fail", s.model.injection.fail);
  }
  reader.get(root, "registry", s.registry_path);
  auto& search = s.landscape.search;
  if (root.contains("search")) {
    const auto& q = root["search"];
    reader.allow(q, "search", {"max_stages", "growth", "dominance_pruning", "bound_pruning"});
    reader.get(q, "max_stages", search.max_stages);
    std::string growth = to_string(search.growth);
    reader.get(q, "growth", growth);
    try {
      search.growth = parse_growth(growth);
    } catch (const std::invalid_argument& e) {
      reader.fail("growth", e.what());
    }
    reader.get(q, "dominance_pruning", search.dominance_pruning);
    reader.get(q, "bound_pruning", search.bound_pruning);
  }
  if (root.contains("grid")) {
    const auto& g = root["grid"];
    reader.allow(g, "grid",
                 {"memory_min", "memory_max", "memory_count", "r_bell_min", "r_bell_max",
                  "r_bell_count"});
    reader.get(g, "memory_min", s.grid.memory_min);
    reader.get(g, "memory_max", s.grid.memory_max);
    reader.get(g, "memory_count", s.grid.memory_count);
    reader.get(g, "r_bell_min", s.grid.r_bell_min);
    reader.get(g, "r_bell_max", s.grid.r_bell_max);
    reader.get(g, "r_bell_count", s.grid.r_bell_count);
  }
  if (root.contains("landscape")) {
    const auto& l = root["landscape"];
    reader.allow(l, "landscape",
                 {"pre_distill_threshold", "pre_distill_target", "pre_distill_max_rounds",
                  "overlays"});
    reader.get(l, "pre_distill_threshold", s.landscape.pre_distill_threshold);
    reader.get(l, "pre_distill_target", s.landscape.pre_distill_target);
    reader.get(l, "pre_distill_max_rounds", s.landscape.pre_distill_max_rounds);
    reader.get(l, "overlays", s.overlays);
  }
  if (root.contains("simulation")) {
    const auto& m = root["simulation"];
    reader.allow(m, "simulation", {"duration", "arrival", "warmup_fraction", "batches", "sequence"});
    reader.get(m, "duration", s.simulation.duration);
    std::string arrival = to_string(s.simulation.arrival);
    reader.get(m, "arrival", arrival);
    try {
      s.simulation.arrival = parse_arrival(arrival);
    } catch (const std::invalid_argument& e) {
      reader.fail("arrival", e.what());
    }
    reader.get(m, "warmup_fraction", s.simulation.warmup_fraction);
    reader.get(m, "batches", s.simulation.batches);
    reader.get(m, "sequence", s.simulation.sequence);
  }
  if (root.contains("output")) {
    const auto& o = root["output"];
    reader.allow(o, "output", {"csv", "json", "report"});
    reader.get(o, "csv", s.output.csv);
    reader.get(o, "json", s.output.json);
    reader.get(o, "report", s.output.report);
  }
  reader.get(root, "seed", s.seed);
  reader.get(root, "jobs", s.jobs);

  try {
    s.validate();
  } catch (const std::exception& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open scenario '" + path + "'");
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path);
}

void Scenario::validate() const {
  hardware.validate();
  model.validate();
  grid.validate();
  if (landscape.search.max_stages < 1) {
    throw std::invalid_argument("search.max_stages must be at least 1");
  }
  if (!(simulation.duration > 0.0) || simulation.warmup_fraction < 0.0 ||
      simulation.warmup_fraction >= 1.0 || simulation.batches < 2) {
    throw std::invalid_argument("simulation needs duration > 0, warmup in [0, 1), batches >= 2");
  }
  if (jobs < 0) {
    throw std::invalid_argument("jobs must be non-negative");
  }
}

CodeRegistry Scenario::registry() const {
  return registry_path.empty() ? default_registry() : load_registry(registry_path);
}

std::string Scenario::to_json() const {
  ordered_json j;
  j["name"] = name;
  j["platform"] = platform;
  j["hardware"] = {{"p_physical", hardware.p_physical}, {"p_bell", hardware.p_bell},
                   {"r_bell", hardware.r_bell},         {"p_idle", hardware.p_idle},
                   {"memory", hardware.memory},         {"p_target", hardware.p_target}};
  const auto& m = model.surface;
  j["surface"] = {{"bulk_threshold", m.bulk_threshold},   {"seam_threshold", m.seam_threshold},
                  {"bulk_prefactor", m.bulk_prefactor},   {"seam_prefactor", m.seam_prefactor},
                  {"cross_prefactor", m.cross_prefactor}, {"alpha_c", m.alpha_c},
                  {"round_time", m.round_time},           {"patch_size_factor", m.patch_size_factor}};
  j["time"] = {{"unencoding_layer_time", model.time.unencoding_layer_time},
               {"lattice_surgery_unencoding", model.time.lattice_surgery_unencoding}};
  j["injection"] = {{"distance", model.injection.distance},
                    {"error", model.injection.error ? ordered_json(*model.injection.error)
                                                    : ordered_json(nullptr)},
                    {"fail", model.injection.fail}};
  j["registry"] = registry_path;
  const auto& q = landscape.search;
  j["search"] = {{"max_stages", q.max_stages},
                 {"growth", to_string(q.growth)},
                 {"dominance_pruning", q.dominance_pruning},
                 {"bound_pruning", q.bound_pruning}};
  j["grid"] = {{"memory_min", grid.memory_min},     {"memory_max", grid.memory_max},
               {"memory_count", grid.memory_count}, {"r_bell_min", grid.r_bell_min},
               {"r_bell_max", grid.r_bell_max},     {"r_bell_count", grid.r_bell_count}};
  j["landscape"] = {{"pre_distill_threshold", landscape.pre_distill_threshold},
                    {"pre_distill_target", landscape.pre_distill_target},
                    {"pre_distill_max_rounds", landscape.pre_distill_max_rounds},
                    {"overlays", overlays}};
  j["simulation"] = {{"duration", simulation.duration},
                     {"arrival", to_string(simulation.arrival)},
                     {"warmup_fraction", simulation.warmup_fraction},
                     {"batches", simulation.batches},
                     {"sequence", simulation.sequence}};
  j["output"] = {{"csv", output.csv}, {"json", output.json}, {"report", output.report}};
  j["seed"] = seed;
  return j.dump(2);
}

}  // namespace ftlink
