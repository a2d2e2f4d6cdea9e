#include "ftlink/pipeline.hpp"

#include <cmath>
#include <regex>
#include <sstream>
#include <stdexcept>

#include "ftlink/distill_bounds.hpp"

namespace ftlink {

StageSpec StageSpec::inject(int distance) {
  return {StageKind::injection, distance, distance, std::nullopt};
}

StageSpec StageSpec::grow(int from, int to) { return {StageKind::growing, from, to, std::nullopt}; }

StageSpec StageSpec::distill(const CodeSpec& code, int distance) {
  return {StageKind::distillation, distance, distance, code};
}

std::string StageSpec::str() const {
  switch (kind) {
    case StageKind::injection:
      return "inject@" + std::to_string(distance_out);
    case StageKind::growing:
      return "grow " + std::to_string(distance_in) + "->" + std::to_string(distance_out);
    case StageKind::distillation:
      return "distill " + code->key();
  }
  return "";
}

std::vector<StageSpec> Sequence::specs() const {
  std::vector<StageSpec> out;
  out.reserve(stages.size());
  for (const auto& stage : stages) {
    out.push_back(stage.spec);
  }
  return out;
}

std::string Sequence::str() const {
  const auto s = specs();
  return format_sequence(s);
}

Stage resolve_stage(const StageSpec& spec, double p_in, const HardwareParams& hw,
                    const ModelConfig& config) {
  const auto& surface = config.surface;
  Stage stage;
  stage.spec = spec;
  switch (spec.kind) {
    case StageKind::injection:
      stage.duration = config.time.injection();
      stage.size = static_cast<double>(patch_qubits(spec.distance_out, surface));
      stage.p_fail = config.injection.fail;
      stage.p_out = clamp_probability(hw.p_bell + injection_error(hw.p_physical, config));
      break;
    case StageKind::growing:
      stage.duration = config.time.growing();
      stage.size = static_cast<double>(patch_qubits(spec.distance_out, surface));
      stage.p_out =
          clamp_probability(p_in + growing_error(spec.distance_in, hw.p_physical, surface));
      break;
    case StageKind::distillation: {
      const CodeSpec& code = *spec.code;
      const double p_logical = logical_gate_error(spec.distance_in, hw.p_physical, surface);
      const auto bounds = stage_bounds(p_in, p_logical, code);
      stage.n = code.n;
      stage.k = code.k;
      stage.duration = config.time.distillation(unencoding_depth(code), spec.distance_in);
      stage.size = static_cast<double>(patch_qubits(spec.distance_in, surface));
      stage.p_fail = bounds.p_fail;
      stage.p_out = bounds.p_out;
      break;
    }
  }
  return stage;
}

Sequence elaborate_sequence(std::span<const StageSpec> specs, const HardwareParams& hw,
                            const ModelConfig& config) {
  Sequence seq;
  if (specs.empty() || specs.front().kind != StageKind::injection) {
    throw std::invalid_argument("a sequence must start with an injection stage");
  }
  double p = 0.0;
  int distance = 0;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const auto& spec = specs[i];
    require_odd_distance(spec.distance_in);
    require_odd_distance(spec.distance_out);
    if (i > 0) {
      if (spec.kind == StageKind::injection) {
        throw std::invalid_argument("injection may only appear as the first stage");
      }
      if (spec.distance_in != distance) {
        throw std::invalid_argument("stage '" + spec.str() + "' does not start at distance " +
                                    std::to_string(distance));
      }
    }
    if (spec.kind == StageKind::growing && spec.distance_out <= spec.distance_in) {
      throw std::invalid_argument("growing must strictly increase the distance");
    }
    if (spec.kind == StageKind::distillation) {
      if (!spec.code) {
        throw std::invalid_argument("distillation stage without a code");
      }
      if (spec.distance_out != spec.distance_in) {
        throw std::invalid_argument("distillation keeps the distance");
      }
    }
    seq.stages.push_back(resolve_stage(spec, p, hw, config));
    p = seq.stages.back().p_out;
    distance = spec.distance_out;
  }
  return seq;
}

bool meets_target(const Sequence& seq, const HardwareParams& hw, const ModelConfig& config) {
  return !seq.stages.empty() &&
         seq.distance() == target_distance(hw.p_target, hw.p_physical, config.surface) &&
         seq.p_out() <= hw.p_target;
}

void MetricsAccumulator::push(const Stage& stage) {
  // Aggregates of the previous prefix (E_{i-1}, K_{i-1}) enter stage i's terms.
  idle_memory += 0.5 * stage.n * stage.size * multiplicity;
  active_memory += stage.size * stage.duration * encoding_rate * multiplicity;
  encoding_rate *= (1.0 - stage.p_fail) * stage.k / stage.n;
  multiplicity *= stage.k;
}

double rate_cap(double idle_memory, double active_memory, double memory) {
  if (idle_memory >= memory) {
    return 0.0;
  }
  if (active_memory <= 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  return (memory - idle_memory) / active_memory;
}

SequenceMetrics metrics_from_stages(std::span<const Stage> stages, double memory) {
  MetricsAccumulator acc;
  for (const auto& stage : stages) {
    acc.push(stage);
  }
  SequenceMetrics m;
  m.encoding_rate = acc.encoding_rate;
  m.multiplicity = acc.multiplicity;
  m.idle_memory = acc.idle_memory;
  m.active_memory = acc.active_memory;
  m.p_out = stages.empty() ? 0.0 : stages.back().p_out;
  m.distance = stages.empty() ? 0 : stages.back().spec.distance_out;
  m.rate_cap = rate_cap(acc.idle_memory, acc.active_memory, memory);
  return m;
}

SequenceMetrics sequence_metrics(const Sequence& seq, const HardwareParams& hw) {
  return metrics_from_stages(seq.stages, static_cast<double>(hw.memory));
}

double output_rate(const SequenceMetrics& metrics, double r_bell) {
  if (!metrics.fits()) {
    return 0.0;
  }
  return metrics.encoding_rate * std::min(r_bell, metrics.rate_cap);
}

std::vector<StageSpec> parse_sequence(const std::string& text, const CodeRegistry* registry) {
  static const std::regex inject_re(R"(^inject\s*@\s*(\d+)$)");
  static const std::regex grow_re(R"(^grow\s+(\d+)\s*->\s*(\d+)$)");
  static const std::regex distill_re(R"(^distill\s+(\d+)\.(\d+)\.(\d+)$)");

  std::vector<StageSpec> specs;
  std::stringstream ss(text);
  std::string token;
  int distance = 0;
  while (std::getline(ss, token, '|')) {
    const auto first = token.find_first_not_of(" \t");
    const auto last = token.find_last_not_of(" \t");
    token = first == std::string::npos ? "" : token.substr(first, last - first + 1);
    std::smatch match;
    if (std::regex_match(token, match, inject_re)) {
      if (!specs.empty()) {
        throw std::invalid_argument("injection may only appear as the first stage");
      }
      distance = std::stoi(match[1]);
      require_odd_distance(distance);
      specs.push_back(StageSpec::inject(distance));
    } else if (std::regex_match(token, match, grow_re)) {
      const int from = std::stoi(match[1]);
      const int to = std::stoi(match[2]);
      if (specs.empty() || from != distance) {
        throw std::invalid_argument("stage '" + token + "' does not continue from distance " +
                                    std::to_string(distance));
      }
      require_odd_distance(to);
      if (to <= from) {
        throw std::invalid_argument("growing must strictly increase the distance: '" + token + "'");
      }
      distance = to;
      specs.push_back(StageSpec::grow(from, to));
    } else if (std::regex_match(token, match, distill_re)) {
      if (specs.empty()) {
        throw std::invalid_argument("a sequence must start with an injection stage");
      }
      CodeSpec code{std::stoi(match[1]), std::stoi(match[2]), std::stoi(match[3]), ""};
      if (registry) {
        auto found = registry->find(code.n, code.k, code.d);
        if (!found) {
          throw std::invalid_argument("code " + code.key() + " is not in the registry");
        }
        code = *found;
      } else {
        validate_code(code);
        code.label = "[[" + std::to_string(code.n) + "," + std::to_string(code.k) + "," +
                     std::to_string(code.d) + "]]";
      }
      specs.push_back(StageSpec::distill(code, distance));
    } else {
      throw std::invalid_argument("cannot parse stage '" + token + "'");
    }
  }
  if (specs.empty()) {
    throw std::invalid_argument("empty sequence");
  }
  return specs;
}

std::string format_sequence(std::span<const StageSpec> specs) {
  std::string out;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (i > 0) {
      out += " | ";
    }
    out += specs[i].str();
  }
  return out;
}

}  // namespace ftlink
