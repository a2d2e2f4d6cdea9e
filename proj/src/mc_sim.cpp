#include "ftlink/mc_sim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <queue>
#include <random>
#include <stdexcept>

#include "json.hpp"

namespace ftlink {

std::string to_string(Arrival arrival) {
  return arrival == Arrival::deterministic ? "deterministic" : "poisson";
}

Arrival parse_arrival(const std::string& text) {
  if (text == "deterministic") return Arrival::deterministic;
  if (text == "poisson") return Arrival::poisson;
  throw std::invalid_argument("unknown arrival process '" + text + "'");
}

double SimReport::success_chi_square(int* dof) const {
  double chi = 0.0;
  int k = 0;
  for (const auto& s : stages) {
    const double p = s.expected_success;
    if (p <= 0.0 || p >= 1.0 || s.starts == 0) continue;
    const double n = static_cast<double>(s.starts);
    const double ok = static_cast<double>(s.successes);
    const double bad = n - ok;
    chi += (ok - n * p) * (ok - n * p) / (n * p) + (bad - n * (1 - p)) * (bad - n * (1 - p)) / (n * (1 - p));
    ++k;
  }
  if (dof) *dof = k;
  return chi;
}

std::string SimReport::to_json(const std::string& scenario_json) const {
  nlohmann::ordered_json j;
  if (!scenario_json.empty()) {
    j["scenario"] = nlohmann::ordered_json::parse(scenario_json);
  }
  j["prng"] = prng;
  j["seed"] = seed;
  j["arrival"] = arrival;
  j["duration"] = duration;
  j["warmup"] = warmup;
  j["input_rate"] = input_rate;
  j["arrivals"] = arrivals;
  j["blocked_arrivals"] = blocked_arrivals;
  j["outputs"] = outputs;
  j["rate"] = rate;
  j["rate_se"] = rate_se;
  j["analytic_rate"] = analytic_rate;
  j["low_confidence"] = low_confidence;
  j["stalled"] = stalled;
  j["mean_occupancy"] = mean_occupancy;
  j["peak_occupancy"] = peak_occupancy;
  j["analytic_occupancy"] = analytic_occupancy;
  j["instance_starts"] = instance_starts;
  j["memory_violations"] = violations;
  j["violation_fraction"] = violation_fraction;
  nlohmann::ordered_json st = nlohmann::ordered_json::array();
  for (const auto& s : stages) {
    st.push_back({{"starts", s.starts},
                  {"successes", s.successes},
                  {"discards", s.starts - s.successes},
                  {"expected_success", s.expected_success}});
  }
  j["stages"] = st;
  return j.dump(2) + "\n";
}

namespace {

struct Event {
  double time;
  std::uint64_t order;
  int stage;  // -1 = arrival, otherwise completing stage

  bool operator>(const Event& o) const {
    return time != o.time ? time > o.time : order > o.order;
  }
};

// A memory-increasing move waiting for space: an arrival (stage -1) or the
// outputs of a finished instance of `stage`.
struct Pending {
  int stage;
  double delta;
};

class Simulator {
 public:
  Simulator(const Sequence& seq, const HardwareParams& hw, const SimOptions& opt)
      : seq_(seq), opt_(opt), rng_(opt.seed), memory_(static_cast<double>(hw.memory)) {
    const auto metrics = sequence_metrics(seq, hw);
    r_in_ = std::min(hw.r_bell, metrics.rate_cap);
    report_.seed = opt.seed;
    report_.arrival = to_string(opt.arrival);
    report_.duration = opt.duration;
    report_.warmup = opt.duration * opt.warmup_fraction;
    report_.input_rate = r_in_;
    report_.analytic_rate = output_rate(metrics, hw.r_bell);
    report_.analytic_occupancy = metrics.idle_memory + metrics.active_memory * r_in_;
    buffers_.assign(seq.stages.size(), 0);
    report_.stages.resize(seq.stages.size());
    for (std::size_t i = 0; i < seq.stages.size(); ++i) {
      report_.stages[i].expected_success = 1.0 - seq.stages[i].p_fail;
    }
  }

  SimReport run() {
    if (!(r_in_ > 0.0)) {
      report_.low_confidence = true;
      return std::move(report_);
    }
    schedule_arrival(0.0);
    while (!events_.empty()) {
      const Event e = events_.top();
      if (e.time > opt_.duration) break;
      events_.pop();
      advance(e.time);
      if (e.stage < 0) {
        // The link idles while an earlier pair still waits for space.
        if (arrival_waiting_) {
          ++report_.blocked_arrivals;
        } else {
          ++report_.arrivals;
          request(Pending{-1, size(0)});
        }
        schedule_arrival(e.time);
      } else {
        complete(e.stage);
      }
    }
    advance(opt_.duration);
    finish();
    return std::move(report_);
  }

 private:
  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  double size(int i) const { return seq_.stages[i].size; }

  void push(double time, int stage) { events_.push({time, next_order_++, stage}); }

  void schedule_arrival(double now) {
    if (opt_.arrival == Arrival::poisson) {
      push(now - std::log1p(-uniform()) / r_in_, -1);
    } else {
      push(static_cast<double>(++arrival_slots_) / r_in_, -1);
    }
  }

  void advance(double t) {
    const double w = report_.warmup;
    const double from = std::max(last_time_, w);
    if (t > from) {
      occupancy_area_ += occupancy_ * (t - from);
    }
    last_time_ = t;
  }

  void set_occupancy(double value) {
    occupancy_ = value;
    if (last_time_ >= report_.warmup) {
      report_.peak_occupancy = std::max(report_.peak_occupancy, occupancy_);
    }
  }

  void request(const Pending& move) {
    // Space is released only through drain(), so every waiting move is
    // larger than the free space and a move that fits can go first.
    if (move.delta > 0.0 && occupancy_ + move.delta > memory_ + 1e-9) {
      ++report_.violations;
      pending_.push_back(move);
      arrival_waiting_ = arrival_waiting_ || move.stage < 0;
      return;
    }
    apply(move);
    drain();
  }

  void apply(const Pending& move) {
    set_occupancy(occupancy_ + move.delta);
    const int target = move.stage + 1;
    if (target < static_cast<int>(seq_.stages.size())) {
      buffers_[target] += move.stage < 0 ? 1 : seq_.stages[move.stage].k;
      start_instances(target);
    }
  }

  // Downstream moves first: they are the ones that eventually free space,
  // so partial buffers upstream cannot starve them. FIFO within a stage.
  void drain() {
    while (!pending_.empty()) {
      auto pick = pending_.end();
      for (auto it = pending_.begin(); it != pending_.end(); ++it) {
        if (occupancy_ + it->delta > memory_ + 1e-9) continue;
        if (pick == pending_.end() || it->stage > pick->stage) pick = it;
      }
      if (pick == pending_.end()) return;
      const Pending move = *pick;
      pending_.erase(pick);
      if (move.stage < 0) arrival_waiting_ = false;
      apply(move);
    }
  }

  void start_instances(int i) {
    const auto& stage = seq_.stages[i];
    while (buffers_[i] >= stage.n) {
      buffers_[i] -= stage.n;
      ++report_.stages[i].starts;
      ++report_.instance_starts;
      ++running_;
      push(last_time_ + stage.duration, i);
    }
  }

  void complete(int i) {
    --running_;
    const auto& stage = seq_.stages[i];
    const bool ok = stage.p_fail <= 0.0 || uniform() >= stage.p_fail;
    const double held = stage.n * stage.size;
    const bool last = i + 1 == static_cast<int>(seq_.stages.size());
    if (!ok) {
      set_occupancy(occupancy_ - held);
      drain();
      return;
    }
    ++report_.stages[i].successes;
    if (last) {
      set_occupancy(occupancy_ - held);
      record_outputs(stage.k);
      drain();
      return;
    }
    const double delta = stage.k * size(i + 1) - held;
    request(Pending{i, delta});
  }

  void record_outputs(int count) {
    if (last_time_ < report_.warmup) return;
    if (output_times_.empty() || output_times_.back() != last_time_) {
      output_times_.push_back(last_time_);
      output_counts_.push_back(count);
    } else {
      output_counts_.back() += count;
    }
    report_.outputs += count;
  }

  void finish() {
    const double window = opt_.duration - report_.warmup;
    report_.mean_occupancy = window > 0.0 ? occupancy_area_ / window : 0.0;
    report_.violation_fraction =
        report_.instance_starts > 0
            ? static_cast<double>(report_.violations) / static_cast<double>(report_.instance_starts)
            : 0.0;
    report_.low_confidence = report_.outputs < 30;
    // Nothing running and moves still waiting: no event can free space.
    report_.stalled = !pending_.empty() && running_ == 0;
    if (output_times_.size() >= 2) {
      const double span = output_times_.back() - output_times_.front();
      report_.rate = static_cast<double>(report_.outputs - output_counts_.front()) / span;
    }
    // Batch means over equal time slices of the measurement window.
    const int b = std::max(2, opt_.batches);
    std::vector<double> counts(b, 0.0);
    for (std::size_t i = 0; i < output_times_.size(); ++i) {
      int slot = static_cast<int>((output_times_[i] - report_.warmup) / window * b);
      slot = std::clamp(slot, 0, b - 1);
      counts[slot] += output_counts_[i];
    }
    double mean = 0.0;
    for (double& c : counts) {
      c /= window / b;
      mean += c;
    }
    mean /= b;
    double var = 0.0;
    for (double c : counts) var += (c - mean) * (c - mean);
    var /= (b - 1);
    report_.rate_se = std::sqrt(var / b);
  }

  const Sequence& seq_;
  SimOptions opt_;
  std::mt19937_64 rng_;
  double memory_;
  double r_in_ = 0.0;
  SimReport report_;

  std::priority_queue<Event, std::vector<Event>, std::greater<>> events_;
  std::uint64_t next_order_ = 0;
  std::vector<int> buffers_;
  std::deque<Pending> pending_;
  bool arrival_waiting_ = false;
  std::uint64_t arrival_slots_ = 0;
  std::int64_t running_ = 0;
  double occupancy_ = 0.0;
  double occupancy_area_ = 0.0;
  double last_time_ = 0.0;
  std::vector<double> output_times_;
  std::vector<int> output_counts_;
};

}  // namespace

SimReport simulate(const Sequence& seq, const HardwareParams& hw, const SimOptions& options) {
  hw.validate();
  if (seq.stages.empty()) {
    throw std::invalid_argument("cannot simulate an empty sequence");
  }
  if (!(options.duration > 0.0) || options.warmup_fraction < 0.0 || options.warmup_fraction >= 1.0) {
    throw std::invalid_argument("simulation needs duration > 0 and warmup fraction in [0, 1)");
  }
  return Simulator(seq, hw, options).run();
}

}  // namespace ftlink
