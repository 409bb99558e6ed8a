#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "fgd/error.hpp"
#include "fgd/saccade.hpp"
#include "fgd/signal.hpp"
#include "fgd/simulate.hpp"

namespace fgd {

struct GazeRegression {
  double slope_deg_per_v = 0.0;
  double intercept_deg = 0.0;
  double r_squared = 0.0;
};

// Affine OLS: reference = slope * dedrifted + intercept.
inline GazeRegression fit_regression(const SampledSignal& dedrifted, const SampledSignal& reference_deg) {
  require_same_grid(dedrifted, reference_deg, "fit_regression");
  const double mx = mean_of(dedrifted.samples());
  const double my = mean_of(reference_deg.samples());
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < dedrifted.size(); ++k) {
    const double dx = dedrifted[k] - mx;
    const double dy = reference_deg[k] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0.0)) throw degenerate_fit_error("de-drifted signal has zero variance");
  GazeRegression g;
  g.slope_deg_per_v = sxy / sxx;
  g.intercept_deg = my - g.slope_deg_per_v * mx;
  double ss_res = 0.0;
  for (std::size_t k = 0; k < dedrifted.size(); ++k) {
    const double r = reference_deg[k] - (g.slope_deg_per_v * dedrifted[k] + g.intercept_deg);
    ss_res += r * r;
  }
  g.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : (ss_res == 0.0 ? 1.0 : 0.0);
  return g;
}

inline SampledSignal predict_gaze(const SampledSignal& dedrifted, const GazeRegression& reg) {
  std::vector<double> out(dedrifted.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = reg.slope_deg_per_v * dedrifted[k] + reg.intercept_deg;
  return dedrifted.with_samples(std::move(out));
}

struct EvalWindowConfig {
  double guard_s = 0.1;
  double max_window_s = 1.0;
  std::size_t min_samples = 5;
};

struct SaccadeError {
  std::size_t event_idx = 0;
  double epsilon_deg = 0.0;  // reference minus predicted
};

struct SaccadeErrors {
  std::vector<SaccadeError> errors;
  std::vector<std::size_t> skipped;  // window shorter than min_samples
};

// Fixation window after saccade i: [end + guard, min(next start, end + max_window)].
inline SaccadeErrors saccade_errors(const SampledSignal& predicted, const SampledSignal& reference,
                                    const std::vector<SaccadeEvent>& events, const EvalWindowConfig& cfg = {}) {
  require_same_grid(predicted, reference, "saccade_errors");
  validate_events(events, predicted.size());
  const double fs = predicted.fs_hz();
  const auto guard = static_cast<std::size_t>(std::llround(cfg.guard_s * fs));
  const auto span = static_cast<std::size_t>(std::llround(cfg.max_window_s * fs));
  const std::size_t last = predicted.size() - 1;
  SaccadeErrors out;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const std::size_t lo = events[i].end_idx + guard;
    std::size_t hi = std::min(last, events[i].end_idx + span);
    if (i + 1 < events.size()) hi = std::min(hi, events[i + 1].start_idx);
    if (lo > hi || hi - lo + 1 < cfg.min_samples) {
      out.skipped.push_back(i);
      continue;
    }
    const std::size_t count = hi - lo + 1;
    const double ref = mean_of(reference.samples().subspan(lo, count));
    const double pred = mean_of(predicted.samples().subspan(lo, count));
    out.errors.push_back({i, ref - pred});
  }
  return out;
}

// Ground-truth saccades in the detector's event form.
inline std::vector<SaccadeEvent> as_saccade_events(const std::vector<TrueSaccade>& truth) {
  std::vector<SaccadeEvent> out;
  out.reserve(truth.size());
  for (const auto& t : truth) {
    out.push_back({t.start_idx, t.start_idx, t.end_idx, t.to_deg >= t.from_deg ? 1 : -1});
  }
  return out;
}

struct TargetRow {
  std::string target_id;
  double mean_abs_error_deg = 0.0;
  std::size_t count = 0;
};

struct EvalReport {
  std::string method;
  std::vector<TargetRow> per_target;
  double overall_mean_deg = 0.0;  // over per-saccade |eps|
  double overall_std_deg = 0.0;   // population
  double per_target_mean_deg = 0.0;
  std::size_t evaluated = 0;
  std::size_t skipped = 0;
};

inline const std::vector<std::string>& table_row_order() {
  static const std::vector<std::string> order{"L4", "L3", "L2", "L1", "C", "R1", "R2", "R3", "R4"};
  return order;
}

// event_targets[i] names the target reached by event i. Centre returns are
// dropped unless include_center is set.
inline EvalReport build_report(const std::vector<SaccadeError>& errors, const std::vector<std::string>& event_targets,
                               const std::string& method, bool include_center = false, std::size_t skipped = 0) {
  std::map<std::string, std::vector<double>> groups;
  std::vector<double> all;
  for (const auto& e : errors) {
    if (e.event_idx >= event_targets.size() || event_targets[e.event_idx].empty()) {
      throw std::invalid_argument("saccade " + std::to_string(e.event_idx) + " has no target");
    }
    const std::string& id = event_targets[e.event_idx];
    if (id == "C" && !include_center) continue;
    groups[id].push_back(std::abs(e.epsilon_deg));
    all.push_back(std::abs(e.epsilon_deg));
  }
  EvalReport r;
  r.method = method;
  r.skipped = skipped;
  r.evaluated = all.size();
  auto add_row = [&](const std::string& id) {
    const auto& v = groups.at(id);
    r.per_target.push_back({id, mean_of(v), v.size()});
  };
  for (const auto& id : table_row_order()) {
    if (groups.contains(id)) add_row(id);
  }
  for (const auto& [id, v] : groups) {
    if (std::find(table_row_order().begin(), table_row_order().end(), id) == table_row_order().end()) add_row(id);
  }
  if (!all.empty()) {
    const SignalStats s = stats(all);
    r.overall_mean_deg = s.mean;
    r.overall_std_deg = s.std_dev;
    double acc = 0.0;
    for (const auto& row : r.per_target) acc += row.mean_abs_error_deg;
    r.per_target_mean_deg = acc / static_cast<double>(r.per_target.size());
  }
  return r;
}

// Aligned text table: one row per target, one column per method.
inline std::string format_table(const std::vector<EvalReport>& reports) {
  std::vector<std::string> ids;
  for (const auto& id : table_row_order()) {
    for (const auto& r : reports) {
      if (std::any_of(r.per_target.begin(), r.per_target.end(), [&](const TargetRow& t) { return t.target_id == id; })) {
        ids.push_back(id);
        break;
      }
    }
  }
  for (const auto& r : reports) {
    for (const auto& t : r.per_target) {
      if (std::find(ids.begin(), ids.end(), t.target_id) == ids.end()) ids.push_back(t.target_id);
    }
  }

  auto fmt = [](const char* f, double a, double b = 0.0) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a, b);
    return std::string(buf);
  };
  constexpr int first_w = 18;
  constexpr int col_w = 18;
  auto pad = [](std::string s, int w) {
    if (static_cast<int>(s.size()) < w) s.append(static_cast<std::size_t>(w) - s.size(), ' ');
    return s;
  };

  std::string out = pad("Target", first_w);
  for (const auto& r : reports) out += pad(r.method, col_w);
  out += '\n';
  for (const auto& id : ids) {
    std::string line = pad(id, first_w);
    for (const auto& r : reports) {
      auto it = std::find_if(r.per_target.begin(), r.per_target.end(),
                             [&](const TargetRow& t) { return t.target_id == id; });
      line += pad(it == r.per_target.end() ? "-" : fmt("%.3f", it->mean_abs_error_deg), col_w);
    }
    out += line + '\n';
  }
  std::string avg = pad("Average", first_w);
  std::string tmean = pad("Mean of targets", first_w);
  std::string count = pad("Saccades", first_w);
  for (const auto& r : reports) {
    avg += pad(fmt("%.3f +/- %.3f", r.overall_mean_deg, r.overall_std_deg), col_w);
    tmean += pad(fmt("%.3f", r.per_target_mean_deg), col_w);
    count += pad(std::to_string(r.evaluated), col_w);
  }
  out += avg + '\n' + tmean + '\n' + count + '\n';
  return out;
}

}  // namespace fgd
