#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fgd/blink.hpp"
#include "fgd/gaze_eval.hpp"
#include "fgd/io.hpp"
#include "fgd/methods.hpp"
#include "fgd/pipeline.hpp"
#include "fgd/simulate.hpp"

namespace fgd {

using json = nlohmann::ordered_json;

struct EvalConfig {
  EvalWindowConfig window;
  bool include_center = false;
  std::size_t train_scenario = 0;
  bool remove_blinks = false;
};

struct SynthConfig {
  double noise_std_v = 0.2e-3;
  double blink_rate_hz = 0.0;
  double saccade_duration_s = 0.05;
  double amplitude_scale_v_per_deg = 20e-6;
  double gain = 300.0;
  std::size_t n_scenarios = 10;
  std::optional<Range> drift_amplitude_v;  // unset: derived from the trial script
  std::optional<Range> drift_slope_v_per_s;
};

struct IoConfig {
  std::string input;
  std::string output;
  std::string out_dir;
  std::string corpus_dir;
  std::string report;
  std::string diagnostics_dir;
  std::string drift_spec;
  std::string reference;
  std::string events;
  std::string blinks_out;
  std::string train_input;
  std::string train_reference;
  std::string method = "fgd";
  std::vector<std::string> methods{"fgd", "wavelet", "poly", "highpass"};
};

struct ToolkitConfig {
  double fs_hz = 250.0;
  std::uint64_t seed = 42;
  BlinkConfig blink;
  FgdConfig fgd;  // detect and reconstruct live inside
  MethodsConfig methods;
  EvalConfig eval;
  SynthConfig synth;
  IoConfig io;

  TrialScript trial_script() const {
    TrialScript s = default_trial_script();
    s.saccade_duration_s = synth.saccade_duration_s;
    s.amplitude_scale_v_per_deg = synth.amplitude_scale_v_per_deg;
    s.gain = synth.gain;
    return s;
  }
};

namespace detail {

// Reads obj[key] into out when present; rejects wrong types and unknown keys.
class Section {
 public:
  Section(const json& j, std::string name) : j_(j), name_(std::move(name)) {
    if (!j_.is_object()) throw std::invalid_argument("config: '" + name_ + "' must be an object");
  }

  template <class T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
      throw std::invalid_argument("config: '" + name_ + "." + key + "' has the wrong type");
    }
  }

  template <class F>
  void get_with(const char* key, F&& parse) {
    seen_.insert(key);
    if (j_.contains(key)) parse(j_.at(key));
  }

  void reject_unknown() const {
    for (const auto& [k, v] : j_.items()) {
      if (!seen_.contains(k)) throw std::invalid_argument("config: unknown key '" + name_ + "." + k + "'");
    }
  }

 private:
  const json& j_;
  std::string name_;
  std::set<std::string> seen_;
};

inline json range_json(const std::optional<Range>& r) {
  if (!r) return nullptr;
  return json::array({r->lo, r->hi});
}

inline std::optional<Range> parse_range(const json& j, const std::string& key) {
  if (j.is_null()) return std::nullopt;
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw std::invalid_argument("config: '" + key + "' must be null or [lo, hi]");
  }
  return Range{j[0].get<double>(), j[1].get<double>()};
}

inline std::string as_string(const json& j, const std::string& key) {
  if (!j.is_string()) throw std::invalid_argument("config: '" + key + "' must be a string");
  return j.get<std::string>();
}

}  // namespace detail

inline json to_json(const ToolkitConfig& c) {
  const DetectConfig& d = c.fgd.detect;
  const ReconstructConfig& r = c.fgd.reconstruct;
  return json{
      {"fs_hz", c.fs_hz},
      {"seed", c.seed},
      {"blink",
       {{"k_blink", c.blink.k_blink},
        {"blink_max_duration_s", c.blink.blink_max_duration_s},
        {"return_tolerance_frac", c.blink.return_tolerance_frac},
        {"bipolar", c.blink.bipolar},
        {"lag_n", c.blink.lag_n}}},
      {"detect",
       {{"k_peak", d.k_peak},
        {"k_window", d.k_window},
        {"group_window_s", d.group_window_s},
        {"lag_n", d.lag_n},
        {"local_window_s", d.local_window_s}}},
      {"reconstruct",
       {{"m_samples", r.m_samples}, {"calibration_s", r.calibration_s}, {"gap_fill", to_string(r.gap_fill)}}},
      {"fgd",
       {{"wavelet_level", c.fgd.wavelet_level},
        {"wavelet_family", to_string(c.fgd.family)},
        {"boundary_mode", to_string(c.fgd.mode)}}},
      {"methods",
       {{"poly_order", c.methods.poly_order},
        {"cutoff_hz", c.methods.cutoff_hz},
        {"butter_order", c.methods.butter_order}}},
      {"eval",
       {{"guard_s", c.eval.window.guard_s},
        {"max_window_s", c.eval.window.max_window_s},
        {"min_window_samples", c.eval.window.min_samples},
        {"include_center", c.eval.include_center},
        {"train_scenario", c.eval.train_scenario},
        {"remove_blinks", c.eval.remove_blinks}}},
      {"synth",
       {{"noise_std_v", c.synth.noise_std_v},
        {"blink_rate_hz", c.synth.blink_rate_hz},
        {"saccade_duration_s", c.synth.saccade_duration_s},
        {"amplitude_scale_v_per_deg", c.synth.amplitude_scale_v_per_deg},
        {"gain", c.synth.gain},
        {"n_scenarios", c.synth.n_scenarios},
        {"drift_amplitude_v", detail::range_json(c.synth.drift_amplitude_v)},
        {"drift_slope_v_per_s", detail::range_json(c.synth.drift_slope_v_per_s)}}},
      {"io",
       {{"input", c.io.input},
        {"output", c.io.output},
        {"out_dir", c.io.out_dir},
        {"corpus_dir", c.io.corpus_dir},
        {"report", c.io.report},
        {"diagnostics_dir", c.io.diagnostics_dir},
        {"drift_spec", c.io.drift_spec},
        {"reference", c.io.reference},
        {"events", c.io.events},
        {"blinks_out", c.io.blinks_out},
        {"train_input", c.io.train_input},
        {"train_reference", c.io.train_reference},
        {"method", c.io.method},
        {"methods", c.io.methods}}},
  };
}

// Overlays j onto base; absent keys keep base's values.
inline ToolkitConfig config_from_json(const json& j, ToolkitConfig c = {}) {
  detail::Section top(j, "config");
  top.get("fs_hz", c.fs_hz);
  top.get("seed", c.seed);
  top.get_with("blink", [&](const json& s) {
    detail::Section b(s, "blink");
    b.get("k_blink", c.blink.k_blink);
    b.get("blink_max_duration_s", c.blink.blink_max_duration_s);
    b.get("return_tolerance_frac", c.blink.return_tolerance_frac);
    b.get("bipolar", c.blink.bipolar);
    b.get("lag_n", c.blink.lag_n);
    b.reject_unknown();
  });
  top.get_with("detect", [&](const json& s) {
    detail::Section d(s, "detect");
    d.get("k_peak", c.fgd.detect.k_peak);
    d.get("k_window", c.fgd.detect.k_window);
    d.get("group_window_s", c.fgd.detect.group_window_s);
    d.get("lag_n", c.fgd.detect.lag_n);
    d.get("local_window_s", c.fgd.detect.local_window_s);
    d.reject_unknown();
  });
  top.get_with("reconstruct", [&](const json& s) {
    detail::Section r(s, "reconstruct");
    r.get("m_samples", c.fgd.reconstruct.m_samples);
    r.get("calibration_s", c.fgd.reconstruct.calibration_s);
    r.get_with("gap_fill", [&](const json& v) {
      c.fgd.reconstruct.gap_fill = parse_gap_fill(detail::as_string(v, "reconstruct.gap_fill"));
    });
    r.reject_unknown();
  });
  top.get_with("fgd", [&](const json& s) {
    detail::Section f(s, "fgd");
    f.get("wavelet_level", c.fgd.wavelet_level);
    f.get_with("wavelet_family", [&](const json& v) {
      c.fgd.family = parse_wavelet_family(detail::as_string(v, "fgd.wavelet_family"));
    });
    f.get_with("boundary_mode", [&](const json& v) {
      c.fgd.mode = parse_boundary_mode(detail::as_string(v, "fgd.boundary_mode"));
    });
    f.reject_unknown();
  });
  top.get_with("methods", [&](const json& s) {
    detail::Section m(s, "methods");
    m.get("poly_order", c.methods.poly_order);
    m.get("cutoff_hz", c.methods.cutoff_hz);
    m.get("butter_order", c.methods.butter_order);
    m.reject_unknown();
  });
  top.get_with("eval", [&](const json& s) {
    detail::Section e(s, "eval");
    e.get("guard_s", c.eval.window.guard_s);
    e.get("max_window_s", c.eval.window.max_window_s);
    e.get("min_window_samples", c.eval.window.min_samples);
    e.get("include_center", c.eval.include_center);
    e.get("train_scenario", c.eval.train_scenario);
    e.get("remove_blinks", c.eval.remove_blinks);
    e.reject_unknown();
  });
  top.get_with("synth", [&](const json& s) {
    detail::Section y(s, "synth");
    y.get("noise_std_v", c.synth.noise_std_v);
    y.get("blink_rate_hz", c.synth.blink_rate_hz);
    y.get("saccade_duration_s", c.synth.saccade_duration_s);
    y.get("amplitude_scale_v_per_deg", c.synth.amplitude_scale_v_per_deg);
    y.get("gain", c.synth.gain);
    y.get("n_scenarios", c.synth.n_scenarios);
    y.get_with("drift_amplitude_v",
               [&](const json& v) { c.synth.drift_amplitude_v = detail::parse_range(v, "synth.drift_amplitude_v"); });
    y.get_with("drift_slope_v_per_s", [&](const json& v) {
      c.synth.drift_slope_v_per_s = detail::parse_range(v, "synth.drift_slope_v_per_s");
    });
    y.reject_unknown();
  });
  top.get_with("io", [&](const json& s) {
    detail::Section o(s, "io");
    o.get("input", c.io.input);
    o.get("output", c.io.output);
    o.get("out_dir", c.io.out_dir);
    o.get("corpus_dir", c.io.corpus_dir);
    o.get("report", c.io.report);
    o.get("diagnostics_dir", c.io.diagnostics_dir);
    o.get("drift_spec", c.io.drift_spec);
    o.get("reference", c.io.reference);
    o.get("events", c.io.events);
    o.get("blinks_out", c.io.blinks_out);
    o.get("train_input", c.io.train_input);
    o.get("train_reference", c.io.train_reference);
    o.get("method", c.io.method);
    o.get("methods", c.io.methods);
    o.reject_unknown();
  });
  top.reject_unknown();
  return c;
}

inline json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(what + ": invalid JSON (" + e.what() + ")");
  }
}

inline ToolkitConfig load_config(const std::filesystem::path& path, ToolkitConfig base = {}) {
  return config_from_json(parse_json_text(read_text(path), path.string()), std::move(base));
}

// ---- drift specs ----

inline json to_json(const DriftSpec& d) {
  json sins = json::array();
  for (const auto& s : d.sinusoids) {
    sins.push_back({{"amplitude_v", s.amplitude_v}, {"freq_hz", s.freq_hz}, {"phase_rad", s.phase_rad}});
  }
  return json{{"linear_slope_v_per_s", d.linear_slope_v_per_s}, {"sinusoids", sins}, {"seed", d.seed}};
}

inline DriftSpec drift_spec_from_json(const json& j) {
  DriftSpec d;
  detail::Section s(j, "drift");
  s.get("linear_slope_v_per_s", d.linear_slope_v_per_s);
  s.get("seed", d.seed);
  s.get_with("sinusoids", [&](const json& arr) {
    if (!arr.is_array()) throw std::invalid_argument("drift: 'sinusoids' must be an array");
    for (const auto& e : arr) {
      Sinusoid sin;
      detail::Section q(e, "drift.sinusoids[]");
      q.get("amplitude_v", sin.amplitude_v);
      q.get("freq_hz", sin.freq_hz);
      q.get("phase_rad", sin.phase_rad);
      q.reject_unknown();
      d.sinusoids.push_back(sin);
    }
  });
  s.reject_unknown();
  d.validate();
  return d;
}

// ---- reports ----

inline json to_json(const GazeRegression& g) {
  return json{{"slope_deg_per_v", g.slope_deg_per_v}, {"intercept_deg", g.intercept_deg}, {"r_squared", g.r_squared}};
}

inline json to_json(const EvalReport& r) {
  json rows = json::array();
  for (const auto& t : r.per_target) {
    rows.push_back({{"target_id", t.target_id}, {"mean_abs_error_deg", t.mean_abs_error_deg}, {"count", t.count}});
  }
  return json{{"method", r.method},
              {"per_target", rows},
              {"overall_mean_deg", r.overall_mean_deg},
              {"overall_std_deg", r.overall_std_deg},
              {"per_target_mean_deg", r.per_target_mean_deg},
              {"evaluated", r.evaluated},
              {"skipped", r.skipped}};
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace fgd
