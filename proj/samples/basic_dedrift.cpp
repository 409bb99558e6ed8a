// Synthesize one drifting trial, de-drift it with every method and print the
// residual drift error and gaze error of each.
#include <cmath>
#include <cstdio>

#include "fgd/fgd.hpp"

int main() {
  const fgd::TrialScript script = fgd::default_trial_script();
  const fgd::GroundTruth clean = fgd::synthesize(script, 250.0, 0.2e-3, 0.0, 7);

  fgd::DriftSpec drift;
  drift.linear_slope_v_per_s = 4e-4;
  drift.sinusoids = {{0.02, 0.03, 0.5}, {0.01, 0.07, 2.0}};
  const fgd::GroundTruth truth = fgd::inject_drift(clean, drift);

  const fgd::FgdResult fgd_result = fgd::fgd_pipeline(truth.raw);
  std::printf("detected %zu of %zu saccades\n", fgd_result.events.size(), truth.events.size());

  for (auto id : {fgd::MethodId::fgd, fgd::MethodId::wavelet, fgd::MethodId::poly, fgd::MethodId::highpass}) {
    const fgd::MethodResult r = fgd::run_method(id, truth.raw);
    double se = 0.0;
    for (std::size_t k = 0; k < r.trend.size(); ++k) {
      const double e = r.trend[k] - truth.drift[k] - (r.trend[0] - truth.drift[0]);
      se += e * e;
    }
    const fgd::GazeRegression reg = fgd::fit_regression(r.dedrifted, truth.gaze);
    const auto errs = fgd::saccade_errors(fgd::predict_gaze(r.dedrifted, reg), truth.gaze,
                                          fgd::as_saccade_events(truth.events));
    double mean_abs = 0.0;
    for (const auto& e : errs.errors) mean_abs += std::abs(e.epsilon_deg);
    mean_abs /= static_cast<double>(errs.errors.size());
    std::printf("%-9s trend rms error %.3f mV   mean |eps| %.3f deg   r2 %.4f\n", fgd::to_string(id),
                1e3 * std::sqrt(se / static_cast<double>(r.trend.size())), mean_abs, reg.r_squared);
  }
}
