#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lhunt/diophantine.hpp"
#include "lhunt/lfun_catalog.hpp"
#include "lhunt/prime_lattice.hpp"
#include "lhunt/resonator.hpp"

namespace lhunt {

/// Parameters of one hunt. The text form is `key = value` per line, `#`
/// starts a comment, lists are comma separated and angles accept `pi`
/// multiples such as `-pi/2` or `0.5*pi`.
struct HuntConfig {
  double sigma0 = 0.75;
  double T = 1e6;
  std::vector<double> theta_targets{0.0};
  int M = 1;
  double c = 3.0;
  double mu = 0.9;
  std::vector<std::string> specs{"zeta"};
  std::size_t baseline_samples = 10000;
  std::uint64_t seed = 1;
  std::optional<double> rho_override;
  std::size_t grid_points = 4096;
  double dio_grid_factor = 0.05;  // Diophantine coarse step = factor / max lambda
  int refine_iters = 60;
  double c0_factor = 0.5;  // c0 = c0_factor * C_sigma0

  /// Throws Errc::parse_error on unknown keys or malformed values.
  static HuntConfig parse(std::istream& in);
  static HuntConfig load(const std::string& path);
  void validate() const;

  bool operator==(const HuntConfig&) const = default;
};

struct HuntPlan {
  double rho_coupled = 0.0;  // log T / (2 M c)
  double rho = 0.0;          // value actually used
  bool rho_overridden = false;
  bool coupling_ok = false;  // c mu > 2 sinh 1
  double tau = 0.0;          // (log T)^{(1+sigma0)/2} (log log T)^{1/2}
  double target_magnitude = 0.0;  // (log T)^{1-sigma0} / log log T
  double c0 = 0.0;
  std::vector<LFunctionSpec> specs;
  ResonanceSystem system;
};

/// Throws Errc::window_too_small ("T too small for chosen M, c") when the
/// coupled rho is below 3 and no override is given.
HuntPlan plan(const HuntConfig& config);

double hunt_tau(double T, double sigma0);

struct SpecOutcome {
  std::string name;
  double theta = 0.0;
  bool certified = true;
  double t_j = 0.0;
  double achieved = 0.0;  // Re e^{-i theta} log L(sigma0 + i t_j)
  std::complex<double> log_value;
  double abs_value = 0.0;
  double abs_err_bound = 0.0;
  std::complex<double> resonator;  // S_j(t0)
  double resonator_aligned = 0.0;  // Re e^{-i theta} S_j(t0)
  double resonator_check = 0.0;    // |brute force - resonator_aligned|
  double ideal_aligned = 0.0;      // Re e^{-i theta} g_j(z') with exact alignment
  // Baseline: Re e^{-i theta} log L and |L| at random heights in [T, 2T].
  double baseline_percentile = 0.0;
  double baseline_q01 = 0.0, baseline_q05 = 0.0, baseline_q50 = 0.0, baseline_q95 = 0.0, baseline_q99 = 0.0;
  double abs_percentile = 0.0;
  double baseline_abs_q01 = 0.0, baseline_abs_q05 = 0.0;
  // Smoothing check: window maximum against half the aligned resonator.
  double smoothing_error_term = 0.0;  // rho (tau + log t0) / tau^2
  double smoothing_slack = 0.0;       // needed multiple of the error term, >= 0

  bool operator==(const SpecOutcome&) const = default;
};

struct HuntReport {
  HuntConfig config;
  // plan
  double rho_coupled = 0.0, rho = 0.0, tau = 0.0, target_magnitude = 0.0, c0 = 0.0, capacity = 0.0;
  bool rho_overridden = false, coupling_ok = false;
  std::size_t window_size = 0;
  // denseness and rounding
  double denseness_residual = 0.0;
  std::size_t denseness_iterations = 0;
  std::size_t interior_after_pivot = 0;
  std::size_t snapped = 0;
  double rounding_residual = 0.0;
  double rounding_bound = 0.0;
  // Diophantine stage
  double dio_grid_step = 0.0;
  double t0 = 0.0;
  double dio_objective = 0.0;
  double dio_coarse_objective = 0.0;
  double chen_Delta = 0.0, chen_log_Lambda = 0.0, chen_bound = 0.0;
  bool chen_holds = false;
  // window
  int window_shifts = 0;
  double window_center = 0.0;
  double max_pairwise = 0.0;
  bool window_ok = false;
  std::vector<SpecOutcome> specs;

  bool operator==(const HuntReport&) const = default;
};

using ProgressFn = std::function<void(const std::string&)>;

HuntReport run_hunt(const HuntConfig& config, const ProgressFn& progress = {});

struct SmoothingRow {
  double t0 = 0.0;
  double window_max = 0.0;
  double half_resonator = 0.0;
  double error_term = 0.0;
  double slack = 0.0;  // smallest s >= 0 with window_max >= half_resonator - s * error_term
  bool holds = false;  // slack <= 10
};

/// Smoothing inequality around t0 for target angle theta.
SmoothingRow verify_smoothing_bound(const LFunctionSpec& spec, const HuntConfig& config, double t0, double theta,
                                    double rho);

}  // namespace lhunt
