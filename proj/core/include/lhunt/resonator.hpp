#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "lhunt/lfun_catalog.hpp"
#include "lhunt/prime_lattice.hpp"

namespace lhunt {

/// (2 sinh((1 - sigma)/2) / (1 - sigma))^2, the sharp constant in the
/// weighted prime sum sum |a(p)|^2 w_p p^{-sigma} ~ C kappa rho^{1-sigma}/log rho.
double c_sigma(double sigma0);

/// (c0/k) (min kappa / max r) rho^{1-sigma0} / log rho.
double denseness_capacity(const PrimeWindow& window, const std::vector<LFunctionSpec>& specs, double c0);

/// The linear system g_j(z) = xi_j over the polydisk |z_p| <= 1, where
/// g_j(z) = sum_p a_j(p) w_p p^{-sigma0} z_p.
struct ResonanceSystem {
  PrimeWindow window;
  std::vector<LFunctionSpec> specs;
  Eigen::MatrixXcd coeffs;  // k x n
  std::vector<cplx> targets;
  double capacity = 0.0;
  double c0 = 0.0;

  std::size_t k() const noexcept { return specs.size(); }
  std::size_t n() const noexcept { return window.size(); }

  /// Validates 0 < c0 < C_sigma0, coverage of the window, and
  /// |xi_j| <= capacity (up to 1e-12 relative slack).
  static ResonanceSystem make(PrimeWindow window, std::vector<LFunctionSpec> specs, std::vector<cplx> targets,
                              double c0);

  /// g(z), the k left-hand sides.
  std::vector<cplx> evaluate(const std::vector<cplx>& z) const;
  /// max_j |g_j(z) - xi_j|.
  double residual(const std::vector<cplx>& z) const;
  /// max over (j, p) of |a_j(p) w_p p^{-sigma0}|.
  double max_coefficient() const;
};

/// xi_j = e^{i theta_j} capacity / 2.
std::vector<cplx> default_targets(const std::vector<double>& thetas, double capacity);

/// Points z_p of the polydisk, index-aligned with the window primes.
struct PhaseAssignment {
  std::vector<cplx> z;
  /// Indices with |z_p| < 1 - 1e-9.
  std::vector<std::size_t> interior;
  /// theta_p with z_p = e^{-2 pi i theta_p}, in [0, 1); NaN where |z_p| < 1.
  std::vector<double> thetas;
  double residual = 0.0;
  std::size_t iterations = 0;

  // Filled by good_rounding.
  std::size_t interior_after_pivot = 0;
  std::vector<std::size_t> snapped;
  double residual_before_snap = 0.0;
  /// Explicit bound on the post-snap residual: pre-snap residual plus
  /// sum over snapped p of max_j |coeff_jp| (1 - |z_p|).
  double rounding_bound = 0.0;

  static PhaseAssignment from_points(std::vector<cplx> z, double residual);
};

struct DensenessOptions {
  std::size_t max_iterations = 100000;
  double tolerance_factor = 1e-8;  // residual target, relative to capacity
};

/// Finds z with |z_p| <= 1 and g_j(z) = xi_j: minimum-norm least squares,
/// then alternating projection between the affine solution set and the
/// polydisk. Throws Errc::targets_infeasible on non-convergence.
PhaseAssignment solve_denseness(const ResonanceSystem& system, const DensenessOptions& options = {});

/// Pivots interior coordinates to the unit circle along real null-space
/// directions of the active constraints until at most k+1 remain, then
/// snaps those to z/|z| (0 goes to 1).
PhaseAssignment good_rounding(const ResonanceSystem& system, const PhaseAssignment& start);

/// S(t) = sum_p a(p) w_p p^{-sigma0 - it}, ascending p, compensated.
cplx resonator_sum(const LFunctionSpec& spec, const PrimeWindow& window, double sigma0, double t);

/// Integral over [-tau, tau] of (sin(t/2)/t)^2 (1 + cos(theta + t log rho)).
double fejer_smoothing_check(double tau, double theta, double rho);

/// sum over p^k in [rho/e, e rho], k >= 2, of sum_j |nu_j(p)|^k / (k p^{k sigma0}).
double prime_power_tail(const LFunctionSpec& spec, double rho, double sigma0);

struct AsymptoticsRow {
  double rho = 0.0;
  double weighted_sum = 0.0;
  double ratio = 0.0;      // weighted_sum log rho / (kappa rho^{1-sigma0})
  double deviation = 0.0;  // |ratio - C_sigma0|
};

std::vector<AsymptoticsRow> capacity_asymptotics_check(const LFunctionSpec& spec, double sigma0,
                                                       const std::vector<double>& rho_list);

}  // namespace lhunt
