#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "lhunt/dirichlet_series.hpp"
#include "lhunt/lfun_catalog.hpp"

namespace lhunt {

/// One point of a branch-tracked evaluation of log L along sigma + it.
struct EvalPoint {
  double sigma = 0.0;
  double t = 0.0;
  cplx value;
  cplx log_value;
  /// Bound on the backend's truncation plus roundoff error in `value`;
  /// +infinity for estimate-only backends.
  double abs_err_bound = 0.0;
  bool certified = true;
};

struct EvalResult {
  cplx value;
  double abs_err_bound = 0.0;
};

/// Riemann zeta by Euler-Maclaurin with N = max(20, |t|/pi) terms.
/// Requires Re s >= 0.4 and |s - 1| >= 1e-6 (Errc::near_pole).
cplx zeta(cplx s);

/// Hurwitz zeta sum_{n>=0} (n+a)^{-s}, a in (0, 1].
cplx hurwitz_zeta(cplx s, double a);

/// L(s, chi) for a nonprincipal character, via the residue-class split
/// q^{-s} sum_a chi(a) zeta(s, a/q). Finite at s = 1.
cplx dirichlet_l(cplx s, const DirichletCharacter& chi);

/// log L(s) from the Euler product truncated at primes <= P, summing the
/// principal logs of the local factors. Needs Re s > 1 for meaningful output.
cplx log_euler_product(const LFunctionSpec& spec, cplx s, std::uint64_t prime_bound);

/// Reusable evaluator for one L-function. Precomputes the Dirichlet-series
/// table needed up to height t_max and its amplitudes at `sigma`; values at
/// other abscissae remain available at a higher per-term cost.
class LEvaluator {
 public:
  LEvaluator(const LFunctionSpec& spec, double sigma, double t_max);

  const LFunctionSpec& spec() const noexcept { return spec_; }
  double sigma() const noexcept { return sigma_; }
  double t_max() const noexcept { return t_max_; }

  EvalResult value(cplx s) const;

  /// Values at sigma() + i(t0 + g h), g = 0..count-1, computed in parallel.
  std::vector<EvalResult> value_grid(double t0, double h, std::size_t count) const;

  /// Branch-tracked log L along the given ordered heights at sigma().
  /// Anchored at Re s = 3 and continued horizontally, then vertically; each
  /// step keeps |delta log L| < pi/2, bisecting as needed. Throws
  /// Errc::zero_crossing_suspected when |L| < 1e-12 or bisection stalls.
  std::vector<EvalPoint> log_branch(std::span<const double> t_grid) const;

 private:
  struct Residue {
    std::uint32_t a;
    cplx chi;
  };

  EvalResult series_value(cplx s) const;
  EvalResult estimate_value(cplx s) const;
  cplx estimate_log(cplx s) const;
  std::size_t terms_per_residue(double t) const;
  cplx anchor_log(double t) const;

  LFunctionSpec spec_;
  double sigma_;
  double t_max_;
  std::uint32_t q_ = 1;
  bool pole_ = false;
  std::vector<Residue> residues_;
  std::shared_ptr<const DirichletSeries> series_;
  // Euler-product backend
  std::vector<std::uint64_t> primes_;
  std::vector<std::vector<cplx>> roots_;
};

/// Convenience wrapper: builds an evaluator sized for t_grid.
std::vector<EvalPoint> log_l_branch(const LFunctionSpec& spec, double sigma0, std::span<const double> t_grid);

}  // namespace lhunt
