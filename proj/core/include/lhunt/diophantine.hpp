#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "lhunt/prime_lattice.hpp"

namespace lhunt {

/// ||x||, the distance from x to the nearest integer, in [0, 1/2].
double nearest_int_dist(double x);

/// Weighted simultaneous approximation problem
///   minimize sum_j delta_j ||lambda_j t - alpha_j||^2 over t in [t1, t2].
struct DiophantineInstance {
  std::vector<double> lambdas;
  std::vector<double> alphas;
  std::vector<double> deltas;
  double t1 = 0.0;
  double t2 = 0.0;
  int M = 1;

  /// n >= 1, equal lengths, t1 < t2, deltas > 0, M >= 1.
  void validate() const;
  std::size_t n() const noexcept { return lambdas.size(); }
  double delta_sum() const;

  /// lambda_p = log p / 2pi, alpha_p = thetas[i], delta_p = p^{-sigma0}.
  static DiophantineInstance from_window(const PrimeWindow& window, const std::vector<double>& thetas, double t1,
                                         double t2, int M);
};

double objective(const DiophantineInstance& inst, double t);

/// Lower bound on Lambda = min |sum u_j lambda_j| over nonzero integer u with
/// |u_j| <= M, kept as a logarithm because it underflows for real windows.
struct LambdaBound {
  double log_value = 0.0;  // -inf for a zero bound, +inf when no nonzero u exists

  double value() const;
  /// Bound for the rescaled frequencies lambda_j * factor.
  LambdaBound scaled(double factor) const;
};

/// log(1 + exp(-M sum log p)), valid for the frequencies lambda_p = log p.
/// Divide by 2pi (scaled(1/2pi)) for lambda_p = log p / 2pi.
LambdaBound lambda_lower_bound(const std::vector<std::uint64_t>& primes, int M);

/// Exact Lambda by meet-in-the-middle enumeration of u in [-M, M]^n.
/// Returns +inf when M = 0. Throws Errc::invalid_argument when either half
/// would exceed `max_half` combinations.
double exact_lambda(const std::vector<double>& lambdas, int M, std::size_t max_half = 2000000);

struct ChenCertificate {
  double Delta = 0.0;
  double Lambda_lower = 0.0;
  double log_Lambda_lower = 0.0;
  /// (Delta/4) sin^2(pi/(2(M+1))) + Delta M^n / (4 pi (t2 - t1) Lambda); may be +inf.
  double bound = 0.0;
  double achieved = 0.0;
  double argmin_t = 0.0;

  bool holds() const { return achieved <= bound + 1e-9 * Delta; }
};

/// Fills Delta, Lambda_lower and bound; `achieved` is left NaN.
/// Throws Errc::invalid_argument for a nonpositive Lambda.
ChenCertificate chen_bound(const DiophantineInstance& inst, double Lambda_lower);
ChenCertificate chen_bound(const DiophantineInstance& inst, LambdaBound Lambda_lower);

struct SearchResult {
  double t = 0.0;
  double value = 0.0;
  double coarse_t = 0.0;
  double coarse_value = 0.0;
  std::size_t grid_points = 0;
  std::size_t seeds = 0;
};

/// Coarse scan at grid_step, then golden-section polish of the best 32 local
/// minima on [t - step, t + step]. Deterministic; ties go to the smaller t.
/// Requires grid_step <= 1/(4 max lambda). Throws Errc::empty_range when
/// t1 >= t2.
SearchResult search_t(const DiophantineInstance& inst, double grid_step, int refine_iters);

/// Minimum of the objective over the exhaustive grid t1 + i h, i = 0..floor((t2-t1)/h).
SearchResult grid_minimum(const DiophantineInstance& inst, double h);

/// chen_bound plus a search_t run filling achieved and argmin_t.
ChenCertificate certify(const DiophantineInstance& inst, LambdaBound Lambda_lower, double grid_step,
                        int refine_iters);

}  // namespace lhunt
