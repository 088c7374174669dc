#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace lhunt {

/// Primes p with |log(p/rho)| <= 1, together with the triangular weights
/// w_p = 1 - |log(p/rho)| and the damping factors p^{-sigma0}.
///
/// All three vectors are index-aligned and ordered by ascending p.
struct PrimeWindow {
  double rho = 0.0;
  double sigma0 = 0.0;
  std::vector<std::uint64_t> primes;
  std::vector<double> weights;
  std::vector<double> inv_powers;

  std::size_t size() const noexcept { return primes.size(); }
  bool empty() const noexcept { return primes.empty(); }
};

/// All primes <= limit in ascending order. Flat odd-only sieve up to 1e7,
/// segmented above. Returns an empty list for limit < 2.
std::vector<std::uint64_t> sieve_primes(std::uint64_t limit);

/// Primes in [lo, hi] by segmented sieve.
std::vector<std::uint64_t> primes_in_range(std::uint64_t lo, std::uint64_t hi);

bool is_prime(std::uint64_t n);

/// 1 - |log(p/rho)| clamped to [0, 1].
double montgomery_weight(double p, double rho);

/// Throws Errc::window_too_small for rho < 3, Errc::invalid_argument when
/// sigma0 is outside (1/2, 1).
PrimeWindow build_window(double rho, double sigma0);

/// Offset logarithmic integral: the integral of 1/log t over [2, x].
double log_integral(double x);

}  // namespace lhunt
