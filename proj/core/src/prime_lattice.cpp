#include "lhunt/prime_lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "lhunt/error.hpp"

namespace lhunt {
namespace {

constexpr std::uint64_t kFlatSieveLimit = 10'000'000;
constexpr std::uint64_t kSegmentSpan = 1u << 18;

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

// Odd-only sieve: bit i stands for 2i+1.
std::vector<std::uint64_t> flat_sieve(std::uint64_t limit) {
  std::vector<std::uint64_t> out;
  if (limit < 2) return out;
  out.push_back(2);
  const std::uint64_t half = (limit - 1) / 2;  // odd numbers 3..limit
  std::vector<bool> composite(half + 1, false);
  for (std::uint64_t i = 1; i <= half; ++i) {
    if (composite[i]) continue;
    const std::uint64_t p = 2 * i + 1;
    out.push_back(p);
    if (p * p > limit) continue;
    for (std::uint64_t j = (p * p - 1) / 2; j <= half; j += p) composite[j] = true;
  }
  return out;
}

void sieve_segment(std::uint64_t lo, std::uint64_t hi, const std::vector<std::uint64_t>& base,
                   std::vector<std::uint64_t>& out) {
  // [lo, hi] inclusive, lo >= 2
  std::vector<char> mark(hi - lo + 1, 1);
  for (std::uint64_t p : base) {
    if (p * p > hi) break;
    std::uint64_t start = std::max(p * p, ((lo + p - 1) / p) * p);
    for (std::uint64_t m = start; m <= hi; m += p) mark[m - lo] = 0;
  }
  for (std::uint64_t i = 0; i < mark.size(); ++i)
    if (mark[i]) out.push_back(lo + i);
}

}  // namespace

std::vector<std::uint64_t> sieve_primes(std::uint64_t limit) {
  if (limit <= kFlatSieveLimit) return flat_sieve(limit);
  return primes_in_range(2, limit);
}

std::vector<std::uint64_t> primes_in_range(std::uint64_t lo, std::uint64_t hi) {
  std::vector<std::uint64_t> out;
  lo = std::max<std::uint64_t>(lo, 2);
  if (hi < lo) return out;
  const auto base = flat_sieve(isqrt(hi));
  for (std::uint64_t seg = lo; seg <= hi; seg += kSegmentSpan) {
    const std::uint64_t seg_hi = std::min(hi, seg + kSegmentSpan - 1);
    sieve_segment(seg, seg_hi, base, out);
    if (seg_hi == hi) break;
  }
  return out;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

double montgomery_weight(double p, double rho) {
  const double w = 1.0 - std::abs(std::log(p / rho));
  return std::clamp(w, 0.0, 1.0);
}

PrimeWindow build_window(double rho, double sigma0) {
  if (!(rho >= 3.0)) throw Error(Errc::window_too_small, "window too small: rho must be >= 3");
  if (!(sigma0 > 0.5 && sigma0 < 1.0))
    throw Error(Errc::invalid_argument, "sigma0 must lie in (1/2, 1)");

  const double e = std::numbers::e;
  const auto lo = static_cast<std::uint64_t>(std::floor(rho / e));
  const auto hi = static_cast<std::uint64_t>(std::ceil(rho * e)) + 1;

  PrimeWindow win;
  win.rho = rho;
  win.sigma0 = sigma0;
  for (std::uint64_t p : primes_in_range(lo > 1 ? lo - 1 : 2, hi)) {
    const double dp = static_cast<double>(p);
    if (std::abs(std::log(dp / rho)) > 1.0) continue;
    win.primes.push_back(p);
    win.weights.push_back(montgomery_weight(dp, rho));
    win.inv_powers.push_back(std::pow(dp, -sigma0));
  }
  return win;
}

double log_integral(double x) {
  if (!(x >= 2.0)) throw Error(Errc::below_lower_limit, "log_integral: below lower limit 2");
  if (x == 2.0) return 0.0;
  // Substituting t = e^u gives a smooth integrand e^u / u on [log 2, log x].
  auto f = [](double u) { return std::exp(u) / u; };
  double err = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, std::log(2.0), std::log(x),
                                                                       20, 1e-15, &err);
}

}  // namespace lhunt
