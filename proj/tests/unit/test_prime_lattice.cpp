#include <cmath>
#include <random>

#include "doctest.h"
#include "lhunt/error.hpp"
#include "lhunt/prime_lattice.hpp"

using namespace lhunt;

namespace {

// Ramanujan's series for li(x), summed in long double.
long double ramanujan_li(long double x) {
  const long double gamma = 0.57721566490153286060651209008240243L;
  const long double l = std::log(x);
  long double sum = 0.0L, inner = 0.0L, term = 1.0L;
  for (int n = 1; n < 400; ++n) {
    term *= l / n;  // l^n / n!
    if ((n - 1) % 2 == 0) inner += 1.0L / n;  // adds 1/(2k+1) once per new k
    const long double t = ((n % 2) ? 1.0L : -1.0L) * term / std::pow(2.0L, n - 1) * inner;
    sum += t;
    if (n > 2 * l && std::fabs(t) < 1e-30L) break;
  }
  return gamma + std::log(l) + std::sqrt(x) * sum;
}

const long double kLi2 = 1.045163780117492784844588889194613136522615578151L;

}  // namespace

TEST_CASE("sieve small cases and prime count at one million") {
  CHECK(sieve_primes(10) == std::vector<std::uint64_t>{2, 3, 5, 7});
  CHECK(sieve_primes(2) == std::vector<std::uint64_t>{2});
  CHECK(sieve_primes(1).empty());
  CHECK(sieve_primes(1000000).size() == 78498);
}

TEST_CASE("segmented range sieve agrees with the flat sieve") {
  const auto all = sieve_primes(200000);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    const std::uint64_t lo = rng() % 150000, hi = lo + rng() % 50000;
    std::vector<std::uint64_t> expect;
    for (auto p : all)
      if (p >= lo && p <= hi) expect.push_back(p);
    CHECK(primes_in_range(lo, hi) == expect);
  }
  // Past the flat-sieve cutoff.
  const auto big = primes_in_range(10000000, 10000200);
  for (auto p : big) CHECK(is_prime(p));
  CHECK(big.front() == 10000019);
}

TEST_CASE("window at rho=10") {
  const auto w = build_window(10.0, 0.75);
  CHECK(w.primes == std::vector<std::uint64_t>{5, 7, 11, 13, 17, 19, 23});
  CHECK(w.weights[2] == doctest::Approx(0.9046898201956751).epsilon(1e-15));
  CHECK(w.inv_powers[0] == doctest::Approx(std::pow(5.0, -0.75)).epsilon(1e-15));
}

TEST_CASE("weight vanishes at the edge of the support") {
  CHECK(montgomery_weight(std::exp(1.0) * 7.0, 7.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(montgomery_weight(100.0, 7.0) == 0.0);
  CHECK(montgomery_weight(7.0, 7.0) == 1.0);
}

TEST_CASE("window matches a naive filter for random rho") {
  std::mt19937_64 rng(11);
  const auto all = sieve_primes(100000);
  for (int i = 0; i < 50; ++i) {
    const double rho = 3.0 + (rng() % 30000) * 1.1;
    const auto w = build_window(rho, 0.6);
    std::vector<std::uint64_t> expect;
    for (auto p : all)
      if (std::abs(std::log(static_cast<double>(p) / rho)) <= 1.0) expect.push_back(p);
    REQUIRE(w.primes == expect);
    for (std::size_t k = 0; k < w.size(); ++k) {
      CHECK(w.weights[k] >= 0.0);
      CHECK(w.weights[k] <= 1.0);
    }
  }
}

TEST_CASE("window argument errors") {
  CHECK_THROWS_AS(build_window(2.5, 0.75), Error);
  try {
    build_window(2.5, 0.75);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::window_too_small);
  }
  CHECK_THROWS_AS(build_window(10.0, 0.5), Error);
  CHECK_THROWS_AS(build_window(10.0, 1.0), Error);
}

TEST_CASE("offset logarithmic integral against frozen values") {
  CHECK(log_integral(2.0) == 0.0);
  CHECK(log_integral(100.0) == doctest::Approx(29.080977803962137).epsilon(1e-13));
  CHECK(log_integral(1000.0) == doctest::Approx(176.56449421003473).epsilon(1e-13));
  CHECK(log_integral(1e6) == doctest::Approx(78626.50399568206).epsilon(1e-13));
  CHECK_THROWS_AS(log_integral(1.5), Error);
}

TEST_CASE("offset logarithmic integral against the Ramanujan series") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 40; ++i) {
    const double x = std::exp(std::log(2.5) + (rng() >> 11) * 0x1.0p-53 * (std::log(1e7) - std::log(2.5)));
    const double oracle = static_cast<double>(ramanujan_li(x) - kLi2);
    CHECK(log_integral(x) == doctest::Approx(oracle).epsilon(1e-11));
  }
}
