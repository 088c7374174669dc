#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "lhunt/diophantine.hpp"
#include "lhunt/error.hpp"

using namespace lhunt;

namespace {
constexpr double kPi = std::numbers::pi;

DiophantineInstance single(double lambda, double alpha, double t1, double t2) {
  DiophantineInstance d;
  d.lambdas = {lambda};
  d.alphas = {alpha};
  d.deltas = {1.0};
  d.t1 = t1;
  d.t2 = t2;
  return d;
}

// min over nonzero u in [-M, M]^n of |sum u_j lambda_j|, by plain enumeration.
double brute_lambda(const std::vector<double>& lambdas, int M) {
  const std::size_t n = lambdas.size();
  std::vector<int> u(n, -M);
  double best = INFINITY;
  for (;;) {
    bool nonzero = false;
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      s += u[j] * lambdas[j];
      nonzero |= u[j] != 0;
    }
    if (nonzero) best = std::min(best, std::abs(s));
    std::size_t j = 0;
    while (j < n && u[j] == M) u[j++] = -M;
    if (j == n) break;
    ++u[j];
  }
  return best;
}
}  // namespace

TEST_CASE("nearest integer distance") {
  CHECK(nearest_int_dist(2.3) == doctest::Approx(0.3));
  CHECK(nearest_int_dist(-0.5) == 0.5);
  CHECK(nearest_int_dist(7.0) == 0.0);
}

TEST_CASE("objective") {
  CHECK(objective(single(1.0, 0.0, 0, 1), 0.0) == 0.0);
  CHECK(objective(single(1.0, 0.5, 0, 1), 0.0) == 0.25);
  DiophantineInstance d;
  d.lambdas = {std::log(2.0) / (2 * kPi), std::log(3.0) / (2 * kPi)};
  d.alphas = {0.0, 0.0};
  d.deltas = {1.0, 1.0};
  d.t1 = 0;
  d.t2 = 10;
  const double t = 2 * kPi / std::log(6.0);
  const double a = d.lambdas[0] * t, b = d.lambdas[1] * t;
  const double want = std::pow(a - std::nearbyint(a), 2) + std::pow(b - std::nearbyint(b), 2);
  CHECK(objective(d, t) == doctest::Approx(want).epsilon(1e-14));
}

TEST_CASE("Lambda lower bound examples") {
  CHECK(lambda_lower_bound({2}, 1).value() == doctest::Approx(std::log(1.5)));
  CHECK(lambda_lower_bound({2, 3}, 1).value() == doctest::Approx(std::log(7.0 / 6.0)));
  CHECK(std::isinf(lambda_lower_bound({2}, 0).log_value));
  CHECK(exact_lambda({std::log(2.0), std::log(3.0)}, 1) == doctest::Approx(std::log(1.5)));
}

TEST_CASE("exact Lambda matches enumeration and dominates the product bound") {
  std::mt19937_64 rng(5);
  const std::vector<std::uint64_t> pool{2, 3, 5, 7, 11, 13, 17};
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + rng() % 5;
    const int M = 1 + static_cast<int>(rng() % 3);
    std::vector<std::uint64_t> primes(pool.begin(), pool.begin() + static_cast<long>(n));
    std::vector<double> lambdas;
    for (auto p : primes) lambdas.push_back(std::log(static_cast<double>(p)));
    const double exact = exact_lambda(lambdas, M);
    CHECK(exact == doctest::Approx(brute_lambda(lambdas, M)).epsilon(1e-12));
    CHECK(lambda_lower_bound(primes, M).value() <= exact * (1 + 1e-12));
  }
}

TEST_CASE("chen bound") {
  auto d = single(1.0, 0.3, 0.0, 1e12);
  const auto cert = chen_bound(d, 1.0);
  CHECK(cert.bound == doctest::Approx(0.125).epsilon(1e-6));
  CHECK_THROWS(chen_bound(d, 0.0));

  DiophantineInstance w;
  w.lambdas = {std::log(2.0) / (2 * kPi), std::log(3.0) / (2 * kPi)};
  w.alphas = {0.37, 0.81};
  w.deltas = {1.0, 1.0};
  w.t1 = 0;
  w.t2 = 1e4;
  const auto lam = lambda_lower_bound({2, 3}, 1).scaled(1.0 / (2 * kPi));
  const auto c = chen_bound(w, lam);
  CHECK(grid_minimum(w, 1e-3 / w.lambdas[1]).value <= c.bound);
  CHECK(certify(w, lam, 0.05 / w.lambdas[1], 60).holds());
}

TEST_CASE("search examples") {
  const double lam = std::log(2.0) / (2 * kPi);
  const auto r = search_t(single(lam, 0.5, 0.0, 4 * kPi / std::log(2.0)), 0.05 / lam, 80);
  CHECK(r.t == doctest::Approx(kPi / std::log(2.0)).epsilon(1e-6));
  CHECK(r.value < 1e-12);

  DiophantineInstance z;
  z.lambdas = {lam, std::log(3.0) / (2 * kPi)};
  z.alphas = {0.0, 0.0};
  z.deltas = {0.5, 0.4};
  z.t1 = 0.0;
  z.t2 = 100.0;
  const auto r0 = search_t(z, 0.01, 60);
  CHECK(r0.t == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(r0.value < 1e-15);

  CHECK_THROWS(search_t(single(lam, 0.5, 5.0, 5.0), 0.01, 10));
  CHECK_THROWS(search_t(single(lam, 0.5, 0.0, 10.0), 1.0 / lam, 10));
}

TEST_CASE("refinement never worsens the coarse minimum, and repeats exactly") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  DiophantineInstance d;
  for (double p : {2.0, 3.0, 5.0, 7.0, 11.0}) {
    d.lambdas.push_back(std::log(p) / (2 * kPi));
    d.alphas.push_back(u(rng));
    d.deltas.push_back(std::pow(p, -0.75));
  }
  d.t1 = 1000;
  d.t2 = 6000;
  const auto a = search_t(d, 0.05 / d.lambdas.back(), 60);
  const auto b = search_t(d, 0.05 / d.lambdas.back(), 60);
  CHECK(a.value <= a.coarse_value);
  CHECK(a.t == b.t);
  CHECK(a.value == b.value);
  CHECK(a.t >= d.t1);
  CHECK(a.t <= d.t2);
}
