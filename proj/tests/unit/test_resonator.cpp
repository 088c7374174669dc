#include <cmath>
#include <numbers>

#include "doctest.h"
#include "lhunt/error.hpp"
#include "lhunt/lfun_catalog.hpp"
#include "lhunt/resonator.hpp"

using namespace lhunt;

namespace {
constexpr double kPi = std::numbers::pi;

ResonanceSystem two_spec_system(double rho, std::vector<double> thetas) {
  const std::vector<LFunctionSpec> specs{builtin_zeta(), builtin_dirichlet(chi4())};
  const double c0 = 0.5 * c_sigma(0.75);
  auto window = build_window(rho, 0.75);
  const double cap = denseness_capacity(window, specs, c0);
  return ResonanceSystem::make(std::move(window), specs, default_targets(thetas, cap), c0);
}
}  // namespace

TEST_CASE("C_sigma closed form") { CHECK(c_sigma(0.75) == doctest::Approx(1.0052191961463417).epsilon(1e-13)); }

TEST_CASE("resonator sums at rho = 10") {
  const auto w = build_window(10.0, 0.75);
  CHECK(resonator_sum(builtin_zeta(), w, 0.75, 0.0).real() == doctest::Approx(0.6101085044594625).epsilon(1e-13));
  CHECK(resonator_sum(builtin_dirichlet(chi4()), w, 0.75, 0.0).real() ==
        doctest::Approx(-0.0989569933022315).epsilon(1e-12));
}

TEST_CASE("denseness solve and rounding") {
  for (double rho : {50.0, 100.0, 200.0}) {
    const auto sys = two_spec_system(rho, {0.0, 0.0});
    const auto dense = solve_denseness(sys);
    CHECK(dense.residual <= 1e-8 * sys.capacity);
    for (const auto& z : dense.z) CHECK(std::abs(z) <= 1.0 + 1e-12);
    const auto r = good_rounding(sys, dense);
    CHECK(r.interior_after_pivot <= 3);
    for (const auto& z : r.z) CHECK(std::abs(std::abs(z) - 1.0) <= 1e-12);
    CHECK(sys.residual(r.z) <= r.rounding_bound * (1 + 1e-9) + 1e-15);
  }
}

TEST_CASE("zero targets give the zero assignment") {
  auto sys = two_spec_system(50.0, {0.0, 0.0});
  sys.targets.assign(sys.k(), cplx(0.0));
  const auto dense = solve_denseness(sys);
  CHECK(dense.residual == 0.0);
}

TEST_CASE("rounding keeps an already unimodular assignment") {
  const auto sys = two_spec_system(50.0, {1.0, 2.0});
  std::vector<cplx> z(sys.n());
  for (std::size_t p = 0; p < z.size(); ++p) z[p] = std::polar(1.0, 0.3 * static_cast<double>(p));
  const auto start = PhaseAssignment::from_points(z, sys.residual(z));
  const auto r = good_rounding(sys, start);
  for (std::size_t p = 0; p < z.size(); ++p) CHECK(std::abs(r.z[p] - z[p]) < 1e-12);
}

TEST_CASE("targets beyond capacity are rejected") {
  const std::vector<LFunctionSpec> specs{builtin_zeta()};
  auto window = build_window(50.0, 0.75);
  const double c0 = 0.5 * c_sigma(0.75);
  const double cap = denseness_capacity(window, specs, c0);
  CHECK_THROWS(ResonanceSystem::make(window, specs, {cplx(2.0 * cap)}, c0));
  CHECK_THROWS(ResonanceSystem::make(window, specs, {cplx(0.1)}, 2.0 * c_sigma(0.75)));
}

TEST_CASE("fejer integral oracles") {
  CHECK(fejer_smoothing_check(1.0, 0.3, 10.0) == doctest::Approx(0.642660656631252277).epsilon(1e-10));
  CHECK(fejer_smoothing_check(5.0, 2.0, 100.0) == doctest::Approx(1.408211659851191639).epsilon(1e-10));
  CHECK(fejer_smoothing_check(40.0, 1.0, 3.5) == doctest::Approx(1.545504938692408364).epsilon(1e-10));
  CHECK(std::abs(fejer_smoothing_check(1e4, kPi / 2, 50.0) - kPi / 2) < 1e-3);
}

TEST_CASE("prime power tail") {
  CHECK(prime_power_tail(builtin_zeta(), 100.0, 0.75) == doctest::Approx(0.085868).epsilon(1e-4));
}
