#include "lhunt/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "lhunt/diophantine.hpp"
#include "lhunt/error.hpp"
#include "lhunt/hunt.hpp"
#include "lhunt/lfun_catalog.hpp"
#include "lhunt/resonator.hpp"

namespace lhunt {

namespace {

constexpr double kPi = std::numbers::pi;

double uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

template <class... Args>
std::string fmt(Args&&... args) {
  std::ostringstream os;
  os.precision(6);
  (os << ... << args);
  return os.str();
}

}  // namespace

bool SuiteResult::passed() const {
  return !lines.empty() && std::all_of(lines.begin(), lines.end(), [](const CheckLine& l) { return l.passed; });
}

SuiteResult verify_chen(int trials, std::uint64_t seed) {
  static const std::uint64_t small_primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29};
  SuiteResult out{"chen", {}};
  std::mt19937_64 rng(seed);
  for (int trial = 0; trial < trials; ++trial) {
    std::vector<std::uint64_t> pool(std::begin(small_primes), std::end(small_primes));
    std::shuffle(pool.begin(), pool.end(), rng);
    const std::size_t n = 1 + rng() % 6;
    std::vector<std::uint64_t> primes(pool.begin(), pool.begin() + static_cast<long>(n));
    std::sort(primes.begin(), primes.end());

    DiophantineInstance inst;
    inst.M = 1 + static_cast<int>(rng() % 3);
    inst.t1 = 1e4 * uniform(rng);
    inst.t2 = inst.t1 + 1e3 + 2e3 * uniform(rng);
    for (auto p : primes) {
      inst.lambdas.push_back(std::log(static_cast<double>(p)) / (2.0 * kPi));
      inst.alphas.push_back(uniform(rng));
      inst.deltas.push_back(0.1 + 0.9 * uniform(rng));
    }
    const auto lower = lambda_lower_bound(primes, inst.M).scaled(1.0 / (2.0 * kPi));
    const double exact = exact_lambda(inst.lambdas, inst.M);
    LambdaBound lam = lower;
    if (std::log(exact) > lam.log_value) lam.log_value = std::log(exact);
    auto cert = chen_bound(inst, lam);
    const double max_lambda = *std::max_element(inst.lambdas.begin(), inst.lambdas.end());
    const auto oracle = grid_minimum(inst, 1e-3 / max_lambda);
    cert.achieved = oracle.value;
    cert.argmin_t = oracle.t;
    const bool lower_ok = lower.value() <= exact * (1.0 + 1e-12);
    out.lines.push_back({fmt("trial ", trial, " n=", n, " M=", inst.M), cert.holds() && lower_ok,
                         fmt("inf=", cert.achieved, " bound=", cert.bound, " Lambda=", exact,
                             lower_ok ? "" : " product bound exceeds exact Lambda")});
  }
  return out;
}

SuiteResult verify_denseness(int trials, std::uint64_t seed) {
  SuiteResult out{"denseness", {}};
  std::mt19937_64 rng(seed);
  const std::vector<LFunctionSpec> specs{builtin_zeta(), builtin_dirichlet(chi4())};
  const double sigma0 = 0.75;
  const double c0 = 0.5 * c_sigma(sigma0);
  for (int trial = 0; trial < trials; ++trial) {
    for (double rho : {50.0, 100.0, 200.0}) {
      std::vector<double> thetas(specs.size(), 0.0);
      if (trial > 0)
        for (auto& th : thetas) th = 2.0 * kPi * uniform(rng);
      auto window = build_window(rho, sigma0);
      const double cap = denseness_capacity(window, specs, c0);
      const auto sys = ResonanceSystem::make(std::move(window), specs, default_targets(thetas, cap), c0);
      const auto dense = solve_denseness(sys);
      double zmax = 0.0;
      for (const auto& z : dense.z) zmax = std::max(zmax, std::abs(z));
      const bool solve_ok = dense.residual <= 1e-8 * sys.capacity && zmax <= 1.0 + 1e-12;
      out.lines.push_back({fmt("solve trial ", trial, " rho=", rho), solve_ok,
                           fmt("residual/capacity=", dense.residual / sys.capacity, " max|z|=", zmax,
                               " iterations=", dense.iterations)});

      const auto r = good_rounding(sys, dense);
      double snapped_max = 0.0;
      for (auto idx : r.snapped)
        snapped_max = std::max(snapped_max, sys.coeffs.col(static_cast<Eigen::Index>(idx)).cwiseAbs().maxCoeff());
      const double recomputed = sys.residual(r.z);
      const double k1_bound = static_cast<double>(sys.k() + 1) * snapped_max + 1e-8 * sys.capacity;
      const bool round_ok = r.interior_after_pivot <= sys.k() + 1 && recomputed <= k1_bound &&
                            recomputed <= r.rounding_bound * (1.0 + 1e-9) + 1e-15;
      out.lines.push_back({fmt("rounding trial ", trial, " rho=", rho), round_ok,
                           fmt("interior=", r.interior_after_pivot, " residual=", recomputed,
                               " bound=", r.rounding_bound, " (k+1)max=", k1_bound)});
    }
  }
  return out;
}

SuiteResult verify_smoothing(int trials, std::uint64_t seed) {
  SuiteResult out{"smoothing", {}};
  std::mt19937_64 rng(seed);
  for (int trial = 0; trial < trials; ++trial) {
    const double tau = std::exp(std::log(0.1) + uniform(rng) * std::log(1e4));
    const double theta = 2.0 * kPi * uniform(rng);
    // The pi/2 bound needs log rho >= 1.
    const double rho = std::exp(std::log(3.0) + uniform(rng) * (std::log(1e6) - std::log(3.0)));
    const double v = fejer_smoothing_check(tau, theta, rho);
    out.lines.push_back({fmt("fejer trial ", trial), v <= kPi / 2.0 + 1e-6,
                         fmt("tau=", tau, " theta=", theta, " rho=", rho, " integral=", v)});
  }
  const double limit = fejer_smoothing_check(1e4, kPi / 2.0, 50.0);
  out.lines.push_back({"fejer large-tau limit", std::abs(limit - kPi / 2.0) <= 1e-3, fmt("integral=", limit)});

  HuntConfig cfg;
  cfg.grid_points = 2048;
  const auto zeta = builtin_zeta();
  for (double t0 : {100.0, 500.0, 1000.0})
    for (double theta : {0.0, kPi}) {
      const auto row = verify_smoothing_bound(zeta, cfg, t0, theta, 10.0);
      out.lines.push_back({fmt("lemma zeta t0=", t0, " theta=", theta), row.holds,
                           fmt("max=", row.window_max, " half_resonator=", row.half_resonator,
                               " error_term=", row.error_term, " slack=", row.slack)});
    }
  return out;
}

SuiteResult verify_asymptotics() {
  SuiteResult out{"asymptotics", {}};
  const auto zeta = builtin_zeta();
  const double cs = c_sigma(0.75);
  const auto rows = capacity_asymptotics_check(zeta, 0.75, {1e4, 1e5, 1e6});
  for (const auto& r : rows)
    out.lines.push_back({fmt("capacity rho=", r.rho), true,
                         fmt("ratio=", r.ratio, " C=", cs, " deviation=", r.deviation)});
  out.lines.push_back({"capacity within 10% at rho=1e6", rows.back().deviation <= 0.1 * cs,
                       fmt("relative deviation=", rows.back().deviation / cs)});
  const bool monotone = rows[1].deviation <= rows[0].deviation && rows[2].deviation <= rows[1].deviation;
  out.lines.push_back({"capacity deviation non-increasing", monotone, ""});

  std::vector<double> ratios;
  for (double rho : {1e2, 1e3, 1e4}) {
    const double tail = prime_power_tail(zeta, rho, 0.75);
    ratios.push_back(tail / std::pow(rho, 0.5 - 0.75));
    out.lines.push_back({fmt("prime-power tail rho=", rho), true,
                         fmt("tail=", tail, " ratio=", ratios.back())});
  }
  out.lines.push_back({"prime-power tail ratio decreasing", ratios[1] < ratios[0] && ratios[2] < ratios[1], ""});
  return out;
}

SuiteResult run_verify_suite(const std::string& name, int trials, std::uint64_t seed) {
  if (name == "chen") return verify_chen(trials, seed);
  if (name == "denseness") return verify_denseness(trials, seed);
  if (name == "smoothing") return verify_smoothing(trials, seed);
  if (name == "asymptotics") return verify_asymptotics();
  throw Error(Errc::invalid_argument, "unknown verify suite '" + name + "'");
}

}  // namespace lhunt
