// One PASS/FAIL line per acceptance criterion; exit status is the number of failures.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lhunt/hunt.hpp"
#include "lhunt/lfun_catalog.hpp"
#include "lhunt/lfun_eval.hpp"
#include "lhunt/report.hpp"
#include "lhunt/resonator.hpp"
#include "lhunt/verify.hpp"

using namespace lhunt;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

template <class... Args>
std::string fmt(Args&&... args) {
  std::ostringstream os;
  os.precision(6);
  (os << ... << args);
  return os.str();
}

int failures = 0;

void criterion(int id, const char* title, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!o.pass) ++failures;
  std::printf("%s %2d %s [%.1fs] %s\n", o.pass ? "PASS" : "FAIL", id, title, secs, o.detail.c_str());
  std::fflush(stdout);
}

double elapsed_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

std::vector<ResonanceSystem> denseness_instances() {
  const std::vector<LFunctionSpec> specs{builtin_zeta(), builtin_dirichlet(chi4())};
  const double c0 = 0.5 * c_sigma(0.75);
  std::vector<ResonanceSystem> out;
  for (double rho : {50.0, 100.0, 200.0}) {
    auto window = build_window(rho, 0.75);
    const double cap = denseness_capacity(window, specs, c0);
    out.push_back(ResonanceSystem::make(std::move(window), specs, default_targets({0.0, 0.0}, cap), c0));
  }
  return out;
}

// Catalan's constant from sum (-1)^n / (2n+1)^2, averaging consecutive partial
// sums to squeeze the alternating tail.
double catalan_oracle() {
  long double s = 0.0L, prev = 0.0L;
  const int n_terms = 200000;
  for (int n = 0; n < n_terms; ++n) {
    prev = s;
    const long double d = 2.0L * n + 1.0L;
    s += (n % 2 ? -1.0L : 1.0L) / (d * d);
  }
  return static_cast<double>((s + prev) / 2.0L);
}

HuntConfig e2e_config(std::vector<std::string> specs, std::vector<double> thetas) {
  HuntConfig c;
  c.T = 1e6;
  c.sigma0 = 0.75;
  c.rho_override = 50.0;
  c.specs = std::move(specs);
  c.theta_targets = std::move(thetas);
  c.baseline_samples = 10000;
  c.seed = 7;
  return c;
}

}  // namespace

int main() {
  criterion(1, "Chen certificate on 100 random instances", [] {
    const auto t = std::chrono::steady_clock::now();
    const auto suite = verify_chen(100, 1);
    const double secs = elapsed_since(t);
    std::size_t bad = 0;
    for (const auto& l : suite.lines) bad += !l.passed;
    return Outcome{suite.passed() && suite.lines.size() == 100 && secs <= 60.0,
                   fmt(suite.lines.size() - bad, "/", suite.lines.size(), " within bound, ", secs, " s")};
  });

  std::vector<ResonanceSystem> systems;
  std::vector<PhaseAssignment> dense;
  criterion(2, "denseness solver, k=2, rho in {50,100,200}", [&] {
    const auto t = std::chrono::steady_clock::now();
    systems = denseness_instances();
    bool ok = true;
    std::string detail;
    for (const auto& sys : systems) {
      dense.push_back(solve_denseness(sys));
      double zmax = 0.0;
      for (const auto& z : dense.back().z) zmax = std::max(zmax, std::abs(z));
      const double rel = dense.back().residual / sys.capacity;
      ok &= rel <= 1e-8 && zmax <= 1.0 + 1e-12;
      detail += fmt("rho=", sys.window.rho, " residual/cap=", rel, " max|z|=", zmax, "; ");
    }
    const double secs = elapsed_since(t);
    return Outcome{ok && secs <= 10.0, detail + fmt(secs, " s")};
  });

  criterion(3, "good rounding interior count and residual bound", [&] {
    if (dense.size() != systems.size() || systems.empty()) return Outcome{false, "no solver output"};
    bool ok = true;
    std::string detail;
    for (std::size_t i = 0; i < systems.size(); ++i) {
      const auto& sys = systems[i];
      const auto r = good_rounding(sys, dense[i]);
      double coeff_max = 0.0;
      for (auto idx : r.snapped)
        coeff_max = std::max(coeff_max, sys.coeffs.col(static_cast<Eigen::Index>(idx)).cwiseAbs().maxCoeff());
      // Brute-force g_j(z') - xi_j.
      double resid = 0.0;
      for (std::size_t j = 0; j < sys.k(); ++j) {
        cplx g = 0.0;
        for (std::size_t p = 0; p < sys.n(); ++p)
          g += sys.coeffs(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(p)) * r.z[p];
        resid = std::max(resid, std::abs(g - sys.targets[j]));
      }
      const double bound = static_cast<double>(sys.k() + 1) * coeff_max + 1e-8 * sys.capacity;
      ok &= r.interior_after_pivot <= sys.k() + 1 && resid <= bound;
      detail += fmt("interior=", r.interior_after_pivot, " residual=", resid, " bound=", bound, "; ");
    }
    return Outcome{ok, detail};
  });

  criterion(4, "evaluator accuracy", [] {
    const double z2 = std::abs(zeta(2.0) - kPi * kPi / 6.0);
    const double cat = std::abs(dirichlet_l(2.0, chi4()) - catalan_oracle());
    const auto zs = builtin_zeta();
    const auto c4 = builtin_dirichlet(chi4());
    double euler = 0.0;
    for (double t : {0.0, 1.0, 25.0, 1000.0}) {
      const cplx s{3.0, t};
      euler = std::max(euler, std::abs(std::exp(log_euler_product(zs, s, 100000)) - zeta(s)));
      euler = std::max(euler, std::abs(std::exp(log_euler_product(c4, s, 100000)) - dirichlet_l(s, chi4())));
    }
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> ut(-1e4, 1e4), us(0.5, 3.0);
    double conj = 0.0;
    for (int i = 0; i < 100; ++i) {
      const cplx s{us(rng), ut(rng)};
      conj = std::max(conj, std::abs(zeta(std::conj(s)) - std::conj(zeta(s))));
      conj = std::max(conj, std::abs(dirichlet_l(std::conj(s), chi4()) - std::conj(dirichlet_l(s, chi4()))));
    }
    return Outcome{z2 <= 1e-10 && cat <= 1e-9 && euler <= 1e-6 && conj <= 1e-10,
                   fmt("zeta(2) err=", z2, " catalan err=", cat, " euler err=", euler, " conj err=", conj)};
  });

  criterion(5, "capacity asymptotics for zeta at sigma0=0.75", [] {
    const auto t = std::chrono::steady_clock::now();
    const double cs = c_sigma(0.75);
    const auto rows = capacity_asymptotics_check(builtin_zeta(), 0.75, {1e4, 1e5, 1e6});
    const double secs = elapsed_since(t);
    const double rel = std::abs(rows[2].ratio - cs) / cs;
    const bool mono = rows[1].deviation <= rows[0].deviation && rows[2].deviation <= rows[1].deviation;
    return Outcome{rel <= 0.1 && mono && secs <= 120.0,
                   fmt("ratios ", rows[0].ratio, " ", rows[1].ratio, " ", rows[2].ratio, " vs ", cs, ", ", secs,
                       " s")};
  });

  criterion(6, "Fejer integral bound", [] {
    std::mt19937_64 rng(6);
    auto u = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const double tau = std::exp(std::log(0.1) + u() * std::log(1e4));
      const double theta = 2.0 * kPi * u();
      const double rho = std::exp(std::log(3.0) + u() * (std::log(1e6) - std::log(3.0)));
      worst = std::max(worst, fejer_smoothing_check(tau, theta, rho));
    }
    const double limit = fejer_smoothing_check(1e4, kPi / 2.0, 50.0);
    return Outcome{worst <= kPi / 2 + 1e-6 && std::abs(limit - kPi / 2) <= 1e-3,
                   fmt("max=", worst, " limit=", limit)};
  });

  criterion(7, "SSOC normalized residuals", [] {
    const auto z = builtin_zeta();
    const auto c = builtin_dirichlet(chi4());
    const std::vector<double> xs{1e3, 1e4, 1e5, 1e6};
    double worst_d = 0.0, worst_o = 0.0;
    for (const auto& r : ssoc_diagnostic(z, z, 1e6, xs).rows) worst_d = std::max(worst_d, r.normalized_residual);
    for (const auto& r : ssoc_diagnostic(z, c, 1e6, xs).rows) worst_o = std::max(worst_o, r.normalized_residual);
    return Outcome{worst_d <= 5.0 && worst_o <= 5.0, fmt("diagonal max=", worst_d, " off-diagonal max=", worst_o)};
  });

  std::string k1_json;
  criterion(8, "end-to-end exceedance at T=1e6", [&] {
    const auto t = std::chrono::steady_clock::now();
    const auto two = run_hunt(e2e_config({"zeta", "chi4"}, {0.0, 0.0}));
    const auto one = run_hunt(e2e_config({"zeta"}, {0.0}));
    k1_json = report_json(one);
    const double secs = elapsed_since(t);
    bool ok = two.window_ok && std::abs(2 * two.tau - 32.2) < 0.1;
    std::string detail = fmt("2tau=", 2 * two.tau, " window_ok=", two.window_ok);
    for (const auto& s : two.specs) {
      ok &= s.achieved > s.baseline_q95;
      detail += fmt("; ", s.name, " ", s.achieved, " > q95 ", s.baseline_q95);
    }
    ok &= one.specs[0].achieved > one.specs[0].baseline_q99;
    detail += fmt("; k=1 zeta ", one.specs[0].achieved, " > q99 ", one.specs[0].baseline_q99);
    return Outcome{ok && secs <= 600.0, detail + fmt("; ", secs, " s")};
  });

  criterion(9, "sign-flip run pushes |L| below the 5th percentile", [] {
    const auto r = run_hunt(e2e_config({"zeta", "chi4"}, {kPi, kPi}));
    bool ok = true;
    std::string detail;
    for (const auto& s : r.specs) {
      ok &= s.abs_value < s.baseline_abs_q05;
      detail += fmt(s.name, " |L|=", s.abs_value, " q05=", s.baseline_abs_q05, "; ");
    }
    return Outcome{ok, detail};
  });

  criterion(10, "deterministic canonical JSON", [&] {
    if (k1_json.empty()) k1_json = report_json(run_hunt(e2e_config({"zeta"}, {0.0})));
    const auto again = report_json(run_hunt(e2e_config({"zeta"}, {0.0})));
    return Outcome{again == k1_json, fmt(again.size(), " bytes, identical=", again == k1_json)};
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
