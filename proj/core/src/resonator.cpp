#include "lhunt/resonator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

#include "lhunt/error.hpp"

namespace lhunt {

namespace {

constexpr double kInteriorTol = 1e-9;

double window_lo(double rho) { return rho / std::numbers::e; }
double window_hi(double rho) { return rho * std::numbers::e; }

// Step s > 0 at which |z + s d| = 1, for |z| < 1.
double step_to_boundary(cplx z, cplx d) {
  const double a = std::norm(d);
  const double b = (std::conj(z) * d).real();
  const double c = std::norm(z) - 1.0;  // < 0
  const double disc = b * b - a * c;
  return (-b + std::sqrt(std::max(0.0, disc))) / a;
}

std::vector<double> thetas_of(const std::vector<cplx>& z) {
  std::vector<double> out(z.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (std::abs(z[i]) < 1.0 - kInteriorTol) continue;
    double th = -std::arg(z[i]) / (2.0 * std::numbers::pi);
    th -= std::floor(th);
    if (th >= 1.0) th = 0.0;
    out[i] = th;
  }
  return out;
}

std::vector<std::size_t> interior_of(const std::vector<cplx>& z) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < z.size(); ++i)
    if (std::abs(z[i]) < 1.0 - kInteriorTol) out.push_back(i);
  return out;
}

Eigen::VectorXcd to_eigen(const std::vector<cplx>& v) {
  return Eigen::Map<const Eigen::VectorXcd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<cplx> from_eigen(const Eigen::VectorXcd& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

double c_sigma(double sigma0) {
  const double d = 1.0 - sigma0;
  const double v = 2.0 * std::sinh(d / 2.0) / d;
  return v * v;
}

double denseness_capacity(const PrimeWindow& window, const std::vector<LFunctionSpec>& specs, double c0) {
  if (specs.empty()) throw Error(Errc::invalid_argument, "at least one L-function required");
  double min_kappa = std::numeric_limits<double>::infinity();
  int max_r = 0;
  for (const auto& s : specs) {
    min_kappa = std::min(min_kappa, s.kappa());
    max_r = std::max(max_r, s.degree_bound());
  }
  const double k = static_cast<double>(specs.size());
  return (c0 / k) * (min_kappa / max_r) * std::pow(window.rho, 1.0 - window.sigma0) / std::log(window.rho);
}

ResonanceSystem ResonanceSystem::make(PrimeWindow window, std::vector<LFunctionSpec> specs,
                                      std::vector<cplx> targets, double c0) {
  if (specs.empty()) throw Error(Errc::invalid_argument, "at least one L-function required");
  if (targets.size() != specs.size()) throw Error(Errc::invalid_argument, "one target per L-function");
  if (window.empty()) throw Error(Errc::invalid_argument, "empty prime window");
  const double cs = c_sigma(window.sigma0);
  if (!(c0 > 0.0 && c0 < cs)) throw Error(Errc::invalid_argument, "c0 must lie in (0, C_sigma0)");

  ResonanceSystem sys;
  sys.c0 = c0;
  sys.capacity = denseness_capacity(window, specs, c0);
  for (const auto& xi : targets)
    if (std::abs(xi) > sys.capacity * (1.0 + 1e-12))
      throw Error(Errc::invalid_argument, "target exceeds denseness capacity");

  const auto k = static_cast<Eigen::Index>(specs.size());
  const auto n = static_cast<Eigen::Index>(window.size());
  sys.coeffs.resize(k, n);
  for (Eigen::Index j = 0; j < k; ++j) {
    specs[j].require_coverage(window.primes.front(), window.primes.back());
    for (Eigen::Index p = 0; p < n; ++p)
      sys.coeffs(j, p) = specs[j].coefficient(window.primes[p]) * window.weights[p] * window.inv_powers[p];
  }
  sys.window = std::move(window);
  sys.specs = std::move(specs);
  sys.targets = std::move(targets);
  return sys;
}

std::vector<cplx> ResonanceSystem::evaluate(const std::vector<cplx>& z) const {
  return from_eigen(coeffs * to_eigen(z));
}

double ResonanceSystem::residual(const std::vector<cplx>& z) const {
  const auto g = evaluate(z);
  double r = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) r = std::max(r, std::abs(g[j] - targets[j]));
  return r;
}

double ResonanceSystem::max_coefficient() const { return coeffs.cwiseAbs().maxCoeff(); }

std::vector<cplx> default_targets(const std::vector<double>& thetas, double capacity) {
  std::vector<cplx> out;
  out.reserve(thetas.size());
  for (double th : thetas) out.push_back(std::polar(capacity / 2.0, th));
  return out;
}

PhaseAssignment PhaseAssignment::from_points(std::vector<cplx> z, double residual) {
  PhaseAssignment pa;
  pa.interior = interior_of(z);
  pa.thetas = thetas_of(z);
  pa.z = std::move(z);
  pa.residual = residual;
  return pa;
}

PhaseAssignment solve_denseness(const ResonanceSystem& system, const DensenessOptions& options) {
  const auto n = static_cast<Eigen::Index>(system.n());
  if (system.k() > system.n())
    throw Error(Errc::invalid_argument, "more L-functions than window primes");
  const double tol = options.tolerance_factor * std::max(system.capacity, std::numeric_limits<double>::min());
  const Eigen::VectorXcd xi = to_eigen(system.targets);

  if (xi.cwiseAbs().maxCoeff() == 0.0) {
    std::vector<cplx> zero(system.n(), 0.0);
    return PhaseAssignment::from_points(std::move(zero), 0.0);
  }

  const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(system.coeffs);
  auto project_affine = [&](const Eigen::VectorXcd& z) -> Eigen::VectorXcd {
    return z - cod.solve(system.coeffs * z - xi);
  };
  auto project_disk = [](Eigen::VectorXcd& z) {
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      const double m = std::abs(z[i]);
      if (m > 1.0) z[i] /= m;
    }
  };
  auto residual = [&](const Eigen::VectorXcd& z) { return (system.coeffs * z - xi).cwiseAbs().maxCoeff(); };

  Eigen::VectorXcd z = cod.solve(xi);
  if (residual(z) > tol)
    throw Error(Errc::targets_infeasible, "targets infeasible at this rho (outside the range of g)");

  for (std::size_t it = 0; it <= options.max_iterations; ++it) {
    Eigen::VectorXcd y = z;
    project_disk(y);
    const double r = residual(y);
    if (r <= tol) {
      auto pa = PhaseAssignment::from_points(from_eigen(y), r);
      pa.iterations = it;
      return pa;
    }
    z = project_affine(y);
  }
  std::ostringstream msg;
  msg << "targets infeasible at this rho: no convergence in " << options.max_iterations
      << " iterations (n = " << n << ")";
  throw Error(Errc::targets_infeasible, msg.str());
}

PhaseAssignment good_rounding(const ResonanceSystem& system, const PhaseAssignment& start) {
  std::vector<cplx> z = start.z;
  const std::size_t k = system.k();
  std::vector<std::size_t> interior = interior_of(z);

  // Each pivot puts at least one interior coordinate on the circle.
  std::size_t guard = z.size() + 1;
  while (interior.size() > k + 1) {
    if (guard-- == 0) throw Error(Errc::degenerate_matrix, "degenerate constraint matrix: pivoting stalled");
    const auto m = static_cast<Eigen::Index>(interior.size());
    const auto rows = static_cast<Eigen::Index>(2 * k);
    // Real form of sum_p G_jp d_p = 0 with d_p = x_p + i y_p.
    Eigen::MatrixXd active(rows, 2 * m);
    for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(k); ++j)
      for (Eigen::Index c = 0; c < m; ++c) {
        const cplx g = system.coeffs(j, static_cast<Eigen::Index>(interior[c]));
        active(2 * j, 2 * c) = g.real();
        active(2 * j, 2 * c + 1) = -g.imag();
        active(2 * j + 1, 2 * c) = g.imag();
        active(2 * j + 1, 2 * c + 1) = g.real();
      }
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(active.transpose());
    const Eigen::Index rank = qr.rank();
    const Eigen::MatrixXd q = qr.householderQ();
    const Eigen::Index nullity = 2 * m - rank;

    double best_step = -1.0;
    Eigen::VectorXcd best_dir;
    for (Eigen::Index v = 0; v < nullity; ++v) {
      const Eigen::VectorXd basis = q.col(rank + v);
      for (double sign : {1.0, -1.0}) {
        Eigen::VectorXcd d(m);
        for (Eigen::Index c = 0; c < m; ++c) d[c] = sign * cplx(basis[2 * c], basis[2 * c + 1]);
        double s_min = std::numeric_limits<double>::infinity();
        for (Eigen::Index c = 0; c < m; ++c) {
          if (std::abs(d[c]) < 1e-14) continue;
          s_min = std::min(s_min, step_to_boundary(z[interior[c]], d[c]));
        }
        if (std::isfinite(s_min) && s_min > best_step) {
          best_step = s_min;
          best_dir = d;
        }
      }
    }
    if (best_step < 0.0) {
      const Eigen::JacobiSVD<Eigen::MatrixXd> svd(active);
      const auto& sv = svd.singularValues();
      std::ostringstream msg;
      msg << "degenerate constraint matrix (" << rows << "x" << 2 * m
          << ", condition estimate " << sv[0] / sv[sv.size() - 1] << ")";
      throw Error(Errc::degenerate_matrix, msg.str());
    }

    for (Eigen::Index c = 0; c < m; ++c) z[interior[c]] += best_step * best_dir[c];
    // Coordinates that reached the circle (within roundoff) are pinned to it.
    for (std::size_t idx : interior) {
      const double mag = std::abs(z[idx]);
      if (mag >= 1.0 - 1e-12) z[idx] /= mag;
    }
    interior = interior_of(z);
  }

  PhaseAssignment out;
  out.interior_after_pivot = interior.size();
  out.residual_before_snap = system.residual(z);
  double bound = out.residual_before_snap;
  for (std::size_t idx : interior) {
    const double mag = std::abs(z[idx]);
    bound += system.coeffs.col(static_cast<Eigen::Index>(idx)).cwiseAbs().maxCoeff() * (1.0 - mag);
    z[idx] = mag > 0.0 ? z[idx] / mag : cplx(1.0, 0.0);
    out.snapped.push_back(idx);
  }
  out.rounding_bound = bound;
  out.residual = system.residual(z);
  out.iterations = start.iterations;
  out.interior = interior_of(z);
  out.thetas = thetas_of(z);
  out.z = std::move(z);
  return out;
}

cplx resonator_sum(const LFunctionSpec& spec, const PrimeWindow& window, double sigma0, double t) {
  if (window.empty()) return 0.0;
  spec.require_coverage(window.primes.front(), window.primes.back());
  double sr = 0.0, cr = 0.0, si = 0.0, ci = 0.0;
  auto add = [](double& s, double& c, double v) {
    const double u = s + v;
    c += std::abs(s) >= std::abs(v) ? (s - u) + v : (v - u) + s;
    s = u;
  };
  for (std::size_t i = 0; i < window.size(); ++i) {
    const double p = static_cast<double>(window.primes[i]);
    const long double lp = std::log(static_cast<long double>(window.primes[i]));
    const double amp = window.weights[i] * (sigma0 == window.sigma0 ? window.inv_powers[i] : std::pow(p, -sigma0));
    const double phase = static_cast<double>(std::fmod(static_cast<long double>(t) * lp, 2.0L * std::numbers::pi_v<long double>));
    const cplx term = spec.coefficient(window.primes[i]) * std::polar(amp, -phase);
    add(sr, cr, term.real());
    add(si, ci, term.imag());
  }
  return {sr + cr, si + ci};
}

double fejer_smoothing_check(double tau, double theta, double rho) {
  if (!(tau > 0.0)) throw Error(Errc::invalid_argument, "tau must be positive");
  const double lr = std::log(rho);
  auto f = [&](double t) {
    double k;
    if (std::abs(t) < 1e-4) {
      const double v = 0.5 - t * t / 48.0;
      k = v * v;
    } else {
      const double v = std::sin(t / 2.0) / t;
      k = v * v;
    }
    return k * (1.0 + std::cos(theta + t * lr));
  };
  const double width = std::min(1.0, std::numbers::pi / (2.0 * std::max(1.0, std::abs(lr))));
  const auto panels = static_cast<std::size_t>(std::ceil(2.0 * tau / width));
  const double h = 2.0 * tau / static_cast<double>(panels);
  double sum = 0.0, comp = 0.0;
  for (std::size_t i = 0; i < panels; ++i) {
    const double a = -tau + static_cast<double>(i) * h;
    const double v = boost::math::quadrature::gauss<double, 20>::integrate(f, a, a + h) - comp;
    const double u = sum + v;
    comp = (u - sum) - v;
    sum = u;
  }
  return sum;
}

double prime_power_tail(const LFunctionSpec& spec, double rho, double sigma0) {
  const double lo = window_lo(rho), hi = window_hi(rho);
  const auto p_max = static_cast<std::uint64_t>(std::floor(std::sqrt(hi)));
  if (p_max < 2) return 0.0;
  spec.require_coverage(2, p_max);
  double sum = 0.0;
  for (std::uint64_t p : sieve_primes(p_max)) {
    const auto roots = spec.euler_roots(p);
    double pk = static_cast<double>(p) * static_cast<double>(p);
    for (int k = 2; pk <= hi; ++k, pk *= static_cast<double>(p)) {
      if (pk < lo) continue;
      double num = 0.0;
      for (const cplx& nu : roots) num += std::pow(std::abs(nu), k);
      sum += num / (k * std::pow(pk, sigma0));
    }
  }
  return sum;
}

std::vector<AsymptoticsRow> capacity_asymptotics_check(const LFunctionSpec& spec, double sigma0,
                                                       const std::vector<double>& rho_list) {
  const double cs = c_sigma(sigma0);
  std::vector<AsymptoticsRow> rows;
  for (double rho : rho_list) {
    const auto win = build_window(rho, sigma0);
    AsymptoticsRow row;
    row.rho = rho;
    if (!win.empty()) {
      spec.require_coverage(win.primes.front(), win.primes.back());
      double sum = 0.0, comp = 0.0;
      for (std::size_t i = 0; i < win.size(); ++i) {
        const double v = std::norm(spec.coefficient(win.primes[i])) * win.weights[i] * win.inv_powers[i] - comp;
        const double u = sum + v;
        comp = (u - sum) - v;
        sum = u;
      }
      row.weighted_sum = sum;
    }
    row.ratio = row.weighted_sum * std::log(rho) / (spec.kappa() * std::pow(rho, 1.0 - sigma0));
    row.deviation = std::abs(row.ratio - cs);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace lhunt
