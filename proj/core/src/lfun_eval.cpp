#include "lhunt/lfun_eval.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/special_functions/bernoulli.hpp>
#include <boost/math/special_functions/factorials.hpp>

#include "lhunt/error.hpp"
#include "lhunt/parallel.hpp"
#include "lhunt/prime_lattice.hpp"

namespace lhunt {

namespace {

constexpr double kMinSigma = 0.4;
constexpr double kPoleGuard = 1e-6;
constexpr double kZeroGuard = 1e-12;
constexpr int kMaxBernoulli = 60;
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kAnchorSigma = 3.0;
constexpr double kHorizontalStep = 0.125;
// Low-height paths from the anchor run at this height to stay clear of s = 1.
constexpr double kPoleDetour = 1.0;
constexpr int kMaxBisection = 48;

// B_{2k} / (2k)! for k = 1..kMaxBernoulli.
const std::array<double, kMaxBernoulli + 1>& bernoulli_ratios() {
  static const auto table = [] {
    std::array<double, kMaxBernoulli + 1> b{};
    for (int k = 1; k <= kMaxBernoulli; ++k)
      b[k] = boost::math::bernoulli_b2n<double>(k) / boost::math::factorial<double>(2 * k);
    return b;
  }();
  return table;
}

// x^{-s} with log x carried in extended precision so the phase t log x keeps
// full accuracy at large heights.
cplx xpow_neg(double x, cplx s) {
  const long double l = std::log(static_cast<long double>(x));
  const double hi = static_cast<double>(l);
  const double lo = static_cast<double>(l - hi);
  double sn, cs;
  phase_sincos(s.imag(), hi, lo, sn, cs);
  const double mag = static_cast<double>(std::exp(-static_cast<long double>(s.real()) * l));
  return {mag * cs, -mag * sn};
}

// (e^u - 1) / u
cplx expm1_over(cplx u) {
  if (std::abs(u) > 0.5) return (std::exp(u) - 1.0) / u;
  cplx term = 1.0, sum = 1.0;
  for (int k = 2; k < 40; ++k) {
    term *= u / static_cast<double>(k);
    sum += term;
    if (std::abs(term) < 1e-18) break;
  }
  return sum;
}

struct TailResult {
  cplx value;
  double err;
};

// Euler-Maclaurin tail of sum_{n>=N} (qn + a)^{-s} at x = qN + a:
//   x^{1-s}/(q(s-1)) + x^{-s}/2 + sum_k B_2k/(2k)! (s)_{2k-1} q^{2k-1} x^{-s-2k+1}.
// With `regularized`, the pole term becomes (x^{1-s} - 1)/(q(s-1)); the
// constants cancel across residues of a nonprincipal character.
TailResult em_tail(cplx s, double x, double q, bool regularized) {
  const cplx xs = xpow_neg(x, s);
  cplx pole;
  if (regularized) {
    const double lx = std::log(x);
    const cplx u = (1.0 - s) * lx;
    pole = -lx * expm1_over(u) / q;
  } else {
    pole = x * xs / (q * (s - 1.0));
  }
  cplx tail = pole + 0.5 * xs;

  const auto& b = bernoulli_ratios();
  const double r = q / x;
  cplx g = s * r * xs;  // (s)_1 (q/x)^1 x^{-s}
  double prev = std::numeric_limits<double>::infinity();
  double err = 0.0;
  for (int k = 1; k <= kMaxBernoulli; ++k) {
    const cplx term = b[k] * g;
    const double mag = std::abs(term);
    const double scale = std::abs(s + static_cast<double>(2 * k - 1)) / (s.real() + 2 * k - 1);
    if (mag > prev || k == kMaxBernoulli) {
      err = mag * scale;
      break;
    }
    tail += term;
    prev = mag;
    if (mag < 1e-17 * std::max(1.0, std::abs(tail))) {
      const cplx next = b[k + 1 <= kMaxBernoulli ? k + 1 : k] * g * (s + double(2 * k - 1)) *
                        (s + double(2 * k)) * (r * r);
      err = std::abs(next) * std::abs(s + double(2 * k + 1)) / (s.real() + 2 * k + 1);
      break;
    }
    g *= (s + static_cast<double>(2 * k - 1)) * (s + static_cast<double>(2 * k)) * (r * r);
  }
  return {tail, err};
}

std::size_t em_terms(double t) {
  return static_cast<std::size_t>(std::max(20.0, std::ceil(std::abs(t) / std::numbers::pi)));
}

// Upper bound for sum_{m<=M} m^{-sigma}.
double power_mass(double m_max, double sigma) {
  if (std::abs(1.0 - sigma) < 1e-12) return 1.0 + std::log(m_max);
  return 1.0 + (std::pow(m_max, 1.0 - sigma) - 1.0) / (1.0 - sigma);
}

void check_abscissa(cplx s) {
  if (!(s.real() >= kMinSigma))
    throw Error(Errc::invalid_argument, "evaluation requires Re s >= 0.4");
}

// Direct (table-free) residue-class evaluation used by the free functions.
EvalResult residue_sum(cplx s, std::uint32_t q, const std::vector<cplx>& chi_values, bool pole) {
  check_abscissa(s);
  if (pole && std::abs(s - 1.0) < kPoleGuard) throw Error(Errc::near_pole, "near pole s=1");
  const std::size_t n_terms = em_terms(s.imag());
  const std::uint64_t m_max = static_cast<std::uint64_t>(q) * n_terms;
  cplx main = 0.0;
  for (std::uint64_t m = 1; m <= m_max; ++m) {
    const cplx c = chi_values[m % q];
    if (c == 0.0) continue;
    main += c * xpow_neg(static_cast<double>(m), s);
  }
  cplx tail = 0.0;
  double err = 0.0;
  for (std::uint32_t a = 1; a <= q; ++a) {
    const cplx c = chi_values[a % q];
    if (c == 0.0) continue;
    const auto tr = em_tail(s, static_cast<double>(m_max + a), q, !pole);
    tail += c * tr.value;
    err += tr.err;
  }
  err += 8.0 * kEps * power_mass(static_cast<double>(m_max), s.real());
  return {main + tail, err};
}

}  // namespace

cplx zeta(cplx s) { return residue_sum(s, 1, {cplx(1.0)}, true).value; }

cplx hurwitz_zeta(cplx s, double a) {
  if (!(a > 0.0 && a <= 1.0)) throw Error(Errc::invalid_argument, "hurwitz_zeta: a must lie in (0, 1]");
  check_abscissa(s);
  if (std::abs(s - 1.0) < kPoleGuard) throw Error(Errc::near_pole, "near pole s=1");
  const std::size_t n_terms = em_terms(s.imag());
  cplx main = 0.0;
  for (std::size_t n = 0; n < n_terms; ++n) main += xpow_neg(static_cast<double>(n) + a, s);
  return main + em_tail(s, static_cast<double>(n_terms) + a, 1.0, false).value;
}

cplx dirichlet_l(cplx s, const DirichletCharacter& chi) {
  if (chi.principal()) throw Error(Errc::invalid_argument, "dirichlet_l: principal character");
  return residue_sum(s, chi.modulus(), chi.values(), false).value;
}

cplx log_euler_product(const LFunctionSpec& spec, cplx s, std::uint64_t prime_bound) {
  spec.require_coverage(2, prime_bound);
  cplx sum = 0.0;
  for (std::uint64_t p : sieve_primes(prime_bound)) {
    const cplx ps = xpow_neg(static_cast<double>(p), s);
    for (const cplx& nu : spec.euler_roots(p))
      if (nu != 0.0) sum -= std::log(1.0 - nu * ps);
  }
  return sum;
}

// ---------------------------------------------------------------------------
// LEvaluator

LEvaluator::LEvaluator(const LFunctionSpec& spec, double sigma, double t_max)
    : spec_(spec), sigma_(sigma), t_max_(std::max(std::abs(t_max), kPoleDetour)) {
  if (!(sigma >= kMinSigma)) throw Error(Errc::invalid_argument, "evaluation requires Re s >= 0.4");
  switch (spec.backend()) {
    case EvalBackend::zeta:
      q_ = 1;
      pole_ = true;
      residues_.push_back({1, 1.0});
      break;
    case EvalBackend::dirichlet: {
      const auto& chi = *spec.character();
      q_ = chi.modulus();
      pole_ = false;
      for (std::uint32_t a = 1; a <= q_; ++a)
        if (chi(a) != 0.0) residues_.push_back({a, chi(a)});
      break;
    }
    case EvalBackend::euler_product_estimate: {
      const std::uint64_t limit = spec.prime_limit();
      spec.require_coverage(2, limit);
      primes_ = sieve_primes(limit);
      roots_.reserve(primes_.size());
      for (auto p : primes_) roots_.push_back(spec.euler_roots(p));
      return;
    }
  }

  const std::uint64_t m_max = static_cast<std::uint64_t>(q_) * em_terms(t_max_);
  std::vector<std::uint64_t> ms;
  std::vector<cplx> cs;
  ms.reserve(m_max);
  cs.reserve(m_max);
  for (std::uint64_t m = 1; m <= m_max; ++m) {
    const cplx c = spec.backend() == EvalBackend::zeta ? cplx(1.0) : (*spec.character())(m);
    if (c == 0.0) continue;
    ms.push_back(m);
    cs.push_back(c);
  }
  series_ = std::make_shared<DirichletSeries>(std::move(ms), std::move(cs), sigma);
}

std::size_t LEvaluator::terms_per_residue(double t) const { return em_terms(t); }

EvalResult LEvaluator::series_value(cplx s) const {
  check_abscissa(s);
  if (std::abs(s.imag()) > t_max_ * (1.0 + 1e-12))
    throw Error(Errc::invalid_argument, "height beyond evaluator table");
  if (pole_ && std::abs(s - 1.0) < kPoleGuard) throw Error(Errc::near_pole, "near pole s=1");
  const std::size_t n_terms = terms_per_residue(s.imag());
  const std::uint64_t m_max = static_cast<std::uint64_t>(q_) * n_terms;
  const std::size_t count = series_->prefix(m_max);
  cplx v = series_->at(s, count);
  double err = 8.0 * kEps * power_mass(static_cast<double>(m_max), s.real());
  for (const auto& r : residues_) {
    const auto tr = em_tail(s, static_cast<double>(m_max + r.a), q_, !pole_);
    v += r.chi * tr.value;
    err += tr.err;
  }
  return {v, err};
}

cplx LEvaluator::estimate_log(cplx s) const {
  cplx sum = 0.0;
  for (std::size_t i = 0; i < primes_.size(); ++i) {
    const cplx ps = xpow_neg(static_cast<double>(primes_[i]), s);
    for (const cplx& nu : roots_[i])
      if (nu != 0.0) sum -= std::log(1.0 - nu * ps);
  }
  return sum;
}

EvalResult LEvaluator::estimate_value(cplx s) const {
  return {std::exp(estimate_log(s)), std::numeric_limits<double>::infinity()};
}

EvalResult LEvaluator::value(cplx s) const {
  if (spec_.backend() == EvalBackend::euler_product_estimate) return estimate_value(s);
  return series_value(s);
}

std::vector<EvalResult> LEvaluator::value_grid(double t0, double h, std::size_t count) const {
  std::vector<EvalResult> out(count);
  if (count == 0) return out;
  if (spec_.backend() == EvalBackend::euler_product_estimate) {
    parallel_chunks(count, [&](std::size_t b, std::size_t e) {
      for (std::size_t g = b; g < e; ++g) out[g] = estimate_value({sigma_, t0 + g * h});
    });
    return out;
  }
  const double t_end = t0 + static_cast<double>(count - 1) * h;
  const double t_far = std::max(std::abs(t0), std::abs(t_end));
  if (t_far > t_max_ * (1.0 + 1e-12)) throw Error(Errc::invalid_argument, "height beyond evaluator table");
  const std::size_t n_terms = terms_per_residue(t_far);
  const std::uint64_t m_max = static_cast<std::uint64_t>(q_) * n_terms;
  const std::size_t terms = series_->prefix(m_max);
  const double roundoff = 8.0 * kEps * power_mass(static_cast<double>(m_max), sigma_) * 4.0;

  // Fixed 256-point blocks keep the phasor reseed points, and hence the
  // output bits, independent of the worker count.
  constexpr std::size_t kBlock = 256;
  const std::size_t blocks = (count + kBlock - 1) / kBlock;
  parallel_chunks(blocks, [&](std::size_t bb, std::size_t be) {
    for (std::size_t blk = bb; blk < be; ++blk) {
      const std::size_t b = blk * kBlock, e = std::min(count, b + kBlock);
      std::vector<cplx> main(e - b);
      series_->on_grid(t0 + static_cast<double>(b) * h, h, terms, main);
      for (std::size_t g = b; g < e; ++g) {
        const cplx s{sigma_, t0 + static_cast<double>(g) * h};
        if (pole_ && std::abs(s - 1.0) < kPoleGuard) throw Error(Errc::near_pole, "near pole s=1");
        cplx v = main[g - b];
        double err = roundoff;
        for (const auto& r : residues_) {
          const auto tr = em_tail(s, static_cast<double>(m_max + r.a), q_, !pole_);
          v += r.chi * tr.value;
          err += tr.err;
        }
        out[g] = {v, err};
      }
    }
  });
  return out;
}

cplx LEvaluator::anchor_log(double t) const {
  // |L(3+it) - 1| <= zeta(3)^r - 1 < 1 for r <= 3, so the principal log is
  // the branch given by the absolutely convergent Euler-product logarithm.
  const double bound = std::pow(1.2020569031595942, spec_.degree_bound()) - 1.0;
  if (bound < 1.0) return std::log(value({kAnchorSigma, t}).value);
  return log_euler_product(spec_, {kAnchorSigma, t}, 1'000'000);
}

namespace {

struct Node {
  cplx s;
  cplx value;
  cplx log;
};

}  // namespace

std::vector<EvalPoint> LEvaluator::log_branch(std::span<const double> t_grid) const {
  std::vector<EvalPoint> out(t_grid.size());
  if (t_grid.empty()) return out;

  if (spec_.backend() == EvalBackend::euler_product_estimate) {
    parallel_chunks(t_grid.size(), [&](std::size_t b, std::size_t e) {
      for (std::size_t g = b; g < e; ++g) {
        const cplx lg = estimate_log({sigma_, t_grid[g]});
        out[g] = {sigma_, t_grid[g], std::exp(lg), lg, std::numeric_limits<double>::infinity(), false};
      }
    });
    return out;
  }

  // Value stage (parallel).
  std::vector<EvalResult> values;
  const std::size_t n = t_grid.size();
  bool uniform = n >= 3;
  const double h = n >= 2 ? (t_grid.back() - t_grid.front()) / static_cast<double>(n - 1) : 0.0;
  if (uniform) {
    for (std::size_t g = 0; g < n; ++g) {
      const double expect = t_grid.front() + static_cast<double>(g) * h;
      if (std::abs(t_grid[g] - expect) > 1e-12 * std::max(1.0, std::abs(expect))) {
        uniform = false;
        break;
      }
    }
  }
  if (uniform) {
    values = value_grid(t_grid.front(), h, n);
  } else {
    values.resize(n);
    parallel_chunks(n, [&](std::size_t b, std::size_t e) {
      for (std::size_t g = b; g < e; ++g) values[g] = value({sigma_, t_grid[g]});
    });
  }

  // Branch stage (sequential).
  auto step = [this](const Node& from, const Node& to) {
    auto rec = [this](auto&& self, const Node& a, const Node& b, int depth) -> cplx {
      if (std::abs(b.value) < kZeroGuard)
        throw Error(Errc::zero_crossing_suspected, "zero crossing suspected: refine or abort window");
      const cplx delta = std::log(b.value / a.value);
      if (std::abs(delta) < kHalfPi) return {std::log(std::abs(b.value)), a.log.imag() + delta.imag()};
      if (depth >= kMaxBisection)
        throw Error(Errc::zero_crossing_suspected, "zero crossing suspected: refine or abort window");
      Node mid;
      mid.s = 0.5 * (a.s + b.s);
      mid.value = value(mid.s).value;
      mid.log = self(self, a, mid, depth + 1);
      return self(self, mid, b, depth + 1);
    };
    return rec(rec, from, to, 0);
  };

  // Anchor, then horizontal to sigma; below height kPoleDetour a pole
  // requires the horizontal leg to run at +-kPoleDetour and drop vertically.
  const double t_start = t_grid.front();
  const bool detour = pole_ && std::abs(t_start) < kPoleDetour && sigma_ < kAnchorSigma;
  const double t_leg = detour ? (t_start < 0.0 ? -kPoleDetour : kPoleDetour) : t_start;
  Node cur;
  cur.s = {kAnchorSigma, t_leg};
  cur.value = value(cur.s).value;
  cur.log = anchor_log(t_leg);
  auto walk_to = [&](cplx target, const cplx* known) {
    const double dist = std::abs(target - cur.s);
    const int steps = std::max(1, static_cast<int>(std::ceil(dist / kHorizontalStep)));
    const cplx from = cur.s;
    for (int i = 1; i <= steps; ++i) {
      Node next;
      next.s = i == steps ? target : from + (target - from) * (static_cast<double>(i) / steps);
      next.value = (i == steps && known) ? *known : value(next.s).value;
      next.log = step(cur, next);
      cur = next;
    }
  };
  if (detour) {
    walk_to({sigma_, t_leg}, nullptr);
    walk_to({sigma_, t_start}, &values[0].value);
  } else if (sigma_ != kAnchorSigma) {
    walk_to({sigma_, t_start}, &values[0].value);
  }
  for (std::size_t g = 0; g < n; ++g) {
    Node node;
    node.s = {sigma_, t_grid[g]};
    node.value = values[g].value;
    node.log = g == 0 ? cur.log : step(cur, node);
    if (g == 0 && std::abs(node.value) < kZeroGuard)
      throw Error(Errc::zero_crossing_suspected, "zero crossing suspected: refine or abort window");
    out[g] = {sigma_, t_grid[g], node.value, node.log, values[g].abs_err_bound, true};
    cur = node;
  }
  return out;
}

std::vector<EvalPoint> log_l_branch(const LFunctionSpec& spec, double sigma0, std::span<const double> t_grid) {
  double t_max = 0.0;
  for (double t : t_grid) t_max = std::max(t_max, std::abs(t));
  LEvaluator ev(spec, sigma0, t_max);
  return ev.log_branch(t_grid);
}

}  // namespace lhunt
