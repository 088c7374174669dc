#include "lhunt/dirichlet_series.hpp"

#include <algorithm>
#include <cmath>

#include "lhunt/error.hpp"

namespace lhunt {

namespace {

// fdlibm split of pi/2.
constexpr double kPio2_1 = 1.57079632673412561417e+00;
constexpr double kPio2_2 = 6.07710050630396597660e-11;
constexpr double kPio2_2t = 2.02226624879595063154e-21;
constexpr double kTwoOverPi = 6.36619772367581382433e-01;
constexpr double kShifter = 6755399441055744.0;  // 1.5 * 2^52

constexpr std::size_t kGridBlock = 1024;
constexpr std::size_t kReseed = 256;

// Taylor coefficients, |r| <= pi/4 + tiny.
inline double sin_poly(double r) {
  const double r2 = r * r;
  double p = -7.6471637318198164759e-13;  // -1/15!
  p = p * r2 + 1.6059043836821614599e-10;  // 1/13!
  p = p * r2 - 2.5052108385441718775e-8;   // -1/11!
  p = p * r2 + 2.7557319223985890653e-6;   // 1/9!
  p = p * r2 - 1.9841269841269841270e-4;   // -1/7!
  p = p * r2 + 8.3333333333333333333e-3;   // 1/5!
  p = p * r2 - 1.6666666666666666667e-1;   // -1/3!
  return r + r * r2 * p;
}

inline double cos_poly(double r) {
  const double r2 = r * r;
  double p = 4.7794773323873852974e-14;    // 1/16!
  p = p * r2 - 1.1470745597729724714e-11;  // -1/14!
  p = p * r2 + 2.0876756987868098979e-9;   // 1/12!
  p = p * r2 - 2.7557319223985890653e-7;   // -1/10!
  p = p * r2 + 2.4801587301587301587e-5;   // 1/8!
  p = p * r2 - 1.3888888888888888889e-3;   // -1/6!
  p = p * r2 + 4.1666666666666666667e-2;   // 1/4!
  p = p * r2 - 0.5;
  return 1.0 + r2 * p;
}

struct SinCos {
  double s, c;
};

inline SinCos sincos_kernel(double t, double lhi, double llo) {
  const double x = t * lhi;
  const double xerr = std::fma(t, lhi, -x) + t * llo;
  const double k = (x * kTwoOverPi + kShifter) - kShifter;
  double r = std::fma(-k, kPio2_1, x);
  r = std::fma(-k, kPio2_2, r);
  r = std::fma(-k, kPio2_2t, r);
  r += xerr;
  const double sp = sin_poly(r);
  const double cp = cos_poly(r);
  // Quadrant selection in exact 0/1 arithmetic so the loop stays branch-free.
  // floor() blocks vectorization; k is an exact integer, so round a shifted
  // quotient instead (no ties are possible).
  const double quad = k - 4.0 * ((k * 0.25 - 0.375 + kShifter) - kShifter);  // k mod 4
  const double h = (quad * 0.5 - 0.25 + kShifter) - kShifter;
  const double o = quad - 2.0 * h;
  const double sin_sign = 1.0 - 2.0 * h;
  const double cos_sign = 1.0 - 2.0 * (o + h - 2.0 * o * h);
  return {sin_sign * ((1.0 - o) * sp + o * cp), cos_sign * ((1.0 - o) * cp + o * sp)};
}

}  // namespace

void phase_sincos(double t, double log_hi, double log_lo, double& s, double& c) {
  const auto r = sincos_kernel(t, log_hi, log_lo);
  s = r.s;
  c = r.c;
}

DirichletSeries::DirichletSeries(std::vector<std::uint64_t> m, std::vector<std::complex<double>> coeffs,
                                 double sigma)
    : sigma_(sigma), m_(std::move(m)) {
  if (coeffs.size() != m_.size()) throw Error(Errc::invalid_argument, "DirichletSeries: size mismatch");
  if (!std::is_sorted(m_.begin(), m_.end()))
    throw Error(Errc::invalid_argument, "DirichletSeries: terms must be sorted by m");
  const std::size_t n = m_.size();
  log_hi_.resize(n);
  log_lo_.resize(n);
  amp_re_.resize(n);
  amp_im_.resize(n);
  coef_re_.resize(n);
  coef_im_.resize(n);
  mass_.resize(n + 1);
  mass_[0] = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const long double l = std::log(static_cast<long double>(m_[i]));
    log_hi_[i] = static_cast<double>(l);
    log_lo_[i] = static_cast<double>(l - static_cast<long double>(log_hi_[i]));
    const double a = static_cast<double>(std::exp(-static_cast<long double>(sigma) * l));
    coef_re_[i] = coeffs[i].real();
    coef_im_[i] = coeffs[i].imag();
    amp_re_[i] = a * coeffs[i].real();
    amp_im_[i] = a * coeffs[i].imag();
    mass_[i + 1] = mass_[i] + a * std::abs(coeffs[i]);
  }
}

std::size_t DirichletSeries::prefix(std::uint64_t m_max) const {
  return static_cast<std::size_t>(std::upper_bound(m_.begin(), m_.end(), m_max) - m_.begin());
}

double DirichletSeries::abs_mass(std::size_t count) const { return mass_[std::min(count, m_.size())]; }

std::complex<double> DirichletSeries::at(double t, std::size_t count) const {
  count = std::min(count, m_.size());
  const double* lhi = log_hi_.data();
  const double* llo = log_lo_.data();
  const double* ar = amp_re_.data();
  const double* ai = amp_im_.data();
  double re = 0.0, im = 0.0;
#pragma omp simd reduction(+ : re, im)
  for (std::size_t i = 0; i < count; ++i) {
    const auto [s, c] = sincos_kernel(t, lhi[i], llo[i]);
    // (ar + i ai) (c - i s)
    re += ar[i] * c + ai[i] * s;
    im += ai[i] * c - ar[i] * s;
  }
  return {re, im};
}

std::complex<double> DirichletSeries::at(std::complex<double> s, std::size_t count) const {
  if (s.real() == sigma_) return at(s.imag(), count);
  count = std::min(count, m_.size());
  const double sigma = s.real();
  const double t = s.imag();
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const auto [sn, cs] = sincos_kernel(t, log_hi_[i], log_lo_[i]);
    const double a = std::exp(-sigma * log_hi_[i]);
    const double cr = a * coef_re_[i];
    const double ci = a * coef_im_[i];
    re += cr * cs + ci * sn;
    im += ci * cs - cr * sn;
  }
  return {re, im};
}

void DirichletSeries::on_grid(double t0, double h, std::size_t count,
                              std::span<std::complex<double>> out) const {
  count = std::min(count, m_.size());
  const std::size_t npts = out.size();
  std::vector<double> acc_re(npts, 0.0), acc_im(npts, 0.0);
  std::vector<double> pr(kGridBlock), pi(kGridBlock), sr(kGridBlock), si(kGridBlock);

  for (std::size_t b = 0; b < count; b += kGridBlock) {
    const std::size_t len = std::min(kGridBlock, count - b);
    const double* lhi = log_hi_.data() + b;
    const double* llo = log_lo_.data() + b;
    const double* ar = amp_re_.data() + b;
    const double* ai = amp_im_.data() + b;
    for (std::size_t i = 0; i < len; ++i) {
      const auto [s, c] = sincos_kernel(h, lhi[i], llo[i]);
      sr[i] = c;
      si[i] = -s;
    }
    for (std::size_t g = 0; g < npts; ++g) {
      if (g % kReseed == 0) {
        const double t = t0 + static_cast<double>(g) * h;
        for (std::size_t i = 0; i < len; ++i) {
          const auto [s, c] = sincos_kernel(t, lhi[i], llo[i]);
          pr[i] = ar[i] * c + ai[i] * s;
          pi[i] = ai[i] * c - ar[i] * s;
        }
      }
      double re = 0.0, im = 0.0;
      double* prp = pr.data();
      double* pip = pi.data();
      const double* srp = sr.data();
      const double* sip = si.data();
#pragma omp simd reduction(+ : re, im)
      for (std::size_t i = 0; i < len; ++i) {
        const double x = prp[i], y = pip[i];
        re += x;
        im += y;
        prp[i] = x * srp[i] - y * sip[i];
        pip[i] = x * sip[i] + y * srp[i];
      }
      acc_re[g] += re;
      acc_im[g] += im;
    }
  }
  for (std::size_t g = 0; g < npts; ++g) out[g] = {acc_re[g], acc_im[g]};
}

}  // namespace lhunt
