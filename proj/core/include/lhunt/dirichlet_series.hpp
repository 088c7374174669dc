#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace lhunt {

/// sin and cos of t*(log_hi + log_lo) with the product carried in extended
/// precision and Cody-Waite reduction by pi/2. Accurate to a few ulps for
/// |t*log| up to ~1e9. Written branch-free so callers' loops vectorize.
void phase_sincos(double t, double log_hi, double log_lo, double& s, double& c);

/// A finite Dirichlet polynomial sum_m c_m m^{-s}, with terms sorted by m.
///
/// The amplitudes c_m m^{-sigma} are precomputed for one abscissa sigma, so
/// evaluation at sigma + it costs one phase per term. Evaluation may be
/// restricted to the prefix of terms with m <= m_max.
class DirichletSeries {
 public:
  DirichletSeries() = default;
  DirichletSeries(std::vector<std::uint64_t> m, std::vector<std::complex<double>> coeffs, double sigma);

  double sigma() const noexcept { return sigma_; }
  std::size_t size() const noexcept { return m_.size(); }
  std::uint64_t max_m() const noexcept { return m_.empty() ? 0 : m_.back(); }

  /// Number of terms with m <= m_max.
  std::size_t prefix(std::uint64_t m_max) const;

  /// sum over the first `count` terms at sigma() + i t.
  std::complex<double> at(double t, std::size_t count) const;

  /// Same sum at an arbitrary abscissa (amplitudes recomputed per term).
  std::complex<double> at(std::complex<double> s, std::size_t count) const;

  /// sum over the first `count` terms at sigma() + i (t0 + g h), g = 0..out.size()-1.
  /// Uses a per-term phasor recurrence, reseeded every 256 steps.
  void on_grid(double t0, double h, std::size_t count, std::span<std::complex<double>> out) const;

  /// Sum of |c_m| m^{-sigma} over the prefix; scales roundoff estimates.
  double abs_mass(std::size_t count) const;

 private:
  double sigma_ = 0.0;
  std::vector<std::uint64_t> m_;
  std::vector<double> log_hi_, log_lo_;
  std::vector<double> amp_re_, amp_im_;
  std::vector<double> coef_re_, coef_im_;
  std::vector<double> mass_;  // prefix sums of |amp|
};

}  // namespace lhunt
