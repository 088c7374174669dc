#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace lhunt {

using cplx = std::complex<double>;

/// A Dirichlet character mod q stored as its table of values on residues.
class DirichletCharacter {
 public:
  /// Validates periodic complete multiplicativity, |chi(a)| = 1 on units and
  /// chi(a) = 0 off units; computes primitivity.
  static DirichletCharacter from_values(std::uint32_t modulus, std::vector<cplx> values);

  /// Kronecker symbol (D/.) for a fundamental discriminant D; modulus |D|.
  static DirichletCharacter kronecker(int discriminant);

  /// Character of odd prime modulus q sending the least primitive root g to
  /// e^{2 pi i index/(q-1)}.
  static DirichletCharacter prime_modulus(std::uint32_t q, std::uint32_t index);

  std::uint32_t modulus() const noexcept { return modulus_; }
  bool primitive() const noexcept { return primitive_; }
  bool real() const noexcept { return real_; }
  bool principal() const noexcept { return principal_; }
  const std::vector<cplx>& values() const noexcept { return values_; }

  cplx operator()(std::uint64_t n) const { return values_[n % modulus_]; }

 private:
  std::uint32_t modulus_ = 1;
  std::vector<cplx> values_;
  bool primitive_ = false;
  bool real_ = true;
  bool principal_ = true;
};

/// The nontrivial character mod 4.
DirichletCharacter chi4();

enum class EvalBackend { zeta, dirichlet, euler_product_estimate };

/// Stored-only functional-equation data (Q, lambda_j, mu_j, omega, pole order).
struct FunctionalData {
  double Q = 1.0;
  std::vector<double> lambdas;
  std::vector<cplx> mus;
  cplx omega{1.0, 0.0};
  int pole_order = 0;
};

/// An L-function with polynomial Euler product: Euler roots nu_j(p), prime
/// coefficients a(p) = sum_j nu_j(p), degree bound r, and the orthonormality
/// constant kappa.
///
/// Builtin specs (zeta, Dirichlet) cover every prime; ingested specs cover
/// the primes listed in their coefficient file up to prime_limit(). Copies
/// share immutable coefficient storage.
class LFunctionSpec {
 public:
  const std::string& name() const noexcept { return name_; }
  int degree_bound() const noexcept { return degree_; }
  double kappa() const noexcept { return kappa_; }
  EvalBackend backend() const noexcept { return backend_; }
  bool certified() const noexcept { return backend_ != EvalBackend::euler_product_estimate; }
  bool roots_known() const noexcept;
  std::uint64_t prime_limit() const noexcept;
  const std::optional<DirichletCharacter>& character() const noexcept { return character_; }
  const std::optional<FunctionalData>& functional_data() const noexcept { return functional_; }

  bool covers(std::uint64_t p) const;
  /// Throws Errc::coverage_insufficient unless every prime in [lo, hi] is covered.
  void require_coverage(std::uint64_t lo, std::uint64_t hi) const;

  /// a(p); p must be a covered prime.
  cplx coefficient(std::uint64_t p) const;
  /// Euler roots at p, padded with zeros to degree_bound().
  std::vector<cplx> euler_roots(std::uint64_t p) const;

  friend LFunctionSpec builtin_zeta();
  friend LFunctionSpec builtin_dirichlet(const DirichletCharacter& chi);
  friend LFunctionSpec ingest_coefficients(std::istream& in);
  friend LFunctionSpec resolve_spec(const std::string& name);

 private:
  struct Table;

  std::string name_;
  int degree_ = 1;
  double kappa_ = 1.0;
  EvalBackend backend_ = EvalBackend::zeta;
  std::optional<DirichletCharacter> character_;
  std::optional<FunctionalData> functional_;
  std::shared_ptr<const Table> table_;
};

LFunctionSpec builtin_zeta();
/// Requires a primitive character with modulus >= 3 (Errc::imprimitive_character).
LFunctionSpec builtin_dirichlet(const DirichletCharacter& chi);

/// Parses the line-oriented coefficient format (see docs/coefficient_format.md).
LFunctionSpec ingest_coefficients(std::istream& in);
LFunctionSpec ingest_coefficients_file(const std::string& path);

/// Resolves a builtin by name: "zeta", "chi4", "chi3", "kron<D>" (e.g.
/// "kron-4", "kron5"), "dirichlet<q>_<index>" for odd prime q, or
/// "file:<path>" for an ingested coefficient file.
LFunctionSpec resolve_spec(const std::string& name);

struct SsocRow {
  double x = 0.0;
  cplx sum;
  double predicted = 0.0;
  double residual = 0.0;
  double normalized_residual = 0.0;
};

struct SsocTable {
  std::vector<SsocRow> rows;
  bool diagonal = false;
  /// Set for diagonal tables when S(x_max)/Li(x_max) differs from the
  /// declared kappa by more than 20%.
  std::optional<std::string> warning;
};

/// S(x) = sum_{p<=x} a_i(p) conj(a_j(p)) at each checkpoint, compared with
/// kappa_j Li(x) on the diagonal (same name) and 0 off it. The residual is
/// |S - predicted|, normalized by x / log^2 x.
SsocTable ssoc_diagnostic(const LFunctionSpec& li, const LFunctionSpec& lj, double x_max,
                          std::vector<double> checkpoints);

/// CSV columns: x,S_re,S_im,predicted,residual,normalized_residual.
void write_ssoc_csv(std::ostream& out, const SsocTable& table);

}  // namespace lhunt
