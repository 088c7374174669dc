#include <cmath>
#include <sstream>

#include "doctest.h"
#include "lhunt/error.hpp"
#include "lhunt/lfun_catalog.hpp"
#include "lhunt/prime_lattice.hpp"

using namespace lhunt;

namespace {

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no exception");
  return Errc::invalid_argument;
}

}  // namespace

TEST_CASE("builtin zeta") {
  const auto z = builtin_zeta();
  CHECK(z.coefficient(2) == cplx(1.0));
  CHECK(z.kappa() == 1.0);
  CHECK(z.degree_bound() == 1);
  CHECK(z.certified());
}

TEST_CASE("chi4 coefficients") {
  const auto l = builtin_dirichlet(chi4());
  CHECK(l.coefficient(3) == cplx(-1.0));
  CHECK(l.coefficient(2) == cplx(0.0));
  CHECK(l.coefficient(5) == cplx(1.0));
  for (auto p : sieve_primes(10000)) CHECK(std::abs(l.coefficient(p)) <= 1.0);
}

TEST_CASE("characters") {
  CHECK(chi4().primitive());
  CHECK(chi4().real());
  const auto k5 = DirichletCharacter::kronecker(5);
  CHECK(k5(2) == cplx(-1.0));
  CHECK(k5(4) == cplx(1.0));
  const auto c7 = DirichletCharacter::prime_modulus(7, 1);
  CHECK(!c7.real());
  CHECK(c7.primitive());
  // Multiplicativity on a complex character.
  for (std::uint64_t a = 1; a < 7; ++a)
    for (std::uint64_t b = 1; b < 7; ++b) CHECK(std::abs(c7(a * b) - c7(a) * c7(b)) < 1e-14);
  // The character mod 8 induced from chi4 is imprimitive.
  const auto induced = DirichletCharacter::from_values(8, {0, 1, 0, -1, 0, 1, 0, -1});
  CHECK(!induced.primitive());
  CHECK(code_of([&] { builtin_dirichlet(induced); }) == Errc::imprimitive_character);
  CHECK_THROWS(DirichletCharacter::from_values(4, {0, 1, 0, 1.5}));
}

TEST_CASE("ingesting a(p)=1 reproduces zeta on the listed primes") {
  std::ostringstream file;
  file << "name = ones\ndegree = 1\nkappa = 1\nprime_limit = 10000\nrecords = roots\n";
  for (auto p : sieve_primes(10000)) file << p << " 1 0\n";
  std::istringstream in(file.str());
  const auto spec = ingest_coefficients(in);
  const auto z = builtin_zeta();
  for (auto p : sieve_primes(10000)) CHECK(spec.coefficient(p) == z.coefficient(p));
  CHECK(!spec.certified());
  CHECK(spec.covers(9973));
  CHECK(code_of([&] { spec.require_coverage(2, 20000); }) == Errc::coverage_insufficient);
}

TEST_CASE("ingesting chi4 values matches the builtin entrywise") {
  std::ostringstream file;
  file << "name = c4\ndegree = 1\nkappa = 1\nprime_limit = 1000\n";
  const auto chi = chi4();
  for (auto p : sieve_primes(1000)) file << p << ' ' << chi(p).real() << " 0\n";
  std::istringstream in(file.str());
  const auto spec = ingest_coefficients(in);
  const auto ref = builtin_dirichlet(chi);
  for (auto p : sieve_primes(1000)) CHECK(spec.coefficient(p) == ref.coefficient(p));
}

TEST_CASE("ingestion errors") {
  std::istringstream bad_root("degree = 1\nkappa = 1\nprime_limit = 10\n2 1.5 0\n");
  CHECK(code_of([&] { ingest_coefficients(bad_root); }) == Errc::ramanujan_violated);
  std::istringstream unsorted("degree = 1\nkappa = 1\nprime_limit = 10\n3 1 0\n2 1 0\n");
  CHECK(code_of([&] { ingest_coefficients(unsorted); }) == Errc::parse_error);
  std::istringstream composite("degree = 1\nkappa = 1\nprime_limit = 10\n4 1 0\n");
  CHECK(code_of([&] { ingest_coefficients(composite); }) == Errc::parse_error);
  std::istringstream missing("degree = 1\nprime_limit = 10\n2 1 0\n");
  CHECK(code_of([&] { ingest_coefficients(missing); }) == Errc::parse_error);
}

TEST_CASE("degree two roots sum to the coefficient") {
  std::istringstream in("degree = 2\nkappa = 1\nprime_limit = 5\nrecords = roots\n2 0.6 0.8 0.6 -0.8\n3 1 0 -1 0\n5 0 1 0 -1\n");
  const auto spec = ingest_coefficients(in);
  CHECK(std::abs(spec.coefficient(2) - cplx(1.2, 0.0)) < 1e-12);
  CHECK(std::abs(spec.coefficient(3)) < 1e-12);
  CHECK(spec.euler_roots(5).size() == 2);
}

TEST_CASE("resolve names") {
  CHECK(resolve_spec("zeta").name() == "zeta");
  CHECK(resolve_spec("chi4").coefficient(7) == cplx(-1.0));
  CHECK(resolve_spec("kron-3").coefficient(5) == cplx(-1.0));
  CHECK(resolve_spec("dirichlet7_1").name() == "dirichlet7_1");
  CHECK_THROWS(resolve_spec("nosuch"));
}

TEST_CASE("ssoc diagnostic small cases") {
  const auto z = builtin_zeta();
  const auto c = builtin_dirichlet(chi4());
  const auto diag = ssoc_diagnostic(z, z, 100.0, {2.0, 100.0});
  CHECK(diag.diagonal);
  CHECK(diag.rows[0].sum == cplx(1.0));
  CHECK(diag.rows[1].sum == cplx(25.0));
  CHECK(diag.rows[1].predicted == doctest::Approx(29.080977803962137));
  const auto off = ssoc_diagnostic(z, c, 100.0, {100.0});
  CHECK(!off.diagonal);
  CHECK(off.rows[0].sum == cplx(-2.0));
  CHECK(off.rows[0].predicted == 0.0);
}

TEST_CASE("ssoc diagnostic against prime counts") {
  const auto z = builtin_zeta();
  const auto c = builtin_dirichlet(chi4());
  const std::vector<double> xs{1e3, 1e4, 1e5, 1e6};
  const auto diag = ssoc_diagnostic(z, z, 1e6, xs);
  const auto off = ssoc_diagnostic(z, c, 1e6, xs);
  const double pi_x[] = {168, 1229, 9592, 78498};
  const double chi_sum[] = {-7, -10, -25, -147};
  for (std::size_t i = 0; i < xs.size(); ++i) {
    CHECK(diag.rows[i].sum.real() == pi_x[i]);
    CHECK(off.rows[i].sum.real() == chi_sum[i]);
    CHECK(diag.rows[i].normalized_residual <= 5.0);
    CHECK(off.rows[i].normalized_residual <= 5.0);
  }
  CHECK(!diag.warning);
  std::ostringstream csv;
  write_ssoc_csv(csv, diag);
  CHECK(csv.str().rfind("x,S_re,S_im,predicted,residual,normalized_residual\n", 0) == 0);
}

TEST_CASE("diagonal warning when the declared kappa is off") {
  std::ostringstream file;
  file << "name = twice\ndegree = 1\nkappa = 2\nprime_limit = 10000\n";
  for (auto p : sieve_primes(10000)) file << p << " 1 0\n";
  std::istringstream in(file.str());
  const auto spec = ingest_coefficients(in);
  const auto table = ssoc_diagnostic(spec, spec, 10000.0, {10000.0});
  CHECK(table.warning.has_value());
}
