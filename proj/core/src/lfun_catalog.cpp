#include "lhunt/lfun_catalog.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>

#include "lhunt/error.hpp"
#include "lhunt/prime_lattice.hpp"

namespace lhunt {

namespace {

constexpr double kUnitTol = 1e-12;
constexpr double kRamanujanTol = 1e-9;

int jacobi(long long a, long long m) {
  // m odd positive
  a %= m;
  if (a < 0) a += m;
  int result = 1;
  while (a != 0) {
    while (a % 2 == 0) {
      a /= 2;
      const long long r = m % 8;
      if (r == 3 || r == 5) result = -result;
    }
    std::swap(a, m);
    if (a % 4 == 3 && m % 4 == 3) result = -result;
    a %= m;
  }
  return m == 1 ? result : 0;
}

int kronecker_symbol(long long d, unsigned long long n) {
  if (n == 0) return (d == 1 || d == -1) ? 1 : 0;
  int result = 1;
  while (n % 2 == 0) {
    n /= 2;
    if (d % 2 == 0) return 0;
    const long long r = ((d % 8) + 8) % 8;
    if (r == 3 || r == 5) result = -result;
  }
  if (n == 1) return result;
  return result * jacobi(d, static_cast<long long>(n));
}

bool is_fundamental_discriminant(int d) {
  if (d == 0 || d == 1) return false;
  auto squarefree = [](long long n) {
    n = std::llabs(n);
    for (long long f = 2; f * f <= n; ++f)
      if (n % (f * f) == 0) return false;
    return true;
  };
  const int r = ((d % 4) + 4) % 4;
  if (r == 1) return squarefree(d);
  if (r != 0) return false;
  const int m = d / 4;
  const int mr = ((m % 4) + 4) % 4;
  return (mr == 2 || mr == 3) && squarefree(m);
}

// Coprime units in [1, q): chi(a) = 1 on every a = 1 mod d means chi factors
// through (Z/dZ)^*.
bool induced_from(const std::vector<cplx>& values, std::uint32_t q, std::uint32_t d) {
  for (std::uint32_t a = 1; a < q; a += d) {
    if (std::gcd(a, q) != 1) continue;
    if (std::abs(values[a] - cplx(1.0, 0.0)) > 1e-9) return false;
  }
  return true;
}

std::uint32_t least_primitive_root(std::uint32_t q) {
  const std::uint32_t phi = q - 1;
  std::vector<std::uint32_t> factors;
  std::uint32_t n = phi;
  for (std::uint32_t f = 2; f * f <= n; ++f) {
    if (n % f) continue;
    factors.push_back(f);
    while (n % f == 0) n /= f;
  }
  if (n > 1) factors.push_back(n);
  auto powmod = [q](std::uint64_t b, std::uint64_t e) {
    std::uint64_t r = 1;
    b %= q;
    while (e) {
      if (e & 1) r = r * b % q;
      b = b * b % q;
      e >>= 1;
    }
    return r;
  };
  for (std::uint32_t g = 2; g < q; ++g) {
    bool ok = true;
    for (auto f : factors)
      if (powmod(g, phi / f) == 1) {
        ok = false;
        break;
      }
    if (ok) return g;
  }
  throw Error(Errc::invalid_argument, "no primitive root");
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& text, const std::string& what) {
  try {
    std::size_t pos = 0;
    double v = std::stod(text, &pos);
    if (trim(text.substr(pos)).empty()) return v;
  } catch (...) {
  }
  throw Error(Errc::parse_error, "cannot parse " + what + ": '" + text + "'");
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

cplx parse_complex_pair(const std::string& text, const std::string& what) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) return {parse_double(text, what), 0.0};
  return {parse_double(text.substr(0, colon), what), parse_double(text.substr(colon + 1), what)};
}

}  // namespace

// ---------------------------------------------------------------------------
// DirichletCharacter

DirichletCharacter DirichletCharacter::from_values(std::uint32_t modulus, std::vector<cplx> values) {
  if (modulus == 0 || values.size() != modulus)
    throw Error(Errc::invalid_argument, "character table must have one value per residue");
  for (std::uint32_t a = 0; a < modulus; ++a) {
    const bool unit = std::gcd(a, modulus) == 1;
    const double mod = std::abs(values[a]);
    if (unit && std::abs(mod - 1.0) > kUnitTol)
      throw Error(Errc::invalid_argument, "character value on a unit must have modulus 1");
    if (!unit && mod > kUnitTol)
      throw Error(Errc::invalid_argument, "character must vanish off units");
    if (!unit) values[a] = 0.0;
  }
  for (std::uint32_t a = 1; a < modulus; ++a)
    for (std::uint32_t b = a; b < modulus; ++b) {
      const std::uint64_t ab = static_cast<std::uint64_t>(a) * b % modulus;
      if (std::abs(values[ab] - values[a] * values[b]) > 1e-9)
        throw Error(Errc::invalid_argument, "character table is not multiplicative");
    }

  DirichletCharacter chi;
  chi.modulus_ = modulus;
  chi.values_ = std::move(values);
  chi.real_ = std::all_of(chi.values_.begin(), chi.values_.end(),
                          [](cplx v) { return std::abs(v.imag()) <= kUnitTol; });
  chi.principal_ = induced_from(chi.values_, modulus, 1);
  chi.primitive_ = true;
  for (std::uint32_t d = 1; d < modulus; ++d)
    if (modulus % d == 0 && induced_from(chi.values_, modulus, d)) {
      chi.primitive_ = false;
      break;
    }
  if (modulus == 1) chi.primitive_ = true;
  return chi;
}

DirichletCharacter DirichletCharacter::kronecker(int discriminant) {
  if (!is_fundamental_discriminant(discriminant))
    throw Error(Errc::invalid_argument,
                "kronecker: " + std::to_string(discriminant) + " is not a fundamental discriminant");
  const auto q = static_cast<std::uint32_t>(std::abs(discriminant));
  std::vector<cplx> values(q);
  for (std::uint32_t a = 0; a < q; ++a) values[a] = kronecker_symbol(discriminant, a);
  return from_values(q, std::move(values));
}

DirichletCharacter DirichletCharacter::prime_modulus(std::uint32_t q, std::uint32_t index) {
  if (q < 3 || !is_prime(q)) throw Error(Errc::invalid_argument, "prime_modulus: q must be an odd prime");
  const std::uint32_t g = least_primitive_root(q);
  std::vector<cplx> values(q, 0.0);
  std::uint64_t power = 1;
  for (std::uint32_t k = 0; k < q - 1; ++k) {
    const double angle =
        2.0 * std::numbers::pi * static_cast<double>((static_cast<std::uint64_t>(index) * k) % (q - 1)) /
        static_cast<double>(q - 1);
    values[power] = std::polar(1.0, angle);
    power = power * g % q;
  }
  return from_values(q, std::move(values));
}

DirichletCharacter chi4() { return DirichletCharacter::kronecker(-4); }

// ---------------------------------------------------------------------------
// LFunctionSpec

struct LFunctionSpec::Table {
  std::uint64_t prime_limit = 0;
  bool roots_known = true;
  std::vector<std::uint64_t> primes;  // ascending
  std::vector<cplx> roots;            // degree entries per prime
  std::vector<cplx> coeffs;

  std::ptrdiff_t index_of(std::uint64_t p) const {
    auto it = std::lower_bound(primes.begin(), primes.end(), p);
    if (it == primes.end() || *it != p) return -1;
    return it - primes.begin();
  }
};

bool LFunctionSpec::roots_known() const noexcept { return !table_ || table_->roots_known; }

std::uint64_t LFunctionSpec::prime_limit() const noexcept {
  return table_ ? table_->prime_limit : std::numeric_limits<std::uint64_t>::max();
}

bool LFunctionSpec::covers(std::uint64_t p) const {
  if (!table_) return true;
  return p <= table_->prime_limit && table_->index_of(p) >= 0;
}

void LFunctionSpec::require_coverage(std::uint64_t lo, std::uint64_t hi) const {
  if (!table_) return;
  if (hi > table_->prime_limit)
    throw Error(Errc::coverage_insufficient,
                "coefficient coverage insufficient: " + name_ + " stops at " +
                    std::to_string(table_->prime_limit) + ", need " + std::to_string(hi));
  for (std::uint64_t p : primes_in_range(lo, hi))
    if (table_->index_of(p) < 0)
      throw Error(Errc::coverage_insufficient,
                  "coefficient coverage insufficient: " + name_ + " lacks p=" + std::to_string(p));
}

cplx LFunctionSpec::coefficient(std::uint64_t p) const {
  switch (backend_) {
    case EvalBackend::zeta:
      return 1.0;
    case EvalBackend::dirichlet:
      return (*character_)(p);
    case EvalBackend::euler_product_estimate:
      break;
  }
  const auto idx = table_->index_of(p);
  if (idx < 0 || p > table_->prime_limit)
    throw Error(Errc::coverage_insufficient,
                "coefficient coverage insufficient: " + name_ + " lacks p=" + std::to_string(p));
  return table_->coeffs[idx];
}

std::vector<cplx> LFunctionSpec::euler_roots(std::uint64_t p) const {
  if (!table_) return {coefficient(p)};
  if (!table_->roots_known)
    throw Error(Errc::roots_unavailable, "Euler roots unavailable for " + name_);
  const auto idx = table_->index_of(p);
  if (idx < 0 || p > table_->prime_limit)
    throw Error(Errc::coverage_insufficient,
                "coefficient coverage insufficient: " + name_ + " lacks p=" + std::to_string(p));
  const auto begin = table_->roots.begin() + idx * degree_;
  return {begin, begin + degree_};
}

LFunctionSpec builtin_zeta() {
  LFunctionSpec spec;
  spec.name_ = "zeta";
  spec.degree_ = 1;
  spec.kappa_ = 1.0;
  spec.backend_ = EvalBackend::zeta;
  FunctionalData fd;
  fd.Q = 1.0 / std::sqrt(std::numbers::pi);
  fd.lambdas = {0.5};
  fd.mus = {0.0};
  fd.pole_order = 1;
  spec.functional_ = fd;
  return spec;
}

LFunctionSpec builtin_dirichlet(const DirichletCharacter& chi) {
  if (!chi.primitive() || chi.modulus() < 3)
    throw Error(Errc::imprimitive_character, "imprimitive character");
  LFunctionSpec spec;
  const int sign = chi(chi.modulus() - 1).real() < 0 ? 1 : 0;  // parity a = 1 for odd chi
  if (chi.real()) {
    spec.name_ = "kron" + std::to_string(sign ? -static_cast<int>(chi.modulus())
                                              : static_cast<int>(chi.modulus()));
    if (chi.modulus() == 4) spec.name_ = "chi4";
    if (chi.modulus() == 3) spec.name_ = "chi3";
  } else {
    spec.name_ = "dirichlet" + std::to_string(chi.modulus());
  }
  spec.degree_ = 1;
  spec.kappa_ = 1.0;
  spec.backend_ = EvalBackend::dirichlet;
  spec.character_ = chi;
  FunctionalData fd;
  fd.Q = std::sqrt(chi.modulus() / std::numbers::pi);
  fd.lambdas = {0.5};
  fd.mus = {0.5 * sign};
  spec.functional_ = fd;
  return spec;
}

LFunctionSpec ingest_coefficients(std::istream& in) {
  std::string name = "ingested";
  int degree = 0;
  double kappa = 0.0;
  std::uint64_t prime_limit = 0;
  bool roots_mode = true;
  std::optional<FunctionalData> fd;
  auto table = std::make_shared<LFunctionSpec::Table>();

  std::string raw;
  int line_no = 0;
  bool have_degree = false, have_kappa = false, have_limit = false;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq != std::string::npos) {
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (key == "name") {
        name = value;
      } else if (key == "degree") {
        degree = static_cast<int>(parse_double(value, "degree"));
        have_degree = true;
      } else if (key == "kappa") {
        kappa = parse_double(value, "kappa");
        have_kappa = true;
      } else if (key == "prime_limit") {
        prime_limit = static_cast<std::uint64_t>(parse_double(value, "prime_limit"));
        have_limit = true;
      } else if (key == "records") {
        if (value == "roots") roots_mode = true;
        else if (value == "coefficients") roots_mode = false;
        else throw Error(Errc::parse_error, "records must be 'roots' or 'coefficients'");
      } else if (key == "Q") {
        if (!fd) fd.emplace();
        fd->Q = parse_double(value, "Q");
      } else if (key == "lambda") {
        if (!fd) fd.emplace();
        fd->lambdas.clear();
        for (const auto& item : split_list(value)) fd->lambdas.push_back(parse_double(item, "lambda"));
      } else if (key == "mu") {
        if (!fd) fd.emplace();
        fd->mus.clear();
        for (const auto& item : split_list(value)) fd->mus.push_back(parse_complex_pair(item, "mu"));
      } else if (key == "omega") {
        if (!fd) fd.emplace();
        fd->omega = parse_complex_pair(value, "omega");
      } else if (key == "pole_order") {
        if (!fd) fd.emplace();
        fd->pole_order = static_cast<int>(parse_double(value, "pole_order"));
      } else {
        throw Error(Errc::parse_error, "unknown header key '" + key + "' on line " + std::to_string(line_no));
      }
      continue;
    }

    if (!have_degree || degree < 1)
      throw Error(Errc::parse_error, "degree must be declared (>= 1) before data lines");
    std::istringstream fields(line);
    std::uint64_t p = 0;
    if (!(fields >> p)) throw Error(Errc::parse_error, "bad prime on line " + std::to_string(line_no));
    std::vector<double> nums;
    std::string tok;
    while (fields >> tok) nums.push_back(parse_double(tok, "coefficient"));
    if (!is_prime(p)) throw Error(Errc::parse_error, std::to_string(p) + " is not prime");
    if (!table->primes.empty() && p <= table->primes.back())
      throw Error(Errc::parse_error, "primes must be strictly ascending (line " + std::to_string(line_no) + ")");

    if (roots_mode) {
      if (nums.size() % 2 != 0 || nums.size() / 2 > static_cast<std::size_t>(degree))
        throw Error(Errc::parse_error, "expected up to degree re/im pairs on line " + std::to_string(line_no));
      cplx sum = 0.0;
      std::vector<cplx> roots(degree, 0.0);
      for (std::size_t j = 0; j < nums.size() / 2; ++j) {
        roots[j] = {nums[2 * j], nums[2 * j + 1]};
        if (std::abs(roots[j]) > 1.0 + kRamanujanTol)
          throw Error(Errc::ramanujan_violated,
                      "Ramanujan bound violated: |nu(" + std::to_string(p) + ")| = " +
                          std::to_string(std::abs(roots[j])));
        sum += roots[j];
      }
      table->roots.insert(table->roots.end(), roots.begin(), roots.end());
      table->coeffs.push_back(sum);
    } else {
      if (nums.size() != 2) throw Error(Errc::parse_error, "expected 'p re im' on line " + std::to_string(line_no));
      const cplx a{nums[0], nums[1]};
      if (std::abs(a) > degree + kRamanujanTol)
        throw Error(Errc::ramanujan_violated,
                    "Ramanujan bound violated: |a(" + std::to_string(p) + ")| exceeds degree");
      table->coeffs.push_back(a);
      if (degree == 1) table->roots.push_back(a);
    }
    table->primes.push_back(p);
  }
  if (!have_degree || !have_kappa || !have_limit)
    throw Error(Errc::parse_error, "header must declare degree, kappa and prime_limit");
  if (!(kappa > 0.0)) throw Error(Errc::parse_error, "kappa must be positive");
  if (!table->primes.empty() && table->primes.back() > prime_limit)
    throw Error(Errc::parse_error, "record beyond declared prime_limit");
  table->prime_limit = prime_limit;
  table->roots_known = roots_mode || degree == 1;
  if (!table->roots_known) table->roots.clear();

  LFunctionSpec spec;
  spec.name_ = name;
  spec.degree_ = degree;
  spec.kappa_ = kappa;
  spec.backend_ = EvalBackend::euler_product_estimate;
  spec.functional_ = fd;
  spec.table_ = std::move(table);
  return spec;
}

LFunctionSpec ingest_coefficients_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot open coefficient file " + path);
  return ingest_coefficients(in);
}

LFunctionSpec resolve_spec(const std::string& name) {
  if (name == "zeta") return builtin_zeta();
  if (name == "chi4") return builtin_dirichlet(chi4());
  if (name == "chi3") return builtin_dirichlet(DirichletCharacter::kronecker(-3));
  if (name.rfind("file:", 0) == 0) return ingest_coefficients_file(name.substr(5));
  if (name.rfind("kron", 0) == 0) {
    const int d = static_cast<int>(parse_double(name.substr(4), "discriminant"));
    return builtin_dirichlet(DirichletCharacter::kronecker(d));
  }
  if (name.rfind("dirichlet", 0) == 0) {
    const auto rest = name.substr(9);
    const auto us = rest.find('_');
    if (us == std::string::npos) throw Error(Errc::invalid_argument, "expected dirichlet<q>_<index>");
    const auto q = static_cast<std::uint32_t>(parse_double(rest.substr(0, us), "modulus"));
    const auto idx = static_cast<std::uint32_t>(parse_double(rest.substr(us + 1), "index"));
    auto spec = builtin_dirichlet(DirichletCharacter::prime_modulus(q, idx));
    spec.name_ = name;
    return spec;
  }
  throw Error(Errc::invalid_argument, "unknown L-function '" + name + "'");
}

// ---------------------------------------------------------------------------
// Orthonormality diagnostics

SsocTable ssoc_diagnostic(const LFunctionSpec& li, const LFunctionSpec& lj, double x_max,
                          std::vector<double> checkpoints) {
  if (!(x_max >= 2.0)) throw Error(Errc::invalid_argument, "x_max must be >= 2");
  std::sort(checkpoints.begin(), checkpoints.end());
  for (double x : checkpoints)
    if (x < 2.0 || x > x_max) throw Error(Errc::invalid_argument, "checkpoints must lie in [2, x_max]");
  const auto limit = static_cast<std::uint64_t>(std::floor(x_max));
  li.require_coverage(2, limit);
  lj.require_coverage(2, limit);

  SsocTable table;
  table.diagonal = li.name() == lj.name();
  const auto primes = sieve_primes(limit);

  // Neumaier summation on each component.
  double sr = 0.0, cr = 0.0, si = 0.0, ci = 0.0;
  auto add = [](double& s, double& c, double v) {
    const double t = s + v;
    c += std::abs(s) >= std::abs(v) ? (s - t) + v : (v - t) + s;
    s = t;
  };

  std::size_t idx = 0;
  for (double x : checkpoints) {
    while (idx < primes.size() && static_cast<double>(primes[idx]) <= x) {
      const cplx term = li.coefficient(primes[idx]) * std::conj(lj.coefficient(primes[idx]));
      add(sr, cr, term.real());
      add(si, ci, term.imag());
      ++idx;
    }
    SsocRow row;
    row.x = x;
    row.sum = {sr + cr, si + ci};
    row.predicted = table.diagonal ? lj.kappa() * log_integral(x) : 0.0;
    row.residual = std::abs(row.sum - cplx(row.predicted, 0.0));
    const double lx = std::log(x);
    row.normalized_residual = row.residual / (x / (lx * lx));
    table.rows.push_back(row);
  }

  if (table.diagonal && !table.rows.empty()) {
    const auto& last = table.rows.back();
    if (last.predicted > 0.0) {
      const double slope = last.sum.real() / log_integral(last.x);
      if (std::abs(slope / lj.kappa() - 1.0) > 0.2) {
        std::ostringstream msg;
        msg << "empirical kappa " << slope << " differs from declared " << lj.kappa() << " by more than 20%";
        table.warning = msg.str();
      }
    }
  }
  return table;
}

void write_ssoc_csv(std::ostream& out, const SsocTable& table) {
  out << "x,S_re,S_im,predicted,residual,normalized_residual\n";
  out << std::setprecision(17);
  for (const auto& r : table.rows)
    out << r.x << ',' << r.sum.real() << ',' << r.sum.imag() << ',' << r.predicted << ',' << r.residual << ','
        << r.normalized_residual << '\n';
}

}  // namespace lhunt
