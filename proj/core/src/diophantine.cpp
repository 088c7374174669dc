#include "lhunt/diophantine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include "lhunt/error.hpp"
#include "lhunt/parallel.hpp"

namespace lhunt {

namespace {

constexpr std::size_t kSeeds = 32;
constexpr double kInvPhi = 0.6180339887498948482;

struct Candidate {
  double value;
  double t;
  bool operator<(const Candidate& o) const { return value < o.value || (value == o.value && t < o.t); }
};

// Keeps the best `cap` candidates, ordered.
void keep_best(std::vector<Candidate>& pool, std::size_t cap) {
  std::sort(pool.begin(), pool.end());
  if (pool.size() > cap) pool.resize(cap);
}

double grid_t(const DiophantineInstance& inst, double step, std::size_t i) {
  return std::min(inst.t2, inst.t1 + static_cast<double>(i) * step);
}

std::size_t grid_size(const DiophantineInstance& inst, double step) {
  return static_cast<std::size_t>(std::floor((inst.t2 - inst.t1) / step)) + 1;
}

// Half-enumeration for exact_lambda: all sums over u in [-M, M]^m.
std::vector<double> half_sums(const double* lam, std::size_t m, int M) {
  std::vector<double> out{0.0};
  for (std::size_t j = 0; j < m; ++j) {
    std::vector<double> next;
    next.reserve(out.size() * (2 * M + 1));
    for (double v : out)
      for (int u = -M; u <= M; ++u) next.push_back(v + u * lam[j]);
    out = std::move(next);
  }
  return out;
}

}  // namespace

double nearest_int_dist(double x) { return std::abs(x - std::nearbyint(x)); }

void DiophantineInstance::validate() const {
  if (lambdas.empty()) throw Error(Errc::invalid_argument, "Diophantine instance needs n >= 1");
  if (alphas.size() != lambdas.size() || deltas.size() != lambdas.size())
    throw Error(Errc::invalid_argument, "lambdas, alphas and deltas differ in length");
  if (!(t1 < t2)) throw Error(Errc::empty_range, "empty range: need t1 < t2");
  for (double d : deltas)
    if (!(d > 0.0)) throw Error(Errc::invalid_argument, "deltas must be positive");
  if (M < 1) throw Error(Errc::invalid_argument, "box size M must be >= 1");
}

double DiophantineInstance::delta_sum() const {
  double s = 0.0;
  for (double d : deltas) s += d;
  return s;
}

DiophantineInstance DiophantineInstance::from_window(const PrimeWindow& window, const std::vector<double>& thetas,
                                                     double t1, double t2, int M) {
  if (thetas.size() != window.size()) throw Error(Errc::invalid_argument, "one theta per window prime");
  DiophantineInstance inst;
  inst.t1 = t1;
  inst.t2 = t2;
  inst.M = M;
  for (std::size_t i = 0; i < window.size(); ++i) {
    inst.lambdas.push_back(static_cast<double>(std::log(static_cast<long double>(window.primes[i])) /
                                               (2.0L * std::numbers::pi_v<long double>)));
    inst.alphas.push_back(thetas[i]);
    inst.deltas.push_back(window.inv_powers[i]);
  }
  inst.validate();
  return inst;
}

double objective(const DiophantineInstance& inst, double t) {
  const std::size_t n = inst.n();
  const double* lam = inst.lambdas.data();
  const double* al = inst.alphas.data();
  const double* de = inst.deltas.data();
  double s = 0.0;
#pragma omp simd reduction(+ : s)
  for (std::size_t j = 0; j < n; ++j) {
    const double x = lam[j] * t - al[j];
    const double d = x - std::nearbyint(x);
    s += de[j] * d * d;
  }
  return s;
}

double LambdaBound::value() const { return std::exp(log_value); }

LambdaBound LambdaBound::scaled(double factor) const { return {log_value + std::log(factor)}; }

LambdaBound lambda_lower_bound(const std::vector<std::uint64_t>& primes, int M) {
  if (M <= 0 || primes.empty()) return {std::numeric_limits<double>::infinity()};
  double x = 0.0;
  for (auto p : primes) x += std::log(static_cast<double>(p));
  x *= M;
  // log(log1p(e^{-x})) without underflow: log1p(e^{-x}) = e^{-x}(1 - e^{-x}/2 + ...).
  if (x > 30.0) return {-x + std::log1p(-0.5 * std::exp(-x))};
  return {std::log(std::log1p(std::exp(-x)))};
}

double exact_lambda(const std::vector<double>& lambdas, int M, std::size_t max_half) {
  if (M <= 0 || lambdas.empty()) return std::numeric_limits<double>::infinity();
  const std::size_t n = lambdas.size();
  const std::size_t na = n / 2, nb = n - na;
  const double base = 2.0 * M + 1.0;
  if (std::pow(base, static_cast<double>(nb)) > static_cast<double>(max_half))
    throw Error(Errc::invalid_argument, "exact Lambda enumeration too large");
  const auto a = half_sums(lambdas.data(), na, M);
  auto b = half_sums(lambdas.data() + na, nb, M);
  // The all-zero combination sits in the middle of each enumeration.
  const std::size_t a_zero = a.size() / 2;
  std::vector<std::pair<double, bool>> bs;
  bs.reserve(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) bs.emplace_back(b[i], i == b.size() / 2);
  std::sort(bs.begin(), bs.end());

  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double target = -a[i];
    auto it = std::lower_bound(bs.begin(), bs.end(), std::make_pair(target, false));
    const bool a_is_zero = i == a_zero;
    auto consider = [&](std::vector<std::pair<double, bool>>::const_iterator c) {
      if (a_is_zero && c->second) return;
      best = std::min(best, std::abs(a[i] + c->first));
    };
    // Step outwards past the zero entry if needed.
    for (auto c = it; c != bs.end(); ++c) {
      consider(c);
      if (!(a_is_zero && c->second)) break;
    }
    for (auto c = it; c != bs.begin();) {
      --c;
      consider(c);
      if (!(a_is_zero && c->second)) break;
    }
  }
  return best;
}

ChenCertificate chen_bound(const DiophantineInstance& inst, double Lambda_lower) {
  if (!(Lambda_lower > 0.0)) throw Error(Errc::invalid_argument, "Lambda lower bound must be positive");
  return chen_bound(inst, LambdaBound{std::log(Lambda_lower)});
}

ChenCertificate chen_bound(const DiophantineInstance& inst, LambdaBound Lambda_lower) {
  inst.validate();
  if (std::isnan(Lambda_lower.log_value) || Lambda_lower.log_value == -std::numeric_limits<double>::infinity())
    throw Error(Errc::invalid_argument, "Lambda lower bound must be positive");
  ChenCertificate c;
  c.Delta = inst.delta_sum();
  c.log_Lambda_lower = Lambda_lower.log_value;
  c.Lambda_lower = Lambda_lower.value();
  const double s = std::sin(std::numbers::pi / (2.0 * (inst.M + 1)));
  const double log_tail = std::log(c.Delta) + static_cast<double>(inst.n()) * std::log(static_cast<double>(inst.M)) -
                          std::log(4.0 * std::numbers::pi * (inst.t2 - inst.t1)) - Lambda_lower.log_value;
  c.bound = c.Delta / 4.0 * s * s + std::exp(log_tail);
  c.achieved = std::numeric_limits<double>::quiet_NaN();
  c.argmin_t = std::numeric_limits<double>::quiet_NaN();
  return c;
}

SearchResult grid_minimum(const DiophantineInstance& inst, double h) {
  inst.validate();
  if (!(h > 0.0)) throw Error(Errc::invalid_argument, "grid step must be positive");
  const std::size_t npts = grid_size(inst, h);
  const std::size_t workers = std::min(worker_count(), npts);
  std::vector<Candidate> best(workers, {std::numeric_limits<double>::infinity(), 0.0});
  const std::size_t chunk = (npts + workers - 1) / workers;
  parallel_chunks(workers, [&](std::size_t wb, std::size_t we) {
    for (std::size_t w = wb; w < we; ++w) {
      const std::size_t end = std::min(npts, (w + 1) * chunk);
      for (std::size_t i = w * chunk; i < end; ++i) {
        const double t = grid_t(inst, h, i);
        const Candidate c{objective(inst, t), t};
        if (c < best[w]) best[w] = c;
      }
    }
  });
  const Candidate b = *std::min_element(best.begin(), best.end());
  return {b.t, b.value, b.t, b.value, npts, 0};
}

SearchResult search_t(const DiophantineInstance& inst, double grid_step, int refine_iters) {
  inst.validate();
  double max_lambda = 0.0;
  for (double l : inst.lambdas) max_lambda = std::max(max_lambda, std::abs(l));
  if (!(grid_step > 0.0)) throw Error(Errc::invalid_argument, "grid step must be positive");
  if (max_lambda > 0.0 && grid_step > 1.0 / (4.0 * max_lambda) * (1.0 + 1e-12))
    throw Error(Errc::invalid_argument, "grid step exceeds 1/(4 max lambda)");

  const std::size_t npts = grid_size(inst, grid_step);
  const std::size_t workers = std::min(worker_count(), npts);
  const std::size_t chunk = (npts + workers - 1) / workers;
  std::vector<std::vector<Candidate>> pools(workers);
  std::vector<Candidate> coarse(workers, {std::numeric_limits<double>::infinity(), 0.0});

  parallel_chunks(workers, [&](std::size_t wb, std::size_t we) {
    for (std::size_t w = wb; w < we; ++w) {
      const std::size_t begin = w * chunk, end = std::min(npts, (w + 1) * chunk);
      if (begin >= end) continue;
      auto& pool = pools[w];
      auto f = [&](std::size_t i) { return objective(inst, grid_t(inst, grid_step, i)); };
      double prev = begin > 0 ? f(begin - 1) : std::numeric_limits<double>::infinity();
      double cur = f(begin);
      for (std::size_t i = begin; i < end; ++i) {
        const double next = i + 1 < npts ? f(i + 1) : std::numeric_limits<double>::infinity();
        const Candidate c{cur, grid_t(inst, grid_step, i)};
        if (c < coarse[w]) coarse[w] = c;
        if (cur <= prev && cur <= next) {
          pool.push_back(c);
          if (pool.size() >= 4 * kSeeds) keep_best(pool, kSeeds);
        }
        prev = cur;
        cur = next;
      }
      keep_best(pool, kSeeds);
    }
  });

  std::vector<Candidate> seeds;
  for (auto& p : pools) seeds.insert(seeds.end(), p.begin(), p.end());
  keep_best(seeds, kSeeds);
  const Candidate coarse_best = *std::min_element(coarse.begin(), coarse.end());
  if (seeds.empty()) seeds.push_back(coarse_best);

  std::vector<Candidate> refined(seeds.size());
  parallel_chunks(seeds.size(), [&](std::size_t sb, std::size_t se) {
    for (std::size_t s = sb; s < se; ++s) {
      double a = std::max(inst.t1, seeds[s].t - grid_step);
      double b = std::min(inst.t2, seeds[s].t + grid_step);
      double x1 = b - kInvPhi * (b - a), x2 = a + kInvPhi * (b - a);
      double f1 = objective(inst, x1), f2 = objective(inst, x2);
      Candidate best = seeds[s];
      for (int it = 0; it < refine_iters; ++it) {
        if (f1 <= f2) {
          b = x2;
          x2 = x1;
          f2 = f1;
          x1 = b - kInvPhi * (b - a);
          f1 = objective(inst, x1);
        } else {
          a = x1;
          x1 = x2;
          f1 = f2;
          x2 = a + kInvPhi * (b - a);
          f2 = objective(inst, x2);
        }
        best = std::min(best, Candidate{f1, x1});
        best = std::min(best, Candidate{f2, x2});
      }
      refined[s] = best;
    }
  });

  Candidate best = coarse_best;
  for (const auto& c : refined) best = std::min(best, c);
  // Values equal up to roundoff count as ties; the smaller t wins.
  const double tie = 64.0 * std::numeric_limits<double>::epsilon() * inst.delta_sum();
  for (const auto& c : refined)
    if (c.value <= best.value + tie && c.t < best.t) best = c;
  SearchResult r;
  r.t = best.t;
  r.value = best.value;
  r.coarse_t = coarse_best.t;
  r.coarse_value = coarse_best.value;
  r.grid_points = npts;
  r.seeds = seeds.size();
  return r;
}

ChenCertificate certify(const DiophantineInstance& inst, LambdaBound Lambda_lower, double grid_step,
                        int refine_iters) {
  auto cert = chen_bound(inst, Lambda_lower);
  const auto r = search_t(inst, grid_step, refine_iters);
  cert.achieved = r.value;
  cert.argmin_t = r.t;
  return cert;
}

}  // namespace lhunt
