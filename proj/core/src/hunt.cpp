#include "lhunt/hunt.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "lhunt/error.hpp"
#include "lhunt/lfun_eval.hpp"
#include "lhunt/parallel.hpp"

namespace lhunt {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInvPhi = 0.6180339887498948482;
constexpr int kPolishIters = 40;
constexpr double kSmoothingSlackMax = 10.0;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
  throw Error(Errc::parse_error, "config: bad value for " + key + ": '" + value + "'");
}

double parse_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end || !std::isfinite(out)) bad_value(key, v);
  return out;
}

template <class Int>
Int parse_int(const std::string& key, const std::string& v) {
  Int out = 0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) bad_value(key, v);
  return out;
}

// Plain number, or [sign][k*]pi[/d].
double parse_angle(const std::string& key, std::string v) {
  const auto pos = v.find("pi");
  if (pos == std::string::npos) return parse_double(key, v);
  double sign = 1.0, factor = 1.0, divisor = 1.0;
  std::string head = trim(v.substr(0, pos));
  std::string tail = trim(v.substr(pos + 2));
  if (!head.empty() && (head[0] == '-' || head[0] == '+')) {
    if (head[0] == '-') sign = -1.0;
    head = trim(head.substr(1));
  }
  if (!head.empty()) {
    if (head.back() != '*') bad_value(key, v);
    factor = parse_double(key, trim(head.substr(0, head.size() - 1)));
  }
  if (!tail.empty()) {
    if (tail[0] != '/') bad_value(key, v);
    divisor = parse_double(key, trim(tail.substr(1)));
    if (divisor == 0.0) bad_value(key, v);
  }
  return sign * factor * kPi / divisor;
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

// Type-7 quantile of sorted data.
double quantile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double fraction_below(const std::vector<double>& sorted, double x) {
  if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
  const auto it = std::lower_bound(sorted.begin(), sorted.end(), x);
  return static_cast<double>(it - sorted.begin()) / static_cast<double>(sorted.size());
}

double aligned(std::complex<double> v, double theta) { return (std::polar(1.0, -theta) * v).real(); }

// S(t0) in long double, term by term; the independent route for the
// resonator consistency check.
std::complex<double> brute_resonator(const LFunctionSpec& spec, const PrimeWindow& w, double t0) {
  long double re = 0.0L, im = 0.0L;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const long double lp = std::log(static_cast<long double>(w.primes[i]));
    const long double amp = (1.0L - std::fabs(lp - std::log(static_cast<long double>(w.rho)))) *
                            std::exp(-static_cast<long double>(w.sigma0) * lp);
    const long double ph = static_cast<long double>(t0) * lp;
    const std::complex<double> a = spec.coefficient(w.primes[i]);
    const long double c = std::cos(ph), s = std::sin(ph);
    re += amp * (a.real() * c + a.imag() * s);
    im += amp * (a.imag() * c - a.real() * s);
  }
  return {static_cast<double>(re), static_cast<double>(im)};
}

struct WindowEval {
  std::vector<double> grid;
  std::vector<std::vector<EvalPoint>> logs;  // per spec
};

WindowEval evaluate_window(const std::vector<LEvaluator>& evals, double center, double tau, std::size_t grid_points) {
  WindowEval w;
  w.grid.resize(grid_points + 1);
  const double h = 2.0 * tau / static_cast<double>(grid_points);
  for (std::size_t g = 0; g <= grid_points; ++g) w.grid[g] = center - tau + static_cast<double>(g) * h;
  for (const auto& ev : evals) w.logs.push_back(ev.log_branch(w.grid));
  return w;
}

}  // namespace

// ---------------------------------------------------------------------------
// HuntConfig

HuntConfig HuntConfig::parse(std::istream& in) {
  HuntConfig cfg;
  std::set<std::string> seen;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(Errc::parse_error, "config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!seen.insert(key).second) throw Error(Errc::parse_error, "config: duplicate key " + key);
    if (key == "sigma0") {
      cfg.sigma0 = parse_double(key, value);
    } else if (key == "T") {
      cfg.T = parse_double(key, value);
    } else if (key == "theta_targets") {
      cfg.theta_targets.clear();
      for (const auto& item : split_list(value)) cfg.theta_targets.push_back(parse_angle(key, item));
    } else if (key == "M") {
      cfg.M = parse_int<int>(key, value);
    } else if (key == "c") {
      cfg.c = parse_double(key, value);
    } else if (key == "mu") {
      cfg.mu = parse_double(key, value);
    } else if (key == "specs") {
      cfg.specs.clear();
      for (const auto& item : split_list(value)) {
        if (item.empty()) bad_value(key, value);
        cfg.specs.push_back(item);
      }
    } else if (key == "baseline_samples") {
      cfg.baseline_samples = parse_int<std::size_t>(key, value);
    } else if (key == "seed") {
      cfg.seed = parse_int<std::uint64_t>(key, value);
    } else if (key == "rho_override") {
      if (value == "none")
        cfg.rho_override.reset();
      else
        cfg.rho_override = parse_double(key, value);
    } else if (key == "grid_points") {
      cfg.grid_points = parse_int<std::size_t>(key, value);
    } else if (key == "dio_grid_factor") {
      cfg.dio_grid_factor = parse_double(key, value);
    } else if (key == "refine_iters") {
      cfg.refine_iters = parse_int<int>(key, value);
    } else if (key == "c0_factor") {
      cfg.c0_factor = parse_double(key, value);
    } else {
      throw Error(Errc::parse_error, "config: unknown key '" + key + "'");
    }
  }
  return cfg;
}

HuntConfig HuntConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot open config " + path);
  return parse(in);
}

void HuntConfig::validate() const {
  auto fail = [](const std::string& m) { throw Error(Errc::invalid_argument, "config: " + m); };
  if (!(sigma0 > 0.5 && sigma0 < 1.0)) fail("sigma0 must lie in (1/2, 1)");
  if (!(T > std::exp(1.0))) fail("T must exceed e");
  if (specs.empty()) fail("at least one spec required");
  if (theta_targets.size() != specs.size()) fail("theta_targets needs one angle per spec");
  if (M < 1) fail("M must be a positive integer");
  if (!(c > 0.0)) fail("c must be positive");
  if (!(mu > 0.0 && mu < 1.0)) fail("mu must lie in (0, 1)");
  if (baseline_samples < 1) fail("baseline_samples must be >= 1");
  if (grid_points < 2) fail("grid_points must be >= 2");
  if (!(dio_grid_factor > 0.0 && dio_grid_factor <= 0.25)) fail("dio_grid_factor must lie in (0, 1/4]");
  if (refine_iters < 0) fail("refine_iters must be >= 0");
  if (!(c0_factor > 0.0 && c0_factor < 1.0)) fail("c0_factor must lie in (0, 1)");
  if (rho_override && !(*rho_override > 0.0)) fail("rho_override must be positive");
}

// ---------------------------------------------------------------------------
// plan

double hunt_tau(double T, double sigma0) {
  const double l = std::log(T);
  return std::pow(l, (1.0 + sigma0) / 2.0) * std::sqrt(std::log(l));
}

HuntPlan plan(const HuntConfig& config) {
  config.validate();
  HuntPlan p;
  const double logT = std::log(config.T);
  p.rho_coupled = logT / (2.0 * config.M * config.c);
  p.coupling_ok = config.c * config.mu > 2.0 * std::sinh(1.0);
  if (config.rho_override) {
    p.rho = *config.rho_override;
    p.rho_overridden = true;
  } else {
    if (p.rho_coupled < 3.0) {
      std::ostringstream msg;
      msg << "T too small for chosen M, c (rho = " << p.rho_coupled << " < 3)";
      throw Error(Errc::window_too_small, msg.str());
    }
    p.rho = p.rho_coupled;
  }
  p.tau = hunt_tau(config.T, config.sigma0);
  p.target_magnitude = std::pow(logT, 1.0 - config.sigma0) / std::log(logT);
  p.c0 = config.c0_factor * c_sigma(config.sigma0);

  for (const auto& name : config.specs) p.specs.push_back(resolve_spec(name));
  auto window = build_window(p.rho, config.sigma0);
  if (p.specs.size() > window.size())
    throw Error(Errc::invalid_argument, "more L-functions than window primes");
  const double cap = denseness_capacity(window, p.specs, p.c0);
  p.system = ResonanceSystem::make(std::move(window), p.specs, default_targets(config.theta_targets, cap), p.c0);
  return p;
}

// ---------------------------------------------------------------------------
// run_hunt

HuntReport run_hunt(const HuntConfig& config, const ProgressFn& progress) {
  auto say = [&](const std::string& m) {
    if (progress) progress(m);
  };
  HuntPlan p = plan(config);
  const auto& sys = p.system;
  const auto& window = sys.window;
  const std::size_t k = sys.k();

  HuntReport rep;
  rep.config = config;
  rep.rho_coupled = p.rho_coupled;
  rep.rho = p.rho;
  rep.rho_overridden = p.rho_overridden;
  rep.coupling_ok = p.coupling_ok;
  rep.tau = p.tau;
  rep.target_magnitude = p.target_magnitude;
  rep.c0 = p.c0;
  rep.capacity = sys.capacity;
  rep.window_size = window.size();

  // Phases.
  say("denseness solve");
  const auto dense = solve_denseness(sys);
  rep.denseness_residual = dense.residual;
  rep.denseness_iterations = dense.iterations;
  const auto rounded = good_rounding(sys, dense);
  rep.interior_after_pivot = rounded.interior_after_pivot;
  rep.snapped = rounded.snapped.size();
  rep.rounding_residual = rounded.residual;
  rep.rounding_bound = rounded.rounding_bound;

  // Height search.
  say("diophantine search");
  const auto inst = DiophantineInstance::from_window(window, rounded.thetas, config.T, 2.0 * config.T, config.M);
  const double max_lambda = *std::max_element(inst.lambdas.begin(), inst.lambdas.end());
  rep.dio_grid_step = config.dio_grid_factor / max_lambda;
  const auto found = search_t(inst, rep.dio_grid_step, config.refine_iters);
  rep.t0 = found.t;
  rep.dio_objective = found.value;
  rep.dio_coarse_objective = found.coarse_value;
  auto lam = lambda_lower_bound(window.primes, config.M).scaled(1.0 / (2.0 * kPi));
  if (inst.n() <= 12 && config.M <= 2) {
    const double exact = exact_lambda(inst.lambdas, config.M);
    if (exact > 0.0 && std::log(exact) > lam.log_value) lam.log_value = std::log(exact);
  }
  const auto chen = chen_bound(inst, lam);
  rep.chen_Delta = chen.Delta;
  rep.chen_log_Lambda = chen.log_Lambda_lower;
  rep.chen_bound = chen.bound;
  rep.chen_holds = found.value <= chen.bound + 1e-9 * chen.Delta;

  // Window evaluation, shifted by tau once on a suspected zero.
  say("window evaluation");
  const double t_max = 2.0 * config.T + 3.0 * p.tau + 1.0;
  std::vector<LEvaluator> evals;
  evals.reserve(k);
  for (const auto& s : p.specs) evals.emplace_back(s, config.sigma0, t_max);
  WindowEval win;
  double center = rep.t0;
  for (int attempt = 0;; ++attempt) {
    try {
      win = evaluate_window(evals, center, p.tau, config.grid_points);
      break;
    } catch (const Error& e) {
      if (e.code() != Errc::zero_crossing_suspected) throw;
      if (attempt == 1) {
        std::ostringstream msg;
        msg << e.what() << " (window centers " << rep.t0 << " and " << center << ", tau " << p.tau << ")";
        throw Error(Errc::zero_crossing_suspected, msg.str());
      }
      say("zero suspected, shifting window by tau");
      center += p.tau;
      rep.window_shifts = 1;
    }
  }
  rep.window_center = center;

  const double h = 2.0 * p.tau / static_cast<double>(config.grid_points);
  const double lo = center - p.tau, hi = center + p.tau;
  for (std::size_t j = 0; j < k; ++j) {
    const double theta = config.theta_targets[j];
    const auto& pts = win.logs[j];
    std::size_t best = 0;
    for (std::size_t g = 1; g < pts.size(); ++g)
      if (aligned(pts[g].log_value, theta) > aligned(pts[best].log_value, theta)) best = g;

    // Golden-section polish around the grid argmax, continuing the branch
    // from the grid point.
    const auto& anchor = pts[best];
    EvalPoint top = anchor;
    auto at = [&](double t) -> std::optional<EvalPoint> {
      const auto r = evals[j].value({config.sigma0, t});
      if (std::abs(r.value) < 1e-12) return std::nullopt;
      const auto d = std::log(r.value / anchor.value);
      if (std::abs(d) >= kPi / 2.0) return std::nullopt;
      return EvalPoint{config.sigma0, t, r.value, anchor.log_value + d, r.abs_err_bound, anchor.certified};
    };
    auto score = [&](const std::optional<EvalPoint>& e) {
      return e ? aligned(e->log_value, theta) : -std::numeric_limits<double>::infinity();
    };
    double a = std::max(lo, anchor.t - h), b = std::min(hi, anchor.t + h);
    double x1 = b - kInvPhi * (b - a), x2 = a + kInvPhi * (b - a);
    auto e1 = at(x1), e2 = at(x2);
    for (int it = 0; it < kPolishIters; ++it) {
      if (score(e1) >= score(e2)) {
        if (e1 && score(e1) > aligned(top.log_value, theta)) top = *e1;
        b = x2;
        x2 = x1;
        e2 = e1;
        x1 = b - kInvPhi * (b - a);
        e1 = at(x1);
      } else {
        if (e2 && score(e2) > aligned(top.log_value, theta)) top = *e2;
        a = x1;
        x1 = x2;
        e1 = e2;
        x2 = a + kInvPhi * (b - a);
        e2 = at(x2);
      }
    }

    SpecOutcome out;
    out.name = p.specs[j].name();
    out.theta = theta;
    out.certified = p.specs[j].certified();
    out.t_j = top.t;
    out.log_value = top.log_value;
    out.achieved = aligned(top.log_value, theta);
    out.abs_value = std::abs(top.value);
    out.abs_err_bound = std::isfinite(top.abs_err_bound) ? top.abs_err_bound : -1.0;
    out.resonator = resonator_sum(p.specs[j], window, config.sigma0, rep.t0);
    out.resonator_aligned = aligned(out.resonator, theta);
    out.resonator_check = std::abs(aligned(brute_resonator(p.specs[j], window, rep.t0), theta) - out.resonator_aligned);
    std::complex<double> g = 0.0;
    for (std::size_t i = 0; i < window.size(); ++i)
      g += sys.coeffs(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) * rounded.z[i];
    out.ideal_aligned = aligned(g, theta);
    out.smoothing_error_term = p.rho * (p.tau + std::log(rep.t0)) / (p.tau * p.tau);
    out.smoothing_slack = std::max(0.0, (0.5 * out.resonator_aligned - out.achieved) / out.smoothing_error_term);
    rep.specs.push_back(std::move(out));
  }

  rep.max_pairwise = 0.0;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      rep.max_pairwise = std::max(rep.max_pairwise, std::abs(rep.specs[i].t_j - rep.specs[j].t_j));
  rep.window_ok = rep.max_pairwise <= 2.0 * p.tau;

  // Baseline at uniformly random heights, drawn once and shared by all specs.
  say("baseline sampling");
  std::mt19937_64 rng(config.seed);
  std::vector<double> heights(config.baseline_samples);
  for (auto& t : heights) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    t = config.T + u * config.T;
  }
  for (std::size_t j = 0; j < k; ++j) {
    const double theta = config.theta_targets[j];
    const bool need_arg = std::abs(std::sin(theta)) > 1e-12;
    const double cs = std::cos(theta);
    std::vector<double> stat(heights.size()), mags(heights.size());
    std::vector<char> ok(heights.size(), 1);
    parallel_chunks(heights.size(), [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) {
        const auto v = evals[j].value({config.sigma0, heights[i]}).value;
        mags[i] = std::abs(v);
        if (!need_arg) {
          stat[i] = cs * std::log(mags[i]);
          continue;
        }
        try {
          const auto pt = evals[j].log_branch(std::span<const double>(&heights[i], 1));
          stat[i] = aligned(pt[0].log_value, theta);
        } catch (const Error& err) {
          if (err.code() != Errc::zero_crossing_suspected) throw;
          ok[i] = 0;
        }
      }
    });
    std::vector<double> s_sorted, m_sorted;
    for (std::size_t i = 0; i < heights.size(); ++i) {
      m_sorted.push_back(mags[i]);
      if (ok[i]) s_sorted.push_back(stat[i]);
    }
    std::sort(s_sorted.begin(), s_sorted.end());
    std::sort(m_sorted.begin(), m_sorted.end());
    auto& out = rep.specs[j];
    out.baseline_percentile = fraction_below(s_sorted, out.achieved);
    out.baseline_q01 = quantile(s_sorted, 0.01);
    out.baseline_q05 = quantile(s_sorted, 0.05);
    out.baseline_q50 = quantile(s_sorted, 0.50);
    out.baseline_q95 = quantile(s_sorted, 0.95);
    out.baseline_q99 = quantile(s_sorted, 0.99);
    out.abs_percentile = fraction_below(m_sorted, out.abs_value);
    out.baseline_abs_q01 = quantile(m_sorted, 0.01);
    out.baseline_abs_q05 = quantile(m_sorted, 0.05);
  }
  say("done");
  return rep;
}

SmoothingRow verify_smoothing_bound(const LFunctionSpec& spec, const HuntConfig& config, double t0, double theta,
                                    double rho) {
  config.validate();
  const double tau = hunt_tau(config.T, config.sigma0);
  const auto window = build_window(rho, config.sigma0);
  std::vector<double> grid(config.grid_points + 1);
  const double h = 2.0 * tau / static_cast<double>(config.grid_points);
  for (std::size_t g = 0; g < grid.size(); ++g) grid[g] = t0 - tau + static_cast<double>(g) * h;
  double t_far = 0.0;
  for (double t : grid) t_far = std::max(t_far, std::abs(t));
  LEvaluator ev(spec, config.sigma0, t_far);
  const auto pts = ev.log_branch(grid);

  SmoothingRow row;
  row.t0 = t0;
  row.window_max = -std::numeric_limits<double>::infinity();
  for (const auto& pt : pts) row.window_max = std::max(row.window_max, aligned(pt.log_value, theta));
  row.half_resonator = 0.5 * aligned(resonator_sum(spec, window, config.sigma0, t0), theta);
  row.error_term = rho * (tau + std::log(std::max(t0, std::numbers::e))) / (tau * tau);
  row.slack = std::max(0.0, (row.half_resonator - row.window_max) / row.error_term);
  row.holds = row.slack <= kSmoothingSlackMax;
  return row;
}

}  // namespace lhunt
