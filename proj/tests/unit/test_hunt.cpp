#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "lhunt/error.hpp"
#include "lhunt/hunt.hpp"
#include "lhunt/report.hpp"

using namespace lhunt;

namespace {
constexpr double kPi = std::numbers::pi;

HuntConfig parse_text(const std::string& text) {
  std::istringstream in(text);
  return HuntConfig::parse(in);
}

HuntConfig small_config() {
  return parse_text(
      "T = 1e5\nrho_override = 20\nspecs = zeta, chi4\ntheta_targets = 0, pi\n"
      "baseline_samples = 200\ngrid_points = 512\nseed = 3\n");
}

const HuntReport& small_report() {
  static const HuntReport r = run_hunt(small_config());
  return r;
}
}  // namespace

TEST_CASE("config parsing") {
  const auto c = parse_text("# comment\nsigma0 = 0.7\ntheta_targets = 0, -pi/2, 0.5*pi  # trailing\nM = 2\n");
  CHECK(c.sigma0 == 0.7);
  CHECK(c.M == 2);
  REQUIRE(c.theta_targets.size() == 3);
  CHECK(c.theta_targets[1] == doctest::Approx(-kPi / 2));
  CHECK(c.theta_targets[2] == doctest::Approx(kPi / 2));
  CHECK(!c.rho_override);
  CHECK(parse_text("rho_override = 50\n").rho_override == 50.0);
  CHECK(!parse_text("rho_override = none\n").rho_override);
  CHECK(parse_text("") == HuntConfig{});
}

TEST_CASE("config errors") {
  auto code = [](const std::string& text) {
    try {
      parse_text(text);
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::invalid_argument;
  };
  CHECK(code("colour = blue\n") == Errc::parse_error);
  CHECK(code("T = 1e6\nT = 2e6\n") == Errc::parse_error);
  CHECK(code("T = lots\n") == Errc::parse_error);
  CHECK(code("just words\n") == Errc::parse_error);
}

TEST_CASE("plan") {
  HuntConfig c;
  c.M = 2;
  c.c = 1.5;
  try {
    plan(c);
    FAIL("expected rejection");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::window_too_small);
  }
  c.M = 1;
  c.c = 1.0;
  const auto p = plan(c);
  CHECK(p.rho == doctest::Approx(std::log(1e6) / 2).epsilon(1e-12));
  CHECK(!p.rho_overridden);
  CHECK(p.tau == doctest::Approx(std::pow(std::log(1e6), 0.875) * std::sqrt(std::log(std::log(1e6)))));
  CHECK(p.tau == doctest::Approx(16.1).epsilon(0.01));
  for (const auto& xi : p.system.targets) {
    CHECK(xi.real() > 0.0);
    CHECK(xi.imag() == 0.0);
  }

  HuntConfig o;
  o.rho_override = 50.0;
  o.specs = {"zeta", "chi4"};
  o.theta_targets = {0.0, 0.0};
  const auto po = plan(o);
  CHECK(po.rho == 50.0);
  CHECK(po.rho_overridden);
  CHECK(po.rho_coupled == doctest::Approx(std::log(1e6) / 6));

  HuntConfig mismatch;
  mismatch.specs = {"zeta", "chi4"};
  mismatch.rho_override = 50.0;
  CHECK_THROWS(plan(mismatch));
  HuntConfig none;
  none.specs = {};
  none.theta_targets = {};
  none.rho_override = 50.0;
  CHECK_THROWS(plan(none));
}

TEST_CASE("smoothing row periodic in theta") {
  HuntConfig cfg;
  cfg.grid_points = 1024;
  const auto a = verify_smoothing_bound(builtin_zeta(), cfg, 300.0, 0.4, 10.0);
  const auto b = verify_smoothing_bound(builtin_zeta(), cfg, 300.0, 0.4 + 2 * kPi, 10.0);
  CHECK(a.window_max == doctest::Approx(b.window_max).epsilon(1e-12));
  CHECK(a.half_resonator == doctest::Approx(b.half_resonator).epsilon(1e-12));
}

TEST_CASE("small hunt run") {
  const auto& r = small_report();
  CHECK(r.window_ok);
  CHECK(r.chen_holds);
  CHECK(r.t0 >= 1e5);
  CHECK(r.t0 <= 2e5);
  REQUIRE(r.specs.size() == 2);
  for (const auto& s : r.specs) {
    CHECK(std::abs(s.t_j - r.window_center) <= r.tau + 1e-9);
    CHECK(s.resonator_check < 1e-10);
    CHECK(s.baseline_q05 <= s.baseline_q95);
  }
}

TEST_CASE("report json round trip and determinism") {
  const auto& r = small_report();
  const auto text = report_json(r);
  CHECK(parse_report_json(text) == r);
  CHECK(report_json(parse_report_json(text)) == text);
  CHECK(report_json(run_hunt(small_config())) == text);
  const auto j = nlohmann::json::parse(text);
  CHECK(j["schema"] == "lhunt-report/1");
  CHECK_THROWS(parse_report_json("{"));
}

TEST_CASE("report csv") {
  const auto csv = report_csv(small_report());
  std::istringstream in(csv);
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    CHECK(std::count(line.begin(), line.end(), ',') == 13);
    ++rows;
  }
  CHECK(rows == 3);
  CHECK(csv.rfind("spec,theta,t0,", 0) == 0);
}

TEST_CASE("non-finite values survive json") {
  HuntReport r;
  r.chen_log_Lambda = INFINITY;
  r.rounding_bound = -INFINITY;
  const auto back = parse_report_json(report_json(r));
  CHECK(back.chen_log_Lambda == INFINITY);
  CHECK(back.rounding_bound == -INFINITY);
}

TEST_CASE("unwritable output") { CHECK_THROWS(write_text_file("/nonexistent-dir/x/report.json", "x")); }
