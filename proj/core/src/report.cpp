#include "lhunt/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "lhunt/error.hpp"

namespace lhunt {

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "\"nan\"";
  if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_num(double v) {
  const auto s = num(v);
  return s.front() == '"' ? s.substr(1, s.size() - 2) : s;
}

std::string str(const std::string& s) {
  // Names come from the catalog or file paths; escape the JSON specials anyway.
  std::string out = "\"";
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", ch);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  return out + "\"";
}

// Minimal ordered object writer.
class Obj {
 public:
  explicit Obj(std::string indent) : indent_(std::move(indent)) {}
  Obj& raw(const char* key, const std::string& v) {
    body_ += (body_.empty() ? "" : ",\n") + indent_ + "  \"" + key + "\": " + v;
    return *this;
  }
  Obj& d(const char* key, double v) { return raw(key, num(v)); }
  Obj& b(const char* key, bool v) { return raw(key, v ? "true" : "false"); }
  Obj& u(const char* key, std::uint64_t v) { return raw(key, std::to_string(v)); }
  Obj& i(const char* key, long long v) { return raw(key, std::to_string(v)); }
  Obj& s(const char* key, const std::string& v) { return raw(key, str(v)); }
  std::string done() const { return "{\n" + body_ + "\n" + indent_ + "}"; }

 private:
  std::string indent_;
  std::string body_;
};

double get_d(const nlohmann::json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    throw Error(Errc::parse_error, "report: bad number '" + s + "'");
  }
  return j.get<double>();
}

}  // namespace

std::string report_json(const HuntReport& r) {
  const auto& c = r.config;
  std::string thetas = "[", specs = "[";
  for (std::size_t i = 0; i < c.theta_targets.size(); ++i) thetas += (i ? ", " : "") + num(c.theta_targets[i]);
  for (std::size_t i = 0; i < c.specs.size(); ++i) specs += (i ? ", " : "") + str(c.specs[i]);
  thetas += "]";
  specs += "]";

  Obj cfg("  ");
  cfg.d("sigma0", c.sigma0).d("T", c.T).raw("theta_targets", thetas).i("M", c.M).d("c", c.c).d("mu", c.mu);
  cfg.raw("specs", specs).u("baseline_samples", c.baseline_samples).u("seed", c.seed);
  cfg.raw("rho_override", c.rho_override ? num(*c.rho_override) : "null");
  cfg.u("grid_points", c.grid_points).d("dio_grid_factor", c.dio_grid_factor).i("refine_iters", c.refine_iters);
  cfg.d("c0_factor", c.c0_factor);

  Obj plan("  ");
  plan.d("rho_coupled", r.rho_coupled).d("rho", r.rho).b("rho_overridden", r.rho_overridden);
  plan.b("coupling_ok", r.coupling_ok).d("tau", r.tau).d("target_magnitude", r.target_magnitude);
  plan.d("c0", r.c0).d("capacity", r.capacity).u("window_size", r.window_size);

  Obj dense("  ");
  dense.d("residual", r.denseness_residual).u("iterations", r.denseness_iterations);
  dense.u("interior_after_pivot", r.interior_after_pivot).u("snapped", r.snapped);
  dense.d("rounding_residual", r.rounding_residual).d("rounding_bound", r.rounding_bound);

  Obj chen("    ");
  chen.d("Delta", r.chen_Delta).d("log_Lambda_lower", r.chen_log_Lambda).d("bound", r.chen_bound);
  chen.b("holds", r.chen_holds);
  Obj dio("  ");
  dio.d("grid_step", r.dio_grid_step).d("t0", r.t0).d("objective", r.dio_objective);
  dio.d("coarse_objective", r.dio_coarse_objective).raw("chen", chen.done());

  Obj win("  ");
  win.i("shifts", r.window_shifts).d("center", r.window_center).d("max_pairwise", r.max_pairwise);
  win.b("window_ok", r.window_ok);

  std::string rows = "[";
  for (std::size_t i = 0; i < r.specs.size(); ++i) {
    const auto& s = r.specs[i];
    Obj o("    ");
    o.s("name", s.name).d("theta", s.theta).b("certified", s.certified).d("t_j", s.t_j).d("achieved", s.achieved);
    o.d("log_re", s.log_value.real()).d("log_im", s.log_value.imag()).d("abs_value", s.abs_value);
    o.d("abs_err_bound", s.abs_err_bound);
    o.d("resonator_re", s.resonator.real()).d("resonator_im", s.resonator.imag());
    o.d("resonator_aligned", s.resonator_aligned).d("resonator_check", s.resonator_check);
    o.d("ideal_aligned", s.ideal_aligned);
    o.d("baseline_percentile", s.baseline_percentile).d("baseline_q01", s.baseline_q01);
    o.d("baseline_q05", s.baseline_q05).d("baseline_q50", s.baseline_q50).d("baseline_q95", s.baseline_q95);
    o.d("baseline_q99", s.baseline_q99).d("abs_percentile", s.abs_percentile);
    o.d("baseline_abs_q01", s.baseline_abs_q01).d("baseline_abs_q05", s.baseline_abs_q05);
    o.d("smoothing_error_term", s.smoothing_error_term).d("smoothing_slack", s.smoothing_slack);
    rows += (i ? ",\n    " : "\n    ") + o.done();
  }
  rows += r.specs.empty() ? "]" : "\n  ]";

  Obj top("");
  top.s("schema", "lhunt-report/1").raw("config", cfg.done()).raw("plan", plan.done());
  top.raw("denseness", dense.done()).raw("diophantine", dio.done()).raw("window", win.done());
  top.raw("specs", rows);
  return top.done() + "\n";
}

HuntReport parse_report_json(const std::string& text) {
  HuntReport r;
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.at("schema") != "lhunt-report/1") throw Error(Errc::parse_error, "report: unknown schema");
    const auto& c = j.at("config");
    auto& cfg = r.config;
    cfg.sigma0 = get_d(c.at("sigma0"));
    cfg.T = get_d(c.at("T"));
    cfg.theta_targets.clear();
    for (const auto& t : c.at("theta_targets")) cfg.theta_targets.push_back(get_d(t));
    cfg.M = c.at("M").get<int>();
    cfg.c = get_d(c.at("c"));
    cfg.mu = get_d(c.at("mu"));
    cfg.specs = c.at("specs").get<std::vector<std::string>>();
    cfg.baseline_samples = c.at("baseline_samples").get<std::size_t>();
    cfg.seed = c.at("seed").get<std::uint64_t>();
    if (c.at("rho_override").is_null())
      cfg.rho_override.reset();
    else
      cfg.rho_override = get_d(c.at("rho_override"));
    cfg.grid_points = c.at("grid_points").get<std::size_t>();
    cfg.dio_grid_factor = get_d(c.at("dio_grid_factor"));
    cfg.refine_iters = c.at("refine_iters").get<int>();
    cfg.c0_factor = get_d(c.at("c0_factor"));

    const auto& p = j.at("plan");
    r.rho_coupled = get_d(p.at("rho_coupled"));
    r.rho = get_d(p.at("rho"));
    r.rho_overridden = p.at("rho_overridden").get<bool>();
    r.coupling_ok = p.at("coupling_ok").get<bool>();
    r.tau = get_d(p.at("tau"));
    r.target_magnitude = get_d(p.at("target_magnitude"));
    r.c0 = get_d(p.at("c0"));
    r.capacity = get_d(p.at("capacity"));
    r.window_size = p.at("window_size").get<std::size_t>();

    const auto& d = j.at("denseness");
    r.denseness_residual = get_d(d.at("residual"));
    r.denseness_iterations = d.at("iterations").get<std::size_t>();
    r.interior_after_pivot = d.at("interior_after_pivot").get<std::size_t>();
    r.snapped = d.at("snapped").get<std::size_t>();
    r.rounding_residual = get_d(d.at("rounding_residual"));
    r.rounding_bound = get_d(d.at("rounding_bound"));

    const auto& o = j.at("diophantine");
    r.dio_grid_step = get_d(o.at("grid_step"));
    r.t0 = get_d(o.at("t0"));
    r.dio_objective = get_d(o.at("objective"));
    r.dio_coarse_objective = get_d(o.at("coarse_objective"));
    const auto& ch = o.at("chen");
    r.chen_Delta = get_d(ch.at("Delta"));
    r.chen_log_Lambda = get_d(ch.at("log_Lambda_lower"));
    r.chen_bound = get_d(ch.at("bound"));
    r.chen_holds = ch.at("holds").get<bool>();

    const auto& w = j.at("window");
    r.window_shifts = w.at("shifts").get<int>();
    r.window_center = get_d(w.at("center"));
    r.max_pairwise = get_d(w.at("max_pairwise"));
    r.window_ok = w.at("window_ok").get<bool>();

    for (const auto& s : j.at("specs")) {
      SpecOutcome out;
      out.name = s.at("name").get<std::string>();
      out.theta = get_d(s.at("theta"));
      out.certified = s.at("certified").get<bool>();
      out.t_j = get_d(s.at("t_j"));
      out.achieved = get_d(s.at("achieved"));
      out.log_value = {get_d(s.at("log_re")), get_d(s.at("log_im"))};
      out.abs_value = get_d(s.at("abs_value"));
      out.abs_err_bound = get_d(s.at("abs_err_bound"));
      out.resonator = {get_d(s.at("resonator_re")), get_d(s.at("resonator_im"))};
      out.resonator_aligned = get_d(s.at("resonator_aligned"));
      out.resonator_check = get_d(s.at("resonator_check"));
      out.ideal_aligned = get_d(s.at("ideal_aligned"));
      out.baseline_percentile = get_d(s.at("baseline_percentile"));
      out.baseline_q01 = get_d(s.at("baseline_q01"));
      out.baseline_q05 = get_d(s.at("baseline_q05"));
      out.baseline_q50 = get_d(s.at("baseline_q50"));
      out.baseline_q95 = get_d(s.at("baseline_q95"));
      out.baseline_q99 = get_d(s.at("baseline_q99"));
      out.abs_percentile = get_d(s.at("abs_percentile"));
      out.baseline_abs_q01 = get_d(s.at("baseline_abs_q01"));
      out.baseline_abs_q05 = get_d(s.at("baseline_abs_q05"));
      out.smoothing_error_term = get_d(s.at("smoothing_error_term"));
      out.smoothing_slack = get_d(s.at("smoothing_slack"));
      r.specs.push_back(std::move(out));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::parse_error, std::string("report: ") + e.what());
  }
  return r;
}

std::string report_csv(const HuntReport& r) {
  std::string out;
  for (std::size_t i = 0; i < kCsvColumns.size(); ++i) (out += i ? "," : "") += kCsvColumns[i];
  out += "\n";
  for (const auto& s : r.specs) {
    std::ostringstream row;
    row << s.name << ',' << csv_num(s.theta) << ',' << csv_num(r.t0) << ',' << csv_num(s.t_j) << ','
        << csv_num(s.achieved) << ',' << csv_num(s.resonator.real()) << ',' << csv_num(s.resonator.imag()) << ','
        << csv_num(s.resonator_aligned) << ',' << csv_num(s.baseline_percentile) << ',' << csv_num(s.baseline_q05)
        << ',' << csv_num(s.baseline_q95) << ',' << (r.window_ok ? "true" : "false") << ',' << csv_num(r.tau) << ','
        << csv_num(r.rho) << '\n';
    out += row.str();
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(Errc::io_error, "cannot write " + path);
  f << text;
  if (!f) throw Error(Errc::io_error, "write failed: " + path);
}

void write_report(const HuntReport& report, const std::string& dir) {
  const std::filesystem::path base(dir.empty() ? "." : dir);
  write_text_file((base / "report.json").string(), report_json(report));
  write_text_file((base / "report.csv").string(), report_csv(report));
}

}  // namespace lhunt
