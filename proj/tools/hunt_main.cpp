#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "lhunt/error.hpp"
#include "lhunt/hunt.hpp"
#include "lhunt/lfun_catalog.hpp"
#include "lhunt/report.hpp"
#include "lhunt/verify.hpp"

namespace {

int cmd_run(const std::string& config_path, const std::optional<double>& rho, const std::optional<std::uint64_t>& seed,
            const std::string& out_dir, bool quiet) {
  auto cfg = lhunt::HuntConfig::load(config_path);
  if (rho) cfg.rho_override = *rho;
  if (seed) cfg.seed = *seed;
  const auto report = lhunt::run_hunt(cfg, [&](const std::string& m) {
    if (!quiet) std::cerr << "[hunt] " << m << "\n";
  });
  lhunt::write_report(report, out_dir);

  std::printf("rho %.6g%s (coupled %.6g), tau %.6g, window primes %zu\n", report.rho,
              report.rho_overridden ? " OVERRIDDEN" : "", report.rho_coupled, report.tau, report.window_size);
  if (!report.coupling_ok) std::printf("note: c*mu <= 2 sinh 1, the coupling constraint is not met\n");
  std::printf("t0 %.17g  objective %.6g  window_ok %s\n", report.t0, report.dio_objective,
              report.window_ok ? "true" : "false");
  for (const auto& s : report.specs)
    std::printf("%-12s theta %-8.4g t_j %.10g achieved %.6g percentile %.4f |L| %.6g |L|-percentile %.4f\n",
                s.name.c_str(), s.theta, s.t_j, s.achieved, s.baseline_percentile, s.abs_value, s.abs_percentile);
  return 0;
}

int cmd_verify(const std::string& suite, std::optional<int> trials, std::uint64_t seed) {
  int n = trials.value_or(suite == "denseness" ? 1 : 100);
  const auto result = lhunt::run_verify_suite(suite, n, seed);
  for (const auto& line : result.lines)
    std::printf("%s %s%s%s\n", line.passed ? "PASS" : "FAIL", line.label.c_str(), line.detail.empty() ? "" : ": ",
                line.detail.c_str());
  std::printf("%s: %s\n", suite.c_str(), result.passed() ? "all certificates pass" : "FAILED");
  return result.passed() ? 0 : 1;
}

int cmd_ssoc(const std::string& pair, double x_max, const std::string& out_path) {
  const auto comma = pair.find(',');
  if (comma == std::string::npos) throw lhunt::Error(lhunt::Errc::invalid_argument, "--pair expects A,B");
  const auto a = lhunt::resolve_spec(pair.substr(0, comma));
  const auto b = lhunt::resolve_spec(pair.substr(comma + 1));
  std::vector<double> checkpoints;
  for (double x = 100.0; x < x_max; x *= 10.0) checkpoints.push_back(x);
  checkpoints.push_back(x_max);
  const auto table = lhunt::ssoc_diagnostic(a, b, x_max, checkpoints);
  if (table.warning) std::cerr << "warning: " << *table.warning << "\n";
  if (out_path.empty() || out_path == "-") {
    lhunt::write_ssoc_csv(std::cout, table);
    return 0;
  }
  std::ostringstream os;
  lhunt::write_ssoc_csv(os, table);
  lhunt::write_text_file(out_path, os.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simultaneous large-value hunts for L-functions"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run a hunt and write report.json and report.csv");
  std::string config_path, out_dir = ".";
  std::optional<double> rho;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
  run->add_option("--config", config_path, "Config file (key = value lines)")->required()->check(CLI::ExistingFile);
  run->add_option("--rho-override", rho, "Override the coupled window centre rho");
  run->add_option("--seed", seed, "Baseline sampling seed");
  run->add_option("--out", out_dir, "Output directory")->check(CLI::ExistingDirectory);
  run->add_flag("--quiet", quiet, "No progress messages");

  auto* verify = app.add_subcommand("verify", "Run a certificate suite; exit 0 iff all pass");
  std::string suite;
  std::optional<int> trials;
  std::uint64_t verify_seed = 1;
  verify->add_option("suite", suite, "chen | denseness | smoothing | asymptotics")
      ->required()
      ->check(CLI::IsMember({"chen", "denseness", "smoothing", "asymptotics"}));
  verify->add_option("--trials", trials, "Number of random trials")->check(CLI::PositiveNumber);
  verify->add_option("--seed", verify_seed, "Random seed");

  auto* diagnose = app.add_subcommand("diagnose", "Diagnostics");
  diagnose->require_subcommand(1);
  auto* ssoc = diagnose->add_subcommand("ssoc", "Prime-sum orthonormality table as CSV");
  std::string pair, ssoc_out;
  double x_max = 0.0;
  ssoc->add_option("--pair", pair, "Two spec names, e.g. zeta,chi4")->required();
  ssoc->add_option("--xmax", x_max, "Largest x")->required()->check(CLI::Range(2.0, 1e12));
  ssoc->add_option("--out", ssoc_out, "Output CSV path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, rho, seed, out_dir, quiet);
    if (verify->parsed()) return cmd_verify(suite, trials, verify_seed);
    if (ssoc->parsed()) return cmd_ssoc(pair, x_max, ssoc_out);
  } catch (const lhunt::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
