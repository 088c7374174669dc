#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(HUNT_EXE) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("lhunt-cli-" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("verify exit codes") {
  CHECK(run("verify chen --trials 5") == 0);
  CHECK(run("verify denseness") == 0);
  CHECK(run("verify nosuch") != 0);
}

TEST_CASE("run writes both reports") {
  const auto dir = scratch("run");
  {
    std::ofstream cfg(dir / "hunt.cfg");
    cfg << "T = 1e5\nspecs = zeta\nbaseline_samples = 100\ngrid_points = 256\n";
  }
  CHECK(run("run --quiet --config " + (dir / "hunt.cfg").string() + " --rho-override 20 --seed 4 --out " +
            dir.string()) == 0);
  CHECK(fs::exists(dir / "report.json"));
  CHECK(fs::exists(dir / "report.csv"));
  CHECK(slurp(dir / "report.json").find("\"rho_overridden\": true") != std::string::npos);
}

TEST_CASE("unknown config key is rejected") {
  const auto dir = scratch("badkey");
  {
    std::ofstream cfg(dir / "hunt.cfg");
    cfg << "T = 1e5\nfavourite_prime = 7\n";
  }
  CHECK(run("run --quiet --config " + (dir / "hunt.cfg").string() + " --out " + dir.string()) != 0);
  CHECK(!fs::exists(dir / "report.json"));
}

TEST_CASE("diagnose ssoc csv") {
  const auto dir = scratch("ssoc");
  CHECK(run("diagnose ssoc --pair zeta,chi4 --xmax 1e4 --out " + (dir / "ssoc.csv").string()) == 0);
  const auto text = slurp(dir / "ssoc.csv");
  CHECK(text.rfind("x,S_re", 0) == 0);
  CHECK(text.find("\n10000,-10,") != std::string::npos);
}
