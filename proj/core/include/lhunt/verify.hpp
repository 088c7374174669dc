#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lhunt {

struct CheckLine {
  std::string label;
  bool passed = false;
  std::string detail;
};

struct SuiteResult {
  std::string name;
  std::vector<CheckLine> lines;
  bool passed() const;
};

/// Random Diophantine instances (n <= 6, prime-log frequencies, M <= 3,
/// range length >= 1000); the exhaustive fine-grid infimum must not exceed
/// the certificate bound.
SuiteResult verify_chen(int trials, std::uint64_t seed = 1);

/// zeta and chi4 at rho in {50, 100, 200}, targets at half capacity with
/// random angles: solver residual, polydisk membership and rounding bounds.
SuiteResult verify_denseness(int trials, std::uint64_t seed = 1);

/// Fejer integral bound on random (tau, theta, rho), its large-tau limit,
/// and the smoothing inequality for zeta at low heights.
SuiteResult verify_smoothing(int trials, std::uint64_t seed = 1);

/// Capacity ratio against C_{3/4} and the prime-power tail trend for zeta.
SuiteResult verify_asymptotics();

/// Dispatch by name: chen, denseness, smoothing or asymptotics.
SuiteResult run_verify_suite(const std::string& name, int trials, std::uint64_t seed = 1);

}  // namespace lhunt
