#pragma once

#include <stdexcept>
#include <string>

namespace lhunt {

enum class Errc {
  invalid_argument,
  window_too_small,
  below_lower_limit,
  imprimitive_character,
  coverage_insufficient,
  ramanujan_violated,
  roots_unavailable,
  parse_error,
  near_pole,
  zero_crossing_suspected,
  targets_infeasible,
  degenerate_matrix,
  empty_range,
  io_error,
};

// Single exception type for the library; `code()` lets callers branch on
// recoverable conditions such as a suspected zero inside a window.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace lhunt
