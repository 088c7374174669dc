#pragma once

#include <array>
#include <string>
#include <string_view>

#include "lhunt/hunt.hpp"

namespace lhunt {

/// Canonical JSON: fixed key order, 17 significant digits, non-finite values
/// as the strings "inf", "-inf" and "nan".
std::string report_json(const HuntReport& report);

/// Inverse of report_json. Throws Errc::parse_error on malformed input.
HuntReport parse_report_json(const std::string& text);

inline constexpr std::array<std::string_view, 14> kCsvColumns = {
    "spec",     "theta",        "t0",           "t_j",                 "achieved",     "resonator_re",
    "resonator_im", "resonator_aligned", "baseline_percentile", "baseline_q05", "baseline_q95", "window_ok",
    "tau",      "rho"};

/// Header plus one row per spec.
std::string report_csv(const HuntReport& report);

/// Writes <dir>/report.json and <dir>/report.csv. Throws Errc::io_error.
void write_report(const HuntReport& report, const std::string& dir);

/// Writes `text` to `path`, throwing Errc::io_error on failure.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace lhunt
