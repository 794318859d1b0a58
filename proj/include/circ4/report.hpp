#pragma once

#include <cstdint>
#include <string>

#include "circ4/classify.hpp"

namespace circ4 {

inline constexpr std::string_view kToolName = "circ4";
inline constexpr std::string_view kToolVersion = "0.1.0";

struct RunOptions {
  int points = 50;
  std::uint64_t seed = 0;
  double tol = 1e-8;
  bool check_identities = true;
};

struct RunReport {
  std::string label;
  std::string timestamp;  // ISO-8601 UTC; excluded from determinism checks
  RunOptions options;
  ClassReport report;
};

/// Runs classification (and the identity suite unless disabled) and stamps
/// the report with metadata.
RunReport run(const ManifoldSpec& spec, const RunOptions& options);

/// Human-readable verdict table. Residuals in scientific notation with
/// 3 significant digits.
std::string format_text(const RunReport& r);

/// Stable machine-readable JSON: fixed key order, full-precision numbers
/// that round-trip exactly, one key per line. Byte-identical for identical
/// inputs except for the timestamp line.
std::string format_machine(const RunReport& r);

}  // namespace circ4
