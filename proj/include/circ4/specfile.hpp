#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "circ4/geometry.hpp"

namespace circ4 {

struct SpecError : std::runtime_error {
  SpecError(int line, const std::string& message);
  int line;  // 0 when no specific line applies
};

/// A manifold spec file plus any run settings it carries. Command-line
/// flags override the file's [run] values, which override the defaults.
struct LoadedSpec {
  ManifoldSpec spec;
  std::optional<int> points;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
};

/// Loads and validates a spec file:
///
///   [manifold]           label, mode = "circulant" | "general"
///   [metric]             circulant: A, B, C; general: g11..g44 (gij = gji,
///                        unspecified off-diagonals default to 0)
///   [structure]          optional q11..q44; defaults to the canonical Q
///                        (missing entries default to 0 when present)
///   [domain]             x1_min/x1_max .. x4_min/x4_max
///   [run]                optional points, seed, tol
///
/// Values are expression strings in double quotes or bare numbers. Throws
/// SpecError with a line number and the offending key on any failure.
LoadedSpec load_spec(const std::string& path);

/// Same, from already-read file contents (used by tests).
LoadedSpec load_spec_text(const std::string& text);

}  // namespace circ4
