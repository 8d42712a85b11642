#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "acpl/geometry.hpp"
#include "acpl/solver.hpp"

namespace acpl {

// Plain-text run description: UTF-8 key = value lines grouped under
// [grid], [gamma], [solver] and [diagnostics]. '#' starts a comment.
// Unknown sections or keys are rejected with the offending name and line.
struct RunConfig {
  // [grid]
  int n = 2;
  std::array<int64_t, 3> dims{129, 129, 1};
  double h = 0.0125;

  // [gamma]
  std::string gamma_kind = "none";  // none | point | circle | two_circles | file
  double radius = 1.0;
  double separation = 0.5;
  Vec3 center{};
  std::string gamma_path;
  bool auto_offset = true;  // nudge gamma off the grid planes by h/3 along the diagonal

  // [solver]
  SolverConfig solver;
  std::string init_checkpoint;

  // [diagnostics]
  double delta = 0;  // interior window; 0 picks 4 * largest eps in the schedule
  double sublevel_b = 0.9;
  int spectrum_k = 5;

  GridSpec make_grid() const;
  // builds the boundary from kind + parameters, applies the diagonal offset,
  // and checks the box margin
  BoundaryManifold make_gamma() const;
  void validate() const;
};

RunConfig parse_config_text(const std::string& text, const std::string& name);
RunConfig parse_config(const std::string& path);

// canonical snapshot of every setting, parseable by parse_config_text
std::string config_to_text(const RunConfig& c);

}  // namespace acpl
