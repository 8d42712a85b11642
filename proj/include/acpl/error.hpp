#pragma once

#include <stdexcept>
#include <string>

namespace acpl {

// Failure modes that callers are expected to branch on. Anything else is a
// plain std::runtime_error / assert.
enum class Err {
  DegenerateGamma,          // polyline too short, repeated vertices, zero reach
  LoopTouchesSeamEdgeCase,  // loop vertex or edge lies on seam within tolerance
  CheckpointVersionMismatch,
  InvalidConfig,
  LinearSolveFailure,
  GNotTangent,            // first-variation field not tangent near the boundary curve
  RegionTouchesOtherComponent,
  EmptySublevel,
  WindowTooThin,          // scaling-fit window has too few dyadic bins
  EigSolverStall,
  IoFailure,
};

class Error : public std::runtime_error {
public:
  Err code;
  Error(Err c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

[[noreturn]] inline void fail(Err c, const std::string& msg) { throw Error(c, msg); }

}  // namespace acpl
