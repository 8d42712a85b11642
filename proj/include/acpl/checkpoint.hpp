#pragma once

#include <cstdint>
#include <string>

#include "acpl/bundle.hpp"

namespace acpl {

// Binary state file, little endian throughout:
//   magic "ACPL" | version u32 | n u32 | dims[n] u32 | h f64 | eps f64
//   | u[nodes] f64 | edge sign bits, axis blocks in node order, LSB first
// A set bit is a flipped edge (sign -1). The grid is reconstructed with the
// centered-box convention, so no origin is stored.
inline constexpr uint32_t kCheckpointVersion = 1;

void save_checkpoint(const GaugeSection& s, const std::string& path);

// IoFailure on anything unreadable or truncated, CheckpointVersionMismatch
// when the version word differs from kCheckpointVersion.
GaugeSection load_checkpoint(const std::string& path);

}  // namespace acpl
