#pragma once

#include <cstdint>

namespace shiftcd {

/// Seed for every stochastic routine; a fixed seed gives a bit-reproducible run.
using RngSeed = std::uint64_t;

}  // namespace shiftcd
