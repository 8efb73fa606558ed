#pragma once

#include <cstdint>
#include <string>

#include "holo/image.hpp"

namespace holo {

/// Procedural desk-scale sample objects (the repo ships no binary assets).
/// All generators are deterministic; values in [0,1] with 1 = opaque.

/// Resolution-target style bar groups at several spatial frequencies plus a
/// filled square. Scales with the grid size.
Image bar_target(int size);

/// Soft-edged elliptical blobs.
Image cell_blobs(int size, uint64_t seed = 7);

/// Branching filament pattern.
Image dendrite(int size, uint64_t seed = 11);

/// Lookup by name: "bars" | "cells" | "dendrite".
Image make_sample(const std::string& name, int size, uint64_t seed = 0);

}  // namespace holo
