#pragma once

#include <string>

#include "holo/image.hpp"

namespace holo {

/// Read a grayscale raster into [0,1]. Supports PNG (8/16-bit; color is
/// converted to luminance) and PGM (P2/P5, maxval up to 65535).
Image read_image(const std::string& path);

/// Write a [0,1] image as 16-bit grayscale PNG. Values are clamped and
/// quantized to 65535 steps.
void write_png16(const std::string& path, const Image& image);

/// Phase in [-pi, pi] mapped linearly onto the 16-bit range.
void write_phase_png16(const std::string& path, const Image& phase);

}  // namespace holo
