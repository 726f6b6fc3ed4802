#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ct2stl/image.hpp"

namespace ct2stl {

/// Binary PGM (P5), maxval up to 65535. Samples above 255 are two bytes,
/// big-endian, per the format. Pixel values land in the slice verbatim as HU.
SliceImage parse_pgm(std::span<const std::uint8_t> bytes, double default_thickness_mm = 1.0);

/// Inverse of parse_pgm for non-negative images; maxval is (1 << bits_stored) - 1.
std::vector<std::uint8_t> write_pgm(const SliceImage& slice);

}  // namespace ct2stl
