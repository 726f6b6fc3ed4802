#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "ct2stl/image.hpp"

namespace ct2stl {

enum class PhantomShape { Cylinder, Box, TorusStack };

struct PhantomParams {
    PhantomShape shape = PhantomShape::Cylinder;
    int width = 512;
    int height = 512;
    int bits = 12;
    int n_slices = 8;
    double slice_thickness_mm = 1.5;
    double radius_px = 50.0;       // cylinder, torus tube center ring
    double side_px = 100.0;        // box
    double tube_radius_px = 20.0;  // torus minor radius
    std::int32_t foreground_hu = 1000;
    std::int32_t background_hu = 0;
    bool emit_dicom = false;  // .dcm alongside .pgm when set
};

/// Rasterize one slice of the phantom.
SliceImage phantom_slice(const PhantomParams& p, int index);

/// Encode a slice as a minimal explicit-VR little-endian DICOM file.
std::vector<std::uint8_t> write_minimal_dicom(const SliceImage& slice);

/// Write slice_0000.pgm (and optionally .dcm) files into out_dir.
/// Returns the written file names in order.
std::vector<std::filesystem::path> generate_phantom(const PhantomParams& p,
                                                    const std::filesystem::path& out_dir);

}  // namespace ct2stl
