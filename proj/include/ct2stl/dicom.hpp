#pragma once

#include <cstdint>
#include <span>

#include "ct2stl/image.hpp"

namespace ct2stl {

enum class TransferSyntax {
    ImplicitVrLittleEndian,
    ExplicitVrLittleEndian,
};

struct DicomMeta {
    int rows = 0;
    int columns = 0;
    int bits_allocated = 0;
    int bits_stored = 0;
    int pixel_representation = 0;  // 0 unsigned, 1 two's complement
    double rescale_slope = 1.0;
    double rescale_intercept = 0.0;
    double slice_thickness_mm = 1.0;
    TransferSyntax transfer_syntax = TransferSyntax::ImplicitVrLittleEndian;
};

/// Parse one single-frame uncompressed little-endian CT slice.
///
/// Accepts the 128-byte preamble + "DICM" form (meta group always explicit VR)
/// or a bare implicit-VR data set starting at byte 0. Pixel values are
/// rescaled to HU via RescaleSlope/RescaleIntercept; stored samples are
/// masked to BitsStored first. Unknown elements are skipped by length and
/// reads never run past a declared element length.
SliceImage parse_dicom(std::span<const std::uint8_t> bytes, DicomMeta* meta_out = nullptr);

}  // namespace ct2stl
