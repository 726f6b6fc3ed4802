#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ct2stl/mesh.hpp"

namespace ct2stl {

/// 80-byte header, little-endian facet count, 50 bytes per facet. Facet
/// normals are recomputed from the float32-quantized vertex winding so that
/// write -> read -> write is byte-identical.
std::vector<std::uint8_t> write_binary_stl(const TriangleMesh& mesh,
                                           std::string_view header_text);

/// Canonical solid/facet/vertex grammar; floats in scientific notation with
/// nine significant digits. Byte-deterministic for identical meshes.
std::string write_ascii_stl(const TriangleMesh& mesh, std::string_view name);

/// Auto-detects ASCII (leading "solid" and a valid grammar) vs binary (size
/// formula). Vertices are deduplicated at exact float32 equality; zero
/// normals are recomputed from winding.
TriangleMesh read_stl(std::span<const std::uint8_t> bytes);

}  // namespace ct2stl
