#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "ct2stl/contour.hpp"

namespace ct2stl {

/// Plain-text contour format: one "x y" pair per line, blank line between
/// contours. Parse errors carry 1-based line numbers.
std::vector<ContourPolyline> read_contours(std::istream& in, const std::string& origin);
std::vector<ContourPolyline> read_contour_file(const std::filesystem::path& path);

void write_contours(std::ostream& out, const std::vector<ContourPolyline>& contours);
void write_contour_file(const std::filesystem::path& path,
                        const std::vector<ContourPolyline>& contours);

}  // namespace ct2stl
