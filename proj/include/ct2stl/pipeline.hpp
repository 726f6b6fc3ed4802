#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ct2stl/mesh.hpp"
#include "ct2stl/segmentation.hpp"
#include "ct2stl/smoothing.hpp"

namespace ct2stl {

struct PipelineConfig {
    double c = 1.0;
    double gamma = 0.3;
    int median_kernel = 9;
    int mean_kernel = 9;
    double window_min_hu = -1024.0;
    double window_max_hu = 3071.0;
    double threshold_hu = 400.0;
    std::vector<std::pair<MorphOp, int>> morph_schedule{{MorphOp::Close, 3}};
    double span = 0.1;
    SmoothMethod smooth_method = SmoothMethod::Loess2;
    RoiPolicy roi_policy = RoiPolicy::LargestArea;
    std::optional<double> z_spacing_mm;  // defaults to the first slice's thickness
    double base_z_mm = 0.0;
    std::optional<std::pair<int, int>> slice_range;  // inclusive indices into sorted listing
    std::optional<int> resample_n;
    bool ascii_output = false;
    std::string stl_name = "ct2stl";
    int jobs = 1;
    std::optional<std::filesystem::path> dump_enhanced_dir;  // 8-bit previews
    std::optional<std::filesystem::path> dump_contours_dir;  // point files per layer
};

struct SliceReport {
    int index = 0;
    std::string file;
    int contours_found = 0;
    int points_before = 0;
    int points_after = 0;
};

struct RunReport {
    std::vector<SliceReport> slices;
    int layers = 0;
    int wall_layers = 0;
    double z_spacing_mm = 0.0;
    long facets = 0;
    bool watertight = false;
    long euler_characteristic = 0;
    int shells = 0;
    double signed_volume = 0.0;
    int smoothing_fallbacks = 0;
    std::string output_file;
};

/// Full image-to-mesh pipeline over a directory of .dcm / .pgm slices.
RunReport run_convert(const std::filesystem::path& input_dir, const PipelineConfig& config,
                      const std::filesystem::path& out_stl);

/// Caps + walls from one plain-text contour file per layer.
RunReport run_stitch(const std::vector<std::filesystem::path>& contour_files, double z_spacing,
                     double base_z, bool ascii_output, const std::string& stl_name,
                     const std::filesystem::path& out_stl);

/// Smooth every contour in a point file, keeping point counts.
int run_smooth(const std::filesystem::path& points_in, double span, SmoothMethod method,
               const std::filesystem::path& points_out);

std::string report_to_kv(const RunReport& report);
std::string report_to_json(const RunReport& report);

void write_file(const std::filesystem::path& path, const void* data, size_t size);

}  // namespace ct2stl
