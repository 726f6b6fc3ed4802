#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ct2stl/errors.hpp"
#include "ct2stl/phantom.hpp"
#include "ct2stl/pipeline.hpp"
#include "ct2stl/stl_io.hpp"

namespace {

using namespace ct2stl;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInternal = 3;

int log_level() {
    const char* env = std::getenv("CT2STL_LOG");
    if (!env) return 1;  // warnings
    const std::string v = env;
    if (v == "debug") return 3;
    if (v == "info") return 2;
    if (v == "off" || v == "error") return 0;
    return 1;
}

void log_info(const std::string& msg) {
    if (log_level() >= 2) std::fprintf(stderr, "[ct2stl] info: %s\n", msg.c_str());
}

SmoothMethod parse_method(const std::string& name) {
    if (name == "moving_average") return SmoothMethod::MovingAverage;
    if (name == "loess2") return SmoothMethod::Loess2;
    throw CLI::ValidationError("--method", "must be loess2 or moving_average");
}

std::vector<std::pair<MorphOp, int>> parse_morph_schedule(const std::string& spec) {
    // comma-separated op:k entries, e.g. "close:3,open:5"; "none" clears
    std::vector<std::pair<MorphOp, int>> schedule;
    if (spec == "none") return schedule;
    std::string rest = spec;
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        const std::string item = rest.substr(0, comma);
        rest = comma == std::string::npos ? "" : rest.substr(comma + 1);
        const auto colon = item.find(':');
        if (colon == std::string::npos)
            throw CLI::ValidationError("--morph", "entries must look like op:k");
        const std::string op = item.substr(0, colon);
        const int k = std::atoi(item.c_str() + colon + 1);
        if (k < 1 || k % 2 == 0)
            throw CLI::ValidationError("--morph", "element size must be odd and >= 1");
        MorphOp m;
        if (op == "erode") m = MorphOp::Erode;
        else if (op == "dilate") m = MorphOp::Dilate;
        else if (op == "open") m = MorphOp::Open;
        else if (op == "close") m = MorphOp::Close;
        else throw CLI::ValidationError("--morph", "op must be erode, dilate, open or close");
        schedule.emplace_back(m, k);
    }
    return schedule;
}

void emit_report(const RunReport& report, const std::string& json_path) {
    std::fputs(report_to_kv(report).c_str(), stdout);
    if (!json_path.empty()) {
        const std::string json = report_to_json(report);
        write_file(json_path, json.data(), json.size());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Slice stack to watertight STL reconstruction"};
    app.require_subcommand(1);

    // ---- convert ----
    auto* convert = app.add_subcommand("convert", "Run the full pipeline on a slice directory");
    std::string in_dir, out_path = "out.stl", report_json, method_name = "loess2";
    std::string morph_spec = "close:3", roi_policy = "largest_area";
    PipelineConfig config;
    std::vector<int> range_pair;
    double z_override = 0.0;
    int resample_n = 0;
    convert->add_option("input", in_dir, "Directory of .dcm or .pgm slices")->required();
    convert->add_option("-o,--output", out_path, "Output STL path")->capture_default_str();
    convert->add_option("--gamma", config.gamma, "Power-law exponent")->capture_default_str();
    convert->add_option("--c", config.c, "Power-law scale factor")->capture_default_str();
    convert->add_option("--median-kernel", config.median_kernel, "Median filter mask size")
        ->capture_default_str();
    convert->add_option("--mean-kernel", config.mean_kernel, "Smoothing filter mask size")
        ->capture_default_str();
    convert->add_option("--threshold", config.threshold_hu, "Segmentation threshold in HU")
        ->capture_default_str();
    convert->add_option("--morph", morph_spec, "Morphology schedule, e.g. close:3,open:5 or none")
        ->capture_default_str();
    convert->add_option("--span", config.span, "Smoothing span, fraction of points in (0,1)")
        ->capture_default_str();
    convert->add_option("--method", method_name, "Smoothing method: loess2 or moving_average")
        ->capture_default_str();
    convert->add_option("--roi", roi_policy, "largest_area or all")->capture_default_str();
    convert->add_option("--z-spacing", z_override, "Layer spacing in mm (default: slice thickness)");
    convert->add_option("--base-z", config.base_z_mm, "Height of the bottom layer in mm")
        ->capture_default_str();
    convert->add_option("--slice-range", range_pair, "Inclusive slice index range, e.g. 80 87")
        ->expected(2);
    convert->add_option("--resample", resample_n, "Resample each contour to N points");
    convert->add_flag("--ascii", config.ascii_output, "Write ASCII STL instead of binary");
    convert->add_option("--name", config.stl_name, "Solid name / header text")->capture_default_str();
    convert->add_option("-j,--jobs", config.jobs, "Per-slice worker threads")->capture_default_str();
    std::string dump_enhanced, dump_contours;
    convert->add_option("--dump-enhanced", dump_enhanced, "Write enhanced 8-bit previews here");
    convert->add_option("--dump-contours", dump_contours, "Write per-layer point files here");
    convert->add_option("--window-min", config.window_min_hu, "HU window lower bound for previews")
        ->capture_default_str();
    convert->add_option("--window-max", config.window_max_hu, "HU window upper bound for previews")
        ->capture_default_str();
    convert->add_option("--report", report_json, "Also write a JSON report to this path");

    // ---- stitch ----
    auto* stitch = app.add_subcommand("stitch", "Build caps + walls from contour point files");
    std::vector<std::string> stitch_files;
    double stitch_z = 1.0, stitch_base = 0.0;
    std::string stitch_out = "out.stl", stitch_name = "ct2stl", stitch_report;
    bool stitch_ascii = false;
    stitch->add_option("files", stitch_files, "One point file per layer, bottom first")
        ->required()
        ->expected(-1);
    stitch->add_option("-z,--z-spacing", stitch_z, "Layer spacing")->capture_default_str();
    stitch->add_option("--base-z", stitch_base, "Height of the bottom layer")->capture_default_str();
    stitch->add_option("-o,--output", stitch_out, "Output STL path")->capture_default_str();
    stitch->add_flag("--ascii", stitch_ascii, "Write ASCII STL instead of binary");
    stitch->add_option("--name", stitch_name, "Solid name / header text")->capture_default_str();
    stitch->add_option("--report", stitch_report, "Also write a JSON report to this path");

    // ---- smooth ----
    auto* smooth = app.add_subcommand("smooth", "Smooth contours in a point file");
    std::string smooth_in, smooth_out, smooth_method = "loess2";
    double smooth_span = 0.1;
    smooth->add_option("input", smooth_in, "Point file to smooth")->required();
    smooth->add_option("output", smooth_out, "Smoothed point file")->required();
    smooth->add_option("--span", smooth_span, "Span, fraction of points in (0,1)")
        ->capture_default_str();
    smooth->add_option("--method", smooth_method, "loess2 or moving_average")
        ->capture_default_str();

    // ---- phantom ----
    auto* phantom = app.add_subcommand("phantom", "Generate a synthetic slice stack");
    std::string phantom_shape = "cylinder", phantom_dir;
    PhantomParams pp;
    phantom->add_option("shape", phantom_shape, "cylinder, box or torus_stack")->required();
    phantom->add_option("out_dir", phantom_dir, "Output directory")->required();
    phantom->add_option("--width", pp.width, "Image width")->capture_default_str();
    phantom->add_option("--height", pp.height, "Image height")->capture_default_str();
    phantom->add_option("--bits", pp.bits, "Stored bit depth")->capture_default_str();
    phantom->add_option("--slices", pp.n_slices, "Number of slices")->capture_default_str();
    phantom->add_option("--thickness", pp.slice_thickness_mm, "Slice thickness in mm")
        ->capture_default_str();
    phantom->add_option("--radius", pp.radius_px, "Disk / ring radius in px")->capture_default_str();
    phantom->add_option("--side", pp.side_px, "Box side in px")->capture_default_str();
    phantom->add_option("--tube-radius", pp.tube_radius_px, "Torus tube radius in px")
        ->capture_default_str();
    phantom->add_option("--foreground", pp.foreground_hu, "Foreground HU")->capture_default_str();
    phantom->add_option("--background", pp.background_hu, "Background HU")->capture_default_str();
    phantom->add_flag("--dicom", pp.emit_dicom, "Emit minimal DICOM files instead of PGM");

    // ---- validate ----
    auto* validate = app.add_subcommand("validate", "Audit an existing STL file");
    std::string validate_path;
    validate->add_option("file", validate_path, "STL file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*convert) {
            if (!(config.span > 0.0 && config.span < 1.0))
                throw InvalidSpan("span must lie in the open interval (0, 1)");
            if (config.gamma <= 0.0 || config.c <= 0.0)
                throw InvalidParam("gamma and c must be positive");
            config.smooth_method = parse_method(method_name);
            config.morph_schedule = parse_morph_schedule(morph_spec);
            if (roi_policy == "largest_area") config.roi_policy = RoiPolicy::LargestArea;
            else if (roi_policy == "all") config.roi_policy = RoiPolicy::All;
            else throw CLI::ValidationError("--roi", "must be largest_area or all");
            if (z_override > 0.0) config.z_spacing_mm = z_override;
            if (!range_pair.empty()) config.slice_range = {range_pair[0], range_pair[1]};
            if (resample_n > 0) config.resample_n = resample_n;
            if (!dump_enhanced.empty()) config.dump_enhanced_dir = dump_enhanced;
            if (!dump_contours.empty()) config.dump_contours_dir = dump_contours;
            log_info("converting " + in_dir);
            const RunReport report = run_convert(in_dir, config, out_path);
            emit_report(report, report_json);
            return kExitOk;
        }
        if (*stitch) {
            std::vector<std::filesystem::path> files(stitch_files.begin(), stitch_files.end());
            const RunReport report =
                run_stitch(files, stitch_z, stitch_base, stitch_ascii, stitch_name, stitch_out);
            emit_report(report, stitch_report);
            return kExitOk;
        }
        if (*smooth) {
            if (!(smooth_span > 0.0 && smooth_span < 1.0))
                throw InvalidSpan("span must lie in the open interval (0, 1)");
            const int fallbacks =
                run_smooth(smooth_in, smooth_span, parse_method(smooth_method), smooth_out);
            std::printf("smoothing_fallbacks=%d\noutput=%s\n", fallbacks, smooth_out.c_str());
            return kExitOk;
        }
        if (*phantom) {
            if (phantom_shape == "cylinder") pp.shape = PhantomShape::Cylinder;
            else if (phantom_shape == "box") pp.shape = PhantomShape::Box;
            else if (phantom_shape == "torus_stack") pp.shape = PhantomShape::TorusStack;
            else throw CLI::ValidationError("shape", "must be cylinder, box or torus_stack");
            const auto written = generate_phantom(pp, phantom_dir);
            std::printf("files=%zu\ndir=%s\n", written.size(), phantom_dir.c_str());
            return kExitOk;
        }
        if (*validate) {
            std::ifstream in(validate_path, std::ios::binary);
            if (!in) throw Error("cannot open " + validate_path);
            std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                            std::istreambuf_iterator<char>());
            const TriangleMesh mesh = read_stl(bytes);
            const MeshAudit a = audit_mesh(mesh);
            std::printf("facets=%ld\nvertices=%ld\nedges=%ld\n", a.facet_count, a.vertex_count,
                        a.edge_count);
            std::printf("edge_manifold=%s\noriented=%s\nwatertight=%s\n",
                        a.edge_manifold ? "true" : "false", a.oriented ? "true" : "false",
                        a.watertight ? "true" : "false");
            std::printf("boundary_edges=%ld\nnonmanifold_edges=%ld\n", a.boundary_edges,
                        a.nonmanifold_edges);
            std::printf("euler_characteristic=%ld\nshells=%d\nsigned_volume=%.17g\n",
                        a.euler_characteristic, a.shells, a.signed_volume);
            return a.watertight ? kExitOk : kExitData;
        }
    } catch (const CLI::ValidationError& e) {
        std::fprintf(stderr, "ct2stl: %s\n", e.what());
        return kExitUsage;
    } catch (const InvalidSpan& e) {
        std::fprintf(stderr, "ct2stl: %s\n", e.what());
        return kExitUsage;
    } catch (const InvalidParam& e) {
        std::fprintf(stderr, "ct2stl: %s\n", e.what());
        return kExitUsage;
    } catch (const Error& e) {
        std::fprintf(stderr, "ct2stl: %s\n", e.what());
        return kExitData;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "ct2stl: internal error: %s\n", e.what());
        return kExitInternal;
    }
    return kExitUsage;
}
