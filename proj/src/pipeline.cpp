#include "ct2stl/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "ct2stl/dicom.hpp"
#include "ct2stl/errors.hpp"
#include "ct2stl/image.hpp"
#include "ct2stl/pgm.hpp"
#include "ct2stl/pointfile.hpp"
#include "ct2stl/stl_io.hpp"

namespace ct2stl {

namespace {

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return bytes;
}

bool has_extension(const std::filesystem::path& p, const char* ext) {
    std::string e = p.extension().string();
    std::transform(e.begin(), e.end(), e.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return e == ext;
}

struct SliceOutcome {
    ContourPolyline contour;
    SliceReport report;
    int smoothing_fallbacks = 0;
};

SliceOutcome process_slice(const std::filesystem::path& path, int index,
                           const PipelineConfig& config) {
    const auto bytes = read_file(path);
    SliceImage slice;
    if (has_extension(path, ".dcm")) {
        slice = parse_dicom(bytes);
    } else {
        slice = parse_pgm(bytes);
    }
    slice.slice_index = index;

    if (config.dump_enhanced_dir) {
        // enhancement chain feeds the preview images; segmentation runs on HU
        const SliceImage gray8 = hu_to_gray(slice, config.window_min_hu, config.window_max_hu);
        const GrayImage enhanced =
            enhance(gray_from_slice(gray8), {config.c, config.gamma, config.median_kernel,
                                             config.mean_kernel});
        std::filesystem::create_directories(*config.dump_enhanced_dir);
        const auto out = write_pgm(slice_from_gray(enhanced, slice.slice_thickness_mm, index));
        const auto name = path.stem().string() + "_enhanced.pgm";
        write_file(*config.dump_enhanced_dir / name, out.data(), out.size());
    }

    BinaryMask mask = threshold(slice, config.threshold_hu);
    for (const auto& [op, k] : config.morph_schedule) mask = morph(mask, op, k);

    auto contours = trace_contours(mask, 5);
    SliceOutcome outcome;
    outcome.report.index = index;
    outcome.report.file = path.filename().string();
    outcome.report.contours_found = static_cast<int>(contours.size());
    if (contours.empty())
        throw LayerMismatch("segment: " + path.filename().string() + ": no contours above threshold");
    contours = select_roi(std::move(contours), config.roi_policy);
    if (contours.size() != 1)
        throw LayerMismatch("stitch: " + path.filename().string() + ": " +
                            std::to_string(contours.size()) +
                            " contours per slice; branching is not supported");

    ContourPolyline c = std::move(contours.front());
    outcome.report.points_before = static_cast<int>(c.points.size());
    SmoothStats stats;
    c = smooth_contour(c, {config.span, config.smooth_method}, &stats);
    if (config.resample_n) c = resample_closed(c, *config.resample_n);
    outcome.report.points_after = static_cast<int>(c.points.size());
    outcome.smoothing_fallbacks = stats.singular_fallbacks;
    outcome.contour = std::move(c);
    outcome.contour.orientation =
        outcome.contour.area() >= 0.0 ? Orientation::CCW : Orientation::CW;
    return outcome;
}

}  // namespace

void write_file(const std::filesystem::path& path, const void* data, size_t size) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open output file " + path.string());
    out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
    if (!out) throw Error("failed writing " + path.string());
}

RunReport run_convert(const std::filesystem::path& input_dir, const PipelineConfig& config,
                      const std::filesystem::path& out_stl) {
    if (!std::filesystem::is_directory(input_dir))
        throw Error("parse: input is not a directory: " + input_dir.string());

    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(input_dir)) {
        if (!entry.is_regular_file()) continue;
        if (has_extension(entry.path(), ".dcm") || has_extension(entry.path(), ".pgm"))
            files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end(), [](const auto& a, const auto& b) {
        return a.filename().string() < b.filename().string();
    });

    if (config.slice_range) {
        const auto [lo, hi] = *config.slice_range;
        if (lo < 0 || hi < lo) throw Error("parse: invalid slice range");
        std::vector<std::filesystem::path> kept;
        for (int i = lo; i <= hi && i < static_cast<int>(files.size()); ++i)
            kept.push_back(files[static_cast<size_t>(i)]);
        files = std::move(kept);
    }
    if (files.size() < 2) throw Error("parse: no slices in range (need at least 2)");

    std::vector<SliceOutcome> outcomes(files.size());
    std::vector<std::string> failures(files.size());
    const int jobs = std::max(1, config.jobs);
    std::atomic<size_t> cursor{0};
    auto worker = [&] {
        for (;;) {
            const size_t i = cursor.fetch_add(1);
            if (i >= files.size()) return;
            try {
                outcomes[i] = process_slice(files[i], static_cast<int>(i), config);
            } catch (const std::exception& e) {
                failures[i] = e.what();
            }
        }
    };
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (const std::string& f : failures)
        if (!f.empty()) throw Error(f);

    RunReport report;
    double z_default = 1.0;
    {
        const auto bytes = read_file(files.front());
        const SliceImage first = has_extension(files.front(), ".dcm") ? parse_dicom(bytes)
                                                                      : parse_pgm(bytes);
        z_default = first.slice_thickness_mm;
    }

    LayerStack stack;
    stack.z_spacing_mm = config.z_spacing_mm.value_or(z_default);
    stack.base_z_mm = config.base_z_mm;
    for (auto& o : outcomes) {
        stack.layers.push_back(std::move(o.contour));
        report.slices.push_back(o.report);
        report.smoothing_fallbacks += o.smoothing_fallbacks;
    }

    if (config.dump_contours_dir) {
        std::filesystem::create_directories(*config.dump_contours_dir);
        for (size_t i = 0; i < stack.layers.size(); ++i) {
            char name[32];
            std::snprintf(name, sizeof name, "layer_%04zu.txt", i);
            write_contour_file(*config.dump_contours_dir / name, {stack.layers[i]});
        }
    }

    const TriangleMesh mesh = assemble(stack);
    const MeshAudit audit = audit_mesh(mesh);

    if (config.ascii_output) {
        const std::string text = write_ascii_stl(mesh, config.stl_name);
        write_file(out_stl, text.data(), text.size());
    } else {
        const auto bytes = write_binary_stl(mesh, config.stl_name);
        write_file(out_stl, bytes.data(), bytes.size());
    }

    report.layers = static_cast<int>(stack.layers.size());
    report.wall_layers = static_cast<int>(stack.layers.size()) - 1;
    report.z_spacing_mm = stack.z_spacing_mm;
    report.facets = audit.facet_count;
    report.watertight = audit.watertight;
    report.euler_characteristic = audit.euler_characteristic;
    report.shells = audit.shells;
    report.signed_volume = audit.signed_volume;
    report.output_file = out_stl.string();
    return report;
}

RunReport run_stitch(const std::vector<std::filesystem::path>& contour_files, double z_spacing,
                     double base_z, bool ascii_output, const std::string& stl_name,
                     const std::filesystem::path& out_stl) {
    if (contour_files.size() < 2) throw Error("stitch: need at least 2 contour files");

    RunReport report;
    LayerStack stack;
    stack.z_spacing_mm = z_spacing;
    stack.base_z_mm = base_z;
    for (size_t i = 0; i < contour_files.size(); ++i) {
        auto contours = read_contour_file(contour_files[i]);
        if (contours.size() != 1)
            throw MalformedPointFile(contour_files[i].filename().string() + ": expected exactly one contour, found " +
                                     std::to_string(contours.size()));
        SliceReport sr;
        sr.index = static_cast<int>(i);
        sr.file = contour_files[i].filename().string();
        sr.contours_found = 1;
        sr.points_before = static_cast<int>(contours.front().points.size());
        sr.points_after = sr.points_before;
        report.slices.push_back(sr);
        stack.layers.push_back(std::move(contours.front()));
    }

    const TriangleMesh mesh = assemble(stack);
    const MeshAudit audit = audit_mesh(mesh);

    if (ascii_output) {
        const std::string text = write_ascii_stl(mesh, stl_name);
        write_file(out_stl, text.data(), text.size());
    } else {
        const auto bytes = write_binary_stl(mesh, stl_name);
        write_file(out_stl, bytes.data(), bytes.size());
    }

    report.layers = static_cast<int>(stack.layers.size());
    report.wall_layers = static_cast<int>(stack.layers.size()) - 1;
    report.z_spacing_mm = z_spacing;
    report.facets = audit.facet_count;
    report.watertight = audit.watertight;
    report.euler_characteristic = audit.euler_characteristic;
    report.shells = audit.shells;
    report.signed_volume = audit.signed_volume;
    report.output_file = out_stl.string();
    return report;
}

int run_smooth(const std::filesystem::path& points_in, double span, SmoothMethod method,
               const std::filesystem::path& points_out) {
    const auto contours = read_contour_file(points_in);
    if (contours.empty()) throw MalformedPointFile(points_in.string() + ": no contours");
    std::vector<ContourPolyline> smoothed;
    SmoothStats stats;
    for (const auto& c : contours) smoothed.push_back(smooth_contour(c, {span, method}, &stats));
    write_contour_file(points_out, smoothed);
    return stats.singular_fallbacks;
}

std::string report_to_kv(const RunReport& r) {
    std::ostringstream out;
    out << "slices=" << r.slices.size() << "\n";
    for (const SliceReport& s : r.slices) {
        out << "slice_" << s.index << "_file=" << s.file << "\n";
        out << "slice_" << s.index << "_contours=" << s.contours_found << "\n";
        out << "slice_" << s.index << "_points_before=" << s.points_before << "\n";
        out << "slice_" << s.index << "_points_after=" << s.points_after << "\n";
    }
    out << "layers=" << r.layers << "\n";
    out << "wall_layers=" << r.wall_layers << "\n";
    out << "z_spacing_mm=" << r.z_spacing_mm << "\n";
    out << "facets=" << r.facets << "\n";
    out << "watertight=" << (r.watertight ? "true" : "false") << "\n";
    out << "euler_characteristic=" << r.euler_characteristic << "\n";
    out << "shells=" << r.shells << "\n";
    out << "signed_volume=" << r.signed_volume << "\n";
    out << "smoothing_fallbacks=" << r.smoothing_fallbacks << "\n";
    out << "output=" << r.output_file << "\n";
    return out.str();
}

std::string report_to_json(const RunReport& r) {
    nlohmann::json j;
    j["slices"] = nlohmann::json::array();
    for (const SliceReport& s : r.slices) {
        j["slices"].push_back({{"index", s.index},
                               {"file", s.file},
                               {"contours", s.contours_found},
                               {"points_before", s.points_before},
                               {"points_after", s.points_after}});
    }
    j["layers"] = r.layers;
    j["wall_layers"] = r.wall_layers;
    j["z_spacing_mm"] = r.z_spacing_mm;
    j["facets"] = r.facets;
    j["watertight"] = r.watertight;
    j["euler_characteristic"] = r.euler_characteristic;
    j["shells"] = r.shells;
    j["signed_volume"] = r.signed_volume;
    j["smoothing_fallbacks"] = r.smoothing_fallbacks;
    j["output"] = r.output_file;
    return j.dump(2) + "\n";
}

}  // namespace ct2stl
