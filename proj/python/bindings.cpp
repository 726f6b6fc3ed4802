#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "ct2stl/delaunay.hpp"
#include "ct2stl/dicom.hpp"
#include "ct2stl/errors.hpp"
#include "ct2stl/image.hpp"
#include "ct2stl/mesh.hpp"
#include "ct2stl/pgm.hpp"
#include "ct2stl/phantom.hpp"
#include "ct2stl/pipeline.hpp"
#include "ct2stl/segmentation.hpp"
#include "ct2stl/smoothing.hpp"
#include "ct2stl/stl_io.hpp"

namespace py = pybind11;
using namespace ct2stl;

namespace {

GrayImage gray_from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    if (a.ndim() != 2) throw InvalidParam("expected a 2-D array");
    GrayImage img;
    img.height = static_cast<int>(a.shape(0));
    img.width = static_cast<int>(a.shape(1));
    img.pixels.assign(a.data(), a.data() + a.size());
    return img;
}

py::array_t<double> array_from_gray(const GrayImage& img) {
    py::array_t<double> out({img.height, img.width});
    std::copy(img.pixels.begin(), img.pixels.end(), out.mutable_data());
    return out;
}

BinaryMask mask_from_array(const py::array_t<bool, py::array::c_style | py::array::forcecast>& a) {
    if (a.ndim() != 2) throw InvalidParam("expected a 2-D boolean array");
    BinaryMask mask;
    mask.height = static_cast<int>(a.shape(0));
    mask.width = static_cast<int>(a.shape(1));
    mask.bits.resize(a.size());
    for (py::ssize_t i = 0; i < a.size(); ++i) mask.bits[i] = a.data()[i] ? 1 : 0;
    return mask;
}

py::array_t<bool> array_from_mask(const BinaryMask& mask) {
    py::array_t<bool> out({mask.height, mask.width});
    for (size_t i = 0; i < mask.bits.size(); ++i) out.mutable_data()[i] = mask.bits[i] != 0;
    return out;
}

ContourPolyline contour_from_array(
    const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    if (a.ndim() != 2 || a.shape(1) != 2) throw InvalidParam("expected an (n, 2) array");
    ContourPolyline c;
    c.points.resize(static_cast<size_t>(a.shape(0)));
    for (py::ssize_t i = 0; i < a.shape(0); ++i)
        c.points[static_cast<size_t>(i)] = {a.data()[2 * i], a.data()[2 * i + 1]};
    c.orientation = c.area() >= 0.0 ? Orientation::CCW : Orientation::CW;
    return c;
}

py::array_t<double> array_from_contour(const ContourPolyline& c) {
    py::array_t<double> out({static_cast<py::ssize_t>(c.points.size()), py::ssize_t(2)});
    for (size_t i = 0; i < c.points.size(); ++i) {
        out.mutable_data()[2 * i] = c.points[i].x;
        out.mutable_data()[2 * i + 1] = c.points[i].y;
    }
    return out;
}

SmoothMethod method_from_name(const std::string& name) {
    if (name == "moving_average") return SmoothMethod::MovingAverage;
    if (name == "loess2") return SmoothMethod::Loess2;
    throw InvalidParam("method must be loess2 or moving_average");
}

MorphOp morph_from_name(const std::string& name) {
    if (name == "erode") return MorphOp::Erode;
    if (name == "dilate") return MorphOp::Dilate;
    if (name == "open") return MorphOp::Open;
    if (name == "close") return MorphOp::Close;
    throw InvalidParam("op must be erode, dilate, open or close");
}

py::dict audit_to_dict(const MeshAudit& a) {
    py::dict d;
    d["vertices"] = a.vertex_count;
    d["edges"] = a.edge_count;
    d["facets"] = a.facet_count;
    d["euler_characteristic"] = a.euler_characteristic;
    d["boundary_edges"] = a.boundary_edges;
    d["nonmanifold_edges"] = a.nonmanifold_edges;
    d["edge_manifold"] = a.edge_manifold;
    d["oriented"] = a.oriented;
    d["watertight"] = a.watertight;
    d["shells"] = a.shells;
    d["signed_volume"] = a.signed_volume;
    return d;
}

py::dict report_to_dict(const RunReport& r) {
    py::dict d;
    py::list slices;
    for (const SliceReport& s : r.slices) {
        py::dict sd;
        sd["index"] = s.index;
        sd["file"] = s.file;
        sd["contours"] = s.contours_found;
        sd["points_before"] = s.points_before;
        sd["points_after"] = s.points_after;
        slices.append(sd);
    }
    d["slices"] = slices;
    d["layers"] = r.layers;
    d["wall_layers"] = r.wall_layers;
    d["z_spacing_mm"] = r.z_spacing_mm;
    d["facets"] = r.facets;
    d["watertight"] = r.watertight;
    d["euler_characteristic"] = r.euler_characteristic;
    d["shells"] = r.shells;
    d["signed_volume"] = r.signed_volume;
    d["smoothing_fallbacks"] = r.smoothing_fallbacks;
    d["output"] = r.output_file;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Slice stack to watertight STL reconstruction";

    py::register_exception<Error>(m, "Ct2StlError");

    py::class_<SliceImage>(m, "SliceImage")
        .def(py::init<>())
        .def_readwrite("width", &SliceImage::width)
        .def_readwrite("height", &SliceImage::height)
        .def_readwrite("bits_stored", &SliceImage::bits_stored)
        .def_readwrite("slice_thickness_mm", &SliceImage::slice_thickness_mm)
        .def_readwrite("slice_index", &SliceImage::slice_index)
        .def_property(
            "pixels",
            [](const SliceImage& s) {
                py::array_t<std::int32_t> out({s.height, s.width});
                std::copy(s.pixels.begin(), s.pixels.end(), out.mutable_data());
                return out;
            },
            [](SliceImage& s,
               const py::array_t<std::int32_t, py::array::c_style | py::array::forcecast>& a) {
                if (a.ndim() != 2) throw InvalidParam("expected a 2-D array");
                s.height = static_cast<int>(a.shape(0));
                s.width = static_cast<int>(a.shape(1));
                s.pixels.assign(a.data(), a.data() + a.size());
            });

    py::class_<TriangleMesh>(m, "TriangleMesh")
        .def(py::init<>())
        .def_property_readonly(
            "vertices",
            [](const TriangleMesh& mesh) {
                py::array_t<double> out({static_cast<py::ssize_t>(mesh.vertices.size()),
                                         py::ssize_t(3)});
                for (size_t i = 0; i < mesh.vertices.size(); ++i) {
                    out.mutable_data()[3 * i] = mesh.vertices[i].x;
                    out.mutable_data()[3 * i + 1] = mesh.vertices[i].y;
                    out.mutable_data()[3 * i + 2] = mesh.vertices[i].z;
                }
                return out;
            })
        .def_property_readonly(
            "facets",
            [](const TriangleMesh& mesh) {
                py::array_t<std::int32_t> out({static_cast<py::ssize_t>(mesh.facets.size()),
                                               py::ssize_t(3)});
                for (size_t i = 0; i < mesh.facets.size(); ++i)
                    for (int k = 0; k < 3; ++k)
                        out.mutable_data()[3 * i + k] = mesh.facets[i].v[k];
                return out;
            })
        .def_property_readonly(
            "normals",
            [](const TriangleMesh& mesh) {
                py::array_t<double> out({static_cast<py::ssize_t>(mesh.facets.size()),
                                         py::ssize_t(3)});
                for (size_t i = 0; i < mesh.facets.size(); ++i) {
                    out.mutable_data()[3 * i] = mesh.facets[i].normal.x;
                    out.mutable_data()[3 * i + 1] = mesh.facets[i].normal.y;
                    out.mutable_data()[3 * i + 2] = mesh.facets[i].normal.z;
                }
                return out;
            })
        .def("__len__", [](const TriangleMesh& mesh) { return mesh.facets.size(); });

    m.def(
        "parse_dicom",
        [](py::bytes data) {
            const std::string s = data;
            return parse_dicom(
                std::span(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
        },
        py::arg("data"), "Parse an uncompressed little-endian DICOM CT slice");
    m.def(
        "parse_pgm",
        [](py::bytes data, double thickness) {
            const std::string s = data;
            return parse_pgm(std::span(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()),
                             thickness);
        },
        py::arg("data"), py::arg("thickness_mm") = 1.0);
    m.def(
        "write_pgm",
        [](const SliceImage& slice) {
            const auto bytes = write_pgm(slice);
            return py::bytes(reinterpret_cast<const char*>(bytes.data()), bytes.size());
        },
        py::arg("slice"));
    m.def("hu_to_gray", &hu_to_gray, py::arg("slice"), py::arg("window_min"),
          py::arg("window_max"));

    m.def(
        "power_law",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& img, double c,
           double gamma) { return array_from_gray(power_law(gray_from_array(img), c, gamma)); },
        py::arg("image"), py::arg("c") = 1.0, py::arg("gamma") = 0.3);
    m.def(
        "median_filter",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& img, int k) {
            return array_from_gray(median_filter(gray_from_array(img), k));
        },
        py::arg("image"), py::arg("k") = 9);
    m.def(
        "mean_filter",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& img, int k) {
            return array_from_gray(mean_filter(gray_from_array(img), k));
        },
        py::arg("image"), py::arg("k") = 9);
    m.def(
        "enhance",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& img, double c,
           double gamma, int median_kernel, int mean_kernel) {
            return array_from_gray(
                enhance(gray_from_array(img), {c, gamma, median_kernel, mean_kernel}));
        },
        py::arg("image"), py::arg("c") = 1.0, py::arg("gamma") = 0.3,
        py::arg("median_kernel") = 9, py::arg("mean_kernel") = 9);

    m.def(
        "threshold",
        [](const SliceImage& slice, double t) { return array_from_mask(threshold(slice, t)); },
        py::arg("slice"), py::arg("threshold_hu") = 400.0);
    m.def(
        "morph",
        [](const py::array_t<bool, py::array::c_style | py::array::forcecast>& mask,
           const std::string& op, int k) {
            return array_from_mask(morph(mask_from_array(mask), morph_from_name(op), k));
        },
        py::arg("mask"), py::arg("op"), py::arg("k") = 3);
    m.def(
        "trace_contours",
        [](const py::array_t<bool, py::array::c_style | py::array::forcecast>& mask,
           int min_points) {
            py::list out;
            for (const auto& c : trace_contours(mask_from_array(mask), min_points))
                out.append(array_from_contour(c));
            return out;
        },
        py::arg("mask"), py::arg("min_points") = 5);

    m.def(
        "smooth_contour",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& contour,
           double span, const std::string& method) {
            return array_from_contour(
                smooth_contour(contour_from_array(contour), {span, method_from_name(method)}));
        },
        py::arg("contour"), py::arg("span") = 0.1, py::arg("method") = "loess2");
    m.def(
        "resample_closed",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& contour,
           int n_target) {
            return array_from_contour(resample_closed(contour_from_array(contour), n_target));
        },
        py::arg("contour"), py::arg("n_target"));

    m.def(
        "delaunay",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& pts) {
            const ContourPolyline c = contour_from_array(pts);
            const auto tris = delaunay_2d(c.points);
            py::array_t<std::int32_t> out({static_cast<py::ssize_t>(tris.size()), py::ssize_t(3)});
            for (size_t i = 0; i < tris.size(); ++i)
                for (int k = 0; k < 3; ++k) out.mutable_data()[3 * i + k] = tris[i][k];
            return out;
        },
        py::arg("points"), "Delaunay triangulation; CCW triples of point indices");

    m.def(
        "plan_stitch",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& top,
           const py::array_t<double, py::array::c_style | py::array::forcecast>& bottom) {
            const StitchPlan p = plan_stitch(contour_from_array(top), contour_from_array(bottom));
            py::dict d;
            d["top_count"] = p.top_count;
            d["bottom_count"] = p.bottom_count;
            d["extra"] = p.extra;
            d["quotient"] = p.quotient;
            d["remainder"] = p.remainder;
            d["swapped"] = p.swapped;
            d["assignments"] = p.assignments;
            return d;
        },
        py::arg("top"), py::arg("bottom"));

    m.def(
        "assemble",
        [](const std::vector<py::array_t<double, py::array::c_style | py::array::forcecast>>&
               layers,
           double z_spacing, double base_z) {
            LayerStack stack;
            stack.z_spacing_mm = z_spacing;
            stack.base_z_mm = base_z;
            for (const auto& layer : layers) stack.layers.push_back(contour_from_array(layer));
            return assemble(stack);
        },
        py::arg("layers"), py::arg("z_spacing") = 1.0, py::arg("base_z") = 0.0);

    m.def(
        "audit", [](const TriangleMesh& mesh) { return audit_to_dict(audit_mesh(mesh)); },
        py::arg("mesh"));

    m.def(
        "write_stl",
        [](const TriangleMesh& mesh, bool binary, const std::string& name) -> py::object {
            if (binary) {
                const auto bytes = write_binary_stl(mesh, name);
                return py::bytes(reinterpret_cast<const char*>(bytes.data()), bytes.size());
            }
            return py::str(write_ascii_stl(mesh, name));
        },
        py::arg("mesh"), py::arg("binary") = true, py::arg("name") = "ct2stl");
    m.def(
        "read_stl",
        [](py::bytes data) {
            const std::string s = data;
            return read_stl(std::span(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
        },
        py::arg("data"));

    m.def(
        "phantom_slice",
        [](const std::string& shape, int index, int width, int height, int bits, int n_slices,
           double thickness, double radius, double side, double tube_radius) {
            PhantomParams p;
            if (shape == "cylinder") p.shape = PhantomShape::Cylinder;
            else if (shape == "box") p.shape = PhantomShape::Box;
            else if (shape == "torus_stack") p.shape = PhantomShape::TorusStack;
            else throw InvalidParam("shape must be cylinder, box or torus_stack");
            p.width = width;
            p.height = height;
            p.bits = bits;
            p.n_slices = n_slices;
            p.slice_thickness_mm = thickness;
            p.radius_px = radius;
            p.side_px = side;
            p.tube_radius_px = tube_radius;
            return phantom_slice(p, index);
        },
        py::arg("shape"), py::arg("index"), py::arg("width") = 512, py::arg("height") = 512,
        py::arg("bits") = 12, py::arg("n_slices") = 8, py::arg("thickness_mm") = 1.5,
        py::arg("radius_px") = 50.0, py::arg("side_px") = 100.0, py::arg("tube_radius_px") = 20.0);

    m.def(
        "convert_directory",
        [](const std::filesystem::path& input_dir, const std::filesystem::path& out_stl,
           double gamma, double c, int median_kernel, int mean_kernel, double threshold_hu,
           double span, const std::string& method, double z_spacing, int resample_n,
           bool ascii_output, int jobs) {
            PipelineConfig config;
            config.gamma = gamma;
            config.c = c;
            config.median_kernel = median_kernel;
            config.mean_kernel = mean_kernel;
            config.threshold_hu = threshold_hu;
            config.span = span;
            config.smooth_method = method_from_name(method);
            if (z_spacing > 0.0) config.z_spacing_mm = z_spacing;
            if (resample_n > 0) config.resample_n = resample_n;
            config.ascii_output = ascii_output;
            config.jobs = jobs;
            return report_to_dict(run_convert(input_dir, config, out_stl));
        },
        py::arg("input_dir"), py::arg("out_stl"), py::arg("gamma") = 0.3, py::arg("c") = 1.0,
        py::arg("median_kernel") = 9, py::arg("mean_kernel") = 9, py::arg("threshold_hu") = 400.0,
        py::arg("span") = 0.1, py::arg("method") = "loess2", py::arg("z_spacing") = 0.0,
        py::arg("resample_n") = 0, py::arg("ascii_output") = false, py::arg("jobs") = 1,
        "Full slice-directory to STL pipeline; returns the run report");
}
