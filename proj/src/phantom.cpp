#include "ct2stl/phantom.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "ct2stl/errors.hpp"
#include "ct2stl/pgm.hpp"

namespace ct2stl {

namespace {

void validate(const PhantomParams& p) {
    if (p.width <= 0 || p.height <= 0) throw InvalidParam("phantom: dimensions must be positive");
    if (p.bits < 8 || p.bits > 16) throw InvalidParam("phantom: bits must lie in [8, 16]");
    if (p.n_slices < 1 || p.n_slices > 9999) throw InvalidParam("phantom: slice count out of range");
    if (p.slice_thickness_mm <= 0.0) throw InvalidParam("phantom: slice thickness must be positive");
    const std::int32_t maxval = (1 << p.bits) - 1;
    if (p.foreground_hu < 0 || p.foreground_hu > maxval || p.background_hu < 0 ||
        p.background_hu > maxval)
        throw InvalidParam("phantom: HU values must fit the stored bit depth");
    switch (p.shape) {
        case PhantomShape::Cylinder:
            if (p.radius_px <= 0.0) throw InvalidParam("phantom: radius must be positive");
            break;
        case PhantomShape::Box:
            if (p.side_px <= 0.0) throw InvalidParam("phantom: side must be positive");
            break;
        case PhantomShape::TorusStack:
            if (p.radius_px <= 0.0 || p.tube_radius_px <= 0.0 || p.tube_radius_px >= p.radius_px)
                throw InvalidParam("phantom: torus needs 0 < tube radius < ring radius");
            break;
    }
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(v & 0xFF);
    out.push_back((v >> 8) & 0xFF);
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    put_u16(out, v & 0xFFFF);
    put_u16(out, (v >> 16) & 0xFFFF);
}

void put_short_element(std::vector<std::uint8_t>& out, std::uint16_t group, std::uint16_t elem,
                       const char vr[2], const std::vector<std::uint8_t>& value) {
    put_u16(out, group);
    put_u16(out, elem);
    out.push_back(static_cast<std::uint8_t>(vr[0]));
    out.push_back(static_cast<std::uint8_t>(vr[1]));
    put_u16(out, static_cast<std::uint16_t>(value.size()));
    out.insert(out.end(), value.begin(), value.end());
}

std::vector<std::uint8_t> padded_string(std::string s, char pad) {
    if (s.size() % 2 != 0) s.push_back(pad);
    return {s.begin(), s.end()};
}

std::vector<std::uint8_t> us_value(std::uint16_t v) {
    std::vector<std::uint8_t> out;
    put_u16(out, v);
    return out;
}

}  // namespace

SliceImage phantom_slice(const PhantomParams& p, int index) {
    validate(p);
    if (index < 0 || index >= p.n_slices) throw InvalidParam("phantom: slice index out of range");
    SliceImage slice;
    slice.width = p.width;
    slice.height = p.height;
    slice.bits_stored = p.bits;
    slice.slice_thickness_mm = p.slice_thickness_mm;
    slice.slice_index = index;
    slice.pixels.assign(static_cast<size_t>(p.width) * p.height, p.background_hu);

    const double cx = p.width / 2.0;
    const double cy = p.height / 2.0;
    auto fill = [&](auto&& inside) {
        for (int y = 0; y < p.height; ++y)
            for (int x = 0; x < p.width; ++x)
                if (inside(x - cx, y - cy))
                    slice.pixels[static_cast<size_t>(y) * p.width + x] = p.foreground_hu;
    };

    switch (p.shape) {
        case PhantomShape::Cylinder: {
            const double r2 = p.radius_px * p.radius_px;
            fill([&](double dx, double dy) { return dx * dx + dy * dy <= r2; });
            break;
        }
        case PhantomShape::Box: {
            const double half = p.side_px / 2.0;
            fill([&](double dx, double dy) {
                return std::abs(dx) <= half && std::abs(dy) <= half;
            });
            break;
        }
        case PhantomShape::TorusStack: {
            // slice the torus at evenly spaced heights strictly inside +-tube
            const double t = (index + 0.5) / p.n_slices;  // in (0, 1)
            const double z = p.tube_radius_px * (2.0 * t - 1.0);
            const double half_chord = std::sqrt(
                std::max(0.0, p.tube_radius_px * p.tube_radius_px - z * z));
            const double inner = p.radius_px - half_chord;
            const double outer = p.radius_px + half_chord;
            fill([&](double dx, double dy) {
                const double r = std::sqrt(dx * dx + dy * dy);
                return r >= inner && r <= outer;
            });
            break;
        }
    }
    return slice;
}

std::vector<std::uint8_t> write_minimal_dicom(const SliceImage& slice) {
    if (!slice.valid()) throw InvalidParam("DICOM writer: invalid slice");
    const std::int32_t maxval = (1 << slice.bits_stored) - 1;
    for (std::int32_t v : slice.pixels)
        if (v < 0 || v > maxval)
            throw InvalidParam("DICOM writer: pixel outside unsigned stored range");

    std::vector<std::uint8_t> out(128, 0);
    out.push_back('D');
    out.push_back('I');
    out.push_back('C');
    out.push_back('M');

    // file meta group, explicit VR
    std::vector<std::uint8_t> meta;
    put_short_element(meta, 0x0002, 0x0010, "UI", padded_string("1.2.840.10008.1.2.1", '\0'));
    put_short_element(out, 0x0002, 0x0000, "UL",
                      {static_cast<std::uint8_t>(meta.size() & 0xFF),
                       static_cast<std::uint8_t>((meta.size() >> 8) & 0xFF),
                       static_cast<std::uint8_t>((meta.size() >> 16) & 0xFF),
                       static_cast<std::uint8_t>((meta.size() >> 24) & 0xFF)});
    out.insert(out.end(), meta.begin(), meta.end());

    char thickness[32];
    std::snprintf(thickness, sizeof thickness, "%g", slice.slice_thickness_mm);
    put_short_element(out, 0x0008, 0x0060, "CS", padded_string("CT", ' '));
    put_short_element(out, 0x0018, 0x0050, "DS", padded_string(thickness, ' '));
    put_short_element(out, 0x0028, 0x0010, "US", us_value(static_cast<std::uint16_t>(slice.height)));
    put_short_element(out, 0x0028, 0x0011, "US", us_value(static_cast<std::uint16_t>(slice.width)));
    put_short_element(out, 0x0028, 0x0100, "US", us_value(16));
    put_short_element(out, 0x0028, 0x0101, "US",
                      us_value(static_cast<std::uint16_t>(slice.bits_stored)));
    put_short_element(out, 0x0028, 0x0102, "US",
                      us_value(static_cast<std::uint16_t>(slice.bits_stored - 1)));
    put_short_element(out, 0x0028, 0x0103, "US", us_value(0));
    put_short_element(out, 0x0028, 0x1052, "DS", padded_string("0", ' '));
    put_short_element(out, 0x0028, 0x1053, "DS", padded_string("1", ' '));

    put_u16(out, 0x7FE0);
    put_u16(out, 0x0010);
    out.push_back('O');
    out.push_back('W');
    put_u16(out, 0);  // reserved
    put_u32(out, static_cast<std::uint32_t>(slice.pixels.size() * 2));
    for (std::int32_t v : slice.pixels) put_u16(out, static_cast<std::uint16_t>(v));
    return out;
}

std::vector<std::filesystem::path> generate_phantom(const PhantomParams& p,
                                                    const std::filesystem::path& out_dir) {
    validate(p);
    std::filesystem::create_directories(out_dir);
    std::vector<std::filesystem::path> written;
    for (int i = 0; i < p.n_slices; ++i) {
        const SliceImage slice = phantom_slice(p, i);
        char name[32];
        std::snprintf(name, sizeof name, "slice_%04d", i);
        if (p.emit_dicom) {
            const auto path = out_dir / (std::string(name) + ".dcm");
            const auto bytes = write_minimal_dicom(slice);
            std::ofstream f(path, std::ios::binary);
            if (!f) throw Error("cannot write " + path.string());
            f.write(reinterpret_cast<const char*>(bytes.data()),
                    static_cast<std::streamsize>(bytes.size()));
            written.push_back(path);
        } else {
            const auto path = out_dir / (std::string(name) + ".pgm");
            const auto bytes = write_pgm(slice);
            std::ofstream f(path, std::ios::binary);
            if (!f) throw Error("cannot write " + path.string());
            f.write(reinterpret_cast<const char*>(bytes.data()),
                    static_cast<std::streamsize>(bytes.size()));
            written.push_back(path);
        }
    }
    return written;
}

}  // namespace ct2stl
