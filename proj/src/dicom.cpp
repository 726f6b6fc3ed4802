#include "ct2stl/dicom.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <optional>
#include <string>

#include "ct2stl/errors.hpp"

namespace ct2stl {

namespace {

constexpr const char* kUidImplicitLE = "1.2.840.10008.1.2";
constexpr const char* kUidExplicitLE = "1.2.840.10008.1.2.1";

struct Reader {
    std::span<const std::uint8_t> data;
    size_t pos = 0;

    size_t remaining() const { return data.size() - pos; }

    void need(size_t n) const {
        if (remaining() < n) throw TruncatedFile("DICOM: unexpected end of file");
    }
    std::uint16_t u16() {
        need(2);
        std::uint16_t v = static_cast<std::uint16_t>(data[pos] | (data[pos + 1] << 8));
        pos += 2;
        return v;
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = data[pos] | (data[pos + 1] << 8) | (data[pos + 2] << 16) |
                          (static_cast<std::uint32_t>(data[pos + 3]) << 24);
        pos += 4;
        return v;
    }
    std::span<const std::uint8_t> bytes(size_t n) {
        need(n);
        auto v = data.subspan(pos, n);
        pos += n;
        return v;
    }
};

struct Element {
    std::uint16_t group = 0;
    std::uint16_t element = 0;
    std::string vr;  // empty for implicit
    std::span<const std::uint8_t> value;
};

bool vr_has_long_length(const std::string& vr) {
    return vr == "OB" || vr == "OW" || vr == "OF" || vr == "SQ" || vr == "UT" || vr == "UN";
}

constexpr std::uint32_t kUndefinedLength = 0xFFFFFFFFu;

// Skip to just past the (FFFE,E0DD) sequence delimitation item.
void skip_undefined_length(Reader& r) {
    while (r.remaining() >= 8) {
        const std::uint8_t* p = r.data.data() + r.pos;
        if (p[0] == 0xFE && p[1] == 0xFF && p[2] == 0xDD && p[3] == 0xE0) {
            r.pos += 8;
            return;
        }
        ++r.pos;
    }
    throw TruncatedFile("DICOM: undefined-length element without delimiter");
}

std::optional<Element> read_element(Reader& r, bool explicit_vr) {
    if (r.remaining() == 0) return std::nullopt;
    if (r.remaining() < 8) throw TruncatedFile("DICOM: truncated element header");
    Element e;
    e.group = r.u16();
    e.element = r.u16();
    std::uint32_t len = 0;
    if (explicit_vr) {
        auto vr_bytes = r.bytes(2);
        e.vr.assign(reinterpret_cast<const char*>(vr_bytes.data()), 2);
        if (vr_has_long_length(e.vr)) {
            r.bytes(2);  // reserved
            len = r.u32();
        } else {
            len = r.u16();
        }
    } else {
        len = r.u32();
    }
    if (len == kUndefinedLength) {
        if (e.group == 0x7FE0 && e.element == 0x0010)
            throw UnsupportedTransferSyntax("DICOM: encapsulated pixel data not supported");
        skip_undefined_length(r);
        e.value = {};
        return e;
    }
    e.value = r.bytes(len);
    return e;
}

std::uint16_t value_as_u16(const Element& e, const char* name) {
    if (e.value.size() < 2)
        throw InvalidTagValue(std::string("DICOM: ") + name + " is not a 16-bit value");
    return static_cast<std::uint16_t>(e.value[0] | (e.value[1] << 8));
}

double value_as_decimal(const Element& e, const char* name) {
    std::string s(reinterpret_cast<const char*>(e.value.data()), e.value.size());
    // multi-valued DS: first component only
    if (auto sep = s.find('\\'); sep != std::string::npos) s.resize(sep);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\0')) s.pop_back();
    while (!s.empty() && s.front() == ' ') s.erase(s.begin());
    const char* begin = s.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end != begin + s.size() || s.empty())
        throw InvalidTagValue(std::string("DICOM: ") + name + " is not a decimal string");
    return v;
}

std::string value_as_uid(const Element& e) {
    std::string s(reinterpret_cast<const char*>(e.value.data()), e.value.size());
    while (!s.empty() && (s.back() == '\0' || s.back() == ' ')) s.pop_back();
    return s;
}

}  // namespace

SliceImage parse_dicom(std::span<const std::uint8_t> bytes, DicomMeta* meta_out) {
    Reader r{bytes};
    bool has_preamble = false;
    if (bytes.size() >= 132 && std::memcmp(bytes.data() + 128, "DICM", 4) == 0) {
        has_preamble = true;
        r.pos = 132;
    }

    // File meta group (0002,xxxx) is always explicit VR little-endian.
    TransferSyntax syntax = TransferSyntax::ImplicitVrLittleEndian;
    if (has_preamble) {
        while (r.remaining() >= 8) {
            const size_t mark = r.pos;
            Reader peek = r;
            const std::uint16_t group = peek.u16();
            if (group != 0x0002) break;
            r.pos = mark;
            auto e = read_element(r, /*explicit_vr=*/true);
            if (!e) break;
            if (e->element == 0x0010) {
                const std::string uid = value_as_uid(*e);
                if (uid == kUidImplicitLE) {
                    syntax = TransferSyntax::ImplicitVrLittleEndian;
                } else if (uid == kUidExplicitLE) {
                    syntax = TransferSyntax::ExplicitVrLittleEndian;
                } else {
                    throw UnsupportedTransferSyntax("DICOM: unsupported transfer syntax " + uid);
                }
            }
        }
    }

    const bool explicit_vr = syntax == TransferSyntax::ExplicitVrLittleEndian;

    std::optional<int> rows, columns, bits_allocated, bits_stored, pixel_representation;
    std::optional<double> slope, intercept, thickness;
    std::optional<std::span<const std::uint8_t>> pixel_data;

    while (auto e = read_element(r, explicit_vr)) {
        const std::uint32_t tag =
            (static_cast<std::uint32_t>(e->group) << 16) | e->element;
        switch (tag) {
            case 0x00280010: rows = value_as_u16(*e, "Rows"); break;
            case 0x00280011: columns = value_as_u16(*e, "Columns"); break;
            case 0x00280100: bits_allocated = value_as_u16(*e, "BitsAllocated"); break;
            case 0x00280101: bits_stored = value_as_u16(*e, "BitsStored"); break;
            case 0x00280103:
                pixel_representation = value_as_u16(*e, "PixelRepresentation");
                break;
            case 0x00281052: intercept = value_as_decimal(*e, "RescaleIntercept"); break;
            case 0x00281053: slope = value_as_decimal(*e, "RescaleSlope"); break;
            case 0x00180050: thickness = value_as_decimal(*e, "SliceThickness"); break;
            case 0x7FE00010: pixel_data = e->value; break;
            default: break;  // skipped by length
        }
    }

    auto require = [](const auto& opt, const char* name) -> decltype(*opt) {
        if (!opt) throw MissingTag(std::string("DICOM: required tag missing: ") + name);
        return *opt;
    };
    const int n_rows = require(rows, "Rows (0028,0010)");
    const int n_cols = require(columns, "Columns (0028,0011)");
    const int n_alloc = require(bits_allocated, "BitsAllocated (0028,0100)");
    const int n_stored = require(bits_stored, "BitsStored (0028,0101)");
    const int pixel_rep = require(pixel_representation, "PixelRepresentation (0028,0103)");
    const double rescale_intercept = require(intercept, "RescaleIntercept (0028,1052)");
    const double rescale_slope = require(slope, "RescaleSlope (0028,1053)");
    const double slice_thickness = require(thickness, "SliceThickness (0018,0050)");
    const auto pixels = require(pixel_data, "PixelData (7FE0,0010)");

    if (n_alloc != 8 && n_alloc != 16)
        throw InvalidTagValue("DICOM: BitsAllocated must be 8 or 16");
    if (n_stored < 8 || n_stored > 16 || n_stored > n_alloc)
        throw InvalidTagValue("DICOM: BitsStored out of range");
    if (pixel_rep != 0 && pixel_rep != 1)
        throw InvalidTagValue("DICOM: PixelRepresentation must be 0 or 1");
    if (rescale_slope == 0.0) throw InvalidTagValue("DICOM: RescaleSlope must be nonzero");
    if (slice_thickness <= 0.0) throw InvalidTagValue("DICOM: SliceThickness must be positive");
    if (n_rows <= 0 || n_cols <= 0) throw InvalidTagValue("DICOM: empty pixel grid");

    const size_t bytes_per_sample = static_cast<size_t>(n_alloc) / 8;
    const size_t expected = static_cast<size_t>(n_rows) * n_cols * bytes_per_sample;
    if (pixels.size() != expected)
        throw LengthMismatch("DICOM: PixelData length does not match Rows x Columns");

    SliceImage slice;
    slice.width = n_cols;
    slice.height = n_rows;
    slice.bits_stored = n_stored;
    slice.slice_thickness_mm = slice_thickness;
    slice.pixels.resize(static_cast<size_t>(n_rows) * n_cols);
    const std::uint32_t mask = (1u << n_stored) - 1u;
    const std::uint32_t sign_bit = 1u << (n_stored - 1);
    for (size_t i = 0; i < slice.pixels.size(); ++i) {
        std::uint32_t stored;
        if (bytes_per_sample == 1) {
            stored = pixels[i];
        } else {
            stored = static_cast<std::uint32_t>(pixels[2 * i] | (pixels[2 * i + 1] << 8));
        }
        stored &= mask;
        std::int32_t value = static_cast<std::int32_t>(stored);
        if (pixel_rep == 1 && (stored & sign_bit)) value -= static_cast<std::int32_t>(mask) + 1;
        slice.pixels[i] = static_cast<std::int32_t>(
            std::llround(value * rescale_slope + rescale_intercept));
    }

    if (meta_out) {
        meta_out->rows = n_rows;
        meta_out->columns = n_cols;
        meta_out->bits_allocated = n_alloc;
        meta_out->bits_stored = n_stored;
        meta_out->pixel_representation = pixel_rep;
        meta_out->rescale_slope = rescale_slope;
        meta_out->rescale_intercept = rescale_intercept;
        meta_out->slice_thickness_mm = slice_thickness;
        meta_out->transfer_syntax = syntax;
    }
    return slice;
}

}  // namespace ct2stl
