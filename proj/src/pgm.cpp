#include "ct2stl/pgm.hpp"

#include <cctype>
#include <string>

#include "ct2stl/errors.hpp"

namespace ct2stl {

namespace {

struct Cursor {
    std::span<const std::uint8_t> data;
    size_t pos = 0;

    bool eof() const { return pos >= data.size(); }
    std::uint8_t peek() const { return data[pos]; }

    void skip_space_and_comments() {
        while (!eof()) {
            if (std::isspace(peek())) {
                ++pos;
            } else if (peek() == '#') {
                while (!eof() && peek() != '\n') ++pos;
            } else {
                break;
            }
        }
    }

    long read_int() {
        skip_space_and_comments();
        if (eof() || !std::isdigit(peek())) throw MalformedHeader("PGM: expected integer in header");
        long v = 0;
        while (!eof() && std::isdigit(peek())) {
            v = v * 10 + (peek() - '0');
            if (v > 1'000'000'000L) throw MalformedHeader("PGM: header value out of range");
            ++pos;
        }
        return v;
    }
};

int bits_for_maxval(long maxval) {
    int bits = 1;
    while ((1L << bits) - 1 < maxval) ++bits;
    return std::max(8, std::min(16, bits));
}

}  // namespace

SliceImage parse_pgm(std::span<const std::uint8_t> bytes, double default_thickness_mm) {
    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
        throw MalformedHeader("PGM: not a binary P5 file");
    }
    Cursor cur{bytes, 2};
    const long width = cur.read_int();
    const long height = cur.read_int();
    const long maxval = cur.read_int();
    if (width <= 0 || height <= 0) throw MalformedHeader("PGM: non-positive dimensions");
    if (maxval <= 0 || maxval > 65535) throw MalformedHeader("PGM: maxval out of range");
    if (cur.eof() || !std::isspace(cur.peek())) throw MalformedHeader("PGM: missing separator");
    ++cur.pos;

    const size_t count = static_cast<size_t>(width) * static_cast<size_t>(height);
    const size_t bytes_per_sample = maxval > 255 ? 2 : 1;
    if (bytes.size() - cur.pos < count * bytes_per_sample) {
        throw TruncatedPixelData("PGM: pixel data shorter than header promises");
    }

    SliceImage slice;
    slice.width = static_cast<int>(width);
    slice.height = static_cast<int>(height);
    slice.bits_stored = bits_for_maxval(maxval);
    slice.slice_thickness_mm = default_thickness_mm;
    slice.pixels.resize(count);
    const std::uint8_t* p = bytes.data() + cur.pos;
    if (bytes_per_sample == 1) {
        for (size_t i = 0; i < count; ++i) slice.pixels[i] = p[i];
    } else {
        for (size_t i = 0; i < count; ++i)
            slice.pixels[i] = (static_cast<std::int32_t>(p[2 * i]) << 8) | p[2 * i + 1];
    }
    return slice;
}

std::vector<std::uint8_t> write_pgm(const SliceImage& slice) {
    if (!slice.valid()) throw InvalidParam("PGM: invalid slice image");
    const long maxval = (1L << slice.bits_stored) - 1;
    for (std::int32_t v : slice.pixels) {
        if (v < 0 || v > maxval) throw InvalidParam("PGM: pixel value outside [0, maxval]");
    }
    std::string header = "P5\n" + std::to_string(slice.width) + " " +
                         std::to_string(slice.height) + "\n" + std::to_string(maxval) + "\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    if (maxval > 255) {
        out.reserve(out.size() + slice.pixels.size() * 2);
        for (std::int32_t v : slice.pixels) {
            out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xFF));
            out.push_back(static_cast<std::uint8_t>(v & 0xFF));
        }
    } else {
        out.reserve(out.size() + slice.pixels.size());
        for (std::int32_t v : slice.pixels) out.push_back(static_cast<std::uint8_t>(v));
    }
    return out;
}

}  // namespace ct2stl
