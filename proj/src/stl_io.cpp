#include "ct2stl/stl_io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <map>
#include <tuple>

#include "ct2stl/errors.hpp"

namespace ct2stl {

namespace {

void put_f32(std::vector<std::uint8_t>& out, float v) {
    const auto bits = std::bit_cast<std::uint32_t>(v);
    out.push_back(static_cast<std::uint8_t>(bits & 0xFF));
    out.push_back(static_cast<std::uint8_t>((bits >> 8) & 0xFF));
    out.push_back(static_cast<std::uint8_t>((bits >> 16) & 0xFF));
    out.push_back(static_cast<std::uint8_t>((bits >> 24) & 0xFF));
}

float get_f32(const std::uint8_t* p) {
    std::uint32_t bits = p[0] | (p[1] << 8) | (p[2] << 16) |
                         (static_cast<std::uint32_t>(p[3]) << 24);
    return std::bit_cast<float>(bits);
}

struct QuantFacet {
    std::array<float, 3> v0, v1, v2;
    std::array<float, 3> normal;
};

std::array<float, 3> to_f32(Vec3 v) {
    return {static_cast<float>(v.x), static_cast<float>(v.y), static_cast<float>(v.z)};
}

Vec3 to_vec3(const std::array<float, 3>& a) {
    return {static_cast<double>(a[0]), static_cast<double>(a[1]), static_cast<double>(a[2])};
}

// Quantize vertices first, then derive the normal, so the normal is a pure
// function of the bytes that end up in the file.
QuantFacet quantize_facet(const TriangleMesh& mesh, const Facet& f) {
    QuantFacet q;
    q.v0 = to_f32(mesh.vertices[f.v[0]]);
    q.v1 = to_f32(mesh.vertices[f.v[1]]);
    q.v2 = to_f32(mesh.vertices[f.v[2]]);
    const Vec3 n = normalized(cross(to_vec3(q.v1) - to_vec3(q.v0), to_vec3(q.v2) - to_vec3(q.v0)));
    q.normal = to_f32(n);
    return q;
}

std::string fmt_f32(float v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.8e", static_cast<double>(v));
    return buf;
}

struct Tokenizer {
    std::string_view text;
    size_t pos = 0;
    long line = 1;

    bool next(std::string_view& token) {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) {
            if (text[pos] == '\n') ++line;
            ++pos;
        }
        if (pos >= text.size()) return false;
        const size_t start = pos;
        while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
        token = text.substr(start, pos - start);
        return true;
    }

    std::string_view expect_any(const char* what) {
        std::string_view token;
        if (!next(token))
            throw MalformedStl("STL: line " + std::to_string(line) + ": expected " + what +
                               ", found end of input");
        return token;
    }

    void expect(std::string_view keyword) {
        const auto token = expect_any(("'" + std::string(keyword) + "'").c_str());
        if (token != keyword)
            throw MalformedStl("STL: line " + std::to_string(line) + ": expected '" +
                               std::string(keyword) + "', found '" + std::string(token) + "'");
    }

    float expect_float() {
        const auto token = expect_any("a number");
        float v = 0.0f;
        auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
        if (ec != std::errc{} || ptr != token.data() + token.size())
            throw MalformedStl("STL: line " + std::to_string(line) + ": '" + std::string(token) +
                               "' is not a number");
        return v;
    }

    void skip_rest_of_line() {
        while (pos < text.size() && text[pos] != '\n') ++pos;
    }
};

struct MeshAccumulator {
    TriangleMesh mesh;
    std::map<std::tuple<float, float, float>, int> lookup;

    int vertex(const std::array<float, 3>& p) {
        const auto key = std::make_tuple(p[0], p[1], p[2]);
        auto it = lookup.find(key);
        if (it != lookup.end()) return it->second;
        const int idx = static_cast<int>(mesh.vertices.size());
        mesh.vertices.push_back(to_vec3(p));
        lookup.emplace(key, idx);
        return idx;
    }

    void facet(const std::array<float, 3>& n, const std::array<float, 3>& v0,
               const std::array<float, 3>& v1, const std::array<float, 3>& v2) {
        const int a = vertex(v0);
        const int b = vertex(v1);
        const int c = vertex(v2);
        Vec3 normal = to_vec3(n);
        const double len = norm(normal);
        if (std::abs(len - 1.0) > 1e-5) {
            normal = normalized(cross(mesh.vertices[b] - mesh.vertices[a],
                                      mesh.vertices[c] - mesh.vertices[a]));
        }
        mesh.facets.push_back({{a, b, c}, normal});
    }
};

TriangleMesh read_ascii(std::string_view text) {
    Tokenizer tok{text};
    tok.expect("solid");
    tok.skip_rest_of_line();  // solid name
    MeshAccumulator acc;
    for (;;) {
        const auto token = tok.expect_any("'facet' or 'endsolid'");
        if (token == "endsolid") {
            tok.skip_rest_of_line();
            return acc.mesh;
        }
        if (token != "facet")
            throw MalformedStl("STL: line " + std::to_string(tok.line) +
                               ": expected 'facet' or 'endsolid', found '" + std::string(token) +
                               "'");
        tok.expect("normal");
        std::array<float, 3> n{tok.expect_float(), tok.expect_float(), tok.expect_float()};
        tok.expect("outer");
        tok.expect("loop");
        std::array<std::array<float, 3>, 3> v;
        for (auto& vert : v) {
            tok.expect("vertex");
            vert = {tok.expect_float(), tok.expect_float(), tok.expect_float()};
        }
        tok.expect("endloop");
        tok.expect("endfacet");
        acc.facet(n, v[0], v[1], v[2]);
    }
}

TriangleMesh read_binary(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 84) throw MalformedStl("STL: binary file shorter than 84 bytes");
    std::uint32_t count = bytes[80] | (bytes[81] << 8) | (bytes[82] << 16) |
                          (static_cast<std::uint32_t>(bytes[83]) << 24);
    if (bytes.size() != 84 + static_cast<size_t>(count) * 50)
        throw MalformedStl("STL: binary size does not match facet count");
    MeshAccumulator acc;
    const std::uint8_t* p = bytes.data() + 84;
    for (std::uint32_t i = 0; i < count; ++i, p += 50) {
        std::array<float, 3> n{get_f32(p), get_f32(p + 4), get_f32(p + 8)};
        std::array<float, 3> v0{get_f32(p + 12), get_f32(p + 16), get_f32(p + 20)};
        std::array<float, 3> v1{get_f32(p + 24), get_f32(p + 28), get_f32(p + 32)};
        std::array<float, 3> v2{get_f32(p + 36), get_f32(p + 40), get_f32(p + 44)};
        acc.facet(n, v0, v1, v2);
    }
    return acc.mesh;
}

bool looks_like_ascii(std::span<const std::uint8_t> bytes) {
    size_t i = 0;
    while (i < bytes.size() && std::isspace(bytes[i])) ++i;
    return bytes.size() - i >= 5 && std::memcmp(bytes.data() + i, "solid", 5) == 0;
}

}  // namespace

std::vector<std::uint8_t> write_binary_stl(const TriangleMesh& mesh,
                                           std::string_view header_text) {
    if (mesh.facets.size() > 0xFFFFFFFFull)
        throw TooManyFacets("binary STL caps at 2^32 - 1 facets");
    std::vector<std::uint8_t> out;
    out.reserve(84 + mesh.facets.size() * 50);
    for (size_t i = 0; i < 80; ++i)
        out.push_back(i < header_text.size() ? static_cast<std::uint8_t>(header_text[i]) : 0);
    const auto count = static_cast<std::uint32_t>(mesh.facets.size());
    out.push_back(count & 0xFF);
    out.push_back((count >> 8) & 0xFF);
    out.push_back((count >> 16) & 0xFF);
    out.push_back((count >> 24) & 0xFF);
    for (const Facet& f : mesh.facets) {
        const QuantFacet q = quantize_facet(mesh, f);
        for (float v : q.normal) put_f32(out, v);
        for (float v : q.v0) put_f32(out, v);
        for (float v : q.v1) put_f32(out, v);
        for (float v : q.v2) put_f32(out, v);
        out.push_back(0);
        out.push_back(0);
    }
    return out;
}

std::string write_ascii_stl(const TriangleMesh& mesh, std::string_view name) {
    std::string clean_name(name);
    std::replace_if(
        clean_name.begin(), clean_name.end(),
        [](unsigned char ch) { return std::isspace(ch) != 0; }, '_');
    std::string out = "solid " + clean_name + "\n";
    for (const Facet& f : mesh.facets) {
        const QuantFacet q = quantize_facet(mesh, f);
        out += " facet normal " + fmt_f32(q.normal[0]) + " " + fmt_f32(q.normal[1]) + " " +
               fmt_f32(q.normal[2]) + "\n";
        out += "  outer loop\n";
        for (const auto& v : {q.v0, q.v1, q.v2}) {
            out += "   vertex " + fmt_f32(v[0]) + " " + fmt_f32(v[1]) + " " + fmt_f32(v[2]) + "\n";
        }
        out += "  endloop\n";
        out += " endfacet\n";
    }
    out += "endsolid " + clean_name + "\n";
    return out;
}

TriangleMesh read_stl(std::span<const std::uint8_t> bytes) {
    if (looks_like_ascii(bytes)) {
        try {
            return read_ascii(
                std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
        } catch (const MalformedStl&) {
            // real binary files sometimes start with "solid" in the header
            if (bytes.size() >= 84) {
                std::uint32_t count = bytes[80] | (bytes[81] << 8) | (bytes[82] << 16) |
                                      (static_cast<std::uint32_t>(bytes[83]) << 24);
                if (bytes.size() == 84 + static_cast<size_t>(count) * 50)
                    return read_binary(bytes);
            }
            throw;
        }
    }
    return read_binary(bytes);
}

}  // namespace ct2stl
