#include "ct2stl/pointfile.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ct2stl/errors.hpp"

namespace ct2stl {

namespace {

bool parse_double(std::string_view token, double& out) {
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

}  // namespace

std::vector<ContourPolyline> read_contours(std::istream& in, const std::string& origin) {
    std::vector<ContourPolyline> out;
    ContourPolyline cur;
    std::string line;
    long line_no = 0;
    auto flush = [&] {
        if (!cur.points.empty()) {
            if (cur.points.size() < 3)
                throw MalformedPointFile(origin + ": contour ending at line " +
                                         std::to_string(line_no) + " has fewer than 3 points");
            cur.orientation = cur.area() >= 0.0 ? Orientation::CCW : Orientation::CW;
            out.push_back(std::move(cur));
            cur = {};
        }
    };
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string a, b, extra;
        if (!(ls >> a)) {
            flush();
            continue;
        }
        if (!(ls >> b) || (ls >> extra)) {
            throw MalformedPointFile(origin + ":" + std::to_string(line_no) +
                                     ": expected exactly two coordinates per line");
        }
        Vec2 p;
        if (!parse_double(a, p.x) || !parse_double(b, p.y)) {
            throw MalformedPointFile(origin + ":" + std::to_string(line_no) +
                                     ": coordinates are not numbers");
        }
        cur.points.push_back(p);
    }
    ++line_no;
    flush();
    return out;
}

std::vector<ContourPolyline> read_contour_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw MalformedPointFile("cannot open point file " + path.string());
    return read_contours(in, path.filename().string());
}

void write_contours(std::ostream& out, const std::vector<ContourPolyline>& contours) {
    char buf[64];
    bool first = true;
    for (const ContourPolyline& c : contours) {
        if (!first) out << "\n";
        first = false;
        for (const Vec2& p : c.points) {
            std::snprintf(buf, sizeof buf, "%.17g %.17g\n", p.x, p.y);
            out << buf;
        }
    }
}

void write_contour_file(const std::filesystem::path& path,
                        const std::vector<ContourPolyline>& contours) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open output file " + path.string());
    write_contours(out, contours);
}

}  // namespace ct2stl
