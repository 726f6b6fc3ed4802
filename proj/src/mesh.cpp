#include "ct2stl/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <tuple>

#include "ct2stl/delaunay.hpp"
#include "ct2stl/errors.hpp"

namespace ct2stl {

void TriangleMesh::add_facet(int a, int b, int c) {
    const Vec3 n = normalized(cross(vertices[b] - vertices[a], vertices[c] - vertices[a]));
    facets.push_back({{a, b, c}, n});
}

namespace {

std::tuple<std::int64_t, std::int64_t, std::int64_t> quantize(Vec3 v, double tol) {
    return {static_cast<std::int64_t>(std::llround(v.x / tol)),
            static_cast<std::int64_t>(std::llround(v.y / tol)),
            static_cast<std::int64_t>(std::llround(v.z / tol))};
}

}  // namespace

void TriangleMesh::merge(const TriangleMesh& other, double tol) {
    std::map<std::tuple<std::int64_t, std::int64_t, std::int64_t>, int> lookup;
    for (size_t i = 0; i < vertices.size(); ++i) lookup.emplace(quantize(vertices[i], tol), static_cast<int>(i));
    std::vector<int> remap(other.vertices.size());
    for (size_t i = 0; i < other.vertices.size(); ++i) {
        const auto key = quantize(other.vertices[i], tol);
        auto it = lookup.find(key);
        if (it == lookup.end()) {
            remap[i] = static_cast<int>(vertices.size());
            vertices.push_back(other.vertices[i]);
            lookup.emplace(key, remap[i]);
        } else {
            remap[i] = it->second;
        }
    }
    for (const Facet& f : other.facets)
        facets.push_back({{remap[f.v[0]], remap[f.v[1]], remap[f.v[2]]}, f.normal});
}

StitchPlan plan_stitch(const ContourPolyline& top, const ContourPolyline& bottom) {
    StitchPlan plan;
    plan.swapped = bottom.points.size() > top.points.size();
    const int j = static_cast<int>(std::max(top.points.size(), bottom.points.size()));
    const int i = static_cast<int>(std::min(top.points.size(), bottom.points.size()));
    plan.top_count = j;
    plan.bottom_count = i;
    plan.extra = j - i;
    if (plan.extra > 0) {
        plan.quotient = j / plan.extra;
        plan.remainder = j % plan.extra;
    }
    plan.assignments.resize(static_cast<size_t>(i));
    for (int k = 0; k < i; ++k) {
        // Bresenham-style even spread of the d extra points
        const long lo = static_cast<long>(k) * plan.extra / i;
        const long hi = static_cast<long>(k + 1) * plan.extra / i;
        plan.assignments[static_cast<size_t>(k)] = 1 + static_cast<int>(hi - lo);
    }
    return plan;
}

int align_start(const ContourPolyline& top, const ContourPolyline& bottom) {
    if (top.points.empty() || bottom.points.empty()) return 0;
    const Vec2 anchor = bottom.points.front();
    int best = 0;
    double best_dist = dist(top.points.front(), anchor);
    for (size_t k = 1; k < top.points.size(); ++k) {
        const double d = dist(top.points[k], anchor);
        if (d < best_dist) {
            best_dist = d;
            best = static_cast<int>(k);
        }
    }
    return best;
}

TriangleMesh cap_layer(const ContourPolyline& c, double z, CapFacing facing) {
    const auto tris = delaunay_2d(c.points);
    std::vector<int> used(c.points.size(), -1);
    TriangleMesh mesh;
    auto vertex_of = [&](int idx) {
        if (used[idx] < 0) {
            used[idx] = static_cast<int>(mesh.vertices.size());
            mesh.vertices.push_back({c.points[idx].x, c.points[idx].y, z});
        }
        return used[idx];
    };
    for (const auto& t : tris) {
        const Vec2 centroid =
            (c.points[t[0]] + c.points[t[1]] + c.points[t[2]]) * (1.0 / 3.0);
        if (!point_in_polygon(centroid, c.points)) continue;
        if (facing == CapFacing::Up)
            mesh.add_facet(vertex_of(t[0]), vertex_of(t[1]), vertex_of(t[2]));
        else
            mesh.add_facet(vertex_of(t[0]), vertex_of(t[2]), vertex_of(t[1]));
    }
    return mesh;
}

TriangleMesh build_wall(const ContourPolyline& top, double z_top, const ContourPolyline& bottom,
                        double z_bottom) {
    if (top.points.size() < 3 || bottom.points.size() < 3)
        throw DegenerateLayer("wall layers need at least 3 points each");
    if (!(z_top > z_bottom)) throw InvalidParam("wall needs z_top > z_bottom");

    const StitchPlan plan = plan_stitch(top, bottom);
    // F: sparse loop, M: dense loop; flip windings when the dense loop is the
    // geometric bottom so normals stay outward.
    const ContourPolyline& dense = plan.swapped ? bottom : top;
    const ContourPolyline& sparse = plan.swapped ? top : bottom;
    const double dense_z = plan.swapped ? z_bottom : z_top;
    const double sparse_z = plan.swapped ? z_top : z_bottom;
    const bool dense_on_top = !plan.swapped;

    const int nf = plan.bottom_count;
    const int nm = plan.top_count;

    TriangleMesh mesh;
    mesh.vertices.reserve(static_cast<size_t>(nf) + nm);
    for (const Vec2& p : sparse.points) mesh.vertices.push_back({p.x, p.y, sparse_z});
    for (const Vec2& p : dense.points) mesh.vertices.push_back({p.x, p.y, dense_z});
    auto fv = [&](int k) { return k % nf; };
    auto mv = [&](int k) { return nf + (k % nm); };

    auto emit = [&](int a, int b, int c) {
        if (dense_on_top)
            mesh.add_facet(a, b, c);
        else
            mesh.add_facet(a, c, b);
    };

    int m = 0;
    for (int k = 0; k < nf; ++k) {
        const int extra = plan.assignments[static_cast<size_t>(k)] - 1;
        for (int s = 0; s < extra; ++s) {
            emit(fv(k), mv(m + s + 1), mv(m + s));
        }
        m += extra;
        emit(fv(k), fv(k + 1), mv(m));
        emit(fv(k + 1), mv(m + 1), mv(m));
        m += 1;
    }
    return mesh;
}

TriangleMesh assemble(const LayerStack& stack) {
    if (stack.layers.size() < 2) throw LayerMismatch("a stack needs at least 2 layers");
    if (stack.z_spacing_mm <= 0.0) throw InvalidParam("z spacing must be positive");

    std::vector<ContourPolyline> layers;
    layers.reserve(stack.layers.size());
    for (size_t i = 0; i < stack.layers.size(); ++i) {
        ContourPolyline c = normalize_contour(stack.layers[i]);
        if (c.points.size() < 3 || c.area() <= 0.0)
            throw LayerMismatch("layer " + std::to_string(i) + " is degenerate");
        layers.push_back(std::move(c));
    }
    for (size_t i = 1; i < layers.size(); ++i)
        layers[i] = rotate_contour(layers[i], align_start(layers[i], layers[i - 1]));

    auto z_of = [&](size_t i) { return stack.base_z_mm + stack.z_spacing_mm * static_cast<double>(i); };

    TriangleMesh mesh = cap_layer(layers.front(), z_of(0), CapFacing::Down);
    for (size_t i = 0; i + 1 < layers.size(); ++i) {
        mesh.merge(build_wall(layers[i + 1], z_of(i + 1), layers[i], z_of(i)));
    }
    mesh.merge(cap_layer(layers.back(), z_of(layers.size() - 1), CapFacing::Up));
    return mesh;
}

MeshAudit audit_mesh(const TriangleMesh& mesh) {
    MeshAudit audit;
    audit.vertex_count = static_cast<long>(mesh.vertices.size());
    audit.facet_count = static_cast<long>(mesh.facets.size());

    struct EdgeUse {
        int count = 0;
        int forward = 0;  // traversals as (min, max)
    };
    std::map<std::pair<int, int>, EdgeUse> edges;
    audit.min_facet_area = mesh.facets.empty() ? 0.0 : 1e300;
    audit.normals_unit = true;
    std::vector<int> parent(mesh.facets.size());
    for (size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    std::map<std::pair<int, int>, int> first_facet_of_edge;

    for (size_t fi = 0; fi < mesh.facets.size(); ++fi) {
        const Facet& f = mesh.facets[fi];
        const Vec3 a = mesh.vertices[f.v[0]];
        const Vec3 b = mesh.vertices[f.v[1]];
        const Vec3 c = mesh.vertices[f.v[2]];
        audit.min_facet_area = std::min(audit.min_facet_area, 0.5 * norm(cross(b - a, c - a)));
        if (std::abs(norm(f.normal) - 1.0) > 1e-9) audit.normals_unit = false;
        audit.signed_volume += dot(a, cross(b, c)) / 6.0;
        for (int e = 0; e < 3; ++e) {
            const int p = f.v[e];
            const int q = f.v[(e + 1) % 3];
            auto& use = edges[{std::min(p, q), std::max(p, q)}];
            ++use.count;
            if (p < q) ++use.forward;
            auto [it, inserted] =
                first_facet_of_edge.try_emplace({std::min(p, q), std::max(p, q)}, static_cast<int>(fi));
            if (!inserted) parent[find(static_cast<int>(fi))] = find(it->second);
        }
    }

    audit.edge_count = static_cast<long>(edges.size());
    for (const auto& [key, use] : edges) {
        if (use.count == 1) ++audit.boundary_edges;
        if (use.count > 2) ++audit.nonmanifold_edges;
        if (use.count == 2 && use.forward != 1) ++audit.misoriented_edges;
    }
    audit.euler_characteristic = audit.vertex_count - audit.edge_count + audit.facet_count;
    audit.edge_manifold = audit.nonmanifold_edges == 0;
    audit.oriented = audit.misoriented_edges == 0;
    audit.watertight = audit.edge_manifold && audit.oriented && audit.boundary_edges == 0 &&
                       !mesh.facets.empty();

    std::map<int, int> roots;
    for (size_t i = 0; i < parent.size(); ++i) roots.emplace(find(static_cast<int>(i)), 0);
    audit.shells = static_cast<int>(roots.size());
    return audit;
}

}  // namespace ct2stl
