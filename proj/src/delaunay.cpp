#include "ct2stl/delaunay.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <utility>

#include "ct2stl/errors.hpp"
#include "ct2stl/predicates.hpp"

namespace ct2stl {

namespace {

struct Tri {
    std::array<int, 3> v;    // CCW
    std::array<int, 3> nbr;  // nbr[e] faces edge (v[e+1], v[e+2]); -1 = none
};

struct Builder {
    std::span<const Vec2> pts;
    std::vector<Tri> tris;
    // unpaired directed edges -> (triangle, slot)
    std::map<std::pair<int, int>, std::pair<int, int>> open_edges;
    std::vector<int> next, prev;  // hull cycle, CCW
    std::vector<std::pair<int, int>> pending;  // legalization stack
    int hull_start = -1;

    explicit Builder(std::span<const Vec2> points)
        : pts(points), next(points.size(), -1), prev(points.size(), -1) {}

    int orient(int a, int b, int c) const { return orient2d_sign(pts[a], pts[b], pts[c]); }

    int add_triangle(int a, int b, int c) {
        const int t = static_cast<int>(tris.size());
        tris.push_back({{a, b, c}, {-1, -1, -1}});
        for (int e = 0; e < 3; ++e) link_edge(t, e);
        return t;
    }

    void link_edge(int t, int e) {
        const int p = tris[t].v[(e + 1) % 3];
        const int q = tris[t].v[(e + 2) % 3];
        if (auto it = open_edges.find({q, p}); it != open_edges.end()) {
            auto [ot, oe] = it->second;
            tris[t].nbr[e] = ot;
            tris[ot].nbr[oe] = t;
            open_edges.erase(it);
        } else {
            open_edges[{p, q}] = {t, e};
        }
    }

    void reindex_open_edge(int t, int e) {
        if (tris[t].nbr[e] != -1) return;
        const int p = tris[t].v[(e + 1) % 3];
        const int q = tris[t].v[(e + 2) % 3];
        open_edges[{p, q}] = {t, e};
    }

    int slot_of_neighbor(int t, int o) const {
        for (int e = 0; e < 3; ++e)
            if (tris[t].nbr[e] == o) return e;
        throw Error("internal: broken triangle adjacency");
    }

    void set_back_pointer(int t, int old_nbr, int new_nbr) {
        if (t == -1) return;
        tris[t].nbr[slot_of_neighbor(t, old_nbr)] = new_nbr;
    }

    // Replace triangles t=(A,B,C) and its neighbor across edge e with the
    // flipped pair t=(A,B,D), o=(A,D,C).
    void flip(int t, int e) {
        const int o = tris[t].nbr[e];
        const int a = tris[t].v[e];
        const int b = tris[t].v[(e + 1) % 3];
        const int c = tris[t].v[(e + 2) % 3];
        const int f = slot_of_neighbor(o, t);
        const int d = tris[o].v[f];

        const int n_ca = tris[t].nbr[(e + 1) % 3];
        const int n_ab = tris[t].nbr[(e + 2) % 3];
        const int n_bd = tris[o].nbr[(f + 1) % 3];
        const int n_dc = tris[o].nbr[(f + 2) % 3];

        tris[t] = {{a, b, d}, {n_bd, o, n_ab}};
        tris[o] = {{a, d, c}, {n_dc, n_ca, t}};
        set_back_pointer(n_ca, t, o);
        set_back_pointer(n_bd, o, t);
        reindex_open_edge(t, 0);
        reindex_open_edge(t, 2);
        reindex_open_edge(o, 0);
        reindex_open_edge(o, 1);
    }

    void legalize_pending() {
        while (!pending.empty()) {
            auto [t, e] = pending.back();
            pending.pop_back();
            const int o = tris[t].nbr[e];
            if (o == -1) continue;
            const int a = tris[t].v[e];
            const int b = tris[t].v[(e + 1) % 3];
            const int c = tris[t].v[(e + 2) % 3];
            const int d = tris[o].v[slot_of_neighbor(o, t)];
            if (incircle_sign_perturbed(pts[a], a, pts[b], b, pts[c], c, pts[d], d) > 0) {
                flip(t, e);
                pending.push_back({t, 0});
                pending.push_back({t, 2});
                pending.push_back({o, 0});
                pending.push_back({o, 1});
            }
        }
    }

    // First non-collinear point: fan against the collinear chain.
    void start_fan(const std::vector<int>& chain, int p) {
        const int s = orient(chain[0], chain[1], p);
        for (size_t i = 0; i + 1 < chain.size(); ++i) {
            if (s > 0)
                add_triangle(chain[i], chain[i + 1], p);
            else
                add_triangle(chain[i + 1], chain[i], p);
        }
        if (s > 0) {
            for (size_t i = 0; i + 1 < chain.size(); ++i) next[chain[i]] = chain[i + 1];
            next[chain.back()] = p;
            next[p] = chain.front();
        } else {
            for (size_t i = 0; i + 1 < chain.size(); ++i) next[chain[i + 1]] = chain[i];
            next[chain.front()] = p;
            next[p] = chain.back();
        }
        rebuild_prev();
        hull_start = p;
    }

    void rebuild_prev() {
        int v = hull_start >= 0 ? hull_start : 0;
        // prev is derived from next over the current hull cycle only
        int start = -1;
        for (size_t i = 0; i < next.size(); ++i) {
            if (next[i] != -1) {
                start = static_cast<int>(i);
                break;
            }
        }
        v = start;
        do {
            prev[next[v]] = v;
            v = next[v];
        } while (v != start);
    }

    void insert(int p) {
        // one strictly visible hull edge
        int u0 = -1;
        int v = hull_start;
        do {
            if (orient(v, next[v], p) < 0) {
                u0 = v;
                break;
            }
            v = next[v];
        } while (v != hull_start);
        if (u0 == -1) throw Error("internal: point sees no hull edge");

        int arc_begin = u0;
        while (orient(prev[arc_begin], arc_begin, p) < 0) arc_begin = prev[arc_begin];
        int arc_end = next[u0];
        while (orient(arc_end, next[arc_end], p) < 0) arc_end = next[arc_end];

        for (int u = arc_begin; u != arc_end; u = next[u]) {
            const int w = next[u];
            const int t = add_triangle(p, w, u);
            pending.push_back({t, 0});  // the former hull edge (w, u)
        }
        next[arc_begin] = p;
        next[p] = arc_end;
        prev[p] = arc_begin;
        prev[arc_end] = p;
        hull_start = p;
        legalize_pending();
    }
};

}  // namespace

std::vector<std::array<int, 3>> delaunay_2d(std::span<const Vec2> points) {
    const int n = static_cast<int>(points.size());
    if (n < 3) throw AllCollinear("triangulation needs at least 3 points");

    std::vector<int> order(points.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) {
        if (points[i].x != points[j].x) return points[i].x < points[j].x;
        if (points[i].y != points[j].y) return points[i].y < points[j].y;
        return i < j;
    });
    for (size_t i = 0; i + 1 < order.size(); ++i) {
        if (points[order[i]] == points[order[i + 1]])
            throw DuplicatePoints("duplicate point at indices " + std::to_string(order[i]) +
                                  " and " + std::to_string(order[i + 1]));
    }

    Builder builder(points);
    std::vector<int> chain;  // collinear prefix, in sorted order
    bool degenerate = true;
    for (int idx : order) {
        if (degenerate) {
            if (chain.size() < 2 ||
                builder.orient(chain[0], chain[1], idx) == 0) {
                chain.push_back(idx);
                continue;
            }
            builder.start_fan(chain, idx);
            degenerate = false;
            continue;
        }
        builder.insert(idx);
    }
    if (degenerate) throw AllCollinear("all points are collinear");

    std::vector<std::array<int, 3>> out;
    out.reserve(builder.tris.size());
    for (const Tri& t : builder.tris) {
        std::array<int, 3> tri = t.v;
        const auto lowest = std::min_element(tri.begin(), tri.end());
        std::rotate(tri.begin(), lowest, tri.end());
        out.push_back(tri);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace ct2stl
