#pragma once

#include <array>
#include <vector>

#include "ct2stl/contour.hpp"
#include "ct2stl/geometry.hpp"

namespace ct2stl {

struct Facet {
    std::array<int, 3> v;
    Vec3 normal;  // unit, right-hand rule over (v0, v1, v2)
};

struct TriangleMesh {
    std::vector<Vec3> vertices;
    std::vector<Facet> facets;

    /// Append a facet; the normal comes from the winding.
    void add_facet(int a, int b, int c);
    /// Merge another mesh, deduplicating vertices within `tol`.
    void merge(const TriangleMesh& other, double tol = 1e-9);
};

/// Ordered bottom-to-top stack of closed CCW contours.
struct LayerStack {
    std::vector<ContourPolyline> layers;
    double z_spacing_mm = 1.0;
    double base_z_mm = 0.0;
};

/// How the extra points of the denser layer distribute over the sparser one.
struct StitchPlan {
    int top_count = 0;     // j: points in the denser layer
    int bottom_count = 0;  // i: points in the sparser layer
    int extra = 0;         // d = j - i
    int quotient = 0;      // floor(j / d) when d > 0: spacing of extra triangles
    int remainder = 0;     // j mod d when d > 0
    bool swapped = false;  // true when the geometric bottom is the denser layer
    std::vector<int> assignments;  // per sparse point, >= 1, sums to j, spread <= 1
};

StitchPlan plan_stitch(const ContourPolyline& top, const ContourPolyline& bottom);

/// Cyclic rotation of `top` that brings its start point nearest to
/// `bottom`'s start point.
int align_start(const ContourPolyline& top, const ContourPolyline& bottom);

enum class CapFacing { Up, Down };

/// Delaunay triangulation of the contour points clipped to the polygon
/// interior, lifted to height z.
TriangleMesh cap_layer(const ContourPolyline& c, double z, CapFacing facing);

/// Triangle band connecting two stacked contours; exactly i + j facets, all
/// normals facing away from the loop. Contours must already be aligned.
TriangleMesh build_wall(const ContourPolyline& top, double z_top, const ContourPolyline& bottom,
                        double z_bottom);

/// Bottom cap + wall per layer pair + top cap, with shared vertices merged.
TriangleMesh assemble(const LayerStack& stack);

struct MeshAudit {
    long vertex_count = 0;
    long edge_count = 0;
    long facet_count = 0;
    long euler_characteristic = 0;
    long boundary_edges = 0;     // edges used by exactly one facet
    long nonmanifold_edges = 0;  // edges used by three or more facets
    long misoriented_edges = 0;  // edge pairs traversed in the same direction
    int shells = 0;
    bool edge_manifold = false;  // no edge used more than twice
    bool oriented = false;
    bool watertight = false;  // manifold + oriented + closed
    bool normals_unit = false;
    double signed_volume = 0.0;
    double min_facet_area = 0.0;
};

MeshAudit audit_mesh(const TriangleMesh& mesh);

}  // namespace ct2stl
