#pragma once

#include "cutflow/common.hpp"

#include <array>
#include <functional>
#include <vector>

namespace cutflow {

/// Convex polygonal domain, counter-clockwise vertices. The boundary is
/// exact (no level-set approximation); the signed distance is negative
/// inside and is used only for inside/outside classification.
struct DomainPolygon {
    struct Edge {
        Vec2 a, b;
        Vec2 normal; // outward unit normal of the edge line
    };

    std::vector<Vec2> vertices;
    std::vector<Edge> edges;

    double signed_distance(const Vec2& p) const;
    bool contains(const Vec2& p) const { return signed_distance(p) <= 0.0; }
    double area() const;
    double perimeter() const;
};

DomainPolygon make_domain(std::vector<Vec2> ccw_vertices);

/// Axis-aligned square [-half_width, half_width]^2.
DomainPolygon make_box(double half_width);

/// Normal/tangential projection matrices built from a unit normal.
struct Projectors {
    Mat2 normal;     // n (x) n
    Mat2 tangential; // I - n (x) n
};

Projectors projectors_at(const Vec2& n);

/// One background element: an axis-aligned square of edge h with lower-left
/// corner `origin` before the rigid rotation by `theta` about the global
/// origin. The geometry map is rotation + translation + uniform scaling, so
/// Jacobians are constant.
struct ElementQuad {
    Vec2 origin{0.0, 0.0};
    double h = 1.0;
    double theta = 0.0;

    Mat2 rotation() const;
    Vec2 to_physical(const Vec2& ref) const;  // ref in [-1,1]^2
    Vec2 to_reference(const Vec2& phys) const;
    std::array<Vec2, 4> corners() const; // physical, CCW
    Vec2 center() const;
};

struct BoundarySegment {
    Vec2 a, b;
    Vec2 normal; // outward unit normal of the domain
    double length() const { return (b - a).norm(); }
    Vec2 midpoint() const { return 0.5 * (a + b); }
};

/// Physical-integration geometry of one element: triangles covering
/// T intersect Omega plus the boundary segments of Gamma inside T.
struct CutCell {
    int element_id = -1;
    std::vector<std::array<Vec2, 3>> tris;
    std::vector<BoundarySegment> boundary_segments;

    double area() const;
};

double triangle_area(const std::array<Vec2, 3>& t);
double polygon_area(const std::vector<Vec2>& poly);

/// Sutherland-Hodgman clip of a convex polygon against the domain.
std::vector<Vec2> clip_polygon(std::vector<Vec2> poly, const DomainPolygon& domain);

/// Clips one element against the domain and sub-triangulates the result.
/// Boundary segments are the clipped-polygon edges lying on domain edges,
/// so fitted elements whose edge coincides with Gamma also report them.
/// Throws DegenerateIntersection if the clipped polygon has < 3 vertices.
CutCell clip_element(const ElementQuad& element, const DomainPolygon& domain,
                     int element_id = -1);

} // namespace cutflow
