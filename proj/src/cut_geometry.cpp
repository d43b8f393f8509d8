#include "cutflow/cut_geometry.hpp"

#include <algorithm>
#include <cmath>

namespace cutflow {

namespace {

Vec2 outward_normal(const Vec2& a, const Vec2& b) {
    // CCW polygon: outward normal of edge a->b is the tangent rotated by -90 deg.
    const Vec2 t = (b - a).normalized();
    return Vec2(t.y(), -t.x());
}

} // namespace

double DomainPolygon::signed_distance(const Vec2& p) const {
    double d = -kInf;
    for (const auto& e : edges) d = std::max(d, e.normal.dot(p - e.a));
    return d;
}

double DomainPolygon::area() const { return polygon_area(vertices); }

double DomainPolygon::perimeter() const {
    double s = 0.0;
    for (const auto& e : edges) s += (e.b - e.a).norm();
    return s;
}

DomainPolygon make_domain(std::vector<Vec2> ccw_vertices) {
    const std::size_t n = ccw_vertices.size();
    if (n < 3) throw std::invalid_argument("domain polygon needs >= 3 vertices");
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a = ccw_vertices[i];
        const Vec2& b = ccw_vertices[(i + 1) % n];
        const Vec2& c = ccw_vertices[(i + 2) % n];
        const double cross = (b.x() - a.x()) * (c.y() - b.y()) - (b.y() - a.y()) * (c.x() - b.x());
        if (cross <= 0.0)
            throw std::invalid_argument("domain polygon must be convex and counter-clockwise");
    }
    DomainPolygon d;
    d.vertices = std::move(ccw_vertices);
    d.edges.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a = d.vertices[i];
        const Vec2& b = d.vertices[(i + 1) % n];
        d.edges.push_back({a, b, outward_normal(a, b)});
    }
    return d;
}

DomainPolygon make_box(double half_width) {
    const double a = half_width;
    return make_domain({Vec2(-a, -a), Vec2(a, -a), Vec2(a, a), Vec2(-a, a)});
}

Projectors projectors_at(const Vec2& n) {
    if (std::abs(n.norm() - 1.0) > 1e-12)
        throw NonUnitNormal("projectors_at: |n| = " + std::to_string(n.norm()));
    Projectors p;
    p.normal = n * n.transpose();
    p.tangential = Mat2::Identity() - p.normal;
    return p;
}

Mat2 ElementQuad::rotation() const {
    const double c = std::cos(theta), s = std::sin(theta);
    Mat2 r;
    r << c, -s, s, c;
    return r;
}

Vec2 ElementQuad::to_physical(const Vec2& ref) const {
    const Vec2 prerot = origin + 0.5 * h * (ref + Vec2(1.0, 1.0));
    return rotation() * prerot;
}

Vec2 ElementQuad::to_reference(const Vec2& phys) const {
    const Vec2 prerot = rotation().transpose() * phys;
    return (2.0 / h) * (prerot - origin) - Vec2(1.0, 1.0);
}

std::array<Vec2, 4> ElementQuad::corners() const {
    const Mat2 r = rotation();
    return {r * origin, r * (origin + Vec2(h, 0.0)), r * (origin + Vec2(h, h)),
            r * (origin + Vec2(0.0, h))};
}

Vec2 ElementQuad::center() const { return rotation() * (origin + Vec2(0.5 * h, 0.5 * h)); }

double triangle_area(const std::array<Vec2, 3>& t) {
    const Vec2 u = t[1] - t[0], v = t[2] - t[0];
    return 0.5 * (u.x() * v.y() - u.y() * v.x());
}

double polygon_area(const std::vector<Vec2>& poly) {
    double s = 0.0;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[(i + 1) % n];
        s += a.x() * b.y() - a.y() * b.x();
    }
    return 0.5 * s;
}

double CutCell::area() const {
    double s = 0.0;
    for (const auto& t : tris) s += triangle_area(t);
    return s;
}

std::vector<Vec2> clip_polygon(std::vector<Vec2> poly, const DomainPolygon& domain) {
    for (const auto& edge : domain.edges) {
        if (poly.empty()) break;
        std::vector<Vec2> out;
        out.reserve(poly.size() + 2);
        const std::size_t n = poly.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Vec2& cur = poly[i];
            const Vec2& nxt = poly[(i + 1) % n];
            const double dc = edge.normal.dot(cur - edge.a);
            const double dn = edge.normal.dot(nxt - edge.a);
            if (dc <= 0.0) {
                out.push_back(cur);
                if (dn > 0.0) out.push_back(cur + (dc / (dc - dn)) * (nxt - cur));
            } else if (dn <= 0.0) {
                out.push_back(cur + (dc / (dc - dn)) * (nxt - cur));
            }
        }
        poly = std::move(out);
    }
    return poly;
}

namespace {

std::vector<Vec2> dedup_closed(const std::vector<Vec2>& poly, double tol) {
    std::vector<Vec2> out;
    for (const auto& p : poly) {
        if (out.empty() || (p - out.back()).norm() > tol) out.push_back(p);
    }
    while (out.size() > 1 && (out.front() - out.back()).norm() <= tol) out.pop_back();
    return out;
}

} // namespace

CutCell clip_element(const ElementQuad& element, const DomainPolygon& domain, int element_id) {
    const auto cs = element.corners();
    std::vector<Vec2> poly(cs.begin(), cs.end());
    poly = clip_polygon(std::move(poly), domain);
    poly = dedup_closed(poly, 1e-14 * element.h);
    if (poly.size() < 3)
        throw DegenerateIntersection("clip_element: intersection collapsed to " +
                                     std::to_string(poly.size()) + " vertices");

    CutCell cell;
    cell.element_id = element_id;
    cell.tris.reserve(poly.size() - 2);
    for (std::size_t i = 1; i + 1 < poly.size(); ++i)
        cell.tris.push_back({poly[0], poly[i], poly[i + 1]});

    // Recover the pieces of Gamma: clipped-polygon edges lying on a domain edge.
    const double on_tol = 1e-12 * element.h;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[(i + 1) % n];
        for (const auto& edge : domain.edges) {
            if (std::abs(edge.normal.dot(a - edge.a)) < on_tol &&
                std::abs(edge.normal.dot(b - edge.a)) < on_tol) {
                cell.boundary_segments.push_back({a, b, edge.normal});
                break;
            }
        }
    }
    return cell;
}

} // namespace cutflow
