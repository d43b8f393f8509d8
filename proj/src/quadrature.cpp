#include "cutflow/quadrature.hpp"

#include <cmath>

namespace cutflow {

SegmentRule gauss_legendre(int n) {
    SegmentRule r;
    switch (n) {
    case 1:
        r.points = {0.0};
        r.weights = {2.0};
        break;
    case 2:
        r.points = {-0.5773502691896257645091488, 0.5773502691896257645091488};
        r.weights = {1.0, 1.0};
        break;
    case 3:
        r.points = {-0.7745966692414833770358531, 0.0, 0.7745966692414833770358531};
        r.weights = {0.5555555555555555555555556, 0.8888888888888888888888889,
                     0.5555555555555555555555556};
        break;
    case 4:
        r.points = {-0.8611363115940525752239465, -0.3399810435848562648026658,
                    0.3399810435848562648026658, 0.8611363115940525752239465};
        r.weights = {0.3478548451374538573730639, 0.6521451548625461426269361,
                     0.6521451548625461426269361, 0.3478548451374538573730639};
        break;
    case 5:
        r.points = {-0.9061798459386639927976269, -0.5384693101056830910363144, 0.0,
                    0.5384693101056830910363144, 0.9061798459386639927976269};
        r.weights = {0.2369268850561890875142640, 0.4786286704993664680412915,
                     0.5688888888888888888888889, 0.4786286704993664680412915,
                     0.2369268850561890875142640};
        break;
    case 6:
        r.points = {-0.9324695142031520278123016, -0.6612093864662645136613996,
                    -0.2386191860831969086305017, 0.2386191860831969086305017,
                    0.6612093864662645136613996, 0.9324695142031520278123016};
        r.weights = {0.1713244923791703450402961, 0.3607615730481386075698335,
                     0.4679139345726910473898703, 0.4679139345726910473898703,
                     0.3607615730481386075698335, 0.1713244923791703450402961};
        break;
    case 7:
        r.points = {-0.9491079123427585245261897, -0.7415311855993944398638648,
                    -0.4058451513773971669066064, 0.0,
                    0.4058451513773971669066064, 0.7415311855993944398638648,
                    0.9491079123427585245261897};
        r.weights = {0.1294849661688696932706114, 0.2797053914892766679014678,
                     0.3818300505051189449503698, 0.4179591836734693877551020,
                     0.3818300505051189449503698, 0.2797053914892766679014678,
                     0.1294849661688696932706114};
        break;
    case 8:
        r.points = {-0.9602898564975362316835609, -0.7966664774136267395915539,
                    -0.5255324099163289858177390, -0.1834346424956498049394761,
                    0.1834346424956498049394761, 0.5255324099163289858177390,
                    0.7966664774136267395915539, 0.9602898564975362316835609};
        r.weights = {0.1012285362903762591525314, 0.2223810344533744705443560,
                     0.3137066458778872873379622, 0.3626837833783619829651504,
                     0.3626837833783619829651504, 0.3137066458778872873379622,
                     0.2223810344533744705443560, 0.1012285362903762591525314};
        break;
    default:
        throw UnsupportedOrder("gauss_legendre: n = " + std::to_string(n));
    }
    return r;
}

namespace {

// Smallest point count whose 1D Gauss rule is exact for the given degree.
int points_for_degree(int degree) {
    int n = degree / 2 + 1;
    return n < 1 ? 1 : n;
}

} // namespace

SegmentRule gauss_segment(int order) {
    if (order < 1 || order > 9)
        throw UnsupportedOrder("gauss_segment: order = " + std::to_string(order));
    return gauss_legendre(points_for_degree(order));
}

TriangleRule triangle_rule(int order) {
    // Collapsed (Duffy) tensor rule: x = s, y = t (1 - s) with Jacobian (1 - s).
    // A total-degree-q monomial becomes degree q+1 in s and q in t.
    const SegmentRule rs = gauss_legendre(points_for_degree(order + 1));
    const SegmentRule rt = gauss_legendre(points_for_degree(order));
    TriangleRule r;
    r.points.reserve(rs.points.size() * rt.points.size());
    r.weights.reserve(r.points.capacity());
    for (std::size_t i = 0; i < rs.points.size(); ++i) {
        const double s = 0.5 * (rs.points[i] + 1.0);
        const double ws = 0.5 * rs.weights[i];
        for (std::size_t j = 0; j < rt.points.size(); ++j) {
            const double t = 0.5 * (rt.points[j] + 1.0);
            const double wt = 0.5 * rt.weights[j];
            r.points.emplace_back(s, t * (1.0 - s));
            r.weights.push_back(ws * wt * (1.0 - s));
        }
    }
    return r;
}

VolumeRule cut_volume_rule(const CutCell& cell, int order, const ElementQuad& element) {
    const TriangleRule tri = triangle_rule(order);
    VolumeRule r;
    r.points_phys.reserve(tri.points.size() * cell.tris.size());
    r.points_ref.reserve(r.points_phys.capacity());
    r.weights.reserve(r.points_phys.capacity());
    for (const auto& t : cell.tris) {
        const Vec2 e1 = t[1] - t[0];
        const Vec2 e2 = t[2] - t[0];
        const double jac = e1.x() * e2.y() - e1.y() * e2.x(); // 2 * area
        for (std::size_t q = 0; q < tri.points.size(); ++q) {
            const Vec2 p = t[0] + tri.points[q].x() * e1 + tri.points[q].y() * e2;
            r.points_phys.push_back(p);
            r.points_ref.push_back(element.to_reference(p));
            r.weights.push_back(tri.weights[q] * jac);
        }
    }
    return r;
}

VolumeRule tensor_volume_rule(const ElementQuad& element, int order) {
    const SegmentRule g = gauss_legendre(points_for_degree(order));
    const double scale = 0.25 * element.h * element.h;
    VolumeRule r;
    for (std::size_t i = 0; i < g.points.size(); ++i) {
        for (std::size_t j = 0; j < g.points.size(); ++j) {
            const Vec2 ref(g.points[i], g.points[j]);
            r.points_ref.push_back(ref);
            r.points_phys.push_back(element.to_physical(ref));
            r.weights.push_back(g.weights[i] * g.weights[j] * scale);
        }
    }
    return r;
}

LineRule segment_rule(const Vec2& a, const Vec2& b, int order) {
    const SegmentRule g = gauss_legendre(points_for_degree(order));
    const double half_len = 0.5 * (b - a).norm();
    LineRule r;
    r.points.reserve(g.points.size());
    r.weights.reserve(g.points.size());
    for (std::size_t i = 0; i < g.points.size(); ++i) {
        const double t = 0.5 * (g.points[i] + 1.0);
        r.points.push_back(a + t * (b - a));
        r.weights.push_back(g.weights[i] * half_len);
    }
    return r;
}

} // namespace cutflow
