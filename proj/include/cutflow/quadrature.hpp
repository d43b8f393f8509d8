#pragma once

#include "cutflow/common.hpp"
#include "cutflow/cut_geometry.hpp"

#include <vector>

namespace cutflow {

/// 1D Gauss-Legendre rule on [-1,1].
struct SegmentRule {
    std::vector<double> points;
    std::vector<double> weights;
};

/// Gauss rule on [-1,1] exact for polynomials of degree <= order.
/// The public contract supports order in [1,9]; throws UnsupportedOrder
/// otherwise. Internal consumers may use gauss_legendre(n) directly.
SegmentRule gauss_segment(int order);

/// n-point Gauss-Legendre rule (n in [1,8]).
SegmentRule gauss_legendre(int n);

/// 2D rule carrying each point in physical coordinates together with its
/// pullback to the element reference square for basis evaluation.
struct VolumeRule {
    std::vector<Vec2> points_phys;
    std::vector<Vec2> points_ref;
    std::vector<double> weights; // physical measure
};

/// Rule over T intersect Omega assembled from the cut cell's triangles
/// (collapsed tensor rule per triangle). Exact for total degree <= order.
VolumeRule cut_volume_rule(const CutCell& cell, int order, const ElementQuad& element);

/// Tensor-Gauss rule over the whole (uncut) element.
VolumeRule tensor_volume_rule(const ElementQuad& element, int order);

/// Rule over a physical segment; weights sum to the segment length.
struct LineRule {
    std::vector<Vec2> points;
    std::vector<double> weights;
};

LineRule segment_rule(const Vec2& a, const Vec2& b, int order);

inline LineRule facet_rule(const Vec2& a, const Vec2& b, int order) {
    return segment_rule(a, b, order);
}

inline LineRule boundary_rule(const BoundarySegment& seg, int order) {
    return segment_rule(seg.a, seg.b, order);
}

/// Rule over the unit reference triangle (0,0)-(1,0)-(0,1), exact for
/// total degree <= order.
struct TriangleRule {
    std::vector<Vec2> points;
    std::vector<double> weights;
};

TriangleRule triangle_rule(int order);

} // namespace cutflow
