#pragma once

#include "cutflow/common.hpp"
#include "cutflow/cut_geometry.hpp"

#include <array>
#include <vector>

namespace cutflow {

/// Structured N x N grid of squares covering [-L, L]^2, rigidly rotated by
/// `rotation` about the origin. Node id = j * (N+1) + i, element id = j * N + i.
struct BackgroundMesh {
    int n_per_side = 0;
    double half_extent = 0.0;
    double rotation = 0.0;
    double h = 0.0;
    std::vector<Vec2> nodes; // physical coordinates

    int n_elements() const { return n_per_side * n_per_side; }
    int n_nodes() const { return (n_per_side + 1) * (n_per_side + 1); }
    std::array<int, 4> element_nodes(int e) const; // CCW corners
    ElementQuad element_quad(int e) const;
};

BackgroundMesh build_background_mesh(int n_per_side, double half_extent, double rotation);

/// Interior facet shared by exactly two active elements. Orientation is
/// fixed by lower element id -> higher element id.
struct Facet {
    int node_a = -1, node_b = -1; // background corner node ids
    int left = -1, right = -1;    // background element ids, left < right
    int axis = 0;                 // 0: pre-rotation normal +x, 1: +y
    Vec2 pa, pb;                  // physical endpoints
    Vec2 normal;                  // physical n_F (left -> right)
    bool ghost = false;           // member of F_Gamma
};

struct ActiveMesh {
    BackgroundMesh parent;
    std::vector<int> active_elements; // background ids, ascending (T_h)
    std::vector<bool> element_cut;    // per active element (T_Gamma membership)
    std::vector<int> cut_elements;    // background ids (T_Gamma)
    std::vector<int> active_index;    // background id -> active position, -1 outside
    std::vector<Facet> interior_facets; // F_i
    std::vector<int> ghost_facets;      // indices into interior_facets (F_Gamma)
    std::vector<int> active_nodes;      // background corner node ids, ascending

    int n_active() const { return static_cast<int>(active_elements.size()); }
};

/// Classifies elements against the domain. An element is cut when its
/// intersection area lies in (tol * h^2, (1 - tol) * h^2) with tol = 1e-12;
/// slivers outside that band are decided by the sign of the signed distance
/// at the element centroid. Throws EmptyActiveMesh when nothing intersects.
ActiveMesh extract_active_mesh(const BackgroundMesh& mesh, const DomainPolygon& domain);

/// Cut cells for every active element, aligned with mesh.active_elements.
/// Fully interior elements get the whole quad as two triangles; elements
/// whose clipped polygon has an edge on Gamma carry boundary segments even
/// when they are not classified as cut (fitted configuration).
std::vector<CutCell> build_cut_cells(const ActiveMesh& mesh, const DomainPolygon& domain);

} // namespace cutflow
