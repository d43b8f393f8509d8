#include "cutflow/mesh.hpp"

#include <algorithm>
#include <cmath>

namespace cutflow {

std::array<int, 4> BackgroundMesh::element_nodes(int e) const {
    const int n = n_per_side;
    const int i = e % n, j = e / n;
    const int s = n + 1;
    return {j * s + i, j * s + i + 1, (j + 1) * s + i + 1, (j + 1) * s + i};
}

ElementQuad BackgroundMesh::element_quad(int e) const {
    const int n = n_per_side;
    const int i = e % n, j = e / n;
    ElementQuad q;
    q.origin = Vec2(-half_extent + i * h, -half_extent + j * h);
    q.h = h;
    q.theta = rotation;
    return q;
}

BackgroundMesh build_background_mesh(int n_per_side, double half_extent, double rotation) {
    if (n_per_side < 1) throw std::invalid_argument("build_background_mesh: n_per_side < 1");
    if (half_extent <= 0.0) throw std::invalid_argument("build_background_mesh: half_extent <= 0");

    BackgroundMesh m;
    m.n_per_side = n_per_side;
    m.half_extent = half_extent;
    m.rotation = rotation;
    m.h = 2.0 * half_extent / n_per_side;

    const double c = std::cos(rotation), s = std::sin(rotation);
    m.nodes.reserve(m.n_nodes());
    for (int j = 0; j <= n_per_side; ++j) {
        for (int i = 0; i <= n_per_side; ++i) {
            const double x = -half_extent + i * m.h;
            const double y = -half_extent + j * m.h;
            m.nodes.emplace_back(c * x - s * y, s * x + c * y);
        }
    }
    return m;
}

namespace {

enum class Location { outside, inside, cut };

Location classify(const BackgroundMesh& mesh, const DomainPolygon& domain, int e) {
    constexpr double tol_rel = 1e-12;
    const ElementQuad quad = mesh.element_quad(e);
    const double full = quad.h * quad.h;
    double area = 0.0;
    try {
        area = clip_element(quad, domain, e).area();
    } catch (const DegenerateIntersection&) {
        return domain.contains(quad.center()) ? Location::inside : Location::outside;
    }
    if (area >= (1.0 - tol_rel) * full) return Location::inside;
    if (area > tol_rel * full) return Location::cut;
    return domain.contains(quad.center()) ? Location::inside : Location::outside;
}

} // namespace

ActiveMesh extract_active_mesh(const BackgroundMesh& mesh, const DomainPolygon& domain) {
    ActiveMesh am;
    am.parent = mesh;
    const int n = mesh.n_per_side;
    am.active_index.assign(mesh.n_elements(), -1);

    std::vector<Location> loc(mesh.n_elements());
    for (int e = 0; e < mesh.n_elements(); ++e) {
        loc[e] = classify(mesh, domain, e);
        if (loc[e] == Location::outside) continue;
        am.active_index[e] = static_cast<int>(am.active_elements.size());
        am.active_elements.push_back(e);
        am.element_cut.push_back(loc[e] == Location::cut);
        if (loc[e] == Location::cut) am.cut_elements.push_back(e);
    }
    if (am.active_elements.empty())
        throw EmptyActiveMesh("extract_active_mesh: no element intersects the domain");

    const double ctheta = std::cos(mesh.rotation), stheta = std::sin(mesh.rotation);
    const Vec2 nx(ctheta, stheta);   // rotated +x
    const Vec2 ny(-stheta, ctheta);  // rotated +y
    auto add_facet = [&](int e_left, int e_right, int na, int nb, int axis) {
        Facet f;
        f.node_a = na;
        f.node_b = nb;
        f.left = e_left;
        f.right = e_right;
        f.axis = axis;
        f.pa = mesh.nodes[na];
        f.pb = mesh.nodes[nb];
        f.normal = axis == 0 ? nx : ny;
        f.ghost = (loc[e_left] == Location::cut) || (loc[e_right] == Location::cut);
        if (f.ghost) am.ghost_facets.push_back(static_cast<int>(am.interior_facets.size()));
        am.interior_facets.push_back(f);
    };

    const int s = n + 1;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const int e = j * n + i;
            if (loc[e] == Location::outside) continue;
            if (i + 1 < n && loc[e + 1] != Location::outside)
                add_facet(e, e + 1, j * s + i + 1, (j + 1) * s + i + 1, 0);
            if (j + 1 < n && loc[e + n] != Location::outside)
                add_facet(e, e + n, (j + 1) * s + i, (j + 1) * s + i + 1, 1);
        }
    }

    std::vector<bool> node_seen(mesh.n_nodes(), false);
    for (int e : am.active_elements)
        for (int nid : mesh.element_nodes(e)) node_seen[nid] = true;
    for (int nid = 0; nid < mesh.n_nodes(); ++nid)
        if (node_seen[nid]) am.active_nodes.push_back(nid);

    return am;
}

std::vector<CutCell> build_cut_cells(const ActiveMesh& mesh, const DomainPolygon& domain) {
    std::vector<CutCell> cells;
    cells.reserve(mesh.active_elements.size());
    for (int e : mesh.active_elements) {
        const ElementQuad q = mesh.parent.element_quad(e);
        try {
            cells.push_back(clip_element(q, domain, e));
        } catch (const DegenerateIntersection&) {
            // Active by centroid sign with a grazing boundary: whole element.
            CutCell c;
            c.element_id = e;
            const auto cs = q.corners();
            c.tris.push_back({cs[0], cs[1], cs[2]});
            c.tris.push_back({cs[0], cs[2], cs[3]});
            cells.push_back(std::move(c));
        }
    }
    return cells;
}

} // namespace cutflow
