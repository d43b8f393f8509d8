#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_support.hpp"

#include "cutflow/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <set>

using namespace cutflow;

TEST_CASE("background mesh construction") {
    const auto m = build_background_mesh(8, 1.6, 0.25 * M_PI);
    CHECK(m.n_elements() == 64);
    CHECK(m.n_nodes() == 81);
    CHECK(m.h == doctest::Approx(0.4).epsilon(1e-15));

    const auto one = build_background_mesh(1, 1.0, 0.0);
    CHECK(one.n_elements() == 1);
    const auto corners = one.element_quad(0).corners();
    CHECK(corners[0].x() == doctest::Approx(-1.0));
    CHECK(corners[0].y() == doctest::Approx(-1.0));
    CHECK(corners[2].x() == doctest::Approx(1.0));
    CHECK(corners[2].y() == doctest::Approx(1.0));

    // node at (1.6, 1.6) rotated by pi/4 lands on (0, 1.6 sqrt(2))
    const auto m4 = build_background_mesh(4, 1.6, 0.25 * M_PI);
    const Vec2 top = m4.nodes[m4.n_nodes() - 1];
    CHECK(std::abs(top.x()) < 1e-14);
    CHECK(top.y() == doctest::Approx(1.6 * std::sqrt(2.0)).epsilon(1e-14));

    CHECK_THROWS(build_background_mesh(0, 1.0, 0.0));
    CHECK_THROWS(build_background_mesh(4, -1.0, 0.0));
}

TEST_CASE("axis-aligned classification, N=8") {
    const auto bg = build_background_mesh(8, 1.6, 0.0);
    const auto box = make_box(1.0);
    const auto mesh = extract_active_mesh(bg, box);

    // element [0.8,1.2] x [0,0.4]: i=6, j=4
    const int cut_id = 4 * 8 + 6;
    const int a = mesh.active_index[cut_id];
    REQUIRE(a >= 0);
    CHECK(mesh.element_cut[a]);

    // element [-0.4,0] x [0,0.4]: fully inside, active and uncut
    const int in_id = 4 * 8 + 3;
    const int b = mesh.active_index[in_id];
    REQUIRE(b >= 0);
    CHECK_FALSE(mesh.element_cut[b]);

    // element [1.2,1.6] x [0,0.4]: outside
    CHECK(mesh.active_index[4 * 8 + 7] == -1);
}

TEST_CASE("N=2 coarse grid: every element cut, all facets ghosts") {
    const auto bg = build_background_mesh(2, 1.6, 0.0);
    const auto mesh = extract_active_mesh(bg, make_box(1.0));
    CHECK(mesh.n_active() == 4);
    CHECK(mesh.cut_elements.size() == 4);
    CHECK(mesh.interior_facets.size() == 4);
    CHECK(mesh.ghost_facets.size() == 4);
}

TEST_CASE("facet sets: uniqueness, orientation and partition invariants") {
    const auto bg = build_background_mesh(8, 1.6, 0.25 * M_PI);
    const auto mesh = extract_active_mesh(bg, make_box(1.0));

    std::set<std::pair<int, int>> seen;
    for (const auto& f : mesh.interior_facets) {
        CHECK(f.left < f.right);
        CHECK(mesh.active_index[f.left] >= 0);
        CHECK(mesh.active_index[f.right] >= 0);
        CHECK(seen.insert({f.left, f.right}).second); // exactly once
        const Vec2 dl = mesh.parent.element_quad(f.right).center() -
                        mesh.parent.element_quad(f.left).center();
        CHECK(f.normal.dot(dl) > 0.0); // n_F points lower -> higher id
    }
    for (int gidx : mesh.ghost_facets) {
        const auto& f = mesh.interior_facets[gidx];
        const bool lcut = mesh.element_cut[mesh.active_index[f.left]];
        const bool rcut = mesh.element_cut[mesh.active_index[f.right]];
        CHECK((lcut || rcut));
    }

    // partition: active = inside + cut, disjoint by construction
    int n_cut = 0;
    for (bool c : mesh.element_cut) n_cut += c ? 1 : 0;
    CHECK(n_cut == static_cast<int>(mesh.cut_elements.size()));
}

TEST_CASE("ghost facet count matches a sampling classifier") {
    const auto bg = build_background_mesh(8, 1.6, 0.25 * M_PI);
    const auto box = make_box(1.0);
    const auto mesh = extract_active_mesh(bg, box);

    // independent classifier: dense lattice sampling of each element
    auto classify = [&](int e) {
        const ElementQuad q = bg.element_quad(e);
        int inside = 0, total = 0;
        for (int i = 0; i <= 40; ++i) {
            for (int j = 0; j <= 40; ++j) {
                const Vec2 ref(-1.0 + i * 0.05, -1.0 + j * 0.05);
                ++total;
                if (box.contains(q.to_physical(ref))) ++inside;
            }
        }
        if (inside == 0) return 0;     // outside
        if (inside == total) return 1; // inside
        return 2;                      // cut
    };

    std::vector<int> loc(bg.n_elements());
    for (int e = 0; e < bg.n_elements(); ++e) loc[e] = classify(e);

    int oracle_ghosts = 0;
    const int n = bg.n_per_side;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const int e = j * n + i;
            if (loc[e] == 0) continue;
            if (i + 1 < n && loc[e + 1] != 0 && (loc[e] == 2 || loc[e + 1] == 2)) ++oracle_ghosts;
            if (j + 1 < n && loc[e + n] != 0 && (loc[e] == 2 || loc[e + n] == 2)) ++oracle_ghosts;
        }
    }
    CHECK(static_cast<int>(mesh.ghost_facets.size()) == oracle_ghosts);
}

TEST_CASE("fitted configuration: theta=0, N=16 leaves no cut element") {
    const auto bg = build_background_mesh(16, 1.6, 0.0);
    const auto box = make_box(1.0);
    const auto mesh = extract_active_mesh(bg, box);
    CHECK(mesh.cut_elements.empty());
    CHECK(mesh.ghost_facets.empty());
    CHECK(mesh.n_active() == 100); // 10 x 10 elements cover [-1,1]^2

    // boundary segments still recovered on Gamma for Nitsche terms
    const auto cells = build_cut_cells(mesh, box);
    double perimeter = 0.0, area = 0.0;
    for (const auto& c : cells) {
        area += c.area();
        for (const auto& s : c.boundary_segments) perimeter += s.length();
    }
    CHECK(area == doctest::Approx(4.0).epsilon(1e-13));
    CHECK(perimeter == doctest::Approx(8.0).epsilon(1e-13));
}

TEST_CASE("global area and perimeter telescope for rotated meshes") {
    for (double theta : {0.0, 0.25 * M_PI, 0.1}) {
        for (int n : {8, 16, 32}) {
            const auto bg = build_background_mesh(n, 1.6, theta);
            const auto box = make_box(1.0);
            const auto mesh = extract_active_mesh(bg, box);
            const auto cells = build_cut_cells(mesh, box);
            double area = 0.0, perimeter = 0.0;
            for (const auto& c : cells) {
                area += c.area();
                for (const auto& s : c.boundary_segments) perimeter += s.length();
            }
            CHECK(std::abs(area - 4.0) < 1e-12);
            CHECK(std::abs(perimeter - 8.0) < 1e-12);
        }
    }
}

TEST_CASE("empty active mesh throws") {
    const auto bg = build_background_mesh(4, 1.0, 0.0);
    const auto far = make_domain({Vec2(10, 10), Vec2(12, 10), Vec2(12, 12), Vec2(10, 12)});
    CHECK_THROWS_AS(extract_active_mesh(bg, far), EmptyActiveMesh);
}
