#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_support.hpp"

#include "cutflow/fem_basis.hpp"

#include <cmath>

using namespace cutflow;

namespace {

// canonical element: physical == reference
const ElementQuad kCanon{Vec2(-1.0, -1.0), 2.0, 0.0};

} // namespace

TEST_CASE("Q1 Lagrange property and partition of unity") {
    const ShapeEval corner = shape_eval(1, Vec2(-1.0, -1.0), kCanon);
    CHECK(corner.value[0] == doctest::Approx(1.0));
    for (int l = 1; l < 4; ++l) CHECK(corner.value[l] == doctest::Approx(0.0));

    const ShapeEval se = shape_eval(1, Vec2(0.3, -0.7), kCanon);
    double sum = 0.0;
    Vec2 gsum = Vec2::Zero();
    for (int l = 0; l < 4; ++l) {
        sum += se.value[l];
        gsum += se.grad[l];
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(gsum.norm() < 1e-12);
}

TEST_CASE("partition of unity holds for Q2 on rotated elements") {
    const ElementQuad e{Vec2(0.3, -0.2), 0.4, 0.7};
    for (int trial = 0; trial < 50; ++trial) {
        const Vec2 ref(test::uniform(-1, 1), test::uniform(-1, 1));
        const ShapeEval se = shape_eval(2, ref, e);
        double sum = 0.0;
        Vec2 gsum = Vec2::Zero();
        Eigen::Vector3d hsum = Eigen::Vector3d::Zero();
        for (int l = 0; l < 9; ++l) {
            sum += se.value[l];
            gsum += se.grad[l];
            hsum += se.hess[l];
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(gsum.norm() < 1e-12);
        CHECK(hsum.norm() < 1e-11);
    }
}

TEST_CASE("Q2 derivatives against central finite differences") {
    const ElementQuad e{Vec2(0.1, 0.2), 0.5, 0.6};
    const double delta = 1e-5;
    const Vec2 ref(0.37, -0.21);
    const ShapeEval se = shape_eval(2, ref, e);
    const Vec2 x0 = e.to_physical(ref);

    auto value_at = [&](int l, const Vec2& phys) {
        return shape_eval(2, e.to_reference(phys), e).value[l];
    };
    for (int l = 0; l < 9; ++l) {
        for (int d = 0; d < 2; ++d) {
            Vec2 dp = Vec2::Zero();
            dp[d] = delta;
            const double fd = (value_at(l, x0 + dp) - value_at(l, x0 - dp)) / (2 * delta);
            CHECK(se.grad[l][d] == doctest::Approx(fd).epsilon(1e-8));
        }
        const Vec2 dx(delta, 0.0), dy(0.0, delta);
        const double fxx =
            (value_at(l, x0 + dx) - 2 * value_at(l, x0) + value_at(l, x0 - dx)) / (delta * delta);
        const double fyy =
            (value_at(l, x0 + dy) - 2 * value_at(l, x0) + value_at(l, x0 - dy)) / (delta * delta);
        const double fxy = (value_at(l, x0 + dx + dy) - value_at(l, x0 + dx - dy) -
                            value_at(l, x0 - dx + dy) + value_at(l, x0 - dx - dy)) /
                           (4 * delta * delta);
        CHECK(se.hess[l][0] == doctest::Approx(fxx).epsilon(1e-6));
        CHECK(se.hess[l][1] == doctest::Approx(fxy).epsilon(1e-6));
        CHECK(se.hess[l][2] == doctest::Approx(fyy).epsilon(1e-6));
    }
}

TEST_CASE("interpolation reproduces degree-k polynomials") {
    for (int k : {1, 2}) {
        const auto s = test::make_box_setup(4, 0.25 * M_PI, k);
        auto poly = [&](const Vec2& p) {
            double v = 1.3;
            v += 0.7 * p.x() - 0.2 * p.y();
            if (k == 2) v += 0.5 * p.x() * p.x() - 0.3 * p.x() * p.y() + 0.9 * p.y() * p.y();
            return v;
        };
        const Eigen::VectorXd coeffs = interpolate_scalar(s.space, poly);
        for (int trial = 0; trial < 50; ++trial) {
            const int a = static_cast<int>(test::uniform(0.0, s.mesh.n_active() - 1e-9));
            const int e = s.mesh.active_elements[a];
            const ElementQuad quad = s.bg.element_quad(e);
            const Vec2 ref(test::uniform(-1, 1), test::uniform(-1, 1));
            const ShapeEval se = shape_eval(k, ref, quad);
            int sc[9];
            s.space.element_scalars(e, sc);
            double v = 0.0;
            for (int l = 0; l < s.space.n_local(); ++l) v += coeffs[sc[l]] * se.value[l];
            CHECK(v == doctest::Approx(poly(quad.to_physical(ref))).epsilon(1e-12));
        }
    }
}

TEST_CASE("facet dof map symmetry: both sides enumerate the shared edge dofs") {
    for (int k : {1, 2}) {
        const auto s = test::make_box_setup(4, 0.1, k);
        for (const auto& facet : s.mesh.interior_facets) {
            const FacetTrace tr = make_facet_trace(s.mesh, s.space, facet);
            for (int b = 0; b <= k; ++b) {
                int l_left, l_right;
                if (facet.axis == 0) {
                    l_left = b * (k + 1) + k; // edge xi = +1 of the left element
                    l_right = b * (k + 1);    // edge xi = -1 of the right element
                } else {
                    l_left = k * (k + 1) + b; // edge eta = +1
                    l_right = b;              // edge eta = -1
                }
                CHECK(tr.scalars[0][l_left] == tr.scalars[1][l_right]);
            }
        }
    }
}

TEST_CASE("jumps of global polynomial fields vanish for all j <= k") {
    for (int k : {1, 2}) {
        const auto s = test::make_box_setup(4, 0.25 * M_PI, k);
        auto poly = [&](const Vec2& p) {
            double v = 0.4 - 1.1 * p.x() + 0.6 * p.y();
            if (k == 2) v += 0.8 * p.x() * p.x() + 0.3 * p.x() * p.y() - 0.5 * p.y() * p.y();
            return v;
        };
        const Eigen::VectorXd coeffs = interpolate_scalar(s.space, poly);
        for (const auto& facet : s.mesh.interior_facets) {
            const FacetTrace tr = make_facet_trace(s.mesh, s.space, facet);
            for (int j = 0; j <= k; ++j) {
                for (double t : {-0.9, -0.3, 0.2, 0.77}) {
                    const double jmp = normal_derivative_jump(tr, s.space, coeffs, j, t);
                    CHECK(std::abs(jmp) < 1e-11);
                }
            }
        }
    }
}

TEST_CASE("Q1 hat jump across a facet equals 2/h times the edge shape value") {
    const auto bg = build_background_mesh(2, 1.0, 0.0); // h = 1
    const auto mesh = extract_active_mesh(bg, make_box(5.0));
    const auto space = make_space(mesh, 1);

    // vertical facet between elements 0 and 1; hat at its lower endpoint
    const Facet* facet = nullptr;
    for (const auto& f : mesh.interior_facets)
        if (f.left == 0 && f.right == 1) facet = &f;
    REQUIRE(facet != nullptr);
    const FacetTrace tr = make_facet_trace(mesh, space, *facet);

    Eigen::VectorXd hat = Eigen::VectorXd::Zero(space.n_scalar_dofs);
    hat[tr.scalars[0][1]] = 1.0; // local (a,b) = (1,0) of the left element

    const double h = bg.h;
    for (double t : {-0.6, 0.0, 0.5}) {
        const double edge_shape = 0.5 * (1.0 - t);
        const double jmp = normal_derivative_jump(tr, space, hat, 1, t);
        CHECK(jmp == doctest::Approx(2.0 / h * edge_shape).epsilon(1e-12));
        CHECK(normal_derivative_jump(tr, space, hat, 0, t) == doctest::Approx(0.0));
    }
    CHECK_THROWS_AS(normal_derivative_jump(tr, space, hat, 2, 0.0), OrderTooHigh);
}

TEST_CASE("space dimensions and dof positions") {
    const auto s1 = test::make_box_setup(8, 0.0, 1);
    // k=1: scalar dofs = active corner nodes
    CHECK(s1.space.n_scalar_dofs == static_cast<int>(s1.mesh.active_nodes.size()));
    CHECK(s1.space.total_dofs() == 3 * s1.space.n_scalar_dofs + 1);

    const auto s2 = test::make_box_setup(4, 0.3, 2);
    CHECK(s2.space.lattice_m == 9);
    // lattice positions coincide with mesh nodes at the corners
    for (int nid : s2.mesh.active_nodes) {
        const int i = nid % 5, j = nid / 5;
        const int lat = (2 * j) * 9 + 2 * i;
        CHECK((s2.space.dof_position(lat) - s2.bg.nodes[nid]).norm() < 1e-13);
    }
}
