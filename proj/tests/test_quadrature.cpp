#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_support.hpp"

#include "cutflow/quadrature.hpp"

#include <cmath>

using namespace cutflow;

namespace {

// integral of x^p over [-1,1]
double segment_monomial(int p) { return p % 2 == 1 ? 0.0 : 2.0 / (p + 1); }

// integral of x^a y^b over the unit reference triangle: a! b! / (a+b+2)!
double triangle_monomial(int a, int b) {
    double v = 1.0;
    for (int i = 1; i <= a; ++i) v *= i;
    for (int i = 1; i <= b; ++i) v *= i;
    for (int i = 1; i <= a + b + 2; ++i) v /= i;
    return v;
}

} // namespace

TEST_CASE("gauss segment textbook values") {
    const auto r = gauss_segment(3);
    REQUIRE(r.points.size() == 2);
    CHECK(r.points[0] == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-15));
    CHECK(r.points[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
    CHECK(r.weights[0] == doctest::Approx(1.0));
    CHECK(r.weights[1] == doctest::Approx(1.0));

    double i2 = 0.0;
    for (std::size_t q = 0; q < r.points.size(); ++q)
        i2 += r.weights[q] * r.points[q] * r.points[q];
    CHECK(i2 == doctest::Approx(2.0 / 3.0).epsilon(1e-14));

    const auto r7 = gauss_segment(7);
    double i6 = 0.0;
    for (std::size_t q = 0; q < r7.points.size(); ++q)
        i6 += r7.weights[q] * std::pow(r7.points[q], 6);
    CHECK(i6 == doctest::Approx(2.0 / 7.0).epsilon(1e-13));
}

TEST_CASE("gauss segment declared-order exactness and positivity") {
    for (int order = 1; order <= 9; ++order) {
        const auto r = gauss_segment(order);
        double wsum = 0.0;
        for (double w : r.weights) {
            CHECK(w > 0.0);
            wsum += w;
        }
        CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
        for (int p = 0; p <= order; ++p) {
            double v = 0.0;
            for (std::size_t q = 0; q < r.points.size(); ++q)
                v += r.weights[q] * std::pow(r.points[q], p);
            CHECK(v == doctest::Approx(segment_monomial(p)).epsilon(1e-12));
        }
    }
    CHECK_THROWS_AS(gauss_segment(0), UnsupportedOrder);
    CHECK_THROWS_AS(gauss_segment(10), UnsupportedOrder);
}

TEST_CASE("triangle rule exactness on monomials") {
    for (int order = 1; order <= 8; ++order) {
        const auto r = triangle_rule(order);
        for (double w : r.weights) CHECK(w > 0.0);
        for (int a = 0; a + 0 <= order; ++a) {
            for (int b = 0; a + b <= order; ++b) {
                double v = 0.0;
                for (std::size_t q = 0; q < r.points.size(); ++q)
                    v += r.weights[q] * std::pow(r.points[q].x(), a) *
                         std::pow(r.points[q].y(), b);
                const double exact = triangle_monomial(a, b);
                CHECK(v == doctest::Approx(exact).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("cut volume rule on a clipped rectangle") {
    ElementQuad e{Vec2(0.8, 0.0), 0.4, 0.0};
    const CutCell cell = clip_element(e, make_box(1.0));
    const VolumeRule rule = cut_volume_rule(cell, 4, e);
    double area = 0.0;
    for (double w : rule.weights) area += w;
    CHECK(area == doctest::Approx(0.08).epsilon(1e-13));
    // reference pullback stays inside the element square
    for (const auto& p : rule.points_ref) {
        CHECK(p.x() >= -1.0 - 1e-12);
        CHECK(p.x() <= 1.0 + 1e-12);
        CHECK(p.y() >= -1.0 - 1e-12);
        CHECK(p.y() <= 1.0 + 1e-12);
    }
}

TEST_CASE("integral of x*y over the unit square cut by x+y<=1") {
    ElementQuad e{Vec2(0.0, 0.0), 1.0, 0.0};
    const auto tri_domain =
        make_domain({Vec2(0.0, 0.0), Vec2(1.0, 0.0), Vec2(0.0, 1.0)});
    const CutCell cell = clip_element(e, tri_domain);
    const VolumeRule rule = cut_volume_rule(cell, 4, e);
    double v = 0.0;
    for (std::size_t q = 0; q < rule.weights.size(); ++q)
        v += rule.weights[q] * rule.points_phys[q].x() * rule.points_phys[q].y();
    CHECK(v == doctest::Approx(1.0 / 24.0).epsilon(1e-13));
}

TEST_CASE("cut rule on an uncut element agrees with the tensor rule") {
    ElementQuad e{Vec2(-0.3, 0.1), 0.4, 0.3};
    const CutCell cell = clip_element(e, make_box(5.0));
    const VolumeRule cut = cut_volume_rule(cell, 5, e);
    const VolumeRule tens = tensor_volume_rule(e, 5);
    auto integrate = [](const VolumeRule& r, auto&& f) {
        double v = 0.0;
        for (std::size_t q = 0; q < r.weights.size(); ++q) v += r.weights[q] * f(r.points_phys[q]);
        return v;
    };
    for (int a = 0; a <= 2; ++a) {
        for (int b = 0; a + b <= 4; ++b) {
            auto f = [&](const Vec2& p) { return std::pow(p.x(), a) * std::pow(p.y(), b); };
            CHECK(integrate(cut, f) == doctest::Approx(integrate(tens, f)).epsilon(1e-13));
        }
    }
}

TEST_CASE("random-polynomial exactness property") {
    // 100 random quartics on random rotated elements
    for (int trial = 0; trial < 100; ++trial) {
        double coef[15];
        for (double& c : coef) c = test::uniform(-1.0, 1.0);
        auto poly = [&](const Vec2& p) {
            double v = 0.0;
            int idx = 0;
            for (int a = 0; a <= 4; ++a)
                for (int b = 0; a + b <= 4; ++b) v += coef[idx++] * std::pow(p.x(), a) * std::pow(p.y(), b);
            return v;
        };
        ElementQuad e{Vec2(test::uniform(-1, 1), test::uniform(-1, 1)),
                      test::uniform(0.1, 0.9), test::uniform(0.0, 1.5)};
        const CutCell cell = clip_element(e, make_box(4.0));
        const VolumeRule r4 = cut_volume_rule(cell, 4, e);
        const VolumeRule r8 = cut_volume_rule(cell, 8, e);
        double v4 = 0.0, v8 = 0.0;
        for (std::size_t q = 0; q < r4.weights.size(); ++q) v4 += r4.weights[q] * poly(r4.points_phys[q]);
        for (std::size_t q = 0; q < r8.weights.size(); ++q) v8 += r8.weights[q] * poly(r8.points_phys[q]);
        CHECK(v4 == doctest::Approx(v8).epsilon(1e-12));
    }
}

TEST_CASE("boundary segment rules") {
    const BoundarySegment seg{Vec2(1.0, 0.0), Vec2(1.0, 0.4), Vec2(1.0, 0.0)};
    auto integrate = [&](int order, auto&& f) {
        const LineRule r = boundary_rule(seg, order);
        double v = 0.0;
        for (std::size_t q = 0; q < r.points.size(); ++q) v += r.weights[q] * f(r.points[q]);
        return v;
    };
    CHECK(integrate(2, [](const Vec2&) { return 1.0; }) == doctest::Approx(0.4).epsilon(1e-14));
    CHECK(integrate(2, [](const Vec2& p) { return p.y(); }) == doctest::Approx(0.08).epsilon(1e-14));
    const double y4 = std::pow(0.4, 4) / 4.0;
    CHECK(integrate(3, [](const Vec2& p) { return p.y() * p.y() * p.y(); }) ==
          doctest::Approx(y4).epsilon(1e-13));
}
