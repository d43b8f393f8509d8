#include "cutflow/verification.hpp"

#include "cutflow/quadrature.hpp"

#include <cmath>

namespace cutflow {

ExactSolution exact_fields(double nu, double sigma) {
    auto u = [](const Vec2& xy) {
        const double x = xy.x(), y = xy.y();
        return Vec2(0.75 * y * y * y * (1.0 - x * x * x * x) + 1.25 * y * (1.0 - x * x),
                    -0.75 * x * x * x * (1.0 - y * y * y * y) - 1.25 * x * (1.0 - y * y));
    };
    auto grad_u = [](const Vec2& xy) {
        const double x = xy.x(), y = xy.y();
        Mat2 g;
        g(0, 0) = -3.0 * x * x * x * y * y * y - 2.5 * x * y;
        g(0, 1) = 2.25 * y * y * (1.0 - x * x * x * x) + 1.25 * (1.0 - x * x);
        g(1, 0) = -2.25 * x * x * (1.0 - y * y * y * y) - 1.25 * (1.0 - y * y);
        g(1, 1) = 3.0 * x * x * x * y * y * y + 2.5 * x * y;
        return g;
    };
    // p = (3x + (3x)^3/3! + (3x)^5/5!) (1 + (3y)^2/2! + (3y)^4/4! + (3y)^6/6!)
    auto p1 = [](double x) { return 3.0 * x + 4.5 * x * x * x + 2.025 * x * x * x * x * x; };
    auto dp1 = [](double x) { return 3.0 + 13.5 * x * x + 10.125 * x * x * x * x; };
    auto p2 = [](double y) {
        const double y2 = y * y;
        return 1.0 + 4.5 * y2 + 3.375 * y2 * y2 + 1.0125 * y2 * y2 * y2;
    };
    auto dp2 = [](double y) {
        const double y2 = y * y;
        return 9.0 * y + 13.5 * y * y2 + 6.075 * y * y2 * y2;
    };
    auto p = [=](const Vec2& xy) { return p1(xy.x()) * p2(xy.y()); };
    auto grad_p = [=](const Vec2& xy) {
        return Vec2(dp1(xy.x()) * p2(xy.y()), p1(xy.x()) * dp2(xy.y()));
    };
    auto lap_u = [](const Vec2& xy) {
        const double x = xy.x(), y = xy.y();
        return Vec2(-9.0 * x * x * y * y * y + 2.0 * y - 4.5 * x * x * x * x * y,
                    9.0 * x * x * x * y * y - 2.0 * x + 4.5 * x * y * y * y * y);
    };

    ExactSolution ex;
    ex.u = u;
    ex.grad_u = grad_u;
    ex.p = p;
    ex.grad_p = grad_p;
    // f = sigma u + (u.grad) u - nu lap(u) + grad p  (div u = 0)
    ex.f = [=](const Vec2& xy) {
        const Vec2 uv = u(xy);
        const Mat2 g = grad_u(xy);
        const Vec2 conv(g.row(0).dot(uv), g.row(1).dot(uv));
        return Vec2(sigma * uv + conv - nu * lap_u(xy) + grad_p(xy));
    };
    ex.g = u;
    ex.h_traction = [=](const Vec2& xy, const Vec2& n) {
        const Mat2 g = grad_u(xy);
        return Vec2(nu * (g + g.transpose()) * n);
    };
    return ex;
}

void apply_exact_data(OseenConfig& config, const ExactSolution& exact) {
    config.beta = exact.u;
    config.body_force = exact.f;
    config.g_dirichlet = exact.g;
    config.h_traction = exact.h_traction;
}

ErrorReport compute_errors(const Eigen::VectorXd& solution, const ExactSolution& exact,
                           const ActiveMesh& mesh, const std::vector<CutCell>& cells,
                           const FunctionSpace& space) {
    const int k = space.order;
    const int order = 2 * k + 6;
    ErrorReport rep;
    rep.dofs = space.total_dofs();
    rep.h = mesh.parent.h;

    double u2 = 0.0, gu2 = 0.0, p2 = 0.0;
    double u2g = 0.0, gu2g = 0.0, p2g = 0.0;

    for (int a = 0; a < mesh.n_active(); ++a) {
        const int e = mesh.active_elements[a];
        const ElementQuad quad = mesh.parent.element_quad(e);

        const VolumeRule rule = cut_volume_rule(cells[a], order, quad);
        for (std::size_t q = 0; q < rule.weights.size(); ++q) {
            const double w = rule.weights[q];
            const Vec2 x = rule.points_phys[q];
            const FieldEval fe = eval_solution(space, e, quad, rule.points_ref[q], solution);
            u2 += w * (fe.u - exact.u(x)).squaredNorm();
            gu2 += w * (fe.grad_u - exact.grad_u(x)).squaredNorm();
            const double dp = fe.p - exact.p(x);
            p2 += w * dp * dp;
        }

        for (const BoundarySegment& seg : cells[a].boundary_segments) {
            const LineRule rule_b = boundary_rule(seg, order);
            for (std::size_t q = 0; q < rule_b.points.size(); ++q) {
                const double w = rule_b.weights[q];
                const Vec2 x = rule_b.points[q];
                const FieldEval fe = eval_solution(space, e, quad, quad.to_reference(x), solution);
                u2g += w * (fe.u - exact.u(x)).squaredNorm();
                gu2g += w * (fe.grad_u - exact.grad_u(x)).squaredNorm();
                const double dp = fe.p - exact.p(x);
                p2g += w * dp * dp;
            }
        }
    }

    rep.l2_u_bulk = std::sqrt(u2);
    rep.l2_gradu_bulk = std::sqrt(gu2);
    rep.l2_p_bulk = std::sqrt(p2);
    rep.l2_u_gamma = std::sqrt(u2g);
    rep.l2_gradu_gamma = std::sqrt(gu2g);
    rep.l2_p_gamma = std::sqrt(p2g);
    return rep;
}

std::pair<double, double> pressure_stats(const Eigen::VectorXd& solution, const ActiveMesh& mesh,
                                         const std::vector<CutCell>& cells,
                                         const FunctionSpace& space) {
    double integral = 0.0, norm2 = 0.0;
    for (int a = 0; a < mesh.n_active(); ++a) {
        const int e = mesh.active_elements[a];
        const ElementQuad quad = mesh.parent.element_quad(e);
        const VolumeRule rule = cut_volume_rule(cells[a], 2 * space.order + 2, quad);
        for (std::size_t q = 0; q < rule.weights.size(); ++q) {
            const FieldEval fe = eval_solution(space, e, quad, rule.points_ref[q], solution);
            integral += rule.weights[q] * fe.p;
            norm2 += rule.weights[q] * fe.p * fe.p;
        }
    }
    return {integral, std::sqrt(norm2)};
}

std::vector<double> convergence_rates(const std::vector<std::pair<double, double>>& series) {
    if (series.size() < 2)
        throw std::invalid_argument("convergence_rates: need at least two entries");
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (series[i].second <= 0.0)
            throw NonPositiveError("convergence_rates: error values must be positive");
        if (i > 0 && series[i].first >= series[i - 1].first)
            throw std::invalid_argument("convergence_rates: h must be strictly decreasing");
    }
    std::vector<double> rates;
    rates.reserve(series.size() - 1);
    for (std::size_t i = 0; i + 1 < series.size(); ++i)
        rates.push_back(std::log(series[i].second / series[i + 1].second) /
                        std::log(series[i].first / series[i + 1].first));
    return rates;
}

double diagnostic_energy_norm(const Eigen::VectorXd& solution, const OseenConfig& config,
                              const StabilizationScalings& scalings, const ActiveMesh& mesh,
                              const std::vector<CutCell>& cells, const FunctionSpace& space) {
    const double h = mesh.parent.h;
    const int order = 2 * space.order + 2;
    const TangentialWeights tw =
        tangential_weights(config.slip_length, config.gamma_t, h, config.nu);

    double acc = 0.0;
    for (int a = 0; a < mesh.n_active(); ++a) {
        const int e = mesh.active_elements[a];
        const ElementQuad quad = mesh.parent.element_quad(e);

        const VolumeRule rule = cut_volume_rule(cells[a], order, quad);
        for (std::size_t q = 0; q < rule.weights.size(); ++q) {
            const FieldEval fe = eval_solution(space, e, quad, rule.points_ref[q], solution);
            acc += rule.weights[q] * (config.sigma * fe.u.squaredNorm() +
                                      config.nu * fe.grad_u.squaredNorm());
        }

        const double phi_u = scalings.phi_u[a];
        for (const BoundarySegment& seg : cells[a].boundary_segments) {
            const Vec2 n = seg.normal;
            const LineRule rule_b = boundary_rule(seg, order);
            for (std::size_t q = 0; q < rule_b.points.size(); ++q) {
                const double w = rule_b.weights[q];
                const Vec2 x = rule_b.points[q];
                const FieldEval fe = eval_solution(space, e, quad, quad.to_reference(x), solution);
                const double un = fe.u.dot(n);
                const Vec2 ut = fe.u - un * n;
                acc += w * (config.nu / (config.gamma_n * h)) * un * un;
                acc += w * tw.penalty * ut.squaredNorm();
                acc += w * std::abs(config.beta(x).dot(n)) * fe.u.squaredNorm();
                acc += w * (phi_u / (config.gamma_n * h)) * un * un;
            }
        }
    }
    return std::sqrt(acc);
}

} // namespace cutflow
