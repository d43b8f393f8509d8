#pragma once

#include "cutflow/fem_basis.hpp"
#include "cutflow/mesh.hpp"
#include "cutflow/oseen.hpp"

#include <functional>
#include <vector>

namespace cutflow {

/// Closed-form manufactured solution with divergence-free velocity whose
/// normal trace vanishes on the box boundary; the forcing solves the Oseen
/// momentum equation with beta = u.
struct ExactSolution {
    std::function<Vec2(const Vec2&)> u;
    std::function<Mat2(const Vec2&)> grad_u; // (r, c) = du_r / dx_c
    std::function<double(const Vec2&)> p;
    std::function<Vec2(const Vec2&)> grad_p;
    std::function<Vec2(const Vec2&)> f;
    std::function<Vec2(const Vec2&)> g;                      // boundary velocity (= u)
    std::function<Vec2(const Vec2&, const Vec2&)> h_traction; // 2 nu eps(u) n
};

ExactSolution exact_fields(double nu, double sigma);

/// Populates beta, forcing and boundary data of a config from the exact fields.
void apply_exact_data(OseenConfig& config, const ExactSolution& exact);

struct ErrorReport {
    double l2_u_bulk = 0.0;
    double l2_gradu_bulk = 0.0;
    double l2_p_bulk = 0.0;
    double l2_u_gamma = 0.0;
    double l2_gradu_gamma = 0.0;
    double l2_p_gamma = 0.0;
    int dofs = 0;
    double h = 0.0;
};

ErrorReport compute_errors(const Eigen::VectorXd& solution, const ExactSolution& exact,
                           const ActiveMesh& mesh, const std::vector<CutCell>& cells,
                           const FunctionSpace& space);

/// Integral and L2 norm of the discrete pressure over Omega.
std::pair<double, double> pressure_stats(const Eigen::VectorXd& solution, const ActiveMesh& mesh,
                                         const std::vector<CutCell>& cells,
                                         const FunctionSpace& space);

/// Pairwise rates log(E_i / E_{i+1}) / log(h_i / h_{i+1}).
std::vector<double> convergence_rates(const std::vector<std::pair<double, double>>& series);

/// Mesh-dependent energy norm |||u||| of a discrete velocity field
/// (reported for monitoring only).
double diagnostic_energy_norm(const Eigen::VectorXd& solution, const OseenConfig& config,
                              const StabilizationScalings& scalings, const ActiveMesh& mesh,
                              const std::vector<CutCell>& cells, const FunctionSpace& space);

} // namespace cutflow
