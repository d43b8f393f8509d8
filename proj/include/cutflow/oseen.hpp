#pragma once

#include "cutflow/common.hpp"
#include "cutflow/cut_geometry.hpp"
#include "cutflow/fem_basis.hpp"
#include "cutflow/mesh.hpp"
#include "cutflow/quadrature.hpp"

#include <Eigen/Sparse>
#include <functional>
#include <vector>

namespace cutflow {

enum class BcMode { nitsche_gnbc, substitution };

/// Physical and stabilization parameters of one Oseen solve. The slip
/// length admits the closed range [0, inf]; boundary data evaluators take
/// the point (and for the traction also the outward normal).
struct OseenConfig {
    double nu = 1.0;
    double sigma = 1.0;
    std::function<Vec2(const Vec2&)> beta = [](const Vec2&) { return Vec2::Zero(); };
    std::function<Vec2(const Vec2&)> body_force = [](const Vec2&) { return Vec2::Zero(); };
    double slip_length = 1.0; // eps, may be kInf
    double gamma_n = 0.1;     // Nitsche penalties enter as nu / (gamma h)
    double gamma_t = 0.1;
    double zeta_u = 1.0; // +1 adjoint-consistent, -1 adjoint-inconsistent

    // CIP / ghost-penalty constants
    double gamma_beta = 0.01;
    double gamma_u = 0.05 * 0.01;
    double gamma_p = 0.01;
    double gamma_nu = 0.05;
    double gamma_sigma = 0.005;
    double second_order_gp_scale = 0.05; // extra factor on second-derivative jumps

    // Flow-regime weights in phi_u = nu + c_u ||beta|| h + c_sigma sigma h^2
    double c_u = 1.0 / 6.0;
    double c_sigma = 1.0 / 12.0;

    BcMode bc_mode = BcMode::nitsche_gnbc;
    bool simplified_beta_stab = false; // use sbar_beta / gbar_beta

    std::function<Vec2(const Vec2&)> g_dirichlet = [](const Vec2&) { return Vec2::Zero(); };
    std::function<Vec2(const Vec2&, const Vec2&)> h_traction =
        [](const Vec2&, const Vec2&) { return Vec2::Zero(); };

    double inflow_tol = 1e-12; // beta.n < -tol * |beta| flags an inflow point

    /// Switches c_u, c_sigma between the experimental weights (1/6, 1/12)
    /// and the analysis form (1, 1).
    void set_regime(bool experimental) {
        c_u = experimental ? 1.0 / 6.0 : 1.0;
        c_sigma = experimental ? 1.0 / 12.0 : 1.0;
    }
};

/// Per-element and per-facet stabilization scalings plus the global
/// diagnostic constants.
struct StabilizationScalings {
    std::vector<double> phi_u, phi_beta, phi_p, beta_max;                       // per active element
    std::vector<double> phi_u_facet, phi_beta_facet, phi_p_facet, beta_max_facet; // per interior facet
    double omega_h = 0.0;
    double capital_phi = 0.0;
    double poincare_c = 0.0;
};

StabilizationScalings compute_scalings(const OseenConfig& config, const ActiveMesh& mesh);

/// Blending weights of the tangential Nitsche terms. w_eps + w_gamma = 1
/// for every eps in [0, inf], with the infinite case handled exactly.
struct TangentialWeights {
    double w_eps = 0.0;   // eps / (eps + gamma_t h)
    double w_gamma = 1.0; // gamma_t h / (eps + gamma_t h)
    double penalty = 0.0; // nu / (eps + gamma_t h)
};

TangentialWeights tangential_weights(double eps, double gamma_t, double h, double nu);

struct AssembledSystem {
    Eigen::SparseMatrix<double> matrix;
    Eigen::VectorXd rhs;
    int n_scalar = 0; // dim = 3 * n_scalar + 1 (pressure-mean multiplier)

    int dim() const { return 3 * n_scalar + 1; }
    int multiplier_index() const { return 3 * n_scalar; }
    std::vector<int> velocity_dofs() const;
    std::vector<int> pressure_dofs() const;
};

/// Triplet accumulator shared by all sub-assemblers.
struct SystemAccumulator {
    explicit SystemAccumulator(int n_scalar_dofs)
        : n_scalar(n_scalar_dofs), rhs(Eigen::VectorXd::Zero(3 * n_scalar_dofs + 1)) {}

    int n_scalar;
    std::vector<Eigen::Triplet<double>> triplets;
    Eigen::VectorXd rhs;

    void add(int row, int col, double v) {
        if (v != 0.0) triplets.emplace_back(row, col, v);
    }
    void add_rhs(int row, double v) { rhs[row] += v; }

    AssembledSystem finish() const;
};

// --- sub-assemblers -------------------------------------------------------

void assemble_bulk(const OseenConfig& config, const ActiveMesh& mesh,
                   const std::vector<CutCell>& cells, const FunctionSpace& space,
                   SystemAccumulator& acc);

void assemble_nitsche_gnbc(const OseenConfig& config, const ActiveMesh& mesh,
                           const std::vector<CutCell>& cells, const FunctionSpace& space,
                           const StabilizationScalings& scalings, SystemAccumulator& acc);

/// Classical substitution of the tangential traction (Robin mass term).
/// Requires eps > 0; throws InvalidSlipLength for eps = 0.
void assemble_substitution(const OseenConfig& config, const ActiveMesh& mesh,
                           const std::vector<CutCell>& cells, const FunctionSpace& space,
                           const StabilizationScalings& scalings, SystemAccumulator& acc);

/// Pure Dirichlet Nitsche boundary terms, written directly from the
/// full-vector form. Serves as the independent reference for the eps -> 0
/// limit of the generalized form.
void assemble_nitsche_dirichlet(const OseenConfig& config, const ActiveMesh& mesh,
                                const std::vector<CutCell>& cells, const FunctionSpace& space,
                                const StabilizationScalings& scalings, SystemAccumulator& acc);

void assemble_cip(const OseenConfig& config, const StabilizationScalings& scalings,
                  const ActiveMesh& mesh, const FunctionSpace& space, SystemAccumulator& acc);

void assemble_ghost_penalty(const OseenConfig& config, const StabilizationScalings& scalings,
                            const ActiveMesh& mesh, const FunctionSpace& space,
                            SystemAccumulator& acc);

/// Zero-mean pressure constraint: one Lagrange multiplier coupled to
/// integral of p over Omega.
void assemble_pressure_mean(const ActiveMesh& mesh, const std::vector<CutCell>& cells,
                            const FunctionSpace& space, SystemAccumulator& acc);

AssembledSystem assemble_system(const OseenConfig& config, const ActiveMesh& mesh,
                                const std::vector<CutCell>& cells, const FunctionSpace& space);

} // namespace cutflow
