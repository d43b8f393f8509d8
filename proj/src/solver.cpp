#include "cutflow/solver.hpp"

#include <Eigen/SparseLU>
#include <cmath>

namespace cutflow {

const char* to_string(SolveStatus s) {
    switch (s) {
    case SolveStatus::converged:
        return "converged";
    case SolveStatus::singular:
        return "singular";
    case SolveStatus::tolerance_not_met:
        return "tolerance_not_met";
    }
    return "unknown";
}

std::pair<Eigen::VectorXd, SolveReport> solve(const AssembledSystem& system) {
    SolveReport rep;
    rep.dim = system.dim();
    rep.nnz_matrix = system.matrix.nonZeros();

    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
    lu.analyzePattern(system.matrix);
    lu.factorize(system.matrix);
    if (lu.info() != Eigen::Success) {
        rep.status = SolveStatus::singular;
        return {Eigen::VectorXd::Zero(rep.dim), rep};
    }
    rep.nnz_factors = lu.nnzL() + lu.nnzU();

    Eigen::VectorXd x = lu.solve(system.rhs);
    if (!x.allFinite()) {
        rep.status = SolveStatus::singular;
        return {Eigen::VectorXd::Zero(rep.dim), rep};
    }

    const double bnorm = std::max(system.rhs.norm(), 1e-300);
    rep.residual_norm = (system.matrix * x - system.rhs).norm() / bnorm;

    // The constraint row holds the pressure basis integrals; applying it to
    // x gives the integral of p_h. The same weights give a lumped L2 proxy.
    const int mult = system.multiplier_index();
    double mean = 0.0, lumped = 0.0;
    for (Eigen::SparseMatrix<double>::InnerIterator it(system.matrix, mult); it; ++it) {
        // column-major: iterate the multiplier column (= constraint weights)
        if (it.row() == mult) continue;
        mean += it.value() * x[it.row()];
        lumped += std::abs(it.value()) * x[it.row()] * x[it.row()];
    }
    rep.pressure_mean = mean;
    rep.pressure_norm = std::sqrt(std::max(lumped, 0.0));

    const bool mean_ok = std::abs(rep.pressure_mean) <= 1e-9 * std::max(rep.pressure_norm, 1e-300);
    rep.status = (rep.residual_norm <= 1e-10 && mean_ok) ? SolveStatus::converged
                                                         : SolveStatus::tolerance_not_met;
    return {x, rep};
}

} // namespace cutflow
