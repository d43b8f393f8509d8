#pragma once

#include "cutflow/oseen.hpp"

#include <Eigen/Sparse>
#include <utility>

namespace cutflow {

enum class SolveStatus { converged, singular, tolerance_not_met };

const char* to_string(SolveStatus s);

struct SolveReport {
    SolveStatus status = SolveStatus::singular;
    double residual_norm = 0.0;  // relative, computed explicitly
    double pressure_mean = 0.0;  // integral of p_h (constraint row applied to x)
    double pressure_norm = 0.0;  // lumped L2 proxy used for the mean check
    int dim = 0;
    long nnz_matrix = 0;
    long nnz_factors = 0; // fill of L + U
};

/// Direct sparse LU with fill-reducing ordering. `converged` requires a
/// relative residual <= 1e-10 and |integral of p_h| <= 1e-9 ||p_h||.
std::pair<Eigen::VectorXd, SolveReport> solve(const AssembledSystem& system);

} // namespace cutflow
