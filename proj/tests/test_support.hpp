#pragma once

#include "cutflow/cut_geometry.hpp"
#include "cutflow/mesh.hpp"
#include "cutflow/oseen.hpp"

#include <Eigen/Sparse>
#include <random>

namespace cutflow::test {

// Deterministic RNG for reproducible property tests.
inline std::mt19937& rng() {
    static std::mt19937 gen(0x5eed);
    return gen;
}

inline double uniform(double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    return d(rng());
}

// Max |A - B| over the union pattern, and max |A| for relative scaling.
struct MatrixDiff {
    double max_abs_diff = 0.0;
    double max_abs_ref = 0.0;
};

inline MatrixDiff compare(const Eigen::SparseMatrix<double>& a,
                          const Eigen::SparseMatrix<double>& b) {
    MatrixDiff d;
    Eigen::SparseMatrix<double> diff = a - b;
    for (int k = 0; k < diff.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(diff, k); it; ++it)
            d.max_abs_diff = std::max(d.max_abs_diff, std::abs(it.value()));
    for (int k = 0; k < a.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(a, k); it; ++it)
            d.max_abs_ref = std::max(d.max_abs_ref, std::abs(it.value()));
    return d;
}

// Standard box-flow setup shared by several suites.
struct BoxSetup {
    BackgroundMesh bg;
    DomainPolygon box;
    ActiveMesh mesh;
    std::vector<CutCell> cells;
    FunctionSpace space;
};

inline BoxSetup make_box_setup(int n, double theta, int order, double half_extent = 1.6) {
    BoxSetup s;
    s.bg = build_background_mesh(n, half_extent, theta);
    s.box = make_box(1.0);
    s.mesh = extract_active_mesh(s.bg, s.box);
    s.cells = build_cut_cells(s.mesh, s.box);
    s.space = make_space(s.mesh, order);
    return s;
}

} // namespace cutflow::test
