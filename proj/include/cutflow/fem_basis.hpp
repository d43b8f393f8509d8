#pragma once

#include "cutflow/common.hpp"
#include "cutflow/mesh.hpp"

#include <Eigen/Dense>
#include <array>
#include <functional>

namespace cutflow {

/// Values and derivatives (up to second order, pushed to physical
/// coordinates) of all local tensor-Lagrange basis functions at one
/// reference point.
struct ShapeEval {
    int n_local = 0;
    std::array<double, 9> value{};
    std::array<Vec2, 9> grad{};              // physical gradient
    std::array<Eigen::Vector3d, 9> hess{};   // physical (xx, xy, yy)
};

ShapeEval shape_eval(int order, const Vec2& ref, const ElementQuad& element);

/// j-th normal derivative of local basis `l`, multi-index convention:
/// sum over |alpha| = j of D^alpha v * n^alpha.
double directional_derivative(const ShapeEval& se, int l, int j, const Vec2& n);

/// Equal-order continuous Q1/Q2 space over the active mesh. Scalar basis
/// functions live on the refined (order*N + 1)^2 node lattice; every node
/// carries the interleaved fields (u1, u2, p). Degrees of freedom of active
/// elements are retained even when their node lies outside Omega.
struct FunctionSpace {
    int order = 1;
    int fields_per_node = 3;
    int n_side = 0;     // background N
    int lattice_m = 0;  // order * N + 1 lattice nodes per side
    double h = 0.0;
    double half_extent = 0.0;
    double theta = 0.0;
    std::vector<int> compact;       // lattice id -> compact scalar index, -1 inactive
    std::vector<int> active_scalar; // compact index -> lattice id
    int n_scalar_dofs = 0;

    int n_local() const { return (order + 1) * (order + 1); }
    void element_lattice(int bg_element, int* out) const;
    void element_scalars(int bg_element, int* out) const; // compact indices
    Vec2 dof_position(int lattice_id) const;              // physical
    int gdof(int compact_scalar, int field) const { return 3 * compact_scalar + field; }
    int total_dofs() const { return 3 * n_scalar_dofs + 1; } // + pressure-mean multiplier
};

FunctionSpace make_space(const ActiveMesh& mesh, int order);

/// Two-sided view of an interior facet: element geometry and DOFs of both
/// neighbors plus the facet parameterization t in [-1,1] into each side's
/// reference square. Side 0 is the lower-id (left) element.
struct FacetTrace {
    Facet facet;
    int k = 1;
    std::array<ElementQuad, 2> elem;
    std::array<std::array<int, 9>, 2> scalars; // compact scalar indices per side

    Vec2 side_ref(int side, double t) const;
    Vec2 point(double t) const; // physical
};

FacetTrace make_facet_trace(const ActiveMesh& mesh, const FunctionSpace& space,
                            const Facet& facet);

/// Jump (left-limit minus right-limit along n_F) of the j-th normal
/// derivative of a scalar field given by compact coefficients.
/// Throws OrderTooHigh for j > k.
double normal_derivative_jump(const FacetTrace& trace, const FunctionSpace& space,
                              const Eigen::VectorXd& scalar_coeffs, int j, double t);

/// Nodal interpolation of a scalar function (compact coefficient vector).
Eigen::VectorXd interpolate_scalar(const FunctionSpace& space,
                                   const std::function<double(const Vec2&)>& f);

/// Nodal interpolation of (u1, u2, p) into a full solution vector
/// (multiplier entry zero).
Eigen::VectorXd interpolate_solution(const FunctionSpace& space,
                                     const std::function<Vec2(const Vec2&)>& u,
                                     const std::function<double(const Vec2&)>& p);

/// Velocity/pressure values and gradients of a discrete solution at one
/// reference point of an element.
struct FieldEval {
    Vec2 u{0.0, 0.0};
    Mat2 grad_u = Mat2::Zero(); // grad_u(r, c) = du_r / dx_c
    double p = 0.0;
    Vec2 grad_p{0.0, 0.0};
};

FieldEval eval_solution(const FunctionSpace& space, int bg_element,
                        const ElementQuad& element, const Vec2& ref,
                        const Eigen::VectorXd& solution);

} // namespace cutflow
