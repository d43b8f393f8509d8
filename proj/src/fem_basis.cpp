#include "cutflow/fem_basis.hpp"

#include <cmath>

namespace cutflow {

namespace {

struct Lagrange1D {
    int n = 0;
    double v[3]{}, d1[3]{}, d2[3]{};
};

Lagrange1D lagrange_1d(int k, double x) {
    Lagrange1D b;
    if (k == 1) {
        b.n = 2;
        b.v[0] = 0.5 * (1.0 - x);
        b.v[1] = 0.5 * (1.0 + x);
        b.d1[0] = -0.5;
        b.d1[1] = 0.5;
    } else if (k == 2) {
        b.n = 3;
        b.v[0] = 0.5 * x * (x - 1.0);
        b.v[1] = 1.0 - x * x;
        b.v[2] = 0.5 * x * (x + 1.0);
        b.d1[0] = x - 0.5;
        b.d1[1] = -2.0 * x;
        b.d1[2] = x + 0.5;
        b.d2[0] = 1.0;
        b.d2[1] = -2.0;
        b.d2[2] = 1.0;
    } else {
        throw UnsupportedOrder("lagrange_1d: order " + std::to_string(k));
    }
    return b;
}

} // namespace

ShapeEval shape_eval(int order, const Vec2& ref, const ElementQuad& element) {
    const Lagrange1D bx = lagrange_1d(order, ref.x());
    const Lagrange1D by = lagrange_1d(order, ref.y());

    // Constant Jacobian: d(phys)/d(ref) = (h/2) R, so grad_phys = (2/h) R grad_ref
    // and H_phys = (2/h)^2 R H_ref R^T.
    const double s = 2.0 / element.h;
    const Mat2 rot = element.rotation();

    ShapeEval se;
    se.n_local = bx.n * by.n;
    for (int b = 0; b < by.n; ++b) {
        for (int a = 0; a < bx.n; ++a) {
            const int l = b * bx.n + a;
            se.value[l] = bx.v[a] * by.v[b];
            const Vec2 gref(bx.d1[a] * by.v[b], bx.v[a] * by.d1[b]);
            se.grad[l] = s * (rot * gref);
            Mat2 href;
            href << bx.d2[a] * by.v[b], bx.d1[a] * by.d1[b],
                    bx.d1[a] * by.d1[b], bx.v[a] * by.d2[b];
            const Mat2 hp = (s * s) * (rot * href * rot.transpose());
            se.hess[l] = Eigen::Vector3d(hp(0, 0), hp(0, 1), hp(1, 1));
        }
    }
    return se;
}

double directional_derivative(const ShapeEval& se, int l, int j, const Vec2& n) {
    switch (j) {
    case 0:
        return se.value[l];
    case 1:
        return n.dot(se.grad[l]);
    case 2:
        return n.x() * n.x() * se.hess[l][0] + n.x() * n.y() * se.hess[l][1] +
               n.y() * n.y() * se.hess[l][2];
    default:
        throw OrderTooHigh("directional_derivative: j = " + std::to_string(j));
    }
}

void FunctionSpace::element_lattice(int bg_element, int* out) const {
    const int i = bg_element % n_side, j = bg_element / n_side;
    const int k = order;
    int l = 0;
    for (int b = 0; b <= k; ++b)
        for (int a = 0; a <= k; ++a)
            out[l++] = (k * j + b) * lattice_m + (k * i + a);
}

void FunctionSpace::element_scalars(int bg_element, int* out) const {
    int lat[9];
    element_lattice(bg_element, lat);
    for (int l = 0; l < n_local(); ++l) out[l] = compact[lat[l]];
}

Vec2 FunctionSpace::dof_position(int lattice_id) const {
    const int i = lattice_id % lattice_m, j = lattice_id / lattice_m;
    const double d = h / order;
    const double x = -half_extent + i * d;
    const double y = -half_extent + j * d;
    const double c = std::cos(theta), s = std::sin(theta);
    return Vec2(c * x - s * y, s * x + c * y);
}

FunctionSpace make_space(const ActiveMesh& mesh, int order) {
    if (order != 1 && order != 2)
        throw UnsupportedOrder("make_space: order " + std::to_string(order));

    FunctionSpace sp;
    sp.order = order;
    sp.n_side = mesh.parent.n_per_side;
    sp.lattice_m = order * sp.n_side + 1;
    sp.h = mesh.parent.h;
    sp.half_extent = mesh.parent.half_extent;
    sp.theta = mesh.parent.rotation;
    sp.compact.assign(sp.lattice_m * sp.lattice_m, -1);

    int lat[9];
    std::vector<bool> seen(sp.compact.size(), false);
    for (int e : mesh.active_elements) {
        sp.element_lattice(e, lat);
        for (int l = 0; l < sp.n_local(); ++l) seen[lat[l]] = true;
    }
    for (std::size_t id = 0; id < seen.size(); ++id) {
        if (!seen[id]) continue;
        sp.compact[id] = sp.n_scalar_dofs++;
        sp.active_scalar.push_back(static_cast<int>(id));
    }
    return sp;
}

Vec2 FacetTrace::side_ref(int side, double t) const {
    if (facet.axis == 0) return side == 0 ? Vec2(1.0, t) : Vec2(-1.0, t);
    return side == 0 ? Vec2(t, 1.0) : Vec2(t, -1.0);
}

Vec2 FacetTrace::point(double t) const { return facet.pa + 0.5 * (t + 1.0) * (facet.pb - facet.pa); }

FacetTrace make_facet_trace(const ActiveMesh& mesh, const FunctionSpace& space,
                            const Facet& facet) {
    FacetTrace tr;
    tr.facet = facet;
    tr.k = space.order;
    tr.elem[0] = mesh.parent.element_quad(facet.left);
    tr.elem[1] = mesh.parent.element_quad(facet.right);
    int lat[9];
    for (int side = 0; side < 2; ++side) {
        const int e = side == 0 ? facet.left : facet.right;
        space.element_lattice(e, lat);
        for (int l = 0; l < space.n_local(); ++l) tr.scalars[side][l] = space.compact[lat[l]];
    }
    return tr;
}

double normal_derivative_jump(const FacetTrace& trace, const FunctionSpace& space,
                              const Eigen::VectorXd& scalar_coeffs, int j, double t) {
    if (j > trace.k) throw OrderTooHigh("normal_derivative_jump: j > k");
    double side_val[2] = {0.0, 0.0};
    for (int side = 0; side < 2; ++side) {
        const ShapeEval se = shape_eval(trace.k, trace.side_ref(side, t), trace.elem[side]);
        for (int l = 0; l < space.n_local(); ++l) {
            const int c = trace.scalars[side][l];
            if (c < 0) continue;
            side_val[side] += scalar_coeffs[c] * directional_derivative(se, l, j, trace.facet.normal);
        }
    }
    return side_val[0] - side_val[1];
}

Eigen::VectorXd interpolate_scalar(const FunctionSpace& space,
                                   const std::function<double(const Vec2&)>& f) {
    Eigen::VectorXd v(space.n_scalar_dofs);
    for (int c = 0; c < space.n_scalar_dofs; ++c)
        v[c] = f(space.dof_position(space.active_scalar[c]));
    return v;
}

Eigen::VectorXd interpolate_solution(const FunctionSpace& space,
                                     const std::function<Vec2(const Vec2&)>& u,
                                     const std::function<double(const Vec2&)>& p) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(space.total_dofs());
    for (int c = 0; c < space.n_scalar_dofs; ++c) {
        const Vec2 x = space.dof_position(space.active_scalar[c]);
        const Vec2 uv = u(x);
        v[space.gdof(c, 0)] = uv.x();
        v[space.gdof(c, 1)] = uv.y();
        v[space.gdof(c, 2)] = p(x);
    }
    return v;
}

FieldEval eval_solution(const FunctionSpace& space, int bg_element,
                        const ElementQuad& element, const Vec2& ref,
                        const Eigen::VectorXd& solution) {
    const ShapeEval se = shape_eval(space.order, ref, element);
    int sc[9];
    space.element_scalars(bg_element, sc);

    FieldEval fe;
    for (int l = 0; l < space.n_local(); ++l) {
        const int c = sc[l];
        if (c < 0) continue;
        const double u1 = solution[space.gdof(c, 0)];
        const double u2 = solution[space.gdof(c, 1)];
        const double pc = solution[space.gdof(c, 2)];
        fe.u.x() += u1 * se.value[l];
        fe.u.y() += u2 * se.value[l];
        fe.grad_u.row(0) += u1 * se.grad[l].transpose();
        fe.grad_u.row(1) += u2 * se.grad[l].transpose();
        fe.p += pc * se.value[l];
        fe.grad_p += pc * se.grad[l];
    }
    return fe;
}

} // namespace cutflow
