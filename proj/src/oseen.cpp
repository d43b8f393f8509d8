#include "cutflow/oseen.hpp"

#include <cmath>

namespace cutflow {

namespace {

int bulk_matrix_order(int k) { return 2 * k + 2; }
int boundary_matrix_order(int k) { return 2 * k + 2; }
int data_order(int k) { return 2 * k + 6; } // forcing / boundary data
int facet_order(int k) { return 2 * k + 2; }

double element_beta_max(const OseenConfig& config, const ElementQuad& quad) {
    double bmax = 0.0;
    const auto corners = quad.corners();
    for (const auto& c : corners) bmax = std::max(bmax, config.beta(c).norm());
    const SegmentRule g = gauss_legendre(3);
    for (double gx : g.points)
        for (double gy : g.points)
            bmax = std::max(bmax, config.beta(quad.to_physical(Vec2(gx, gy))).norm());
    return bmax;
}

// local system dofs of one element: (k+1)^2 scalars x 3 fields
struct LocalDofs {
    int n = 0;
    int scalar[9];
    int vel(int l, int c) const { return 3 * scalar[l] + c; }
    int pre(int l) const { return 3 * scalar[l] + 2; }
};

LocalDofs gather(const FunctionSpace& space, int bg_element) {
    LocalDofs d;
    d.n = space.n_local();
    space.element_scalars(bg_element, d.scalar);
    return d;
}

// 2 eps(phi e_c) n  (the viscous boundary flux divided by nu)
inline Vec2 strain_flux(const Vec2& grad, int c, const Vec2& n) {
    Vec2 r = grad * n[c];
    r[c] += grad.dot(n);
    return r;
}

bool inflow_point(const OseenConfig& config, const Vec2& beta, const Vec2& n, double* bn_out) {
    const double bn = beta.dot(n);
    *bn_out = bn;
    return bn < -config.inflow_tol * beta.norm();
}

} // namespace

std::vector<int> AssembledSystem::velocity_dofs() const {
    std::vector<int> d;
    d.reserve(2 * n_scalar);
    for (int s = 0; s < n_scalar; ++s) {
        d.push_back(3 * s);
        d.push_back(3 * s + 1);
    }
    return d;
}

std::vector<int> AssembledSystem::pressure_dofs() const {
    std::vector<int> d;
    d.reserve(n_scalar);
    for (int s = 0; s < n_scalar; ++s) d.push_back(3 * s + 2);
    return d;
}

AssembledSystem SystemAccumulator::finish() const {
    AssembledSystem sys;
    sys.n_scalar = n_scalar;
    sys.matrix.resize(3 * n_scalar + 1, 3 * n_scalar + 1);
    sys.matrix.setFromTriplets(triplets.begin(), triplets.end());
    sys.matrix.makeCompressed();
    sys.rhs = rhs;
    return sys;
}

StabilizationScalings compute_scalings(const OseenConfig& config, const ActiveMesh& mesh) {
    const double h = mesh.parent.h;
    StabilizationScalings s;
    const int na = mesh.n_active();
    s.phi_u.resize(na);
    s.phi_beta.resize(na);
    s.phi_p.resize(na);
    s.beta_max.resize(na);
    for (int a = 0; a < na; ++a) {
        const ElementQuad quad = mesh.parent.element_quad(mesh.active_elements[a]);
        const double bmax = element_beta_max(config, quad);
        const double phi_u = config.nu + config.c_u * bmax * h + config.c_sigma * config.sigma * h * h;
        s.beta_max[a] = bmax;
        s.phi_u[a] = phi_u;
        s.phi_beta[a] = h * h / phi_u;
        s.phi_p[a] = s.phi_beta[a];
    }

    const int nf = static_cast<int>(mesh.interior_facets.size());
    s.phi_u_facet.resize(nf);
    s.phi_beta_facet.resize(nf);
    s.phi_p_facet.resize(nf);
    s.beta_max_facet.resize(nf);
    for (int f = 0; f < nf; ++f) {
        const Facet& fac = mesh.interior_facets[f];
        const int al = mesh.active_index[fac.left];
        const int ar = mesh.active_index[fac.right];
        s.phi_u_facet[f] = std::max(s.phi_u[al], s.phi_u[ar]);
        s.phi_beta_facet[f] = std::max(s.phi_beta[al], s.phi_beta[ar]);
        s.phi_p_facet[f] = std::max(s.phi_p[al], s.phi_p[ar]);
        s.beta_max_facet[f] = std::max(s.beta_max[al], s.beta_max[ar]);
    }

    // Global diagnostic constants (monitoring only). The Poincare constant
    // follows the diameter-of-Omega convention for the box domain.
    s.poincare_c = 2.0 * std::sqrt(2.0);
    double beta_inf = 0.0;
    for (double b : s.beta_max) beta_inf = std::max(beta_inf, b);
    double beta_semi = 0.0;
    const double delta = 1e-6 * h;
    for (int a = 0; a < na; ++a) {
        const Vec2 c = mesh.parent.element_quad(mesh.active_elements[a]).center();
        for (int dir = 0; dir < 2; ++dir) {
            Vec2 dp = Vec2::Zero();
            dp[dir] = delta;
            const Vec2 d = (config.beta(c + dp) - config.beta(c - dp)) / (2.0 * delta);
            beta_semi = std::max({beta_semi, std::abs(d.x()), std::abs(d.y())});
        }
    }
    s.omega_h = h * h * beta_semi / (config.nu + config.sigma * h * h);
    const double cp = s.poincare_c;
    const double base = config.nu + config.sigma * cp * cp;
    const double phi_inv = config.sigma * cp * cp + beta_inf * cp + config.nu +
                           (beta_inf * cp) * (beta_inf * cp) / base;
    s.capital_phi = 1.0 / phi_inv;
    return s;
}

TangentialWeights tangential_weights(double eps, double gamma_t, double h, double nu) {
    if (eps < 0.0 || std::isnan(eps))
        throw InvalidSlipLength("tangential_weights: eps must lie in [0, inf]");
    TangentialWeights w;
    if (std::isinf(eps)) {
        w.w_eps = 1.0;
        w.w_gamma = 0.0;
        w.penalty = 0.0;
        return w;
    }
    const double denom = eps + gamma_t * h;
    w.w_eps = eps / denom;
    w.w_gamma = 1.0 - w.w_eps;
    w.penalty = nu / denom;
    return w;
}

void assemble_bulk(const OseenConfig& config, const ActiveMesh& mesh,
                   const std::vector<CutCell>& cells, const FunctionSpace& space,
                   SystemAccumulator& acc) {
    const int k = space.order;
    const double nu = config.nu, sigma = config.sigma;

    for (int a = 0; a < mesh.n_active(); ++a) {
        const int e = mesh.active_elements[a];
        const ElementQuad quad = mesh.parent.element_quad(e);
        const LocalDofs dofs = gather(space, e);

        const VolumeRule rule = cut_volume_rule(cells[a], bulk_matrix_order(k), quad);
        for (std::size_t q = 0; q < rule.weights.size(); ++q) {
            const double w = rule.weights[q];
            const ShapeEval se = shape_eval(k, rule.points_ref[q], quad);
            const Vec2 beta = config.beta(rule.points_phys[q]);

            for (int j = 0; j < dofs.n; ++j) {
                const double vj = se.value[j];
                const Vec2& gj = se.grad[j];
                for (int i = 0; i < dofs.n; ++i) {
                    const double vi = se.value[i];
                    const Vec2& gi = se.grad[i];
                    const double conv = beta.dot(gi);
                    const double lap = gi.dot(gj);
                    for (int c = 0; c < 2; ++c) {
                        // sigma (u,v) + (beta.grad u, v) + 2 nu (eps(u), eps(v))
                        acc.add(dofs.vel(j, c), dofs.vel(i, c),
                                w * (sigma * vi * vj + conv * vj + nu * lap));
                        for (int d = 0; d < 2; ++d)
                            acc.add(dofs.vel(j, d), dofs.vel(i, c), w * nu * gi[d] * gj[c]);
                    }
                    // b(p, v) = -(p, div v) and -b(q, u) = +(q, div u)
                    for (int d = 0; d < 2; ++d) {
                        acc.add(dofs.vel(j, d), dofs.pre(i), -w * vi * gj[d]);
                        acc.add(dofs.pre(j), dofs.vel(i, d), w * vj * gi[d]);
                    }
                }
            }
        }

        // body force at the data order
        const VolumeRule frule = cut_volume_rule(cells[a], data_order(k), quad);
        for (std::size_t q = 0; q < frule.weights.size(); ++q) {
            const double w = frule.weights[q];
            const ShapeEval se = shape_eval(k, frule.points_ref[q], quad);
            const Vec2 f = config.body_force(frule.points_phys[q]);
            for (int j = 0; j < dofs.n; ++j)
                for (int d = 0; d < 2; ++d)
                    acc.add_rhs(dofs.vel(j, d), w * f[d] * se.value[j]);
        }
    }
}

void assemble_nitsche_gnbc(const OseenConfig& config, const ActiveMesh& mesh,
                           const std::vector<CutCell>& cells, const FunctionSpace& space,
                           const StabilizationScalings& scalings, SystemAccumulator& acc) {
    const int k = space.order;
    const double nu = config.nu;
    const double h = mesh.parent.h;
    const double zeta = config.zeta_u;
    const double gnh = config.gamma_n * h;
    const TangentialWeights tw = tangential_weights(config.slip_length, config.gamma_t, h, nu);
    const double adj_t = config.gamma_t * h * tw.w_eps; // gamma_t h eps / (eps + gamma_t h)

    for (int a = 0; a < mesh.n_active(); ++a) {
        if (cells[a].boundary_segments.empty()) continue;
        const int e = mesh.active_elements[a];
        const ElementQuad quad = mesh.parent.element_quad(e);
        const LocalDofs dofs = gather(space, e);
        const double phi_u = scalings.phi_u[a];
        const double pen_n = (nu + phi_u) / gnh;

        for (const BoundarySegment& seg : cells[a].boundary_segments) {
            const Vec2 n = seg.normal;
            const Mat2 pt = Mat2::Identity() - n * n.transpose();

            const LineRule rule = boundary_rule(seg, boundary_matrix_order(k));
            for (std::size_t q = 0; q < rule.points.size(); ++q) {
                const double w = rule.weights[q];
                const Vec2 x = rule.points[q];
                const ShapeEval se = shape_eval(k, quad.to_reference(x), quad);
                const Vec2 beta = config.beta(x);
                double bn = 0.0;
                const bool inflow = config.slip_length == 0.0 && inflow_point(config, beta, n, &bn);

                for (int j = 0; j < dofs.n; ++j) {
                    const double vj = se.value[j];
                    for (int d = 0; d < 2; ++d) {
                        const Vec2 en_jd = strain_flux(se.grad[j], d, n);
                        const double un_jd = vj * n[d];
                        for (int i = 0; i < dofs.n; ++i) {
                            const double vi = se.value[i];
                            for (int c = 0; c < 2; ++c) {
                                const Vec2 en_ic = strain_flux(se.grad[i], c, n);
                                const Vec2 pt_en_ic = pt * en_ic;
                                const double un_ic = vi * n[c];
                                double v = 0.0;
                                v -= nu * en_ic[d] * vj;                   // viscous consistency
                                v -= zeta * un_ic * nu * en_jd.dot(n);     // normal adjoint
                                v += pen_n * un_ic * un_jd;                // normal penalties
                                v += tw.w_eps * nu * pt_en_ic[d] * vj;     // tangential consistency return
                                v += tw.penalty * vi * vj * pt(d, c);      // tangential penalty
                                v -= zeta * adj_t * nu * pt_en_ic.dot(en_jd);     // tangential adjoint (flux)
                                v -= zeta * tw.w_gamma * nu * vi * pt.col(c).dot(en_jd); // tangential adjoint (velocity)
                                if (inflow && c == d) v -= bn * vi * vj;
                                acc.add(dofs.vel(j, d), dofs.vel(i, c), w * v);
                            }
                            acc.add(dofs.vel(j, d), dofs.pre(i), w * vi * un_jd); // <p, v.n>
                            acc.add(dofs.pre(j), dofs.vel(i, d), -w * vj * vi * n[d]); // -<q, u.n>
                        }
                    }
                }
            }

            const LineRule drule = boundary_rule(seg, data_order(k));
            for (std::size_t q = 0; q < drule.points.size(); ++q) {
                const double w = drule.weights[q];
                const Vec2 x = drule.points[q];
                const ShapeEval se = shape_eval(k, quad.to_reference(x), quad);
                const Vec2 gd = config.g_dirichlet(x);
                const Vec2 hd = config.h_traction(x, n);
                const Vec2 pt_g = pt * gd;
                const Vec2 pt_h = pt * hd;
                const double gn_val = gd.dot(n);
                const Vec2 beta = config.beta(x);
                double bn = 0.0;
                const bool inflow = config.slip_length == 0.0 && inflow_point(config, beta, n, &bn);

                for (int j = 0; j < dofs.n; ++j) {
                    const double vj = se.value[j];
                    for (int d = 0; d < 2; ++d) {
                        const Vec2 en_jd = strain_flux(se.grad[j], d, n);
                        const double un_jd = vj * n[d];
                        double v = 0.0;
                        v -= zeta * gn_val * nu * en_jd.dot(n);
                        v += pen_n * gn_val * un_jd;
                        v += tw.w_eps * pt_h[d] * vj;
                        v += tw.penalty * pt_g[d] * vj;
                        v -= zeta * adj_t * pt_h.dot(en_jd);
                        v -= zeta * tw.w_gamma * nu * pt_g.dot(en_jd);
                        if (inflow) v -= bn * gd[d] * vj;
                        acc.add_rhs(dofs.vel(j, d), w * v);
                    }
                    acc.add_rhs(dofs.pre(j), -w * vj * gn_val); // -<g.n, q>
                }
            }
        }
    }
}

void assemble_substitution(const OseenConfig& config, const ActiveMesh& mesh,
                           const std::vector<CutCell>& cells, const FunctionSpace& space,
                           const StabilizationScalings& scalings, SystemAccumulator& acc) {
    if (config.slip_length == 0.0)
        throw InvalidSlipLength("assemble_substitution: eps = 0 is not defined");
    const int k = space.order;
    const double nu = config.nu;
    const double h = mesh.parent.h;
    const double zeta = config.zeta_u;
    const double gnh = config.gamma_n * h;
    const double robin = std::isinf(config.slip_length) ? 0.0 : nu / config.slip_length;

    for (int a = 0; a < mesh.n_active(); ++a) {
        if (cells[a].boundary_segments.empty()) continue;
        const int e = mesh.active_elements[a];
        const ElementQuad quad = mesh.parent.element_quad(e);
        const LocalDofs dofs = gather(space, e);
        const double pen_n = (nu + scalings.phi_u[a]) / gnh;

        for (const BoundarySegment& seg : cells[a].boundary_segments) {
            const Vec2 n = seg.normal;
            const Mat2 pt = Mat2::Identity() - n * n.transpose();

            const LineRule rule = boundary_rule(seg, boundary_matrix_order(k));
            for (std::size_t q = 0; q < rule.points.size(); ++q) {
                const double w = rule.weights[q];
                const ShapeEval se = shape_eval(k, quad.to_reference(rule.points[q]), quad);
                for (int j = 0; j < dofs.n; ++j) {
                    const double vj = se.value[j];
                    for (int d = 0; d < 2; ++d) {
                        const Vec2 en_jd = strain_flux(se.grad[j], d, n);
                        const double un_jd = vj * n[d];
                        for (int i = 0; i < dofs.n; ++i) {
                            const double vi = se.value[i];
                            for (int c = 0; c < 2; ++c) {
                                const Vec2 en_ic = strain_flux(se.grad[i], c, n);
                                const double un_ic = vi * n[c];
                                double v = 0.0;
                                v -= nu * en_ic.dot(n) * un_jd;        // normal consistency
                                v -= zeta * un_ic * nu * en_jd.dot(n); // normal adjoint
                                v += pen_n * un_ic * un_jd;            // normal penalties
                                v += robin * vi * vj * pt(d, c);       // Robin mass
                                acc.add(dofs.vel(j, d), dofs.vel(i, c), w * v);
                            }
                            acc.add(dofs.vel(j, d), dofs.pre(i), w * vi * un_jd);
                            acc.add(dofs.pre(j), dofs.vel(i, d), -w * vj * vi * n[d]);
                        }
                    }
                }
            }

            const LineRule drule = boundary_rule(seg, data_order(k));
            for (std::size_t q = 0; q < drule.points.size(); ++q) {
                const double w = drule.weights[q];
                const Vec2 x = drule.points[q];
                const ShapeEval se = shape_eval(k, quad.to_reference(x), quad);
                const Vec2 gd = config.g_dirichlet(x);
                const Vec2 pt_h = pt * config.h_traction(x, n);
                const Vec2 pt_g = pt * gd;
                const double gn_val = gd.dot(n);
                for (int j = 0; j < dofs.n; ++j) {
                    const double vj = se.value[j];
                    for (int d = 0; d < 2; ++d) {
                        const Vec2 en_jd = strain_flux(se.grad[j], d, n);
                        double v = pt_h[d] * vj + robin * pt_g[d] * vj;
                        v -= zeta * gn_val * nu * en_jd.dot(n);
                        v += pen_n * gn_val * vj * n[d];
                        acc.add_rhs(dofs.vel(j, d), w * v);
                    }
                    acc.add_rhs(dofs.pre(j), -w * vj * gn_val);
                }
            }
        }
    }
}

void assemble_nitsche_dirichlet(const OseenConfig& config, const ActiveMesh& mesh,
                                const std::vector<CutCell>& cells, const FunctionSpace& space,
                                const StabilizationScalings& scalings, SystemAccumulator& acc) {
    const int k = space.order;
    const double nu = config.nu;
    const double h = mesh.parent.h;
    const double zeta = config.zeta_u;
    const double pen_nn = nu / (config.gamma_n * h);
    const double pen_nt = nu / (config.gamma_t * h);

    for (int a = 0; a < mesh.n_active(); ++a) {
        if (cells[a].boundary_segments.empty()) continue;
        const int e = mesh.active_elements[a];
        const ElementQuad quad = mesh.parent.element_quad(e);
        const LocalDofs dofs = gather(space, e);
        const double pen_phi = scalings.phi_u[a] / (config.gamma_n * h);

        for (const BoundarySegment& seg : cells[a].boundary_segments) {
            const Vec2 n = seg.normal;
            const Mat2 pt = Mat2::Identity() - n * n.transpose();

            const LineRule rule = boundary_rule(seg, boundary_matrix_order(k));
            for (std::size_t q = 0; q < rule.points.size(); ++q) {
                const double w = rule.weights[q];
                const Vec2 x = rule.points[q];
                const ShapeEval se = shape_eval(k, quad.to_reference(x), quad);
                const Vec2 beta = config.beta(x);
                double bn = 0.0;
                const bool inflow = inflow_point(config, beta, n, &bn);

                for (int j = 0; j < dofs.n; ++j) {
                    const double vj = se.value[j];
                    for (int d = 0; d < 2; ++d) {
                        const Vec2 en_jd = strain_flux(se.grad[j], d, n);
                        const double un_jd = vj * n[d];
                        for (int i = 0; i < dofs.n; ++i) {
                            const double vi = se.value[i];
                            for (int c = 0; c < 2; ++c) {
                                const Vec2 en_ic = strain_flux(se.grad[i], c, n);
                                const double un_ic = vi * n[c];
                                double v = 0.0;
                                v -= nu * en_ic[d] * vj;           // -<2nu eps(u)n, v>
                                v -= zeta * nu * vi * en_jd[c];    // -zeta <u, 2nu eps(v)n>
                                v += (pen_nn + pen_phi) * un_ic * un_jd;
                                v += pen_nt * vi * vj * pt(d, c);
                                if (inflow && c == d) v -= bn * vi * vj;
                                acc.add(dofs.vel(j, d), dofs.vel(i, c), w * v);
                            }
                            acc.add(dofs.vel(j, d), dofs.pre(i), w * vi * un_jd);
                            acc.add(dofs.pre(j), dofs.vel(i, d), -w * vj * vi * n[d]);
                        }
                    }
                }
            }

            const LineRule drule = boundary_rule(seg, data_order(k));
            for (std::size_t q = 0; q < drule.points.size(); ++q) {
                const double w = drule.weights[q];
                const Vec2 x = drule.points[q];
                const ShapeEval se = shape_eval(k, quad.to_reference(x), quad);
                const Vec2 gd = config.g_dirichlet(x);
                const double gn_val = gd.dot(n);
                const Vec2 pt_g = pt * gd;
                const Vec2 beta = config.beta(x);
                double bn = 0.0;
                const bool inflow = inflow_point(config, beta, n, &bn);
                for (int j = 0; j < dofs.n; ++j) {
                    const double vj = se.value[j];
                    for (int d = 0; d < 2; ++d) {
                        const Vec2 en_jd = strain_flux(se.grad[j], d, n);
                        double v = -zeta * nu * gd.dot(en_jd);
                        v += (pen_nn + pen_phi) * gn_val * vj * n[d];
                        v += pen_nt * pt_g[d] * vj;
                        if (inflow) v -= bn * gd[d] * vj;
                        acc.add_rhs(dofs.vel(j, d), w * v);
                    }
                    acc.add_rhs(dofs.pre(j), -w * vj * gn_val);
                }
            }
        }
    }
}

namespace {

// One signed jump row over the two sides of a facet: entries are
// (global dof, value); the accumulated contribution is w * row^T row.
struct JumpRow {
    int n = 0;
    int dof[36];
    double val[36];
    void push(int d, double v) {
        dof[n] = d;
        val[n] = v;
        ++n;
    }
};

void add_rank_one(SystemAccumulator& acc, const JumpRow& row, double w) {
    for (int a = 0; a < row.n; ++a)
        for (int b = 0; b < row.n; ++b)
            acc.add(row.dof[a], row.dof[b], w * row.val[a] * row.val[b]);
}

// Hessian-vector product from packed (xx, xy, yy).
inline Vec2 hess_dot(const Eigen::Vector3d& hess, const Vec2& n) {
    return Vec2(hess[0] * n.x() + hess[1] * n.y(), hess[1] * n.x() + hess[2] * n.y());
}

struct FacetSideEval {
    ShapeEval se[2];
    LocalDofs dofs[2];
};

FacetSideEval eval_sides(const FunctionSpace& space, const FacetTrace& trace, double t) {
    FacetSideEval fe;
    for (int s = 0; s < 2; ++s) {
        fe.se[s] = shape_eval(space.order, trace.side_ref(s, t), trace.elem[s]);
        fe.dofs[s].n = space.n_local();
        for (int l = 0; l < space.n_local(); ++l) fe.dofs[s].scalar[l] = trace.scalars[s][l];
    }
    return fe;
}

} // namespace

void assemble_cip(const OseenConfig& config, const StabilizationScalings& scalings,
                  const ActiveMesh& mesh, const FunctionSpace& space, SystemAccumulator& acc) {
    const int k = space.order;
    const double h = mesh.parent.h;
    const SegmentRule rule = gauss_legendre(facet_order(k) / 2 + 1);

    // beta_h: nodal interpolant of the advective field
    const Eigen::VectorXd bh1 =
        interpolate_scalar(space, [&](const Vec2& p) { return config.beta(p).x(); });
    const Eigen::VectorXd bh2 =
        interpolate_scalar(space, [&](const Vec2& p) { return config.beta(p).y(); });

    for (std::size_t f = 0; f < mesh.interior_facets.size(); ++f) {
        const Facet& facet = mesh.interior_facets[f];
        const FacetTrace trace = make_facet_trace(mesh, space, facet);
        const Vec2 nf = facet.normal;
        const double half_len = 0.5 * (facet.pb - facet.pa).norm();

        const double w_beta = config.gamma_beta * scalings.phi_beta_facet[f] * h;
        const double w_div = config.gamma_u * scalings.phi_u_facet[f] * h;
        const double w_p = config.gamma_p * scalings.phi_p_facet[f] * h;
        const double phi_beta_bar = scalings.beta_max_facet[f] * scalings.beta_max_facet[f] *
                                    scalings.phi_beta_facet[f];
        const double w_beta_bar = config.gamma_beta * phi_beta_bar * h;

        for (std::size_t q = 0; q < rule.points.size(); ++q) {
            const double t = rule.points[q];
            const double w = rule.weights[q] * half_len;
            const FacetSideEval fe = eval_sides(space, trace, t);

            Vec2 beta_h = Vec2::Zero();
            for (int l = 0; l < fe.dofs[0].n; ++l) {
                const int c = fe.dofs[0].scalar[l];
                beta_h += fe.se[0].value[l] * Vec2(bh1[c], bh2[c]);
            }

            if (config.simplified_beta_stab) {
                // sbar_beta: plain normal-gradient jumps per velocity component
                for (int c = 0; c < 2; ++c) {
                    JumpRow row;
                    for (int s = 0; s < 2; ++s) {
                        const double sign = s == 0 ? 1.0 : -1.0;
                        for (int l = 0; l < fe.dofs[s].n; ++l)
                            row.push(fe.dofs[s].vel(l, c), sign * nf.dot(fe.se[s].grad[l]));
                    }
                    add_rank_one(acc, row, w * w_beta_bar);
                }
            } else {
                // s_beta: jumps of beta_h . grad u, per component
                for (int c = 0; c < 2; ++c) {
                    JumpRow row;
                    for (int s = 0; s < 2; ++s) {
                        const double sign = s == 0 ? 1.0 : -1.0;
                        for (int l = 0; l < fe.dofs[s].n; ++l)
                            row.push(fe.dofs[s].vel(l, c), sign * beta_h.dot(fe.se[s].grad[l]));
                    }
                    add_rank_one(acc, row, w * w_beta);
                }
                // s_u: jumps of div u
                JumpRow row_div;
                for (int s = 0; s < 2; ++s) {
                    const double sign = s == 0 ? 1.0 : -1.0;
                    for (int l = 0; l < fe.dofs[s].n; ++l)
                        for (int c = 0; c < 2; ++c)
                            row_div.push(fe.dofs[s].vel(l, c), sign * fe.se[s].grad[l][c]);
                }
                add_rank_one(acc, row_div, w * w_div);
            }

            // s_p: jumps of n_F . grad p
            JumpRow row_p;
            for (int s = 0; s < 2; ++s) {
                const double sign = s == 0 ? 1.0 : -1.0;
                for (int l = 0; l < fe.dofs[s].n; ++l)
                    row_p.push(fe.dofs[s].pre(l), sign * nf.dot(fe.se[s].grad[l]));
            }
            add_rank_one(acc, row_p, w * w_p);
        }
    }
}

void assemble_ghost_penalty(const OseenConfig& config, const StabilizationScalings& scalings,
                            const ActiveMesh& mesh, const FunctionSpace& space,
                            SystemAccumulator& acc) {
    const int k = space.order;
    const double h = mesh.parent.h;
    const SegmentRule rule = gauss_legendre(facet_order(k) / 2 + 1);

    const Eigen::VectorXd bh1 =
        interpolate_scalar(space, [&](const Vec2& p) { return config.beta(p).x(); });
    const Eigen::VectorXd bh2 =
        interpolate_scalar(space, [&](const Vec2& p) { return config.beta(p).y(); });

    auto order_scale = [&](int deriv_order) {
        return deriv_order == 2 ? config.second_order_gp_scale : 1.0;
    };

    for (int fidx : mesh.ghost_facets) {
        const Facet& facet = mesh.interior_facets[fidx];
        const FacetTrace trace = make_facet_trace(mesh, space, facet);
        const Vec2 nf = facet.normal;
        const double half_len = 0.5 * (facet.pb - facet.pa).norm();

        const double phi_beta_f = scalings.phi_beta_facet[fidx];
        const double phi_u_f = scalings.phi_u_facet[fidx];
        const double phi_p_f = scalings.phi_p_facet[fidx];
        const double phi_beta_bar = scalings.beta_max_facet[fidx] * scalings.beta_max_facet[fidx] *
                                    phi_beta_f;

        for (std::size_t q = 0; q < rule.points.size(); ++q) {
            const double t = rule.points[q];
            const double w = rule.weights[q] * half_len;
            const FacetSideEval fe = eval_sides(space, trace, t);

            Vec2 beta_h = Vec2::Zero();
            for (int l = 0; l < fe.dofs[0].n; ++l) {
                const int c = fe.dofs[0].scalar[l];
                beta_h += fe.se[0].value[l] * Vec2(bh1[c], bh2[c]);
            }

            // g_sigma + g_nu (+ gbar_beta when simplified): jumps of j-th
            // normal derivatives, per velocity component
            for (int j = 1; j <= k; ++j) {
                double weight = config.gamma_sigma * config.sigma * std::pow(h, 2 * j + 1) +
                                config.gamma_nu * config.nu * std::pow(h, 2 * j - 1);
                if (config.simplified_beta_stab)
                    weight += config.gamma_beta * phi_beta_bar * std::pow(h, 2 * j - 1);
                weight *= order_scale(j);
                for (int c = 0; c < 2; ++c) {
                    JumpRow row;
                    for (int s = 0; s < 2; ++s) {
                        const double sign = s == 0 ? 1.0 : -1.0;
                        for (int l = 0; l < fe.dofs[s].n; ++l)
                            row.push(fe.dofs[s].vel(l, c),
                                     sign * directional_derivative(fe.se[s], l, j, nf));
                    }
                    add_rank_one(acc, row, w * weight);
                }
            }

            if (!config.simplified_beta_stab) {
                // g_beta / g_u: jumps of beta_h.grad and div of the j-th
                // normal derivative, j = 0..k-1
                for (int j = 0; j <= k - 1; ++j) {
                    const double scale = order_scale(j + 1);
                    const double wb =
                        config.gamma_beta * phi_beta_f * std::pow(h, 2 * j + 1) * scale;
                    const double wu = config.gamma_u * phi_u_f * std::pow(h, 2 * j + 1) * scale;

                    for (int c = 0; c < 2; ++c) {
                        JumpRow row;
                        for (int s = 0; s < 2; ++s) {
                            const double sign = s == 0 ? 1.0 : -1.0;
                            for (int l = 0; l < fe.dofs[s].n; ++l) {
                                const double v = j == 0
                                                     ? beta_h.dot(fe.se[s].grad[l])
                                                     : beta_h.dot(hess_dot(fe.se[s].hess[l], nf));
                                row.push(fe.dofs[s].vel(l, c), sign * v);
                            }
                        }
                        add_rank_one(acc, row, w * wb);
                    }
                    JumpRow row_div;
                    for (int s = 0; s < 2; ++s) {
                        const double sign = s == 0 ? 1.0 : -1.0;
                        for (int l = 0; l < fe.dofs[s].n; ++l) {
                            const Vec2 g = j == 0 ? fe.se[s].grad[l] : hess_dot(fe.se[s].hess[l], nf);
                            for (int c = 0; c < 2; ++c) row_div.push(fe.dofs[s].vel(l, c), sign * g[c]);
                        }
                    }
                    add_rank_one(acc, row_div, w * wu);
                }
            }

            // g_p: jumps of j-th normal derivative of p
            for (int j = 1; j <= k; ++j) {
                const double wp =
                    config.gamma_p * phi_p_f * std::pow(h, 2 * j - 1) * order_scale(j);
                JumpRow row;
                for (int s = 0; s < 2; ++s) {
                    const double sign = s == 0 ? 1.0 : -1.0;
                    for (int l = 0; l < fe.dofs[s].n; ++l)
                        row.push(fe.dofs[s].pre(l),
                                 sign * directional_derivative(fe.se[s], l, j, nf));
                }
                add_rank_one(acc, row, w * wp);
            }
        }
    }
}

void assemble_pressure_mean(const ActiveMesh& mesh, const std::vector<CutCell>& cells,
                            const FunctionSpace& space, SystemAccumulator& acc) {
    const int mult = 3 * space.n_scalar_dofs;
    for (int a = 0; a < mesh.n_active(); ++a) {
        const int e = mesh.active_elements[a];
        const ElementQuad quad = mesh.parent.element_quad(e);
        const LocalDofs dofs = gather(space, e);
        const VolumeRule rule = cut_volume_rule(cells[a], 2 * space.order, quad);
        for (std::size_t q = 0; q < rule.weights.size(); ++q) {
            const ShapeEval se = shape_eval(space.order, rule.points_ref[q], quad);
            for (int l = 0; l < dofs.n; ++l) {
                const double v = rule.weights[q] * se.value[l];
                acc.add(mult, dofs.pre(l), v);
                acc.add(dofs.pre(l), mult, v);
            }
        }
    }
}

AssembledSystem assemble_system(const OseenConfig& config, const ActiveMesh& mesh,
                                const std::vector<CutCell>& cells, const FunctionSpace& space) {
    const StabilizationScalings scalings = compute_scalings(config, mesh);
    SystemAccumulator acc(space.n_scalar_dofs);
    assemble_bulk(config, mesh, cells, space, acc);
    if (config.bc_mode == BcMode::nitsche_gnbc)
        assemble_nitsche_gnbc(config, mesh, cells, space, scalings, acc);
    else
        assemble_substitution(config, mesh, cells, space, scalings, acc);
    assemble_cip(config, scalings, mesh, space, acc);
    assemble_ghost_penalty(config, scalings, mesh, space, acc);
    assemble_pressure_mean(mesh, cells, space, acc);
    return acc.finish();
}

} // namespace cutflow
