#include "cutflow/study.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace cutflow {

const char* to_string(StudyKind k) {
    switch (k) {
    case StudyKind::single:
        return "single";
    case StudyKind::converge:
        return "converge";
    case StudyKind::sweep_gamma:
        return "sweep_gamma";
    case StudyKind::sweep_eps:
        return "sweep_eps";
    }
    return "unknown";
}

std::string format_eps(double eps) {
    if (std::isinf(eps)) return "inf";
    std::ostringstream os;
    os.precision(12);
    os << eps;
    return os.str();
}

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

const char* mode_name(BcMode m) {
    return m == BcMode::nitsche_gnbc ? "nitsche" : "substitution";
}

} // namespace

CaseResult run_case(const StudySpec& spec, int n, double eps, double inv_gamma) {
    CaseResult res;
    res.n = n;
    res.eps = eps;
    res.inv_gamma = inv_gamma;

    const BackgroundMesh bg = build_background_mesh(n, spec.half_extent, spec.theta);
    const DomainPolygon box = make_box(1.0);
    const ActiveMesh mesh = extract_active_mesh(bg, box);
    const auto cells = build_cut_cells(mesh, box);
    const FunctionSpace space = make_space(mesh, spec.order);
    res.h = bg.h;

    const ExactSolution exact = exact_fields(spec.nu, spec.sigma);
    OseenConfig cfg;
    cfg.nu = spec.nu;
    cfg.sigma = spec.sigma;
    cfg.slip_length = eps;
    cfg.gamma_n = cfg.gamma_t = 1.0 / inv_gamma;
    cfg.zeta_u = spec.zeta;
    cfg.bc_mode = spec.mode;
    cfg.simplified_beta_stab = spec.order == 2;
    cfg.set_regime(spec.experimental_regime);
    apply_exact_data(cfg, exact);

    Eigen::VectorXd solution = Eigen::VectorXd::Zero(space.total_dofs());
    try {
        const AssembledSystem system = assemble_system(cfg, mesh, cells, space);
        auto [x, report] = solve(system);
        solution = x;
        res.report = report;
        res.status = to_string(report.status);
    } catch (const std::exception& e) {
        res.status = "invalid";
        (void)e;
    }
    res.errors = compute_errors(solution, exact, mesh, cells, space);
    return res;
}

namespace {

void append_row(std::ostringstream& os, const StudySpec& spec, const CaseResult& r,
                const char* status_override = nullptr) {
    os << to_string(spec.study) << ',' << spec.order << ',' << r.n << ',' << fmt(r.h) << ','
       << fmt(spec.theta) << ',' << format_eps(r.eps) << ',' << fmt(r.inv_gamma) << ','
       << (spec.zeta >= 0 ? "+1" : "-1") << ',' << mode_name(spec.mode) << ','
       << r.errors.dofs << ',' << (status_override ? status_override : r.status.c_str()) << ','
       << fmt(r.errors.l2_u_bulk) << ',' << fmt(r.errors.l2_gradu_bulk) << ','
       << fmt(r.errors.l2_p_bulk) << ',' << fmt(r.errors.l2_u_gamma) << ','
       << fmt(r.errors.l2_gradu_gamma) << ',' << fmt(r.errors.l2_p_gamma) << '\n';
}

std::vector<double> norms_of(const ErrorReport& e) {
    return {e.l2_u_bulk, e.l2_gradu_bulk, e.l2_p_bulk,
            e.l2_u_gamma, e.l2_gradu_gamma, e.l2_p_gamma};
}

void append_rate_rows(std::ostringstream& os, const StudySpec& spec,
                      const std::vector<CaseResult>& ladder) {
    for (std::size_t i = 0; i + 1 < ladder.size(); ++i) {
        const auto e0 = norms_of(ladder[i].errors);
        const auto e1 = norms_of(ladder[i + 1].errors);
        const double lh = std::log(ladder[i].h / ladder[i + 1].h);
        CaseResult rate = ladder[i + 1];
        double* fields[6] = {&rate.errors.l2_u_bulk,     &rate.errors.l2_gradu_bulk,
                             &rate.errors.l2_p_bulk,     &rate.errors.l2_u_gamma,
                             &rate.errors.l2_gradu_gamma, &rate.errors.l2_p_gamma};
        for (int m = 0; m < 6; ++m)
            *fields[m] = (e0[m] > 0.0 && e1[m] > 0.0) ? std::log(e0[m] / e1[m]) / lh : 0.0;
        rate.errors.dofs = 0;
        append_row(os, spec, rate, "rate");
    }
}

struct PlotSeries {
    std::string label;
    std::vector<std::pair<double, double>> points; // (x, y), plotted log-log
};

void write_svg(const std::string& path, const std::string& xlabel,
               const std::vector<PlotSeries>& series) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);

    const double width = 760, height = 520;
    const double ml = 70, mr = 170, mt = 30, mb = 55;
    double xmin = kInf, xmax = -kInf, ymin = kInf, ymax = -kInf;
    for (const auto& s : series) {
        for (auto [x, y] : s.points) {
            if (x <= 0.0 || y <= 0.0) continue;
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    }
    if (!(xmin < xmax)) xmax = xmin * 10.0;
    if (!(ymin < ymax)) ymax = ymin * 10.0;
    const double lx0 = std::log10(xmin), lx1 = std::log10(xmax);
    const double ly0 = std::floor(std::log10(ymin)), ly1 = std::ceil(std::log10(ymax));
    auto px = [&](double x) {
        return ml + (std::log10(x) - lx0) / (lx1 - lx0) * (width - ml - mr);
    };
    auto py = [&](double y) {
        return height - mb - (std::log10(y) - ly0) / (ly1 - ly0) * (height - mt - mb);
    };

    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c",
                                   "#9467bd", "#ff7f0e", "#17becf"};
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height
        << "'>\n<rect width='100%' height='100%' fill='white'/>\n";
    for (int d = static_cast<int>(ly0); d <= static_cast<int>(ly1); ++d) {
        const double y = py(std::pow(10.0, d));
        out << "<line x1='" << ml << "' y1='" << y << "' x2='" << width - mr << "' y2='" << y
            << "' stroke='#dddddd'/>\n<text x='" << ml - 8 << "' y='" << y + 4
            << "' font-size='11' text-anchor='end'>1e" << d << "</text>\n";
    }
    out << "<line x1='" << ml << "' y1='" << height - mb << "' x2='" << width - mr << "' y2='"
        << height - mb << "' stroke='black'/>\n<line x1='" << ml << "' y1='" << mt << "' x2='"
        << ml << "' y2='" << height - mb << "' stroke='black'/>\n";
    out << "<text x='" << 0.5 * (ml + width - mr) << "' y='" << height - 18
        << "' font-size='13' text-anchor='middle'>" << xlabel << " (log)</text>\n";
    int ci = 0;
    for (const auto& s : series) {
        const char* col = colors[ci % 6];
        out << "<polyline fill='none' stroke='" << col << "' stroke-width='1.6' points='";
        for (auto [x, y] : s.points)
            if (x > 0.0 && y > 0.0) out << px(x) << "," << py(y) << " ";
        out << "'/>\n";
        for (auto [x, y] : s.points)
            if (x > 0.0 && y > 0.0)
                out << "<circle cx='" << px(x) << "' cy='" << py(y) << "' r='2.5' fill='" << col
                    << "'/>\n";
        out << "<text x='" << width - mr + 10 << "' y='" << mt + 16 * ci + 10
            << "' font-size='12' fill='" << col << "'>" << s.label << "</text>\n";
        ++ci;
    }
    out << "</svg>\n";
}

void add_norm_series(std::vector<PlotSeries>& series, const std::string& suffix,
                     const std::vector<CaseResult>& results, double (*xsel)(const CaseResult&)) {
    static const char* names[] = {"u_L2", "gradu_L2", "p_L2", "u_Gamma", "gradu_Gamma", "p_Gamma"};
    for (int m = 0; m < 6; ++m) {
        PlotSeries s;
        s.label = std::string(names[m]) + suffix;
        for (const auto& r : results) {
            const auto e = norms_of(r.errors);
            s.points.emplace_back(xsel(r), e[m]);
        }
        series.push_back(std::move(s));
    }
}

} // namespace

std::string study_csv(const StudySpec& spec) {
    std::ostringstream os;
    os << "study,k,N,h,theta,eps,inv_gamma,zeta,mode,dofs,status,"
          "err_u,err_gradu,err_p,err_u_gamma,err_gradu_gamma,err_p_gamma\n";

    std::vector<PlotSeries> plot;
    switch (spec.study) {
    case StudyKind::single: {
        const CaseResult r =
            run_case(spec, spec.mesh_sizes.front(), spec.eps_list.front(),
                     spec.inv_gamma_list.front());
        append_row(os, spec, r);
        break;
    }
    case StudyKind::converge: {
        for (double ig : spec.inv_gamma_list) {
            for (double eps : spec.eps_list) {
                std::vector<CaseResult> ladder;
                for (int n : spec.mesh_sizes) {
                    ladder.push_back(run_case(spec, n, eps, ig));
                    append_row(os, spec, ladder.back());
                }
                append_rate_rows(os, spec, ladder);
                if (!spec.out_svg.empty())
                    add_norm_series(plot, " eps=" + format_eps(eps), ladder,
                                    [](const CaseResult& r) { return r.h; });
            }
        }
        break;
    }
    case StudyKind::sweep_gamma: {
        const int n = spec.mesh_sizes.front();
        for (double eps : spec.eps_list) {
            std::vector<CaseResult> sweep;
            for (double ig : spec.inv_gamma_list) {
                sweep.push_back(run_case(spec, n, eps, ig));
                append_row(os, spec, sweep.back());
            }
            if (!spec.out_svg.empty())
                add_norm_series(plot, " eps=" + format_eps(eps), sweep,
                                [](const CaseResult& r) { return r.inv_gamma; });
        }
        break;
    }
    case StudyKind::sweep_eps: {
        const int n = spec.mesh_sizes.front();
        for (double ig : spec.inv_gamma_list) {
            std::vector<CaseResult> sweep;
            for (double eps : spec.eps_list) {
                sweep.push_back(run_case(spec, n, eps, ig));
                append_row(os, spec, sweep.back());
            }
            if (!spec.out_svg.empty())
                add_norm_series(plot, "", sweep, [](const CaseResult& r) {
                    return std::isinf(r.eps) ? 1e16 : r.eps;
                });
        }
        break;
    }
    }

    if (!spec.out_svg.empty()) {
        const char* xlabel = spec.study == StudyKind::converge
                                 ? "h"
                                 : (spec.study == StudyKind::sweep_gamma ? "1/gamma" : "eps");
        write_svg(spec.out_svg, xlabel, plot);
    }
    return os.str();
}

void run_study(const StudySpec& spec) {
    const std::string csv = study_csv(spec);
    if (spec.out_csv.empty()) {
        std::cout << csv;
        return;
    }
    std::ofstream out(spec.out_csv);
    if (!out) throw IoError("cannot write " + spec.out_csv);
    out << csv;
    if (!out.good()) throw IoError("write failed for " + spec.out_csv);
}

} // namespace cutflow
