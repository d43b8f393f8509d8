#pragma once

#include "cutflow/oseen.hpp"
#include "cutflow/solver.hpp"
#include "cutflow/verification.hpp"

#include <string>
#include <vector>

namespace cutflow {

enum class StudyKind { single, converge, sweep_gamma, sweep_eps };

const char* to_string(StudyKind k);

/// One study: a single run, a mesh-refinement ladder, a Nitsche-parameter
/// sweep or a slip-length sweep. Sweeps run at the first entry of
/// `mesh_sizes`; refinement ladders use the whole list.
struct StudySpec {
    StudyKind study = StudyKind::converge;
    int order = 1;
    std::vector<int> mesh_sizes = {8, 16, 32, 64};
    double theta = 0.25 * 3.14159265358979323846;
    std::vector<double> eps_list = {1.0};       // kInf allowed
    std::vector<double> inv_gamma_list = {10.0}; // 1/gamma^n = 1/gamma^t
    double zeta = 1.0;
    BcMode mode = BcMode::nitsche_gnbc;
    bool experimental_regime = true;
    double nu = 1.0;
    double sigma = 1.0;
    double half_extent = 1.6;
    std::string out_csv; // empty: stdout
    std::string out_svg; // empty: no plot
};

struct CaseResult {
    int n = 0;
    double h = 0.0;
    double eps = 0.0;
    double inv_gamma = 0.0;
    std::string status;
    ErrorReport errors;
    SolveReport report;
};

/// Assemble + solve + measure one sweep point. Failures are recorded in
/// `status`, never thrown.
CaseResult run_case(const StudySpec& spec, int n, double eps, double inv_gamma);

/// CSV content for a study (fixed column order, deterministic).
std::string study_csv(const StudySpec& spec);

/// Runs the study and writes CSV (and the optional SVG). Throws IoError on
/// unwritable output paths.
void run_study(const StudySpec& spec);

std::string format_eps(double eps);

} // namespace cutflow
