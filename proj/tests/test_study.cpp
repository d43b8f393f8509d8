#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cutflow/study.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

using namespace cutflow;

namespace {

std::vector<std::string> lines_of(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string line;
    while (std::getline(is, line)) out.push_back(line);
    return out;
}

StudySpec small_spec() {
    StudySpec spec;
    spec.study = StudyKind::converge;
    spec.order = 1;
    spec.mesh_sizes = {4, 6, 8, 10};
    spec.eps_list = {1.0};
    return spec;
}

} // namespace

TEST_CASE("converge study emits data rows plus pairwise rate rows") {
    const std::string csv = study_csv(small_spec());
    const auto lines = lines_of(csv);
    REQUIRE(lines.size() == 1 + 4 + 3); // header + 4 runs + 3 rates
    CHECK(lines[0] ==
          "study,k,N,h,theta,eps,inv_gamma,zeta,mode,dofs,status,"
          "err_u,err_gradu,err_p,err_u_gamma,err_gradu_gamma,err_p_gamma");
    for (int i = 1; i <= 4; ++i) CHECK(lines[i].find(",converged,") != std::string::npos);
    for (int i = 5; i <= 7; ++i) CHECK(lines[i].find(",rate,") != std::string::npos);
}

TEST_CASE("csv output is bit-reproducible") {
    const StudySpec spec = small_spec();
    CHECK(study_csv(spec) == study_csv(spec));
}

TEST_CASE("eps sweep covers the full slip range") {
    StudySpec spec;
    spec.study = StudyKind::sweep_eps;
    spec.mesh_sizes = {8};
    spec.eps_list = {1e-10, 1.0, 1e10};
    const auto lines = lines_of(study_csv(spec));
    REQUIRE(lines.size() == 4);
    for (int i = 1; i <= 3; ++i) CHECK(lines[i].find(",converged,") != std::string::npos);
}

TEST_CASE("eps token formatting includes inf") {
    CHECK(format_eps(kInf) == "inf");
    CHECK(format_eps(1e-10) == "1e-10");
    StudySpec spec;
    spec.study = StudyKind::sweep_eps;
    spec.mesh_sizes = {4};
    spec.eps_list = {kInf};
    const auto lines = lines_of(study_csv(spec));
    CHECK(lines[1].find(",inf,") != std::string::npos);
}

TEST_CASE("substitution mode records failed solves without aborting") {
    StudySpec spec;
    spec.study = StudyKind::sweep_eps;
    spec.mode = BcMode::substitution;
    spec.mesh_sizes = {8};
    spec.eps_list = {1.0, 1e-9, 0.0}; // eps = 0 is invalid for substitution
    const auto lines = lines_of(study_csv(spec));
    REQUIRE(lines.size() == 4);
    CHECK(lines[1].find(",converged,") != std::string::npos);
    CHECK(lines[3].find(",invalid,") != std::string::npos);
}

TEST_CASE("gamma sweep emits one row per gamma") {
    StudySpec spec;
    spec.study = StudyKind::sweep_gamma;
    spec.mesh_sizes = {6};
    spec.inv_gamma_list = {1.0, 10.0, 100.0};
    const auto lines = lines_of(study_csv(spec));
    REQUIRE(lines.size() == 4);
}

TEST_CASE("unwritable csv path raises IoError") {
    StudySpec spec = small_spec();
    spec.mesh_sizes = {4};
    spec.out_csv = "/nonexistent_dir/out.csv";
    CHECK_THROWS_AS(run_study(spec), IoError);
}

TEST_CASE("svg plot is written next to the csv") {
    StudySpec spec = small_spec();
    spec.mesh_sizes = {4, 6};
    spec.out_csv = "study_smoke.csv";
    spec.out_svg = "study_smoke.svg";
    run_study(spec);
    std::ifstream svg(spec.out_svg);
    REQUIRE(svg.good());
    std::string head;
    std::getline(svg, head);
    CHECK(head.rfind("<svg", 0) == 0);
    std::remove(spec.out_csv.c_str());
    std::remove(spec.out_svg.c_str());
}
