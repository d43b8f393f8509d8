// Command-line driver: single runs, mesh-refinement ladders and parameter
// sweeps for the cut Oseen solver. Results go to CSV (and optionally SVG).

#include "cutflow/study.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using cutflow::StudySpec;

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) out.push_back(tok);
    }
    return out;
}

double parse_eps_token(const std::string& tok) {
    if (tok == "inf" || tok == "INF" || tok == "Inf") return cutflow::kInf;
    return std::stod(tok);
}

struct Options {
    int order = 1;
    std::string n_list = "8,16,32,64";
    double theta = 0.25 * M_PI;
    std::string eps = "1";
    std::string inv_gamma = "10";
    int zeta = 1;
    std::string mode = "nitsche";
    std::string regime = "experimental";
    std::string out;
    std::string svg;
    std::string config_file;
    double nu = 1.0;
    double sigma = 1.0;
    double half_extent = 1.6;
};

void add_common(CLI::App* cmd, Options& o) {
    cmd->add_option("--order", o.order, "basis order k")->check(CLI::IsMember({1, 2}));
    cmd->add_option("--n", o.n_list, "elements per side (int or comma list)");
    cmd->add_option("--theta", o.theta, "mesh rotation angle [rad]");
    cmd->add_option("--eps", o.eps, "slip length (float, 'inf' or comma list)");
    cmd->add_option("--inv-gamma", o.inv_gamma, "1/gamma Nitsche penalty (float or list)");
    cmd->add_option("--zeta", o.zeta, "adjoint flag, +1 or -1")->check(CLI::IsMember({1, -1}));
    cmd->add_option("--mode", o.mode, "boundary mode")
        ->check(CLI::IsMember({"nitsche", "substitution"}));
    cmd->add_option("--regime", o.regime, "phi_u weights")
        ->check(CLI::IsMember({"experimental", "analysis"}));
    cmd->add_option("--nu", o.nu, "viscosity");
    cmd->add_option("--sigma", o.sigma, "reaction coefficient");
    cmd->add_option("--half-extent", o.half_extent, "background mesh half extent");
    cmd->add_option("--out", o.out, "CSV output path (default stdout)");
    cmd->add_option("--svg", o.svg, "SVG plot output path");
    cmd->add_option("--config", o.config_file, "key = value file overriding defaults");
}

// Plain-text "key = value" lines; '#' starts a comment. CLI flags take
// precedence, so the file is applied before parsing argv.
void apply_config_file(const std::string& path, Options& o) {
    std::ifstream in(path);
    if (!in) throw cutflow::IoError("cannot read config file " + path);
    std::string line;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty()) continue;
        if (key == "order") o.order = std::stoi(val);
        else if (key == "n") o.n_list = val;
        else if (key == "theta") o.theta = std::stod(val);
        else if (key == "eps") o.eps = val;
        else if (key == "inv_gamma") o.inv_gamma = val;
        else if (key == "zeta") o.zeta = std::stoi(val);
        else if (key == "mode") o.mode = val;
        else if (key == "regime") o.regime = val;
        else if (key == "nu") o.nu = std::stod(val);
        else if (key == "sigma") o.sigma = std::stod(val);
        else if (key == "half_extent") o.half_extent = std::stod(val);
        else if (key == "out") o.out = val;
        else if (key == "svg") o.svg = val;
        else throw cutflow::IoError("unknown config key '" + key + "' in " + path);
    }
}

StudySpec to_spec(const Options& o, cutflow::StudyKind kind) {
    StudySpec spec;
    spec.study = kind;
    spec.order = o.order;
    spec.mesh_sizes.clear();
    for (const auto& tok : split_list(o.n_list)) spec.mesh_sizes.push_back(std::stoi(tok));
    if (spec.mesh_sizes.empty()) throw CLI::ValidationError("--n", "empty mesh list");
    spec.theta = o.theta;
    spec.eps_list.clear();
    for (const auto& tok : split_list(o.eps)) spec.eps_list.push_back(parse_eps_token(tok));
    if (spec.eps_list.empty()) throw CLI::ValidationError("--eps", "empty eps list");
    spec.inv_gamma_list.clear();
    for (const auto& tok : split_list(o.inv_gamma))
        spec.inv_gamma_list.push_back(std::stod(tok));
    if (spec.inv_gamma_list.empty())
        throw CLI::ValidationError("--inv-gamma", "empty gamma list");
    spec.zeta = o.zeta;
    spec.mode = o.mode == "substitution" ? cutflow::BcMode::substitution
                                         : cutflow::BcMode::nitsche_gnbc;
    spec.experimental_regime = o.regime == "experimental";
    spec.nu = o.nu;
    spec.sigma = o.sigma;
    spec.half_extent = o.half_extent;
    spec.out_csv = o.out;
    spec.out_svg = o.svg;
    return spec;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cut finite element Oseen solver with Navier slip boundary conditions"};
    app.require_subcommand(1);

    Options opt;
    auto* cmd_run = app.add_subcommand("run", "single solve at the first N/eps/gamma");
    auto* cmd_conv = app.add_subcommand("converge", "mesh refinement study with rates");
    auto* cmd_gamma = app.add_subcommand("sweep-gamma", "Nitsche parameter sweep at fixed N");
    auto* cmd_eps = app.add_subcommand("sweep-eps", "slip length sweep at fixed N");
    for (auto* c : {cmd_run, cmd_conv, cmd_gamma, cmd_eps}) add_common(c, opt);

    // first pass: pick up --config so flags can override its values
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }
    try {
        if (!opt.config_file.empty()) {
            Options base;
            apply_config_file(opt.config_file, base);
            std::vector<std::string> args(argv + 1, argv + argc);
            opt = base;
            // re-parse argv on top of the config values
            CLI::App app2{""};
            app2.require_subcommand(1);
            auto* c1 = app2.add_subcommand("run");
            auto* c2 = app2.add_subcommand("converge");
            auto* c3 = app2.add_subcommand("sweep-gamma");
            auto* c4 = app2.add_subcommand("sweep-eps");
            for (auto* c : {c1, c2, c3, c4}) add_common(c, opt);
            app2.parse(argc, argv);
        }

        cutflow::StudyKind kind = cutflow::StudyKind::single;
        if (cmd_conv->parsed()) kind = cutflow::StudyKind::converge;
        else if (cmd_gamma->parsed()) kind = cutflow::StudyKind::sweep_gamma;
        else if (cmd_eps->parsed()) kind = cutflow::StudyKind::sweep_eps;

        cutflow::run_study(to_spec(opt, kind));
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
