#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Dense>

#include "igac/catalog.hpp"
#include "igac/csvio.hpp"
#include "igac/errors.hpp"
#include "igac/manifold.hpp"
#include "igac/runner.hpp"
#include "igac/scenario.hpp"

namespace fs = std::filesystem;
using namespace igac;

namespace {

std::vector<double> parse_number_list(const std::string& text,
                                      const std::string& what) {
    std::vector<double> out;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        size_t a = item.find_first_not_of(" \t");
        size_t b = item.find_last_not_of(" \t");
        if (a == std::string::npos)
            throw ValidationError(what + ": empty entry in '" + text + "'");
        item = item.substr(a, b - a + 1);
        char* end = nullptr;
        double v = std::strtod(item.c_str(), &end);
        if (end != item.c_str() + item.size())
            throw ValidationError(what + ": '" + item + "' is not a number");
        out.push_back(v);
    }
    if (out.empty()) throw ValidationError(what + ": no values given");
    return out;
}

std::map<std::string, double> parse_kv_list(const std::string& text) {
    std::map<std::string, double> out;
    if (text.empty()) return out;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        size_t eq = item.find('=');
        if (eq == std::string::npos)
            throw ValidationError("--params entries look like key=value,"
                                  " got '" + item + "'");
        std::string key = item.substr(0, eq);
        std::string val = item.substr(eq + 1);
        auto trim = [](std::string s) {
            size_t a = s.find_first_not_of(" \t");
            if (a == std::string::npos) return std::string();
            size_t b = s.find_last_not_of(" \t");
            return s.substr(a, b - a + 1);
        };
        key = trim(key);
        val = trim(val);
        if (key.empty())
            throw ValidationError("--params entry with empty key");
        char* end = nullptr;
        double v = std::strtod(val.c_str(), &end);
        if (val.empty() || end != val.c_str() + val.size())
            throw ValidationError("--params " + key + ": '" + val +
                                  "' is not a number");
        if (out.count(key))
            throw ValidationError("--params key '" + key + "' repeated");
        out[key] = v;
    }
    return out;
}

void print_matrix(const std::string& label, const Eigen::MatrixXd& g) {
    std::cout << label << "\n";
    for (int i = 0; i < g.rows(); ++i) {
        for (int j = 0; j < g.cols(); ++j)
            std::cout << (j ? " " : "  ") << format_double(g(i, j));
        std::cout << "\n";
    }
}

int cmd_run(const std::string& path, const std::string& out_dir, int workers) {
    std::vector<RunReport> reports;
    if (fs::is_directory(path)) {
        reports = run_directory(path, out_dir, workers);
    } else {
        reports.push_back(run(load_scenario(path), out_dir));
    }
    bool all_ok = true;
    for (const auto& r : reports) {
        std::cout << summarize(r);
        all_ok = all_ok && r.ok();
    }
    std::cout << (all_ok ? "all scenarios passed" : "failures present")
              << " (" << reports.size() << " scenario"
              << (reports.size() == 1 ? "" : "s") << ")\n";
    return all_ok ? 0 : 1;
}

int cmd_catalog_list() {
    auto entries = list_models();
    size_t wname = 4, wdim = 3, wparams = 10;
    for (const auto& e : entries) {
        wname = std::max(wname, e.name.size());
        wdim = std::max(wdim, e.dim.size());
        wparams = std::max(wparams, e.params.size());
    }
    std::cout << std::left << std::setw(static_cast<int>(wname) + 2) << "name"
              << std::setw(static_cast<int>(wdim) + 2) << "dim"
              << std::setw(static_cast<int>(wparams) + 2) << "parameters"
              << "application" << "\n";
    for (const auto& e : entries) {
        std::cout << std::left << std::setw(static_cast<int>(wname) + 2)
                  << e.name << std::setw(static_cast<int>(wdim) + 2) << e.dim
                  << std::setw(static_cast<int>(wparams) + 2)
                  << (e.params.empty() ? "-" : e.params) << e.application
                  << "\n";
    }
    return 0;
}

int cmd_metric(const std::string& model_name, const std::string& params_text,
               const std::string& theta_text) {
    Model m = build(model_name, parse_kv_list(params_text));
    std::vector<double> th = parse_number_list(theta_text, "--theta");
    if (static_cast<int>(th.size()) != m.dim)
        throw ValidationError("--theta has " + std::to_string(th.size()) +
                              " entries; model " + m.name +
                              " has dimension " + std::to_string(m.dim));
    Eigen::VectorXd theta =
        Eigen::Map<const Eigen::VectorXd>(th.data(), th.size());
    Eigen::MatrixXd ana = metric_analytic(m, theta);
    print_matrix("analytic metric:", ana);
    std::cout << "fisher_density: " << format_double(fisher_density(ana))
              << "\n";
    if (m.family.valid()) {
        Eigen::MatrixXd num = metric_numeric(m.family, theta);
        print_matrix("quadrature metric:", num);
        double scale = ana.cwiseAbs().maxCoeff();
        if (scale <= 0.0) scale = 1.0;
        double rel = (num - ana).cwiseAbs().maxCoeff() / scale;
        std::cout << "max_rel_err: " << format_double(rel) << "\n";
    } else {
        std::cout << "quadrature metric: not available (model has no"
                     " sampling density)\n";
    }
    return 0;
}

int cmd_ratios(const std::string& family, const std::string& grid_text) {
    auto f = ratio_family_fn(family);
    GridSpec g = parse_grid(grid_text);
    std::cout << "rho,value\n";
    for (double rho : g.points())
        std::cout << format_double(rho) << "," << format_double(f(rho))
                  << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"information geometric complexity toolkit"};
    app.require_subcommand(1);

    std::string run_path, run_out;
    int run_workers = 1;
    auto* run_cmd =
        app.add_subcommand("run", "execute scenario file or directory");
    run_cmd->add_option("path", run_path, "scenario file or directory")
        ->required();
    run_cmd->add_option("--out", run_out, "output directory override");
    run_cmd->add_option("--workers", run_workers,
                        "parallel scenarios in directory mode")
        ->check(CLI::Range(1, 64));

    auto* catalog_cmd = app.add_subcommand("catalog", "model catalog");
    catalog_cmd->require_subcommand(1);
    catalog_cmd->add_subcommand("list", "list the available models");

    std::string met_model, met_params, met_theta;
    auto* metric_cmd =
        app.add_subcommand("metric", "evaluate a model metric at a point");
    metric_cmd->add_option("--model", met_model, "catalog model name")
        ->required();
    metric_cmd->add_option("--params", met_params,
                           "model parameters, key=value comma separated");
    metric_cmd->add_option("--theta", met_theta,
                           "coordinates, comma separated")
        ->required();

    std::string rat_family, rat_grid;
    auto* ratios_cmd =
        app.add_subcommand("ratios", "closed form ratio table to stdout");
    ratios_cmd->add_option("--family", rat_family, "ratio family name")
        ->required();
    ratios_cmd->add_option("--rho-grid", rat_grid, "grid as a:b:step")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(run_cmd))
            return cmd_run(run_path, run_out, run_workers);
        if (app.got_subcommand(catalog_cmd)) return cmd_catalog_list();
        if (app.got_subcommand(metric_cmd))
            return cmd_metric(met_model, met_params, met_theta);
        if (app.got_subcommand(ratios_cmd))
            return cmd_ratios(rat_family, rat_grid);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
