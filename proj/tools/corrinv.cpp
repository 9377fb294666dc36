// corrinv: series inversion of correlation data into chemical potential and
// pair potential, plus the convergence-bound calculator and the oracle suite.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "corrinv/errors.hpp"
#include "corrinv/runconfig.hpp"

namespace {

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw corrinv::ConfigError("cannot open config file " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

std::string parent_dir(const std::string& path) {
    return std::filesystem::path(path).parent_path().string();
}

int cmd_invert(const std::string& config_path, const std::string& out_dir) {
    const auto config = corrinv::parse_run_config(slurp(config_path), parent_dir(config_path));
    const auto report = corrinv::run_invert(config);
    const int rc = corrinv::write_invert_outputs(report, out_dir);
    for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
    std::cout << "wrote " << out_dir << "/potential.csv, mu.csv, report.json\n";
    return rc;
}

int cmd_bounds(const std::string& config_path, const std::string& out_dir) {
    int k_max = 14, grid_points = 33;
    const auto params =
        corrinv::parse_bound_params(slurp(config_path), k_max, grid_points);
    const auto report = corrinv::bound_report(params, k_max, grid_points);
    std::filesystem::create_directories(out_dir);
    const auto path = std::filesystem::path(out_dir) / "bounds.json";
    std::ofstream f(path, std::ios::binary);
    if (!f) throw corrinv::ConfigError("cannot write " + path.string());
    f << corrinv::render_bounds_json(params, report);
    std::cout << "wrote " << path.string() << " (radius " << report.radius << ")\n";
    return 0;
}

int cmd_oracle_check(const std::string& config_path) {
    const auto config = corrinv::parse_run_config(slurp(config_path), parent_dir(config_path));
    const auto report = corrinv::run_oracle_check(config);
    for (const auto& line : report.lines) std::cout << line << "\n";
    return report.passed ? 0 : 3;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"truncated-correlation inversion toolkit"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".";

    auto* invert = app.add_subcommand("invert", "compute the mu and H expansions");
    invert->add_option("--config", config_path, "JSON run configuration")->required();
    invert->add_option("--out", out_dir, "output directory");

    auto* bounds = app.add_subcommand("bounds", "evaluate the convergence-bound machinery");
    bounds->add_option("--config", config_path, "JSON parameter file")->required();
    bounds->add_option("--out", out_dir, "output directory");

    auto* oracle = app.add_subcommand("oracle-check", "run the oracle-vs-implementation suite");
    oracle->add_option("--config", config_path, "JSON run configuration")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (invert->parsed()) return cmd_invert(config_path, out_dir);
        if (bounds->parsed()) return cmd_bounds(config_path, out_dir);
        if (oracle->parsed()) return cmd_oracle_check(config_path);
    } catch (const corrinv::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
