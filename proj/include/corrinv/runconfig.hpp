#pragma once

#include <string>
#include <vector>

#include "corrinv/bounds.hpp"
#include "corrinv/inversion.hpp"
#include "corrinv/models.hpp"

namespace corrinv {

/// A fully validated run description. Parsing is strict: unknown keys are
/// rejected and referenced files must be openable at load time, so a config
/// that parses will run.
/// Raw model parameters, kept alongside the built model so the oracle
/// checks can rebuild the pair functions independently.
struct ModelParams {
    double sigma = 0.0, h_amplitude = 0.3, h_width = 1.0;
    double z = 0.0, kernel_width = 1.0;
    double epsilon = 0.5, u_width = 1.0;
    double rho = 0.0;
    int mayer_order = 1;
    int dim = 1;
};

struct RunConfig {
    ModelPtr model;
    std::string model_kind;
    ModelParams params;
    Box box;
    bool l_doubling_check = false;
    QuadratureSpec quadrature;
    int max_order = 2;
    double tail_tol = 1e-8;
    std::vector<double> separations;
    bool compute_mu = true;
};

/// Parses the JSON text of an invert / oracle-check config. `base_dir` is
/// prepended to relative CSV paths. Throws ConfigError with the offending
/// key in the message.
RunConfig parse_run_config(const std::string& json_text, const std::string& base_dir);

BoundParams parse_bound_params(const std::string& json_text, int& k_max,
                               int& grid_points);

/// Everything cmd_invert produces. Warnings are non-empty whenever the
/// estimated D_rho exceeds the bound radius or a tail criterion is unmet.
struct InvertReport {
    SeriesResult mu;
    std::vector<double> separations;
    std::vector<SeriesResult> h;
    std::vector<double> l_stability_mu;        // |delta partial sum| per order
    std::vector<double> l_stability_h_max;     // max over separations, per order
    AssumptionParams estimated;
    double bound_radius = 0.0;
    std::vector<std::string> warnings;
};

InvertReport run_invert(const RunConfig& config);

/// Renders potential.csv / mu.csv rows (17 significant digits per numeric)
/// and the report JSON. Kept separate from file writing so tests can check
/// bytes directly.
std::string render_potential_csv(const InvertReport& report);
std::string render_mu_csv(const InvertReport& report);
std::string render_report_json(const InvertReport& report);

/// Writes potential.csv, mu.csv and report.json under out_dir.
/// Returns 2 when the report carries warnings, 0 otherwise.
int write_invert_outputs(const InvertReport& report, const std::string& out_dir);

struct OracleCheckReport {
    double max_graph_residual = 0.0;       // omega vs graph-sum oracles
    double max_truncation_residual = 0.0;  // star_log vs raw recursion
    double max_reconstruction_residual = 0.0;
    double tolerance = 1e-9;
    bool passed = false;
    std::vector<std::string> lines; // one pass/fail line per check
};

OracleCheckReport run_oracle_check(const RunConfig& config);

std::string render_bounds_json(const BoundParams& params, const BoundReport& report);

/// Formats a double with 17 significant digits (round-trip exact).
std::string format_g17(double v);

} // namespace corrinv
