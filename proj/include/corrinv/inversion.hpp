#pragma once

#include <optional>
#include <span>
#include <vector>

#include "corrinv/models.hpp"
#include "corrinv/quadrature.hpp"

namespace corrinv {

/// Per-order terms and partial sums of a truncated expansion, with the
/// quadrature error of each term and an alternating-tail diagnostic:
/// the converged flag is set when the last term both shrank below its
/// predecessor and met tail_tol; the truncation estimate is |last term|.
struct SeriesResult {
    std::vector<double> order_terms;
    std::vector<double> partial_sums;
    std::vector<double> quadrature_errors;
    Box box;
    double tail_tol = 1e-8;
    double tail_estimate = 0.0;
    bool tail_decreasing = false;
    bool converged = false;

    double value() const { return partial_sums.back(); }
};

/// Chemical-potential expansion
///   mu = log rho + sum_{k>=1} (-1)^k/k! Integral omega^(k)(0; y_k) dy_k,
/// truncated at order K. order_terms[0] = log rho.
SeriesResult mu_series(const CorrelationModel& model, int K, const Box& box,
                       const QuadratureSpec& spec, double tail_tol = 1e-8);

/// Pair-potential expansion
///   H(x1,x2) = -log(rho^(2)/rho^2)
///              - sum_{k>=1} (-1)^k/k! Integral omega^(k)(x1,x2; y_k) dy_k.
/// order_terms[0] is the potential of mean force.
SeriesResult h_series(const CorrelationModel& model, std::span<const double> x1,
                      std::span<const double> x2, int K, const Box& box,
                      const QuadratureSpec& spec, double tail_tol = 1e-8);

/// Potential of mean force -log(rho^(2)(x1,x2) / rho^2), the zeroth-order
/// inversion of the pair potential.
double pmf(const CorrelationModel& model, std::span<const double> x1,
           std::span<const double> x2);

/// First-order correction to the potential of mean force,
///   (1/rho^(2)) Integral [rho_T^(3)(x1,x2,y)
///       - rho_T^(2)(x1,x2) (rho_T^(2)(x1,y) + rho_T^(2)(x2,y)) / rho] dy,
/// computed directly (without the omega machinery) so it can cross-check the
/// order-1 term of h_series.
double u0_correction(const CorrelationModel& model, std::span<const double> x1,
                     std::span<const double> x2, const Box& box,
                     const QuadratureSpec& spec);

struct JanossyResult {
    double alternating = 0.0;              // truncated sum over rho^(n+k)
    std::optional<double> exponential;     // n = 0 only: exp of the rho_T sum
    std::vector<double> terms;             // alternating-series terms
    std::vector<double> exp_terms;         // exponent terms (n = 0 only)
};

/// Truncated Janossy density of observing exactly xs inside the box:
///   j^(n) = sum_{k<=K} (-1)^k/k! Integral rho^(n+k)(xs, y_k) dy_k.
/// For n = 0 the exponential representation through the truncated
/// correlations is evaluated as well and both values are returned.
JanossyResult janossy(const CorrelationModel& model, int n, std::span<const double> xs,
                      const Box& box, int K_trunc, const QuadratureSpec& spec);

/// The four-series split of the log j^(2) expansion: the rho_T part (which
/// carries log rho^(2) as its order-0 term), the two one-anchor parts, and
/// the two-anchor part. Their total approximates log j^(2)(x1, x2).
struct LogJ2Decomposition {
    SeriesResult rho_t_part;
    SeriesResult omega_x1_part;
    SeriesResult omega_x2_part;
    SeriesResult omega_pair_part;

    double total() const {
        return rho_t_part.value() + omega_x1_part.value() + omega_x2_part.value() +
               omega_pair_part.value();
    }
};

LogJ2Decomposition log_j2_decomposition(const CorrelationModel& model,
                                        std::span<const double> x1,
                                        std::span<const double> x2, int K, const Box& box,
                                        const QuadratureSpec& spec);

} // namespace corrinv
