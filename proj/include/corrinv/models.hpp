#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "corrinv/geometry.hpp"

namespace corrinv {

/// Isotropic pair function evaluated at the separation |x - y|.
using RadialFn = std::function<double(double)>;

/// Constants of the mixing and hard-core assumptions, as estimated or
/// supplied for a backend: integral bounds on the truncated correlations
/// (M, A, D_rho) and the pair lower-bound constant d(r) at separation r.
struct AssumptionParams {
    double M = 1.0;
    double A = 1.0;
    double D_rho = 0.1;
    double r = 0.0;
    double d_of_r = 1.0;
};

/// Provider of correlation functions rho^(n) and truncated correlation
/// functions rho_T^(n) at arbitrary point tuples. Conventions: rho(0) = 1,
/// rho_t(0) = 0, rho_t(1) = density. Implementations are immutable after
/// construction and safe to evaluate from many threads.
class CorrelationModel {
public:
    virtual ~CorrelationModel() = default;

    int dim() const { return dim_; }
    double density() const { return density_; }
    int max_order() const { return max_order_; }
    double ruelle_xi() const { return ruelle_xi_; }
    double hard_core_radius() const { return hard_core_radius_; }
    double correlation_length() const { return correlation_length_; }
    virtual std::string name() const = 0;

    double rho(int n, std::span<const double> pts) const;
    double rho_t(int n, std::span<const double> pts) const;

protected:
    CorrelationModel(int dim, double density, int max_order, double ruelle_xi,
                     double correlation_length)
        : dim_(dim), density_(density), max_order_(max_order), ruelle_xi_(ruelle_xi),
          correlation_length_(correlation_length) {}

    virtual double rho_impl(int n, std::span<const double> pts) const = 0;
    virtual double rho_t_impl(int n, std::span<const double> pts) const = 0;

    int dim_;
    double density_;
    int max_order_;
    double ruelle_xi_;
    double hard_core_radius_ = 0.0;
    double correlation_length_ = 1.0;
};

using ModelPtr = std::shared_ptr<const CorrelationModel>;

/// Ideal gas: rho^(n) = rho^n, all truncated correlations beyond order 1
/// vanish identically (exact zeros, no rounding residue).
ModelPtr poisson_model(double rho, int dim);

/// Kirkwood closure process: rho^(n) = sigma^n prod_{i<j} (1 + h(|xi-xj|)),
/// truncated correlations as connected-graph sums with edge weight h.
/// Requires 1 + h >= 0; max_order is capped by the graph-enumeration ceiling.
ModelPtr kirkwood_model(double sigma, RadialFn h, int dim, int max_order = 7,
                        double correlation_length = 1.0);

/// Determinantal process with kernel z*kappa: rho^(n) = z^n det(kappa(xi-xj)),
/// truncated correlations as signed sums over cyclic permutations.
ModelPtr determinantal_model(double z, RadialFn kappa, int dim, int max_order = 8,
                             double correlation_length = 1.0);

/// Activity expansion of a gas with pair potential u, truncated at
/// mayer_order in {0, 1}:
///   rho^(m) = z^m exp(-sum u(xi-xj)) * [1 + z Integral(prod(1+f(xi-y)) - 1) dy]
/// with the bracket omitted at order 0 and f = exp(-u) - 1. Truncated
/// correlations are derived from rho. One-dimensional only.
ModelPtr low_activity_model(double z, RadialFn u, double interaction_range,
                            int mayer_order, int max_order = 5,
                            double correlation_length = 1.0);

/// Monotone radial grid for g2 starting at r = 0.
struct RadialTable {
    std::vector<double> r;
    std::vector<double> value;
};

/// Rectangular grid for the three-point function t3(u, v) with
/// u = x1 - y, v = x2 - y.
struct PairTable {
    std::vector<double> u;
    std::vector<double> v;
    std::vector<double> values; // row-major over (u, v)
};

/// Tabulated data backend (d = 1): rho(2) from interpolated g2, rho_t(3)
/// from interpolated t3; g2 -> 1 and t3 -> 0 outside the tabulated range.
/// max_order = 3.
ModelPtr tabulated_model(RadialTable g2, PairTable t3, double rho);

/// Runtime estimates of the Assumption constants for a backend, from
/// sup-norm integrals of rho_t at orders 2-3 and a grid scan of
/// rho^2 / rho^(2) beyond separation r.
AssumptionParams estimate_assumption_params(const CorrelationModel& model, double r,
                                            double halfwidth);

// Shipped pair-function defaults. All decay like Gaussians so the series
// integrands are effectively compactly supported.
RadialFn gaussian_bump(double amplitude, double width);     // h(r) = a e^{-(r/w)^2}
RadialFn gaussian_kernel(double width);                     // kappa(r) = e^{-r^2/(2w^2)}
RadialFn gaussian_potential(double epsilon, double width);  // u(r), zero beyond 4w

} // namespace corrinv
