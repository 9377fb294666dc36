#pragma once

#include <vector>

namespace corrinv {

/// Inputs of the bound machinery. c0 = d_of_r * M * A^2 ties the constant
/// term of the c-sequence to the hard-core constant.
struct BoundParams {
    double M = 1.0;
    double A = 1.0;
    double D_rho = 0.1;
    double d_of_r = 1.0;

    double c0() const { return d_of_r * M * A * A; }
};

/// Everything the bound machinery produces for a parameter set: the
/// majorant sequences, the quadratic-root radius (the sufficient condition
/// reads D_rho * |t| <= radius), and a grid of the auxiliary functions
/// ell and s on [0, radius / D_rho].
struct BoundReport {
    std::vector<double> a; // a_0..a_k
    std::vector<double> c;
    std::vector<double> w;                // w_1..w_k
    std::vector<double> w_over_factorial; // w_k / k!, the EGF coefficients
    double chi = 0.0;
    double theta = 0.0;
    double radius = 0.0;
    std::vector<double> t_grid;
    std::vector<double> ell_values;
    std::vector<double> s_values;
};

/// a_0 = 1, a_k = k! M A D_rho^k.
std::vector<double> a_seq(const BoundParams& p, int k_max);

/// c_k = d(r) (k+1)! M A^2 D_rho^k.
std::vector<double> c_seq(const BoundParams& p, int k_max);

/// Majorant recursion
///   w_k = c_k + B_k(w_1..w_{k-1}, 0) + c0 sum_l C(k,l) a_l a_{k-l}
///         + sum_{l=1}^{k-1} C(k,l) B_l(w_1..w_l) sum_m C(k-l,m) a_m a_{k-l-m}
/// (so w_1 = c_1 + 2 c0 a_1). Internally the recursion runs on w_k / k! to
/// keep every quantity O(1); the returned w_k are exact within double
/// precision for k <= 20. Index 0 of the result holds w_1.
std::vector<double> w_seq(const BoundParams& p, int k_max);
std::vector<double> w_seq_over_factorial(const BoundParams& p, int k_max);

/// Closed forms of the exponential generating functions, valid for
/// t * D_rho < 1:
///   E_a(t) = 1 + M A t D_rho / (1 - t D_rho),
///   E_c(t) = d(r) M A^2 / (1 - t D_rho)^2.
struct EgfValues {
    double e_a = 0.0;
    double e_c = 0.0;
};
EgfValues egf_values(const BoundParams& p, double t);

/// ell(t) = 2 log E_a - (2 c0 - E_c - (c0 - 1) E_a^2) / 2.
double ell(const BoundParams& p, double t);

/// The log-free surrogate in which log E_a is replaced by its upper bound
/// M A t D / (1 - t D); the radius below solves surrogate(t) = 2 log 2 - 2
/// exactly.
double ell_surrogate(const BoundParams& p, double t);

/// s(t) = -W0(-exp(ell(t)) / 2).
double s_of_t(const BoundParams& p, double t);

/// Zero branch of the Lambert W function: w with w e^w = x, w >= -1,
/// for x >= -1/e. Damped Halley iteration from a series initial guess;
/// residual below 1e-14 across the domain.
double lambert_w0(double x);

/// chi, theta and the radius of the sufficient condition: the smallest
/// positive root of theta y^2 + chi y + (1 - 2 log 2) = 0 in y = D_rho |t|.
struct RadiusBound {
    double chi = 0.0;
    double theta = 0.0;
    double radius = 0.0;
};
RadiusBound radius_bound(const BoundParams& p);

/// Full report: sequences to k_max, radius, and ell/s sampled on a grid of
/// grid_points values of t in [0, radius / D_rho].
BoundReport bound_report(const BoundParams& p, int k_max = 14, int grid_points = 33);

} // namespace corrinv
