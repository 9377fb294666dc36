#pragma once

#include <functional>
#include <span>

#include "corrinv/models.hpp"

namespace corrinv {

// Brute-force reference implementations used only for verification. They
// deliberately share no code with the recursion path: graph sums here,
// subset convolutions there, so agreement is evidence rather than tautology.

/// Graph-sum form of the one-anchor correction for the Kirkwood closure:
/// sigma^k sum over the admissible one-anchor graph class of the product of
/// h over the edges. k <= 4.
double kirkwood_omega_one_oracle(double sigma, const RadialFn& h,
                                 std::span<const double> x, std::span<const double> ys,
                                 int k, int dim);

/// Two-anchor counterpart over the two-anchor class. k <= 4.
double kirkwood_omega_two_oracle(double sigma, const RadialFn& h,
                                 std::span<const double> x1, std::span<const double> x2,
                                 std::span<const double> ys, int k, int dim);

/// Truncated correlation by the raw partition recursion applied to a rho
/// evaluator, independent of the subset-convolution implementation. n <= 6.
using RhoEvaluator = std::function<double(int, std::span<const double>)>;
double truncation_oracle(const RhoEvaluator& rho, int n, std::span<const double> pts,
                         int dim);

/// Leading (zero black-vertex) term of the activity expansion of the
/// correction functions: z^(n_white + k) times the bicolored graph sum with
/// Mayer edge weights f = exp(-u) - 1. whites holds n_white points. k <= 4.
double mayer_leading_omega(double z, const RadialFn& u, int n_white,
                           std::span<const double> whites, std::span<const double> ys,
                           int k, int dim);

} // namespace corrinv
