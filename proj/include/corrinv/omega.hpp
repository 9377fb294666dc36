#pragma once

#include <span>

#include "corrinv/models.hpp"

namespace corrinv {

/// One-anchor correction function omega^(k)(x; y_1..y_k), defined by
///   omega^(1)(x; y) = rho_T^(2)(x, y) / rho,
///   omega^(k)(x; Y) = rho_T^(1+k)(x, Y) / rho
///                     - sum over partitions of Y with >= 2 blocks of
///                       prod omega^(|block|)(x; block),
/// evaluated by a bottom-up fill over all subsets of Y.
double omega_one(const CorrelationModel& model, std::span<const double> x,
                 std::span<const double> ys, int k);

/// Two-anchor correction function omega^(k)(x1, x2; y_1..y_k). The recursion
/// removes from rho_T^(2+k)/rho^(2) the contributions factorising through a
/// single anchor (ordered 2- and 3-splits of Y, with the empty-part factor
/// rho_T^(1)/rho = 1) and the multi-block products of lower orders.
/// Throws HardCoreViolation when rho^(2)(x1, x2) underflows.
double omega_two(const CorrelationModel& model, std::span<const double> x1,
                 std::span<const double> x2, std::span<const double> ys, int k);

/// F_2^(k)(x1, x2; Y) = rho_T^(k)(Y) + omega^(k)(x1; Y) + omega^(k)(x2; Y)
///                      + omega^(k)(x1, x2; Y).
double f2_family(const CorrelationModel& model, std::span<const double> x1,
                 std::span<const double> x2, std::span<const double> ys, int k);

/// Residual of the defining identity
///   rho^(2)(x1,x2) (exp* F_{x1,x2})^(k)(Y) = rho^(2+k)(x1, x2, Y);
/// returns the absolute difference, which should vanish.
double reconstruct_check(const CorrelationModel& model, std::span<const double> x1,
                         std::span<const double> x2, std::span<const double> ys, int k);

} // namespace corrinv
