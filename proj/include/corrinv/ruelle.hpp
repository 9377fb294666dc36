#pragma once

#include <functional>
#include <span>

#include "corrinv/geometry.hpp"

namespace corrinv {

/// A truncation-bounded element of the algebra of functions on finite point
/// configurations: a scalar at order 0 plus symmetric n-point evaluators for
/// 1 <= n <= n_max. Evaluators must be immutable and thread-safe; every
/// algebra operation below returns a fresh family and shares no mutable
/// state.
class FiniteFamily {
public:
    using Eval = std::function<double(int n, std::span<const double> pts)>;

    FiniteFamily(int n_max, int dim, double order0, Eval eval)
        : n_max_(n_max), dim_(dim), order0_(order0), eval_(std::move(eval)) {}

    int n_max() const { return n_max_; }
    int dim() const { return dim_; }
    double order0() const { return order0_; }

    /// Value at an n-point tuple (flat coordinates); n = 0 returns order0.
    double operator()(int n, std::span<const double> pts) const;

private:
    int n_max_;
    int dim_;
    double order0_;
    Eval eval_;
};

/// The unit element: 1 on the empty configuration, 0 elsewhere.
FiniteFamily unit_family(int n_max, int dim);

/// Subset convolution (Psi * Phi)(eta) = sum_{gamma subset eta}
/// Psi(gamma) Phi(eta \ gamma). Families must share dim; the result is
/// truncated at the smaller n_max.
FiniteFamily star_product(const FiniteFamily& psi, const FiniteFamily& phi);

/// exp* of a family with order0 = 0: sums products of Phi over unordered set
/// partitions of the argument tuple.
FiniteFamily star_exp(const FiniteFamily& phi);

/// Inverse of star_exp, defined for order0 = 1 and computed bottom-up over
/// subsets; star_exp(star_log(Psi)) reproduces Psi at every evaluated tuple.
FiniteFamily star_log(const FiniteFamily& psi);

/// Reduction by a fixed finite configuration gamma:
/// (D_gamma Psi)(eta) = Psi(eta u gamma) for eta disjoint from gamma, else 0.
/// The order bound shrinks by the number of points in gamma.
FiniteFamily d_reduce(std::span<const double> gamma, int gamma_n, const FiniteFamily& psi);

} // namespace corrinv
