#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "corrinv/geometry.hpp"

namespace corrinv {

/// How to integrate over Lambda^k. Tensor mode is a full Gauss-Legendre
/// product rule; Monte-Carlo is uniform sampling with a mandatory seed so
/// runs are reproducible.
struct QuadratureSpec {
    enum class Kind { TensorGauss, MonteCarlo };
    Kind kind = Kind::TensorGauss;
    int nodes_per_axis = 32;
    long samples = 200000;
    std::uint64_t seed = 1;
    int max_total_dim = 6; // ceiling on d*k in tensor mode
};

struct IntegralResult {
    double value = 0.0;
    double error_estimate = 0.0;
};

/// Integrand over k points in the box: receives k*dim flat coordinates.
using Integrand = std::function<double(std::span<const double>)>;

/// Integral of f over Lambda^k. Tensor mode estimates the error by
/// re-evaluating with half the nodes per axis; MC mode reports the sample
/// standard error. Summation order is fixed, so results are bit-stable.
/// Throws on a non-finite integrand value, reporting the offending node.
IntegralResult integrate_k(const Integrand& f, int k, const Box& box,
                           const QuadratureSpec& spec);

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Adaptive Simpson on [a, b]; used for the one-dimensional inner integrals
/// of the low-activity backend.
double adaptive_integrate(const std::function<double(double)>& f, double a, double b,
                          double tol = 1e-12);

} // namespace corrinv
