#include "corrinv/bounds.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "corrinv/combinatorics.hpp"

namespace corrinv {

namespace {

const double kLog2 = std::log(2.0);

// Rescaled recursion on v_k = w_k / k! (all O(1) quantities):
//   v_k = c_k/k! + b0_k + c0 (a*a)_k + sum_{l=1}^{k-1} b_l (a*a)_{k-l}
// with a-hat_k = a_k/k!, (a*a)_k = sum_m a-hat_m a-hat_{k-m},
// b_l = B_l(w_1..w_l)/l! via b_l = sum_j (j/l) v_j b_{l-j}, and b0_k the same
// sum with the j = k term dropped (the Bell polynomial with last slot zero).
std::vector<double> v_recursion(const BoundParams& p, int k_max) {
    const double mad = p.M * p.A;
    std::vector<double> a_hat(k_max + 1), conv(k_max + 1), v(k_max + 1, 0.0),
        b(k_max + 1, 0.0);
    a_hat[0] = 1.0;
    for (int k = 1; k <= k_max; ++k) a_hat[k] = mad * std::pow(p.D_rho, k);
    for (int k = 0; k <= k_max; ++k) {
        double s = 0.0;
        for (int m = 0; m <= k; ++m) s += a_hat[m] * a_hat[k - m];
        conv[k] = s;
    }
    b[0] = 1.0;
    const double c0 = p.c0();
    for (int k = 1; k <= k_max; ++k) {
        const double c_hat = p.d_of_r * p.M * p.A * p.A * (k + 1) * std::pow(p.D_rho, k);
        double b0 = 0.0;
        for (int j = 1; j < k; ++j) b0 += (static_cast<double>(j) / k) * v[j] * b[k - j];
        double cross = 0.0;
        for (int l = 1; l < k; ++l) cross += b[l] * conv[k - l];
        v[k] = c_hat + b0 + c0 * conv[k] + cross;
        b[k] = b0 + v[k];
    }
    return v;
}

} // namespace

std::vector<double> a_seq(const BoundParams& p, int k_max) {
    std::vector<double> a(k_max + 1);
    a[0] = 1.0;
    for (int k = 1; k <= k_max; ++k)
        a[k] = factorial(k) * p.M * p.A * std::pow(p.D_rho, k);
    return a;
}

std::vector<double> c_seq(const BoundParams& p, int k_max) {
    std::vector<double> c(k_max + 1);
    for (int k = 0; k <= k_max; ++k)
        c[k] = p.d_of_r * factorial(k + 1) * p.M * p.A * p.A * std::pow(p.D_rho, k);
    return c;
}

std::vector<double> w_seq(const BoundParams& p, int k_max) {
    if (k_max < 1) throw std::invalid_argument("w_seq: k_max must be >= 1");
    if (k_max > 20) throw std::invalid_argument("w_seq: k! overflows double beyond 20");
    const auto v = v_recursion(p, k_max);
    std::vector<double> w(k_max);
    for (int k = 1; k <= k_max; ++k) w[k - 1] = v[k] * factorial(k);
    return w;
}

std::vector<double> w_seq_over_factorial(const BoundParams& p, int k_max) {
    if (k_max < 1) throw std::invalid_argument("w_seq: k_max must be >= 1");
    const auto v = v_recursion(p, k_max);
    return {v.begin() + 1, v.end()};
}

EgfValues egf_values(const BoundParams& p, double t) {
    const double x = t * p.D_rho;
    if (x >= 1.0)
        throw std::domain_error("egf_values: pole at t * D_rho >= 1 (t * D_rho = " +
                                std::to_string(x) + ")");
    EgfValues e;
    e.e_a = 1.0 + p.M * p.A * x / (1.0 - x);
    e.e_c = p.d_of_r * p.M * p.A * p.A / ((1.0 - x) * (1.0 - x));
    return e;
}

double ell(const BoundParams& p, double t) {
    const auto e = egf_values(p, t);
    const double c0 = p.c0();
    return 2.0 * std::log(e.e_a) - 0.5 * (2.0 * c0 - e.e_c - (c0 - 1.0) * e.e_a * e.e_a);
}

double ell_surrogate(const BoundParams& p, double t) {
    const double x = t * p.D_rho;
    const auto e = egf_values(p, t);
    const double c0 = p.c0();
    return 4.0 * p.M * p.A * x / (1.0 - x) + e.e_c + (c0 - 1.0) * e.e_a * e.e_a - 2.0 * c0;
}

double s_of_t(const BoundParams& p, double t) {
    return -lambert_w0(-0.5 * std::exp(ell(p, t)));
}

double lambert_w0(double x) {
    const double branch = -std::exp(-1.0);
    if (x < branch) {
        if (x > branch * (1.0 + 1e-14)) {
            x = branch; // round-off at the branch point
        } else {
            throw std::domain_error("lambert_w0: x = " + std::to_string(x) +
                                    " below -1/e");
        }
    }
    if (x == 0.0) return 0.0;
    if (x == branch) return -1.0;

    double w;
    if (x < -0.3) {
        const double q = 2.0 * (std::exp(1.0) * x + 1.0);
        const double s = std::sqrt(std::max(0.0, q));
        w = -1.0 + s - q / 6.0 + 11.0 / 72.0 * s * q / 2.0;
    } else if (x < std::exp(1.0)) {
        w = x / (1.0 + 0.5 * x);
    } else {
        w = std::log(x) - std::log(std::log(x));
    }
    if (w <= -1.0) w = -1.0 + 1e-12;

    for (int it = 0; it < 40; ++it) {
        const double ew = std::exp(w);
        const double f = w * ew - x;
        if (std::abs(f) < 1e-15 * (1.0 + std::abs(x))) break;
        const double d1 = ew * (w + 1.0);
        const double d2 = ew * (w + 2.0);
        double step = f / (d1 - 0.5 * f * d2 / d1); // Halley
        if (!std::isfinite(step)) step = f / d1;
        double next = w - step;
        while (next <= -1.0) { // keep on the zero branch
            step *= 0.5;
            next = w - step;
        }
        w = next;
    }
    return w;
}

RadiusBound radius_bound(const BoundParams& p) {
    RadiusBound r;
    const double c0 = p.c0();
    const double ma = p.M * p.A;
    r.chi = 2.0 * (ma * (c0 + 1.0) + c0 - 1.0 + 2.0 * kLog2);
    r.theta = (c0 - 1.0) * ma * ma - 2.0 * (c0 + 1.0) * ma + 1.0 - c0 - 2.0 * kLog2;
    if (r.theta == 0.0) throw std::domain_error("radius_bound: theta is zero");

    const double tail = 1.0 - 2.0 * kLog2; // negative, so the quadratic is solvable
    const double disc = r.chi * r.chi - 4.0 * r.theta * tail;
    if (disc < 0.0)
        throw std::domain_error("radius_bound: negative discriminant " +
                                std::to_string(disc));
    const double sq = std::sqrt(disc);
    const double root1 = (-r.chi + sq) / (2.0 * r.theta);
    const double root2 = (-r.chi - sq) / (2.0 * r.theta);

    if (r.theta < 0.0) {
        // Both roots positive; the admissible interval is [0, min].
        r.radius = std::min(std::abs(root1), std::abs(root2));
    } else {
        // One root each side of zero; the admissible interval ends at the
        // positive one.
        r.radius = std::max(root1, root2);
    }
    if (!(r.radius > 0.0))
        throw std::domain_error("radius_bound: no positive radius");
    return r;
}

BoundReport bound_report(const BoundParams& p, int k_max, int grid_points) {
    BoundReport rep;
    rep.a = a_seq(p, k_max);
    rep.c = c_seq(p, k_max);
    rep.w = w_seq(p, k_max);
    rep.w_over_factorial = w_seq_over_factorial(p, k_max);
    const auto rb = radius_bound(p);
    rep.chi = rb.chi;
    rep.theta = rb.theta;
    rep.radius = rb.radius;
    const double t_max = rb.radius / p.D_rho;
    for (int i = 0; i < grid_points; ++i) {
        const double t = t_max * i / (grid_points - 1);
        rep.t_grid.push_back(t);
        rep.ell_values.push_back(ell(p, t));
        rep.s_values.push_back(s_of_t(p, t));
    }
    return rep;
}

} // namespace corrinv
