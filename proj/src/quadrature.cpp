#include "corrinv/quadrature.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

namespace corrinv {

namespace {

[[noreturn]] void report_bad_value(double v, std::span<const double> node) {
    std::ostringstream os;
    os << "integrate_k: non-finite integrand value " << v << " at node (";
    for (std::size_t i = 0; i < node.size(); ++i) os << (i ? ", " : "") << node[i];
    os << ")";
    throw std::runtime_error(os.str());
}

double tensor_pass(const Integrand& f, int total_dim, double halfwidth,
                   const std::vector<double>& nodes, const std::vector<double>& weights) {
    const int m = static_cast<int>(nodes.size());
    std::vector<int> idx(total_dim, 0);
    std::vector<double> x(total_dim);
    double sum = 0.0;
    // Odometer over the full product grid, lexicographic so the accumulation
    // order never depends on anything but the requested rule.
    while (true) {
        double w = 1.0;
        for (int a = 0; a < total_dim; ++a) {
            x[a] = halfwidth * nodes[idx[a]];
            w *= halfwidth * weights[idx[a]];
        }
        const double v = f(x);
        if (!std::isfinite(v)) report_bad_value(v, x);
        sum += w * v;

        int a = total_dim - 1;
        while (a >= 0 && ++idx[a] == m) idx[a--] = 0;
        if (a < 0) break;
    }
    return sum;
}

} // namespace

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    const double pi = std::acos(-1.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Newton on P_n from the Chebyshev-like initial guess.
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
}

IntegralResult integrate_k(const Integrand& f, int k, const Box& box,
                           const QuadratureSpec& spec) {
    if (k < 1) throw std::invalid_argument("integrate_k: k must be >= 1");
    const int total_dim = box.dim * k;

    if (spec.kind == QuadratureSpec::Kind::TensorGauss) {
        if (total_dim > spec.max_total_dim)
            throw std::invalid_argument("integrate_k: tensor mode dimension d*k = " +
                                        std::to_string(total_dim) + " exceeds ceiling " +
                                        std::to_string(spec.max_total_dim));
        std::vector<double> nodes, weights;
        gauss_legendre(spec.nodes_per_axis, nodes, weights);
        const double full = tensor_pass(f, total_dim, box.halfwidth, nodes, weights);
        double err = 0.0;
        if (spec.nodes_per_axis >= 2) {
            gauss_legendre(spec.nodes_per_axis / 2, nodes, weights);
            err = std::abs(full - tensor_pass(f, total_dim, box.halfwidth, nodes, weights));
        }
        return {full, err};
    }

    // Monte-Carlo: mean over uniform samples times |Lambda|^k.
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> uni(-box.halfwidth, box.halfwidth);
    std::vector<double> x(total_dim);
    double sum = 0.0, sumsq = 0.0;
    for (long s = 0; s < spec.samples; ++s) {
        for (int a = 0; a < total_dim; ++a) x[a] = uni(rng);
        const double v = f(x);
        if (!std::isfinite(v)) report_bad_value(v, x);
        sum += v;
        sumsq += v * v;
    }
    const double n = static_cast<double>(spec.samples);
    const double vol = box.volume(k);
    const double mean = sum / n;
    const double var = std::max(0.0, sumsq / n - mean * mean);
    return {vol * mean, vol * std::sqrt(var / n)};
}

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(const std::function<double(double)>& f, double a, double fa, double b,
             double fb, double m, double fm, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(a, fa, m, fm, flm);
    const double right = simpson(m, fm, b, fb, frm);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adapt(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           adapt(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

} // namespace

double adaptive_integrate(const std::function<double(double)>& f, double a, double b,
                          double tol) {
    if (!(b > a)) return 0.0;
    // Seed the recursion with unit-width panels so narrow features away from
    // the midpoint are not missed on wide intervals.
    const int panels = std::max(1, static_cast<int>(std::ceil(b - a)));
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double pa = a + (b - a) * p / panels;
        const double pb = a + (b - a) * (p + 1) / panels;
        const double pm = 0.5 * (pa + pb);
        const double fa = f(pa), fb = f(pb), fm = f(pm);
        total += adapt(f, pa, fa, pb, fb, pm, fm, simpson(pa, fa, pb, fb, fm),
                       tol / panels, 30);
    }
    return total;
}

} // namespace corrinv
