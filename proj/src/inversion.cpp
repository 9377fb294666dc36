#include "corrinv/inversion.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "corrinv/combinatorics.hpp"
#include "corrinv/errors.hpp"
#include "corrinv/omega.hpp"

namespace corrinv {

namespace {

constexpr double kRho2Floor = 1e-300;

void finish(SeriesResult& s) {
    s.partial_sums.resize(s.order_terms.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < s.order_terms.size(); ++i) {
        acc += s.order_terms[i];
        s.partial_sums[i] = acc;
    }
    const std::size_t k = s.order_terms.size() - 1;
    if (k >= 1) {
        const double last = std::abs(s.order_terms[k]);
        const double prev = std::abs(s.order_terms[k - 1]);
        s.tail_decreasing = last < prev || last == 0.0;
        s.tail_estimate = last;
        s.converged = s.tail_decreasing && last < s.tail_tol;
    } else {
        s.tail_decreasing = true;
        s.converged = true;
    }
}

double sign_over_factorial(int k) { return (k % 2 ? -1.0 : 1.0) / factorial(k); }

double checked_pair_density(const CorrelationModel& model, std::span<const double> x1,
                            std::span<const double> x2, std::vector<double>& anchors) {
    anchors.assign(x1.begin(), x1.end());
    anchors.insert(anchors.end(), x2.begin(), x2.end());
    const double rho2 = model.rho(2, anchors);
    if (!(rho2 > kRho2Floor))
        throw HardCoreViolation("rho^(2) vanished at anchor separation " +
                                    std::to_string(distance(x1, x2)),
                                distance(x1, x2));
    return rho2;
}

} // namespace

SeriesResult mu_series(const CorrelationModel& model, int K, const Box& box,
                       const QuadratureSpec& spec, double tail_tol) {
    if (model.density() <= 0.0) throw std::domain_error("mu_series: density must be > 0");
    if (K > model.max_order() - 1)
        throw LimitExceeded("mu_series: K exceeds model order budget");

    SeriesResult s;
    s.box = box;
    s.tail_tol = tail_tol;
    s.order_terms.push_back(std::log(model.density()));
    s.quadrature_errors.push_back(0.0);

    const std::vector<double> origin(box.dim, 0.0);
    for (int k = 1; k <= K; ++k) {
        auto integrand = [&](std::span<const double> ys) {
            return omega_one(model, origin, ys, k);
        };
        const auto r = integrate_k(integrand, k, box, spec);
        s.order_terms.push_back(sign_over_factorial(k) * r.value + 0.0);
        s.quadrature_errors.push_back(r.error_estimate / factorial(k));
    }
    finish(s);
    return s;
}

SeriesResult h_series(const CorrelationModel& model, std::span<const double> x1,
                      std::span<const double> x2, int K, const Box& box,
                      const QuadratureSpec& spec, double tail_tol) {
    if (K > model.max_order() - 2)
        throw LimitExceeded("h_series: K exceeds model order budget");

    SeriesResult s;
    s.box = box;
    s.tail_tol = tail_tol;
    s.order_terms.push_back(pmf(model, x1, x2));
    s.quadrature_errors.push_back(0.0);

    for (int k = 1; k <= K; ++k) {
        auto integrand = [&](std::span<const double> ys) {
            return omega_two(model, x1, x2, ys, k);
        };
        const auto r = integrate_k(integrand, k, box, spec);
        s.order_terms.push_back(-sign_over_factorial(k) * r.value + 0.0);
        s.quadrature_errors.push_back(r.error_estimate / factorial(k));
    }
    finish(s);
    return s;
}

double pmf(const CorrelationModel& model, std::span<const double> x1,
           std::span<const double> x2) {
    std::vector<double> anchors;
    const double rho2 = checked_pair_density(model, x1, x2, anchors);
    const double rho = model.density();
    return -std::log(rho2 / (rho * rho));
}

double u0_correction(const CorrelationModel& model, std::span<const double> x1,
                     std::span<const double> x2, const Box& box,
                     const QuadratureSpec& spec) {
    if (model.max_order() < 3)
        throw LimitExceeded("u0_correction: model must support order 3");
    std::vector<double> anchors;
    const double rho2 = checked_pair_density(model, x1, x2, anchors);
    const double rho = model.density();
    const double t2_anchors = model.rho_t(2, anchors);

    auto integrand = [&](std::span<const double> y) {
        std::vector<double> triple(anchors);
        append_point(triple, y);
        std::vector<double> p1(x1.begin(), x1.end());
        append_point(p1, y);
        std::vector<double> p2(x2.begin(), x2.end());
        append_point(p2, y);
        return (model.rho_t(3, triple) -
                t2_anchors * (model.rho_t(2, p1) + model.rho_t(2, p2)) / rho) /
               rho2;
    };
    return integrate_k(integrand, 1, box, spec).value;
}

JanossyResult janossy(const CorrelationModel& model, int n, std::span<const double> xs,
                      const Box& box, int K_trunc, const QuadratureSpec& spec) {
    if (n < 0 || n > 2) throw std::invalid_argument("janossy: n must be 0, 1 or 2");
    if (n + K_trunc > model.max_order())
        throw LimitExceeded("janossy: n + K_trunc exceeds model max_order");

    JanossyResult res;
    std::vector<double> base(xs.begin(), xs.end());
    for (int k = 0; k <= K_trunc; ++k) {
        double value;
        if (k == 0) {
            value = model.rho(n, base);
        } else {
            auto integrand = [&](std::span<const double> ys) {
                std::vector<double> pts(base);
                pts.insert(pts.end(), ys.begin(), ys.end());
                return model.rho(n + k, pts);
            };
            value = integrate_k(integrand, k, box, spec).value;
        }
        res.terms.push_back(sign_over_factorial(k) * value + 0.0);
    }
    res.alternating = 0.0;
    for (double t : res.terms) res.alternating += t;

    if (n == 0) {
        double exponent = 0.0;
        for (int k = 1; k <= K_trunc; ++k) {
            auto integrand = [&](std::span<const double> ys) {
                return model.rho_t(k, ys);
            };
            const double v = integrate_k(integrand, k, box, spec).value;
            res.exp_terms.push_back(sign_over_factorial(k) * v + 0.0);
            exponent += res.exp_terms.back();
        }
        res.exponential = std::exp(exponent);
    }
    return res;
}

LogJ2Decomposition log_j2_decomposition(const CorrelationModel& model,
                                        std::span<const double> x1,
                                        std::span<const double> x2, int K, const Box& box,
                                        const QuadratureSpec& spec) {
    if (2 + K > model.max_order())
        throw LimitExceeded("log_j2_decomposition: K exceeds model order budget");
    std::vector<double> anchors;
    const double rho2 = checked_pair_density(model, x1, x2, anchors);

    LogJ2Decomposition d;
    for (SeriesResult* s :
         {&d.rho_t_part, &d.omega_x1_part, &d.omega_x2_part, &d.omega_pair_part}) {
        s->box = box;
        s->quadrature_errors.push_back(0.0);
    }
    d.rho_t_part.order_terms.push_back(std::log(rho2));
    d.omega_x1_part.order_terms.push_back(0.0);
    d.omega_x2_part.order_terms.push_back(0.0);
    d.omega_pair_part.order_terms.push_back(0.0);

    for (int k = 1; k <= K; ++k) {
        const double w = sign_over_factorial(k);
        auto push = [&](SeriesResult& s, const Integrand& f) {
            const auto r = integrate_k(f, k, box, spec);
            s.order_terms.push_back(w * r.value + 0.0);
            s.quadrature_errors.push_back(r.error_estimate / factorial(k));
        };
        push(d.rho_t_part,
             [&](std::span<const double> ys) { return model.rho_t(k, ys); });
        push(d.omega_x1_part,
             [&](std::span<const double> ys) { return omega_one(model, x1, ys, k); });
        push(d.omega_x2_part,
             [&](std::span<const double> ys) { return omega_one(model, x2, ys, k); });
        push(d.omega_pair_part,
             [&](std::span<const double> ys) { return omega_two(model, x1, x2, ys, k); });
    }
    for (SeriesResult* s :
         {&d.rho_t_part, &d.omega_x1_part, &d.omega_x2_part, &d.omega_pair_part})
        finish(*s);
    return d;
}

} // namespace corrinv
