#include <doctest.h>

#include <cmath>
#include <vector>

#include "corrinv/errors.hpp"
#include "corrinv/inversion.hpp"
#include "corrinv/models.hpp"
#include "corrinv/omega.hpp"

using namespace corrinv;

namespace {
const double kPi = std::acos(-1.0);
} // namespace

TEST_CASE("poisson series terminate exactly") {
    auto m = poisson_model(0.7, 1);
    Box box{1, 6.0};
    QuadratureSpec spec;

    auto mu = mu_series(*m, 3, box, spec);
    CHECK(mu.order_terms[0] == doctest::Approx(std::log(0.7)).epsilon(1e-15));
    for (int k = 1; k <= 3; ++k) CHECK(mu.order_terms[k] == 0.0);
    CHECK(mu.value() == mu.order_terms[0]);
    CHECK(mu.converged);
    CHECK(mu.tail_estimate == 0.0);

    const double x1[] = {-0.6}, x2[] = {0.6};
    auto h = h_series(*m, x1, x2, 3, box, spec);
    for (double t : h.order_terms) CHECK(t == 0.0);
}

TEST_CASE("potential of mean force closed forms") {
    const double x1[] = {-0.5}, x2[] = {0.7};
    auto p = poisson_model(0.4, 1);
    CHECK(pmf(*p, x1, x2) == 0.0);

    auto h = gaussian_bump(0.3, 1.0);
    auto kirk = kirkwood_model(0.4, h, 1);
    CHECK(pmf(*kirk, x1, x2) == doctest::Approx(-std::log(1.0 + h(1.2))).epsilon(1e-13));

    // order-0 activity backend: rho^(2) = rho^2 e^{-u}, so the pmf is u itself
    auto u = gaussian_potential(0.5, 1.0);
    auto gas = low_activity_model(0.05, u, 4.0, 0);
    CHECK(pmf(*gas, x1, x2) == doctest::Approx(u(1.2)).epsilon(1e-12));
}

TEST_CASE("kirkwood first-order term equals the analytic gaussian convolution") {
    const double sigma = 0.4, a = 0.3, w = 1.0;
    auto m = kirkwood_model(sigma, gaussian_bump(a, w), 1);
    Box box{1, 8.0};
    QuadratureSpec spec;
    spec.nodes_per_axis = 48;
    for (double r : {0.8, 1.6, 2.4}) {
        const double x1[] = {-r / 2}, x2[] = {r / 2};
        auto h = h_series(*m, x1, x2, 1, box, spec);
        const double analytic =
            sigma * a * a * w * std::sqrt(kPi / 2.0) * std::exp(-r * r / (2.0 * w * w));
        CHECK(h.order_terms[1] == doctest::Approx(analytic).epsilon(1e-6));
    }
}

TEST_CASE("kirkwood first-order mu term equals the gaussian integral of h") {
    const double sigma = 0.3, a = 0.25, w = 1.1;
    auto m = kirkwood_model(sigma, gaussian_bump(a, w), 1);
    Box box{1, 9.0};
    QuadratureSpec spec;
    spec.nodes_per_axis = 48;
    auto mu = mu_series(*m, 1, box, spec);
    // term 1 is -Integral sigma h(y) dy; over a box much wider than w the
    // gaussian integral is a w sqrt(pi)
    const double analytic = -sigma * a * w * std::sqrt(kPi);
    CHECK(mu.order_terms[1] == doctest::Approx(analytic).epsilon(1e-8));
}

TEST_CASE("u0 correction coincides with the order-1 series term on every backend") {
    std::vector<ModelPtr> models = {
        poisson_model(0.6, 1),
        kirkwood_model(0.4, gaussian_bump(0.3, 1.0), 1),
        determinantal_model(0.4, gaussian_kernel(1.0), 1),
        low_activity_model(0.05, gaussian_potential(0.5, 1.0), 4.0, 1),
    };
    Box box{1, 6.0};
    QuadratureSpec spec;
    for (const auto& m : models) {
        const double x1[] = {-0.7}, x2[] = {0.7};
        auto h = h_series(*m, x1, x2, 1, box, spec);
        const double u0 = u0_correction(*m, x1, x2, box, spec);
        CHECK(std::abs(u0 - h.order_terms[1]) < 1e-9);
    }
}

TEST_CASE("mu anchor placement is immaterial under translation invariance") {
    auto m = kirkwood_model(0.3, gaussian_bump(0.25, 1.0), 1);
    Box box{1, 8.0};
    QuadratureSpec spec;
    spec.nodes_per_axis = 48;
    auto at = [&](double x0) {
        const double x[] = {x0};
        return integrate_k(
                   [&](std::span<const double> ys) { return omega_one(*m, x, ys, 1); }, 1,
                   box, spec)
            .value;
    };
    CHECK(at(0.0) == doctest::Approx(at(1.3)).epsilon(1e-9));
}

TEST_CASE("janossy densities: ideal-gas forms") {
    const double rho = 0.5, L = 2.0;
    auto m = poisson_model(rho, 1);
    Box box{1, L};
    QuadratureSpec spec;
    spec.nodes_per_axis = 6; // the integrands are constant
    auto j0 = janossy(*m, 0, {}, box, 6, spec);
    REQUIRE(j0.exponential.has_value());
    CHECK(*j0.exponential == doctest::Approx(std::exp(-2.0 * rho * L)).epsilon(1e-12));

    // term-by-term the n-point series is rho^n times the n = 0 one
    std::vector<double> xs{-0.3, 0.4};
    auto j2 = janossy(*m, 2, xs, box, 6, spec);
    CHECK(j2.alternating / j0.alternating == doctest::Approx(rho * rho).epsilon(1e-13));
    auto j1 = janossy(*m, 1, std::vector<double>{0.2}, box, 6, spec);
    CHECK(j1.alternating / j0.alternating == doctest::Approx(rho).epsilon(1e-13));

    // the truncated alternating sum approaches the exponential form
    auto j0_4 = janossy(*m, 0, {}, box, 4, spec);
    CHECK(std::abs(j0_4.alternating - *j0.exponential) <
          std::abs(j0_4.terms.back()) * 1.5 + 1e-12);
}

TEST_CASE("janossy forms agree for weakly coupled kirkwood data") {
    auto m = kirkwood_model(0.1, gaussian_bump(0.2, 1.0), 1);
    Box box{1, 1.5};
    QuadratureSpec spec;
    spec.nodes_per_axis = 10;
    spec.max_total_dim = 6;
    auto j = janossy(*m, 0, {}, box, 6, spec);
    REQUIRE(j.exponential.has_value());
    // agreement within the alternating truncation tail
    CHECK(std::abs(j.alternating - *j.exponential) < std::abs(j.terms.back()) + 1e-9);
}

TEST_CASE("log j2 decomposition: ideal gas and anchor symmetry") {
    const double rho = 0.5, L = 3.0;
    auto m = poisson_model(rho, 1);
    Box box{1, L};
    QuadratureSpec spec;
    const double x1[] = {-0.4}, x2[] = {0.4};
    auto dec = log_j2_decomposition(*m, x1, x2, 3, box, spec);
    CHECK(dec.omega_x1_part.value() == 0.0);
    CHECK(dec.omega_x2_part.value() == 0.0);
    CHECK(dec.omega_pair_part.value() == 0.0);
    CHECK(dec.rho_t_part.value() ==
          doctest::Approx(2.0 * std::log(rho) - 2.0 * rho * L).epsilon(1e-12));
    CHECK(dec.total() == dec.rho_t_part.value());
}

TEST_CASE("log j2 decomposition approximates the janossy logarithm") {
    auto m = kirkwood_model(0.2, gaussian_bump(0.05, 1.0), 1);
    Box box{1, 1.0};
    QuadratureSpec spec;
    spec.nodes_per_axis = 10;
    spec.max_total_dim = 6;
    const double x1[] = {-0.4}, x2[] = {0.4};
    auto dec = log_j2_decomposition(*m, x1, x2, 2, box, spec);
    std::vector<double> xs{-0.4, 0.4};
    auto j = janossy(*m, 2, xs, box, 5, spec);
    CHECK(std::abs(dec.total() - std::log(j.alternating)) < 1e-4);
    // equal-magnitude anchors make the two one-anchor parts coincide
    CHECK(dec.omega_x1_part.value() ==
          doctest::Approx(dec.omega_x2_part.value()).epsilon(1e-12));
}

TEST_CASE("box doubling leaves converged sums unchanged for gaussian decay") {
    auto m = kirkwood_model(0.25, gaussian_bump(0.3, 1.0), 1);
    QuadratureSpec spec;
    spec.nodes_per_axis = 48;
    Box small{1, 5.0}, big{1, 10.0};
    auto mu_small = mu_series(*m, 1, small, spec);
    auto mu_big = mu_series(*m, 1, big, spec);
    CHECK(std::abs(mu_small.value() - mu_big.value()) < 1e-6);
}

TEST_CASE("alternating-tail diagnostic") {
    auto m = kirkwood_model(0.3, gaussian_bump(0.3, 1.0), 1);
    Box box{1, 6.0};
    QuadratureSpec spec;
    const double x1[] = {-0.5}, x2[] = {0.5};
    auto h = h_series(*m, x1, x2, 2, box, spec, 1e-8);
    CHECK(h.tail_decreasing == (std::abs(h.order_terms[2]) < std::abs(h.order_terms[1])));
    CHECK(h.tail_estimate == std::abs(h.order_terms[2]));
    if (h.converged) CHECK(h.tail_estimate < 1e-8);

    // loose tolerance flips the flag on
    auto loose = h_series(*m, x1, x2, 2, box, spec, 1.0);
    CHECK(loose.converged == loose.tail_decreasing);
}

TEST_CASE("series preconditions") {
    auto m = kirkwood_model(0.4, gaussian_bump(0.3, 1.0), 1, 4);
    Box box{1, 6.0};
    QuadratureSpec spec;
    CHECK_THROWS_AS(mu_series(*m, 4, box, spec), LimitExceeded);
    const double x1[] = {-0.5}, x2[] = {0.5};
    CHECK_THROWS_AS(h_series(*m, x1, x2, 3, box, spec), LimitExceeded);

    auto hardcore = kirkwood_model(0.4, [](double r) { return r < 0.5 ? -1.0 : 0.0; }, 1);
    const double close1[] = {0.0}, close2[] = {0.1};
    CHECK_THROWS_AS(pmf(*hardcore, close1, close2), HardCoreViolation);
}
