#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "corrinv/errors.hpp"
#include "corrinv/models.hpp"
#include "corrinv/ruelle.hpp"
#include "corrinv/tabulated_io.hpp"

using namespace corrinv;

namespace {

std::vector<double> random_tuple(std::mt19937_64& rng, int n, int dim, double spread = 2.0) {
    std::uniform_real_distribution<double> uni(-spread, spread);
    std::vector<double> pts(static_cast<std::size_t>(n) * dim);
    for (auto& p : pts) p = uni(rng);
    return pts;
}

void check_exp_of_truncated_reproduces_rho(const CorrelationModel& model, int n_hi,
                                           double tol) {
    FiniteFamily t(model.max_order(), model.dim(), 0.0,
                   [&model](int n, std::span<const double> pts) {
                       return model.rho_t(n, pts);
                   });
    auto e = star_exp(t);
    std::mt19937_64 rng(11);
    for (int n = 1; n <= n_hi; ++n)
        for (int rep = 0; rep < 10; ++rep) {
            const auto pts = random_tuple(rng, n, model.dim());
            CHECK(e(n, pts) == doctest::Approx(model.rho(n, pts)).epsilon(tol));
        }
}

void check_sampled_ruelle_bound(const CorrelationModel& model, int n_hi) {
    std::mt19937_64 rng(12);
    for (int n = 1; n <= n_hi; ++n)
        for (int rep = 0; rep < 100; ++rep) {
            const auto pts = random_tuple(rng, n, model.dim());
            const double v = model.rho(n, pts);
            CHECK(v >= -1e-12);
            CHECK(v <= std::pow(model.ruelle_xi(), n) + 1e-12);
        }
}

void check_translation_invariance(const CorrelationModel& model, int n_hi) {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (int n = 2; n <= n_hi; ++n) {
        auto pts = random_tuple(rng, n, model.dim());
        std::vector<double> shifted(pts);
        std::vector<double> c(model.dim());
        for (auto& v : c) v = uni(rng);
        for (int i = 0; i < n; ++i)
            for (int d = 0; d < model.dim(); ++d) shifted[i * model.dim() + d] += c[d];
        CHECK(model.rho(n, shifted) == doctest::Approx(model.rho(n, pts)).epsilon(1e-12));
        CHECK(model.rho_t(n, shifted) ==
              doctest::Approx(model.rho_t(n, pts)).epsilon(1e-12));
    }
}

} // namespace

TEST_CASE("poisson model") {
    auto m = poisson_model(0.5, 1);
    const double pts3[] = {0.1, 2.0, -1.0};
    CHECK(m->rho(3, pts3) == 0.125);
    const double pts2[] = {0.0, 1.0};
    CHECK(m->rho_t(2, pts2) == 0.0);
    CHECK(m->ruelle_xi() == 0.5);
    CHECK(m->rho(0, {}) == 1.0);
    CHECK(m->rho_t(0, {}) == 0.0);
    check_exp_of_truncated_reproduces_rho(*m, 5, 1e-10);
    check_sampled_ruelle_bound(*m, 5);
}

TEST_CASE("kirkwood model closed forms") {
    const double sigma = 0.4, a = 0.3, w = 1.2;
    auto h = gaussian_bump(a, w);
    auto m = kirkwood_model(sigma, h, 1);
    CHECK(m->density() == sigma);

    const double x1 = 0.3, x2 = -0.9;
    const double pts2[] = {x1, x2};
    CHECK(m->rho_t(2, pts2) ==
          doctest::Approx(sigma * sigma * h(std::abs(x1 - x2))).epsilon(1e-14));

    const double y = 1.1;
    const double pts3[] = {x1, x2, y};
    const double h12 = h(std::abs(x1 - x2)), h13 = h(std::abs(x1 - y)),
                 h23 = h(std::abs(x2 - y));
    CHECK(m->rho_t(3, pts3) ==
          doctest::Approx(std::pow(sigma, 3) *
                          (h12 * h13 + h12 * h23 + h13 * h23 + h12 * h13 * h23))
              .epsilon(1e-13));

    check_exp_of_truncated_reproduces_rho(*m, 5, 1e-10);
    check_sampled_ruelle_bound(*m, 5);
    check_translation_invariance(*m, 4);
}

TEST_CASE("kirkwood graph sums equal star_log of rho") {
    auto m = kirkwood_model(0.35, gaussian_bump(-0.25, 0.9), 1);
    FiniteFamily rho(m->max_order(), 1, 1.0, [&](int n, std::span<const double> pts) {
        return m->rho(n, pts);
    });
    auto logged = star_log(rho);
    std::mt19937_64 rng(14);
    for (int n = 2; n <= 5; ++n)
        for (int rep = 0; rep < 10; ++rep) {
            const auto pts = random_tuple(rng, n, 1);
            CHECK(m->rho_t(n, pts) == doctest::Approx(logged(n, pts)).epsilon(1e-10));
        }
}

TEST_CASE("determinantal model closed forms") {
    const double z = 0.6;
    auto kappa = gaussian_kernel(1.0);
    auto m = determinantal_model(z, kappa, 1);
    CHECK(m->density() == z);

    const double x1 = 0.2, x2 = 1.4;
    const double k12 = kappa(std::abs(x1 - x2));
    const double pts2[] = {x1, x2};
    CHECK(m->rho_t(2, pts2) == doctest::Approx(-z * z * k12 * k12).epsilon(1e-14));
    CHECK(m->rho(2, pts2) == doctest::Approx(z * z * (1.0 - k12 * k12)).epsilon(1e-14));

    const double y = -0.8;
    const double pts3[] = {x1, x2, y};
    const double k13 = kappa(std::abs(x1 - y)), k23 = kappa(std::abs(x2 - y));
    CHECK(m->rho_t(3, pts3) ==
          doctest::Approx(2.0 * std::pow(z, 3) * k12 * k13 * k23).epsilon(1e-13));

    check_exp_of_truncated_reproduces_rho(*m, 5, 1e-10);
    check_sampled_ruelle_bound(*m, 5);
    check_translation_invariance(*m, 4);
}

TEST_CASE("determinantal truncated correlations equal star_log of the determinants") {
    auto m = determinantal_model(0.5, gaussian_kernel(0.8), 1);
    FiniteFamily rho(m->max_order(), 1, 1.0, [&](int n, std::span<const double> pts) {
        return m->rho(n, pts);
    });
    auto logged = star_log(rho);
    std::mt19937_64 rng(15);
    for (int n = 2; n <= 5; ++n)
        for (int rep = 0; rep < 10; ++rep) {
            const auto pts = random_tuple(rng, n, 1);
            CHECK(m->rho_t(n, pts) == doctest::Approx(logged(n, pts)).epsilon(1e-10));
        }
}

TEST_CASE("low activity model limits") {
    // u == 0 at order 0 collapses to the ideal gas
    auto free0 = low_activity_model(0.3, [](double) { return 0.0; }, 4.0, 0);
    std::mt19937_64 rng(16);
    for (int m = 1; m <= 4; ++m) {
        const auto pts = random_tuple(rng, m, 1);
        CHECK(free0->rho(m, pts) == doctest::Approx(std::pow(0.3, m)).epsilon(1e-14));
    }

    // at mayer order 1, the density is z (1 + z Integral f)
    const double z = 0.05;
    auto u = gaussian_potential(0.5, 1.0);
    auto m1 = low_activity_model(z, u, 4.0, 1);
    double f_int = 0.0;
    const int steps = 40000;
    for (int i = 0; i < steps; ++i) {
        const double y = -4.0 + 8.0 * (i + 0.5) / steps;
        f_int += std::expm1(-u(std::abs(y))) * 8.0 / steps;
    }
    CHECK(m1->density() == doctest::Approx(z * (1.0 + z * f_int)).epsilon(1e-8));

    check_exp_of_truncated_reproduces_rho(*m1, 5, 1e-10);
    check_sampled_ruelle_bound(*m1, 4);
}

TEST_CASE("tabulated model: identity tables reproduce the ideal gas") {
    RadialTable g2;
    for (int i = 0; i <= 20; ++i) {
        g2.r.push_back(0.25 * i);
        g2.value.push_back(1.0);
    }
    PairTable t3;
    for (int i = 0; i <= 10; ++i) t3.u.push_back(-2.5 + 0.5 * i);
    t3.v = t3.u;
    t3.values.assign(t3.u.size() * t3.v.size(), 0.0);

    auto m = tabulated_model(g2, t3, 0.7);
    auto ideal = poisson_model(0.7, 1);
    std::mt19937_64 rng(17);
    for (int n = 1; n <= 3; ++n)
        for (int rep = 0; rep < 10; ++rep) {
            const auto pts = random_tuple(rng, n, 1);
            CHECK(m->rho(n, pts) == doctest::Approx(ideal->rho(n, pts)).epsilon(1e-13));
            CHECK(m->rho_t(n, pts) ==
                  doctest::Approx(ideal->rho_t(n, pts)).epsilon(1e-13));
        }
}

TEST_CASE("tabulated model: grid nodes are exact and kirkwood tables round-trip") {
    auto source = kirkwood_model(0.4, gaussian_bump(0.3, 1.0), 1);
    auto g2 = tabulate_g2(*source, 8.0, 801);
    auto t3 = tabulate_t3(*source, 6.0, 241);
    auto m = tabulated_model(g2, t3, source->density());

    // tabulated value reproduced exactly at a grid node
    const double node_pts[] = {0.0, g2.r[100]};
    CHECK(m->rho(2, node_pts) == doctest::Approx(0.16 * g2.value[100]).epsilon(1e-15));

    std::mt19937_64 rng(18);
    for (int rep = 0; rep < 30; ++rep) {
        const auto p2 = random_tuple(rng, 2, 1);
        CHECK(m->rho(2, p2) == doctest::Approx(source->rho(2, p2)).epsilon(1e-4));
        const auto p3 = random_tuple(rng, 3, 1);
        CHECK(std::abs(m->rho_t(3, p3) - source->rho_t(3, p3)) < 1e-4);
    }
}

TEST_CASE("tabulated model rejects malformed tables") {
    RadialTable bad_grid{{0.0, 1.0, 0.5}, {1.0, 1.0, 1.0}};
    PairTable t3{{-1.0, 0.0, 1.0}, {-1.0, 0.0, 1.0}, std::vector<double>(9, 0.0)};
    CHECK_THROWS_AS(tabulated_model(bad_grid, t3, 0.5), ConfigError);

    RadialTable neg{{0.0, 1.0}, {1.0, -0.2}};
    CHECK_THROWS_AS(tabulated_model(neg, t3, 0.5), ConfigError);

    RadialTable ok{{0.0, 1.0, 2.0}, {0.5, 1.1, 1.0}};
    PairTable asym{{-1.0, 0.0, 1.0},
                   {-1.0, 0.0, 1.0},
                   {0.0, 0.1, 0.0, 0.2, 0.0, 0.0, 0.0, 0.0, 0.0}};
    CHECK_THROWS_AS(tabulated_model(ok, asym, 0.5), ConfigError);
}

TEST_CASE("csv round trip for tabulated input") {
    auto source = kirkwood_model(0.4, gaussian_bump(0.2, 1.0), 1);
    auto g2 = tabulate_g2(*source, 6.0, 61);
    auto t3 = tabulate_t3(*source, 4.0, 41);

    std::ostringstream out_g2, out_t3;
    write_radial_csv(out_g2, g2);
    write_pair_csv(out_t3, t3);
    std::istringstream in_g2(out_g2.str()), in_t3(out_t3.str());
    auto g2b = read_radial_csv(in_g2);
    auto t3b = read_pair_csv(in_t3);
    CHECK(g2b.r == g2.r);
    CHECK(g2b.value == g2.value);
    CHECK(t3b.values == t3.values);

    std::istringstream bad("r,wrong\n0,1\n");
    CHECK_THROWS_AS(read_radial_csv(bad), ConfigError);
    std::istringstream junk("r,g2\n0,abc\n");
    CHECK_THROWS_AS(read_radial_csv(junk), ConfigError);
    std::istringstream ragged("r1,r2,t3\n0,0,1\n0,1,1\n1,0,1\n1,2,1\n");
    CHECK_THROWS_AS(read_pair_csv(ragged), ConfigError);
}

TEST_CASE("assumption parameter estimation is finite and positive") {
    auto m = kirkwood_model(0.3, gaussian_bump(-0.2, 1.0), 1);
    const auto p = estimate_assumption_params(*m, 0.5, 6.0);
    CHECK(p.M > 0.0);
    CHECK(p.A > 0.0);
    CHECK(p.D_rho > 0.0);
    CHECK(p.d_of_r >= 1.0); // h dips negative, so rho^2 exceeds rho^(2) somewhere
    CHECK(std::isfinite(p.M * p.A * p.D_rho));
}

TEST_CASE("max order ceilings raise errors") {
    auto m = kirkwood_model(0.4, gaussian_bump(0.3, 1.0), 1);
    std::vector<double> pts(8, 0.0);
    CHECK_THROWS_AS(m->rho(8, pts), LimitExceeded);
    CHECK_THROWS_AS(poisson_model(-1.0, 1), std::invalid_argument);
}
