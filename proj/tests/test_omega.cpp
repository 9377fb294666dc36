#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>
#include <vector>

#include "corrinv/errors.hpp"
#include "corrinv/omega.hpp"
#include "corrinv/oracles.hpp"
#include "corrinv/ruelle.hpp"

using namespace corrinv;

namespace {

std::vector<double> random_tuple(std::mt19937_64& rng, int n, double spread = 2.0) {
    std::uniform_real_distribution<double> uni(-spread, spread);
    std::vector<double> pts(n);
    for (auto& p : pts) p = uni(rng);
    return pts;
}

} // namespace

TEST_CASE("poisson corrections vanish identically") {
    auto m = poisson_model(0.7, 1);
    std::mt19937_64 rng(21);
    for (int k = 1; k <= 3; ++k) {
        const auto x12 = random_tuple(rng, 2);
        const auto ys = random_tuple(rng, k);
        std::span<const double> x1(x12.data(), 1), x2(x12.data() + 1, 1);
        CHECK(omega_one(*m, x1, ys, k) == 0.0);
        CHECK(omega_two(*m, x1, x2, ys, k) == 0.0);
        CHECK(f2_family(*m, x1, x2, ys, k) == (k == 1 ? 0.7 : 0.0));
    }
}

TEST_CASE("kirkwood one-anchor corrections match the hand reductions") {
    const double sigma = 0.4;
    auto h = gaussian_bump(0.3, 1.0);
    auto m = kirkwood_model(sigma, h, 1);

    const double x[] = {0.5};
    const double y[] = {-0.7};
    CHECK(omega_one(*m, x, y, 1) ==
          doctest::Approx(sigma * h(std::abs(x[0] - y[0]))).epsilon(1e-13));

    const double ys[] = {-0.7, 1.3};
    const double h12 = h(std::abs(ys[0] - ys[1]));
    const double hx1 = h(std::abs(x[0] - ys[0])), hx2 = h(std::abs(x[0] - ys[1]));
    CHECK(omega_one(*m, x, ys, 2) ==
          doctest::Approx(sigma * sigma * h12 * (hx1 + hx2 + hx1 * hx2)).epsilon(1e-13));
}

TEST_CASE("kirkwood two-anchor correction at k=1 collapses to the product form") {
    const double sigma = 0.45;
    auto h = gaussian_bump(-0.25, 1.1);
    auto m = kirkwood_model(sigma, h, 1);
    std::mt19937_64 rng(22);
    for (int rep = 0; rep < 25; ++rep) {
        const auto pts = random_tuple(rng, 3);
        std::span<const double> x1(pts.data(), 1), x2(pts.data() + 1, 1);
        const double y[] = {pts[2]};
        const double expect = sigma * h(std::abs(pts[0] - pts[2])) *
                              h(std::abs(pts[1] - pts[2]));
        CHECK(omega_two(*m, x1, x2, y, 1) == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("recursion agrees with the bicolored graph oracles") {
    const double sigma = 0.4;
    auto h = gaussian_bump(0.3, 1.0);
    auto m = kirkwood_model(sigma, h, 1);
    std::mt19937_64 rng(23);
    for (int k = 1; k <= 4; ++k)
        for (int rep = 0; rep < 8; ++rep) {
            const auto x12 = random_tuple(rng, 2);
            const auto ys = random_tuple(rng, k);
            std::span<const double> x1(x12.data(), 1), x2(x12.data() + 1, 1);
            CHECK(omega_one(*m, x1, ys, k) ==
                  doctest::Approx(kirkwood_omega_one_oracle(sigma, h, x1, ys, k, 1))
                      .epsilon(1e-10));
            CHECK(omega_two(*m, x1, x2, ys, k) ==
                  doctest::Approx(kirkwood_omega_two_oracle(sigma, h, x1, x2, ys, k, 1))
                      .epsilon(1e-10));
        }
}

TEST_CASE("corrections are symmetric in the field points and the anchors") {
    auto m = determinantal_model(0.5, gaussian_kernel(1.0), 1);
    std::mt19937_64 rng(24);
    for (int k = 2; k <= 4; ++k) {
        const auto x12 = random_tuple(rng, 2);
        auto ys = random_tuple(rng, k);
        std::span<const double> x1(x12.data(), 1), x2(x12.data() + 1, 1);
        const double base1 = omega_one(*m, x1, ys, k);
        const double base2 = omega_two(*m, x1, x2, ys, k);

        auto shuffled = ys;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        CHECK(omega_one(*m, x1, shuffled, k) == doctest::Approx(base1).epsilon(1e-12));
        CHECK(omega_two(*m, x1, x2, shuffled, k) == doctest::Approx(base2).epsilon(1e-12));
        CHECK(omega_two(*m, x2, x1, ys, k) == doctest::Approx(base2).epsilon(1e-12));
    }
}

TEST_CASE("kirkwood f2 family factorises over the anchors") {
    const double sigma = 0.4;
    auto h = gaussian_bump(0.3, 1.0);
    auto m = kirkwood_model(sigma, h, 1);

    std::mt19937_64 rng(25);
    for (int k = 1; k <= 4; ++k)
        for (int rep = 0; rep < 5; ++rep) {
            const auto x12 = random_tuple(rng, 2);
            const auto ys = random_tuple(rng, k);
            std::span<const double> x1(x12.data(), 1), x2(x12.data() + 1, 1);
            double expect = m->rho_t(k, ys);
            for (int j = 0; j < k; ++j)
                expect *= (1.0 + h(std::abs(x12[0] - ys[j]))) *
                          (1.0 + h(std::abs(x12[1] - ys[j])));
            CHECK(f2_family(*m, x1, x2, ys, k) == doctest::Approx(expect).epsilon(1e-10));
        }
}

TEST_CASE("reconstruction identity holds on all analytic backends") {
    std::vector<ModelPtr> models = {
        poisson_model(0.6, 1),
        kirkwood_model(0.4, gaussian_bump(0.3, 1.0), 1),
        determinantal_model(0.5, gaussian_kernel(1.0), 1),
    };
    std::mt19937_64 rng(26);
    for (const auto& m : models)
        for (int k = 1; k <= 3; ++k)
            for (int rep = 0; rep < 5; ++rep) {
                const auto x12 = random_tuple(rng, 2);
                const auto ys = random_tuple(rng, k);
                std::span<const double> x1(x12.data(), 1), x2(x12.data() + 1, 1);
                CHECK(reconstruct_check(*m, x1, x2, ys, k) < 1e-10);
            }
}

TEST_CASE("hard-core anchors are rejected with the separation in the error") {
    // 1 + h hits zero at contact, so rho^(2) vanishes there
    auto hardcore = kirkwood_model(0.4, [](double r) { return r < 0.5 ? -1.0 : 0.0; }, 1);
    const double x1[] = {0.0};
    const double x2[] = {0.2};
    const double y[] = {3.0};
    try {
        omega_two(*hardcore, x1, x2, y, 1);
        FAIL("expected HardCoreViolation");
    } catch (const HardCoreViolation& e) {
        CHECK(e.separation == doctest::Approx(0.2));
    }
}

TEST_CASE("omega families satisfy their defining star-equations") {
    // One anchor: the reduction of the truncated family, scaled by the
    // density, is the star-exponential of the one-anchor corrections.
    // Two anchors: the corresponding equation couples the pair correction
    // with both one-anchor reductions and the unit element.
    std::vector<ModelPtr> models = {
        kirkwood_model(0.4, gaussian_bump(0.3, 1.0), 1),
        determinantal_model(0.5, gaussian_kernel(1.0), 1),
    };
    std::mt19937_64 rng(29);
    for (const auto& m : models) {
        const double rho = m->density();
        FiniteFamily trunc(m->max_order(), 1, 0.0,
                           [&m](int n, std::span<const double> p) {
                               return m->rho_t(n, p);
                           });
        const auto x12 = random_tuple(rng, 2);
        const std::vector<double> x1{x12[0]}, x2{x12[1]};

        auto d1 = d_reduce(x1, 1, trunc);
        FiniteFamily d1_scaled(d1.n_max(), 1, d1.order0() / rho,
                               [d1, rho](int n, std::span<const double> p) {
                                   return d1(n, p) / rho;
                               });
        FiniteFamily omega_x(d1.n_max(), 1, 0.0,
                             [&m, x1](int n, std::span<const double> p) {
                                 return omega_one(*m, x1, p, n);
                             });
        auto exp_omega = star_exp(omega_x);
        for (int n = 1; n <= 3; ++n) {
            const auto ys = random_tuple(rng, n);
            CHECK(d1_scaled(n, ys) == doctest::Approx(exp_omega(n, ys)).epsilon(1e-11));
        }

        std::vector<double> anchors{x12[0], x12[1]};
        const double rho2 = m->rho(2, anchors);
        auto d12 = d_reduce(anchors, 2, trunc);
        auto d2 = d_reduce(x2, 1, trunc);
        FiniteFamily d2_scaled(d2.n_max(), 1, d2.order0() / rho,
                               [d2, rho](int n, std::span<const double> p) {
                                   return d2(n, p) / rho;
                               });
        FiniteFamily omega_pair(d12.n_max(), 1, 0.0,
                                [&m, x1, x2](int n, std::span<const double> p) {
                                    return omega_two(*m, x1, x2, p, n);
                                });
        auto exp_pair = star_exp(omega_pair);
        const double unit_weight = rho * rho / rho2;
        FiniteFamily bracket(exp_pair.n_max(), 1, exp_pair.order0() - unit_weight,
                             [exp_pair](int n, std::span<const double> p) {
                                 return exp_pair(n, p);
                             });
        auto rhs = star_product(bracket, star_product(d1_scaled, d2_scaled));
        for (int n = 1; n <= 3; ++n) {
            const auto ys = random_tuple(rng, n);
            CHECK(d12(n, ys) / rho2 == doctest::Approx(rhs(n, ys)).epsilon(1e-11));
        }
    }
}

TEST_CASE("evaluations from concurrent threads match the serial values") {
    auto m = kirkwood_model(0.4, gaussian_bump(0.3, 1.0), 1);
    std::mt19937_64 rng(28);
    const auto x12 = random_tuple(rng, 2);
    std::span<const double> x1(x12.data(), 1), x2(x12.data() + 1, 1);
    std::vector<std::vector<double>> tuples;
    std::vector<double> serial;
    for (int rep = 0; rep < 16; ++rep) {
        tuples.push_back(random_tuple(rng, 3));
        serial.push_back(omega_two(*m, x1, x2, tuples.back(), 3));
    }

    std::vector<double> parallel(tuples.size());
    std::vector<std::thread> workers;
    for (int t = 0; t < 4; ++t)
        workers.emplace_back([&, t] {
            for (std::size_t i = t; i < tuples.size(); i += 4)
                parallel[i] = omega_two(*m, x1, x2, tuples[i], 3);
        });
    for (auto& w : workers) w.join();
    CHECK(parallel == serial); // bit-identical, no shared mutable state
}

TEST_CASE("formulas are dimension-agnostic: planar kirkwood against the oracle") {
    const double sigma = 0.35;
    auto h = gaussian_bump(0.25, 1.0);
    auto m = kirkwood_model(sigma, h, 2);
    std::mt19937_64 rng(27);
    for (int k = 1; k <= 2; ++k)
        for (int rep = 0; rep < 10; ++rep) {
            const auto x12 = random_tuple(rng, 4); // two planar anchors
            const auto ys = random_tuple(rng, 2 * k);
            std::span<const double> x1(x12.data(), 2), x2(x12.data() + 2, 2);
            CHECK(omega_one(*m, x1, ys, k) ==
                  doctest::Approx(kirkwood_omega_one_oracle(sigma, h, x1, ys, k, 2))
                      .epsilon(1e-11));
            CHECK(omega_two(*m, x1, x2, ys, k) ==
                  doctest::Approx(kirkwood_omega_two_oracle(sigma, h, x1, x2, ys, k, 2))
                      .epsilon(1e-11));
        }
}

TEST_CASE("order ceilings propagate") {
    auto m = kirkwood_model(0.4, gaussian_bump(0.3, 1.0), 1, 4);
    const double x1[] = {0.0};
    const double x2[] = {1.0};
    const auto ys = std::vector<double>{0.3, -0.4, 0.9};
    CHECK_THROWS_AS(omega_two(*m, x1, x2, ys, 3), LimitExceeded);
}
