#include "corrinv/oracles.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <vector>

#include "corrinv/combinatorics.hpp"
#include "corrinv/errors.hpp"

namespace corrinv {

namespace {

constexpr int kOracleGraphCeiling = 4;
constexpr int kOracleTruncationCeiling = 6;

// Sum of edge-weight products over a bicolored class. Vertices 0..n_white-1
// carry the anchor coordinates, the rest the field points.
double bicolored_sum(const RadialFn& weight, int n_white, std::span<const double> whites,
                     std::span<const double> ys, int k, int dim) {
    const int n = n_white + k;
    std::vector<double> coords(whites.begin(), whites.end());
    coords.insert(coords.end(), ys.begin(), ys.end());
    // Pairwise weights once; the graph walk then only multiplies.
    std::vector<double> w(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double v =
                weight(distance(point_at(coords, i, dim), point_at(coords, j, dim)));
            w[i * n + j] = v;
            w[j * n + i] = v;
        }
    double sum = 0.0;
    bicolored_graphs(n_white, k, [&](const ColoredGraph& g) {
        double prod = 1.0;
        for (const auto& [a, b] : g.edges) prod *= w[a * n + b];
        sum += prod;
    });
    return sum;
}

} // namespace

double kirkwood_omega_one_oracle(double sigma, const RadialFn& h,
                                 std::span<const double> x, std::span<const double> ys,
                                 int k, int dim) {
    if (k < 1 || k > kOracleGraphCeiling)
        throw LimitExceeded("kirkwood_omega_one_oracle: k outside [1, 4]");
    return std::pow(sigma, k) * bicolored_sum(h, 1, x, ys, k, dim);
}

double kirkwood_omega_two_oracle(double sigma, const RadialFn& h,
                                 std::span<const double> x1, std::span<const double> x2,
                                 std::span<const double> ys, int k, int dim) {
    if (k < 1 || k > kOracleGraphCeiling)
        throw LimitExceeded("kirkwood_omega_two_oracle: k outside [1, 4]");
    std::vector<double> whites(x1.begin(), x1.end());
    whites.insert(whites.end(), x2.begin(), x2.end());
    return std::pow(sigma, k) * bicolored_sum(h, 2, whites, ys, k, dim);
}

double truncation_oracle(const RhoEvaluator& rho, int n, std::span<const double> pts,
                         int dim) {
    if (n < 1 || n > kOracleTruncationCeiling)
        throw LimitExceeded("truncation_oracle: n outside [1, 6]");

    // Memoised over subsets of the tuple; each value comes from the raw
    // recursion with an explicit partition walk.
    std::vector<double> memo(std::size_t{1} << n,
                             std::numeric_limits<double>::quiet_NaN());
    std::vector<double> buf;

    std::function<double(unsigned)> trunc = [&](unsigned mask) -> double {
        if (!std::isnan(memo[mask])) return memo[mask];
        const int size = std::popcount(mask);
        std::vector<int> members;
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) members.push_back(i);

        gather_subset(pts, dim, mask, buf);
        double value = rho(size, buf);
        if (size >= 2) {
            set_partitions(size, [&](const Partition& p) {
                if (p.blocks.size() < 2) return;
                double prod = 1.0;
                for (const auto& block : p.blocks) {
                    unsigned sub = 0;
                    for (int idx : block) sub |= 1u << members[idx];
                    prod *= trunc(sub);
                }
                value -= prod;
            });
        }
        memo[mask] = value;
        return value;
    };
    return trunc((1u << n) - 1u);
}

double mayer_leading_omega(double z, const RadialFn& u, int n_white,
                           std::span<const double> whites, std::span<const double> ys,
                           int k, int dim) {
    if (k < 1 || k > kOracleGraphCeiling)
        throw LimitExceeded("mayer_leading_omega: k outside [1, 4]");
    RadialFn f = [&u](double r) { return std::expm1(-u(r)); };
    return std::pow(z, n_white + k) * bicolored_sum(f, n_white, whites, ys, k, dim);
}

} // namespace corrinv
