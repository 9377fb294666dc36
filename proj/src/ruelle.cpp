#include "corrinv/ruelle.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>
#include <vector>

namespace corrinv {

namespace {

void require_compatible(const FiniteFamily& a, const FiniteFamily& b, const char* op) {
    if (a.dim() != b.dim())
        throw std::invalid_argument(std::string(op) + ": mismatched dim");
}

// Values of a family on every subset of an n-tuple, indexed by bitmask.
std::vector<double> subset_values(const FiniteFamily& f, int n,
                                  std::span<const double> pts, int dim) {
    std::vector<double> vals(std::size_t{1} << n);
    std::vector<double> buf;
    buf.reserve(static_cast<std::size_t>(n) * dim);
    for (unsigned mask = 0; mask < vals.size(); ++mask) {
        gather_subset(pts, dim, mask, buf);
        vals[mask] = f(std::popcount(mask), buf);
    }
    return vals;
}

} // namespace

double FiniteFamily::operator()(int n, std::span<const double> pts) const {
    if (n == 0) return order0_;
    if (n < 0 || n > n_max_)
        throw std::invalid_argument("FiniteFamily: order " + std::to_string(n) +
                                    " outside [0, " + std::to_string(n_max_) + "]");
    return eval_(n, pts);
}

FiniteFamily unit_family(int n_max, int dim) {
    return FiniteFamily(n_max, dim, 1.0,
                        [](int, std::span<const double>) { return 0.0; });
}

FiniteFamily star_product(const FiniteFamily& psi, const FiniteFamily& phi) {
    require_compatible(psi, phi, "star_product");
    const int dim = psi.dim();
    auto p = psi, q = phi;
    return FiniteFamily(
        std::min(psi.n_max(), phi.n_max()), dim, psi.order0() * phi.order0(),
        [p, q, dim](int n, std::span<const double> pts) {
            const unsigned full = (1u << n) - 1u;
            std::vector<double> a, b;
            double sum = 0.0;
            for (unsigned mask = 0; mask <= full; ++mask) {
                gather_subset(pts, dim, mask, a);
                gather_subset(pts, dim, full & ~mask, b);
                sum += p(std::popcount(mask), a) * q(n - std::popcount(mask), b);
            }
            return sum;
        });
}

FiniteFamily star_exp(const FiniteFamily& phi) {
    if (phi.order0() != 0.0)
        throw std::invalid_argument("star_exp: order0 must be 0");
    const int dim = phi.dim();
    auto p = phi;
    return FiniteFamily(
        phi.n_max(), dim, 1.0,
        [p, dim](int n, std::span<const double> pts) {
            // E[S] = sum over the block B containing the lowest element of S
            // of Phi(B) E[S \ B]; E over all subsets realises the partition sum.
            const auto vals = subset_values(p, n, pts, dim);
            std::vector<double> e(vals.size(), 0.0);
            e[0] = 1.0;
            for (unsigned mask = 1; mask < e.size(); ++mask) {
                const unsigned low = mask & (~mask + 1u);
                double sum = 0.0;
                for (unsigned sub = mask; sub; sub = (sub - 1) & mask)
                    if (sub & low) sum += vals[sub] * e[mask & ~sub];
                e[mask] = sum;
            }
            return e.back();
        });
}

FiniteFamily star_log(const FiniteFamily& psi) {
    if (psi.order0() != 1.0)
        throw std::invalid_argument("star_log: order0 must be 1");
    const int dim = psi.dim();
    auto p = psi;
    return FiniteFamily(
        psi.n_max(), dim, 0.0,
        [p, dim](int n, std::span<const double> pts) {
            // L[S] = Psi(S) - sum_{B containing low(S), B proper} L[B] Psi(S\B),
            // filled in order of subset value so every L[B] is ready when used.
            const auto vals = subset_values(p, n, pts, dim);
            std::vector<double> l(vals.size(), 0.0);
            for (unsigned mask = 1; mask < l.size(); ++mask) {
                const unsigned low = mask & (~mask + 1u);
                double sum = 0.0;
                for (unsigned sub = mask; sub; sub = (sub - 1) & mask)
                    if ((sub & low) && sub != mask) sum += l[sub] * vals[mask & ~sub];
                l[mask] = vals[mask] - sum;
            }
            return l.back();
        });
}

FiniteFamily d_reduce(std::span<const double> gamma, int gamma_n, const FiniteFamily& psi) {
    if (gamma_n > psi.n_max())
        throw std::invalid_argument("d_reduce: |gamma| exceeds the family order bound");
    const int dim = psi.dim();
    std::vector<double> g(gamma.begin(), gamma.end());
    auto p = psi;

    std::vector<double> g0(g);
    const double order0 = psi(gamma_n, g0);

    return FiniteFamily(
        psi.n_max() - gamma_n, dim, order0,
        [p, g, gamma_n, dim](int n, std::span<const double> pts) {
            // Off the disjoint set the reduction vanishes.
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < gamma_n; ++j) {
                    bool same = true;
                    for (int c = 0; c < dim; ++c)
                        if (pts[i * dim + c] != g[j * dim + c]) { same = false; break; }
                    if (same) return 0.0;
                }
            std::vector<double> joined(pts.begin(), pts.end());
            joined.insert(joined.end(), g.begin(), g.end());
            return p(n + gamma_n, joined);
        });
}

} // namespace corrinv
