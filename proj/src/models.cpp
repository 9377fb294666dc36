#include "corrinv/models.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "corrinv/combinatorics.hpp"
#include "corrinv/errors.hpp"
#include "corrinv/quadrature.hpp"
#include "corrinv/ruelle.hpp"

namespace corrinv {

double CorrelationModel::rho(int n, std::span<const double> pts) const {
    if (n == 0) return 1.0;
    if (n < 0 || n > max_order_)
        throw LimitExceeded(name() + ": rho order " + std::to_string(n) +
                            " exceeds max_order " + std::to_string(max_order_));
    return rho_impl(n, pts);
}

double CorrelationModel::rho_t(int n, std::span<const double> pts) const {
    if (n == 0) return 0.0;
    if (n == 1) return density_;
    if (n < 0 || n > max_order_)
        throw LimitExceeded(name() + ": rho_t order " + std::to_string(n) +
                            " exceeds max_order " + std::to_string(max_order_));
    return rho_t_impl(n, pts);
}

namespace {

// Pair separations of an n-tuple in vertex_pairs order.
void fill_pair_distances(std::span<const double> pts, int n, int dim,
                         std::vector<double>& out) {
    out.clear();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            out.push_back(distance(point_at(pts, i, dim), point_at(pts, j, dim)));
}

class PoissonModel final : public CorrelationModel {
public:
    PoissonModel(double rho, int dim)
        : CorrelationModel(dim, rho, 64, rho, 1.0) {}
    std::string name() const override { return "poisson"; }

private:
    double rho_impl(int n, std::span<const double>) const override {
        return std::pow(density_, n);
    }
    double rho_t_impl(int, std::span<const double>) const override { return 0.0; }
};

class KirkwoodModel final : public CorrelationModel {
public:
    KirkwoodModel(double sigma, RadialFn h, int dim, int max_order, double corr_len)
        : CorrelationModel(dim, sigma, max_order, 0.0, corr_len), h_(std::move(h)) {
        if (sigma <= 0.0) throw std::invalid_argument("kirkwood_model: sigma must be > 0");
        if (max_order > kMaxCachedGraphOrder)
            throw LimitExceeded("kirkwood_model: max_order exceeds the graph ceiling");
        double sup = 0.0;
        for (double r = 0.0; r <= 10.0 * corr_len; r += 0.01 * corr_len)
            sup = std::max(sup, h_(r));
        ruelle_xi_ = sigma * std::pow(1.0 + sup, 0.5 * (max_order - 1));
    }
    std::string name() const override { return "kirkwood"; }

private:
    double rho_impl(int n, std::span<const double> pts) const override {
        std::vector<double> d;
        fill_pair_distances(pts, n, dim_, d);
        double prod = std::pow(density_, n);
        for (double r : d) prod *= 1.0 + h_(r);
        return prod;
    }

    double rho_t_impl(int n, std::span<const double> pts) const override {
        // The connected-graph family gets dense quickly (26704 members at
        // order 6); past order 5 the equivalent partition recursion through
        // rho is far cheaper per evaluation.
        if (n > 5) {
            FiniteFamily rho_family(max_order_, dim_, 1.0,
                                    [this](int m, std::span<const double> p) {
                                        return rho_impl(m, p);
                                    });
            return star_log(rho_family)(n, pts);
        }
        std::vector<double> d;
        fill_pair_distances(pts, n, dim_, d);
        std::vector<double> edge(d.size());
        for (std::size_t e = 0; e < d.size(); ++e) edge[e] = h_(d[e]);
        double sum = 0.0;
        for (std::uint32_t mask : connected_edge_masks(n)) {
            double prod = 1.0;
            for (std::uint32_t m = mask; m; m &= m - 1)
                prod *= edge[std::countr_zero(m)];
            sum += prod;
        }
        return std::pow(density_, n) * sum;
    }

    RadialFn h_;
};

class DeterminantalModel final : public CorrelationModel {
public:
    DeterminantalModel(double z, RadialFn kappa, int dim, int max_order, double corr_len)
        : CorrelationModel(dim, z, max_order, z, corr_len), kappa_(std::move(kappa)) {
        if (z <= 0.0) throw std::invalid_argument("determinantal_model: z must be > 0");
        if (max_order > kMaxCycleOrder)
            throw LimitExceeded("determinantal_model: max_order exceeds the cycle ceiling");
    }
    std::string name() const override { return "determinantal"; }

private:
    void kernel_matrix(int n, std::span<const double> pts, std::vector<double>& m) const {
        m.assign(static_cast<std::size_t>(n) * n, 0.0);
        for (int i = 0; i < n; ++i) {
            m[i * n + i] = kappa_(0.0);
            for (int j = i + 1; j < n; ++j) {
                const double v = kappa_(distance(point_at(pts, i, dim_), point_at(pts, j, dim_)));
                m[i * n + j] = v;
                m[j * n + i] = v;
            }
        }
    }

    double rho_impl(int n, std::span<const double> pts) const override {
        std::vector<double> m;
        kernel_matrix(n, pts, m);
        // LU with partial pivoting; n is tiny.
        double det = 1.0;
        for (int c = 0; c < n; ++c) {
            int piv = c;
            for (int r = c + 1; r < n; ++r)
                if (std::abs(m[r * n + c]) > std::abs(m[piv * n + c])) piv = r;
            if (piv != c) {
                for (int k = 0; k < n; ++k) std::swap(m[c * n + k], m[piv * n + k]);
                det = -det;
            }
            const double p = m[c * n + c];
            if (p == 0.0) return 0.0;
            det *= p;
            for (int r = c + 1; r < n; ++r) {
                const double f = m[r * n + c] / p;
                for (int k = c; k < n; ++k) m[r * n + k] -= f * m[c * n + k];
            }
        }
        return std::pow(density_, n) * det;
    }

    double rho_t_impl(int n, std::span<const double> pts) const override {
        std::vector<double> m;
        kernel_matrix(n, pts, m);
        double sum = 0.0;
        cyclic_permutations(n, [&](std::span<const int> sigma) {
            double prod = 1.0;
            for (int j = 0; j < n; ++j) prod *= m[j * n + sigma[j]];
            sum += prod;
        });
        const double sign = (n % 2 == 0) ? -1.0 : 1.0;
        return sign * std::pow(density_, n) * sum;
    }

    RadialFn kappa_;
};

class LowActivityModel final : public CorrelationModel {
public:
    LowActivityModel(double z, RadialFn u, double range, int mayer_order, int max_order,
                     double corr_len)
        : CorrelationModel(1, 0.0, max_order, 0.0, corr_len), z_(z), u_(std::move(u)),
          range_(range), mayer_order_(mayer_order) {
        if (z <= 0.0) throw std::invalid_argument("low_activity_model: z must be > 0");
        if (mayer_order != 0 && mayer_order != 1)
            throw std::invalid_argument("low_activity_model: mayer_order must be 0 or 1");
        const double x0[] = {0.0};
        density_ = correlation(1, x0);
        double f_abs = adaptive_integrate([this](double y) { return std::abs(mayer_f(y)); },
                                          -range_, range_);
        ruelle_xi_ = z_ * (1.0 + z_ * max_order * f_abs);
    }
    std::string name() const override { return "low_activity"; }

private:
    double mayer_f(double r) const { return std::expm1(-u_(std::abs(r))); }

    double correlation(int m, std::span<const double> pts) const {
        double energy = 0.0;
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j) energy += u_(std::abs(pts[i] - pts[j]));
        double bracket = 1.0;
        if (mayer_order_ == 1) {
            double lo = pts[0], hi = pts[0];
            for (int i = 1; i < m; ++i) {
                lo = std::min(lo, pts[i]);
                hi = std::max(hi, pts[i]);
            }
            const double integral = adaptive_integrate(
                [this, pts, m](double y) {
                    double prod = 1.0;
                    for (int i = 0; i < m; ++i) prod *= 1.0 + mayer_f(pts[i] - y);
                    return prod - 1.0;
                },
                lo - range_, hi + range_);
            bracket += z_ * integral;
        }
        return std::pow(z_, m) * std::exp(-energy) * bracket;
    }

    double rho_impl(int n, std::span<const double> pts) const override {
        return correlation(n, pts);
    }

    double rho_t_impl(int n, std::span<const double> pts) const override {
        FiniteFamily rho_family(max_order_, 1, 1.0,
                                [this](int m, std::span<const double> p) {
                                    return correlation(m, p);
                                });
        return star_log(rho_family)(n, pts);
    }

    double z_;
    RadialFn u_;
    double range_;
    int mayer_order_;
};

class TabulatedModel final : public CorrelationModel {
public:
    TabulatedModel(RadialTable g2, PairTable t3, double rho)
        : CorrelationModel(1, rho, 3, 0.0, 1.0), g2_(std::move(g2)), t3_(std::move(t3)) {
        validate();
        double g2max = 1.0, t3max = 0.0;
        for (double v : g2_.value) g2max = std::max(g2max, v);
        for (double v : t3_.values) t3max = std::max(t3max, std::abs(v));
        ruelle_xi_ = rho * std::max({1.0, std::sqrt(g2max), std::cbrt(1.0 + t3max)});
        const double span = g2_.r.empty() ? 1.0 : g2_.r.back();
        correlation_length_ = std::max(1.0, span / 6.0);
    }
    std::string name() const override { return "tabulated"; }

private:
    void validate() const {
        if (g2_.r.size() != g2_.value.size() || g2_.r.size() < 2)
            throw ConfigError("tabulated_model: g2 table needs >= 2 rows");
        if (std::abs(g2_.r.front()) > 1e-12)
            throw ConfigError("tabulated_model: g2 grid must start at r = 0");
        for (std::size_t i = 0; i + 1 < g2_.r.size(); ++i)
            if (!(g2_.r[i + 1] > g2_.r[i]))
                throw ConfigError("tabulated_model: g2 grid not strictly increasing at row " +
                                  std::to_string(i + 1));
        for (double v : g2_.value) {
            if (!std::isfinite(v)) throw ConfigError("tabulated_model: non-finite g2 value");
            if (v < 0.0) throw ConfigError("tabulated_model: negative g2 value");
        }
        if (t3_.u.size() < 2 || t3_.v.size() < 2 ||
            t3_.values.size() != t3_.u.size() * t3_.v.size())
            throw ConfigError("tabulated_model: t3 table is not a complete grid");
        for (auto* axis : {&t3_.u, &t3_.v})
            for (std::size_t i = 0; i + 1 < axis->size(); ++i)
                if (!((*axis)[i + 1] > (*axis)[i]))
                    throw ConfigError("tabulated_model: t3 grid not strictly increasing");
        for (double v : t3_.values)
            if (!std::isfinite(v)) throw ConfigError("tabulated_model: non-finite t3 value");
        // Symmetry of t3 in its two difference variables, checked where the
        // grid covers the swapped point.
        for (std::size_t i = 0; i < t3_.u.size(); ++i)
            for (std::size_t j = 0; j < t3_.v.size(); ++j) {
                const auto ui = std::lower_bound(t3_.u.begin(), t3_.u.end(), t3_.v[j]);
                const auto vj = std::lower_bound(t3_.v.begin(), t3_.v.end(), t3_.u[i]);
                if (ui == t3_.u.end() || *ui != t3_.v[j]) continue;
                if (vj == t3_.v.end() || *vj != t3_.u[i]) continue;
                const std::size_t si = ui - t3_.u.begin(), sj = vj - t3_.v.begin();
                const double a = t3_.values[i * t3_.v.size() + j];
                const double b = t3_.values[si * t3_.v.size() + sj];
                if (std::abs(a - b) > 1e-8)
                    throw ConfigError("tabulated_model: t3 asymmetric beyond 1e-8 at (" +
                                      std::to_string(t3_.u[i]) + ", " +
                                      std::to_string(t3_.v[j]) + ")");
            }
    }

    double g2_at(double r) const {
        if (r >= g2_.r.back()) return 1.0; // clustering decay
        const auto it = std::upper_bound(g2_.r.begin(), g2_.r.end(), r);
        const std::size_t i = std::max<std::ptrdiff_t>(1, it - g2_.r.begin());
        const double t = (r - g2_.r[i - 1]) / (g2_.r[i] - g2_.r[i - 1]);
        return g2_.value[i - 1] + t * (g2_.value[i] - g2_.value[i - 1]);
    }

    double t3_at(double u, double v) const {
        auto inside = [](const std::vector<double>& axis, double x) {
            return x >= axis.front() && x <= axis.back();
        };
        if (!inside(t3_.u, u) || !inside(t3_.v, v)) {
            // The family is even under global reflection.
            if (inside(t3_.u, -u) && inside(t3_.v, -v)) return t3_at(-u, -v);
            return 0.0;
        }
        auto cell = [](const std::vector<double>& axis, double x) {
            const auto it = std::upper_bound(axis.begin(), axis.end(), x);
            return std::min(axis.size() - 2,
                            static_cast<std::size_t>(
                                std::max<std::ptrdiff_t>(0, it - axis.begin() - 1)));
        };
        const std::size_t i = cell(t3_.u, u), j = cell(t3_.v, v);
        const double tu = (u - t3_.u[i]) / (t3_.u[i + 1] - t3_.u[i]);
        const double tv = (v - t3_.v[j]) / (t3_.v[j + 1] - t3_.v[j]);
        const std::size_t w = t3_.v.size();
        const double v00 = t3_.values[i * w + j], v01 = t3_.values[i * w + j + 1];
        const double v10 = t3_.values[(i + 1) * w + j], v11 = t3_.values[(i + 1) * w + j + 1];
        return (1 - tu) * ((1 - tv) * v00 + tv * v01) + tu * ((1 - tv) * v10 + tv * v11);
    }

    double rho_t_impl(int n, std::span<const double> pts) const override {
        if (n == 2) return density_ * density_ * (g2_at(std::abs(pts[0] - pts[1])) - 1.0);
        // n == 3; the last point plays the centring role.
        return std::pow(density_, 3) * t3_at(pts[0] - pts[2], pts[1] - pts[2]);
    }

    double rho_impl(int n, std::span<const double> pts) const override {
        if (n == 1) return density_;
        if (n == 2) return density_ * density_ * g2_at(std::abs(pts[0] - pts[1]));
        const double t2_01 = rho_t_impl(2, pts.subspan(0, 2));
        const double p02[] = {pts[0], pts[2]};
        const double p12[] = {pts[1], pts[2]};
        return rho_t_impl(3, pts) +
               density_ * (t2_01 + rho_t_impl(2, p02) + rho_t_impl(2, p12)) +
               std::pow(density_, 3);
    }

    RadialTable g2_;
    PairTable t3_;
};

} // namespace

ModelPtr poisson_model(double rho, int dim) {
    if (rho <= 0.0) throw std::invalid_argument("poisson_model: rho must be > 0");
    return std::make_shared<PoissonModel>(rho, dim);
}

ModelPtr kirkwood_model(double sigma, RadialFn h, int dim, int max_order,
                        double correlation_length) {
    return std::make_shared<KirkwoodModel>(sigma, std::move(h), dim, max_order,
                                           correlation_length);
}

ModelPtr determinantal_model(double z, RadialFn kappa, int dim, int max_order,
                             double correlation_length) {
    return std::make_shared<DeterminantalModel>(z, std::move(kappa), dim, max_order,
                                                correlation_length);
}

ModelPtr low_activity_model(double z, RadialFn u, double interaction_range, int mayer_order,
                            int max_order, double correlation_length) {
    return std::make_shared<LowActivityModel>(z, std::move(u), interaction_range,
                                              mayer_order, max_order, correlation_length);
}

ModelPtr tabulated_model(RadialTable g2, PairTable t3, double rho) {
    if (rho <= 0.0) throw std::invalid_argument("tabulated_model: rho must be > 0");
    return std::make_shared<TabulatedModel>(std::move(g2), std::move(t3), rho);
}

AssumptionParams estimate_assumption_params(const CorrelationModel& model, double r,
                                            double halfwidth) {
    const double rho = model.density();
    Box box{model.dim(), halfwidth};
    QuadratureSpec spec;
    spec.nodes_per_axis = 48;
    spec.max_total_dim = 8;

    std::vector<double> origin(model.dim(), 0.0);
    auto abs_rho_t2 = [&](std::span<const double> y) {
        std::vector<double> pts(origin);
        append_point(pts, y);
        return std::abs(model.rho_t(2, pts));
    };
    const double j1 = integrate_k(abs_rho_t2, 1, box, spec).value;

    QuadratureSpec spec2 = spec;
    spec2.nodes_per_axis = 32;
    auto abs_rho_t3 = [&](std::span<const double> ys) {
        std::vector<double> pts(origin);
        for (std::size_t i = 0; i < ys.size(); ++i) pts.push_back(ys[i]);
        return std::abs(model.rho_t(3, pts));
    };
    const double j2 = integrate_k(abs_rho_t3, 2, box, spec2).value;

    AssumptionParams p;
    p.r = r;
    p.D_rho = (j1 > 0.0) ? j2 / (2.0 * j1) : 0.0;
    const double ma = (p.D_rho > 0.0) ? j1 / (rho * p.D_rho) : 0.0;

    // d(r): grid scan of rho^2 / rho^(2) beyond the cutoff.
    double d_of_r = 0.0;
    const double r_hi = std::max(r, 0.0) + 6.0 * model.correlation_length();
    for (int i = 0; i <= 200; ++i) {
        const double s = r + (r_hi - r) * i / 200.0;
        std::vector<double> pts(2 * model.dim(), 0.0);
        pts[model.dim()] = s;
        const double r2 = model.rho(2, pts);
        if (r2 > 0.0) d_of_r = std::max(d_of_r, rho * rho / r2);
    }
    p.d_of_r = d_of_r > 0.0 ? d_of_r : 1.0;

    // sup over anchor pairs at separation r of the order-3 integral.
    std::vector<double> anchors(2 * model.dim(), 0.0);
    anchors[model.dim()] = std::max(r, model.correlation_length());
    auto abs_rho_t3b = [&](std::span<const double> y) {
        std::vector<double> pts(anchors);
        append_point(pts, y);
        return std::abs(model.rho_t(3, pts));
    };
    const double j2b = integrate_k(abs_rho_t3b, 1, box, spec).value;
    const double ma2 =
        (p.D_rho > 0.0 && rho > 0.0) ? j2b / (2.0 * p.D_rho * rho * rho) : ma;
    p.A = (ma > 0.0) ? ma2 / ma : 1.0;
    p.M = (p.A > 0.0 && ma > 0.0) ? ma / p.A : 0.0;
    return p;
}

RadialFn gaussian_bump(double amplitude, double width) {
    return [amplitude, width](double r) { return amplitude * std::exp(-(r * r) / (width * width)); };
}

RadialFn gaussian_kernel(double width) {
    return [width](double r) { return std::exp(-(r * r) / (2.0 * width * width)); };
}

RadialFn gaussian_potential(double epsilon, double width) {
    return [epsilon, width](double r) {
        if (std::abs(r) > 4.0 * width) return 0.0;
        return epsilon * std::exp(-(r * r) / (width * width));
    };
}

} // namespace corrinv
