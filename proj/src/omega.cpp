#include "corrinv/omega.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "corrinv/errors.hpp"
#include "corrinv/ruelle.hpp"

namespace corrinv {

namespace {

constexpr double kRho2Floor = 1e-300;

// Values of rho_T^(anchors + |S|)(anchor pts, S)/denominator for every subset
// S of the field tuple, indexed by bitmask. anchor_pts may be empty.
std::vector<double> anchored_ratio_table(const CorrelationModel& model,
                                         std::span<const double> anchor_pts, int n_anchor,
                                         std::span<const double> ys, int k,
                                         double denominator) {
    const int dim = model.dim();
    std::vector<double> table(std::size_t{1} << k);
    std::vector<double> buf;
    for (unsigned mask = 0; mask < table.size(); ++mask) {
        buf.assign(anchor_pts.begin(), anchor_pts.end());
        for (int i = 0; i < k; ++i)
            if (mask & (1u << i)) append_point(buf, point_at(ys, i, dim));
        table[mask] = model.rho_t(n_anchor + std::popcount(mask), buf) / denominator;
    }
    return table;
}

// Shared bottom-up fill. With two anchors the ordered-split subtractions are
// active; with one anchor only the highest-order term and the multi-block
// products remain.
class OmegaFill {
public:
    OmegaFill(const CorrelationModel& model, std::span<const double> x1,
              std::span<const double> x2, bool two_anchor, std::span<const double> ys,
              int k)
        : size_(std::size_t{1} << k) {
        const double rho = model.density();
        if (rho <= 0.0) throw std::domain_error("omega: model density is zero");

        std::vector<double> anchors(x1.begin(), x1.end());
        double denom = rho;
        double t2_ratio = 0.0;
        if (two_anchor) {
            anchors.insert(anchors.end(), x2.begin(), x2.end());
            const double rho2 = model.rho(2, anchors);
            if (!(rho2 > kRho2Floor))
                throw HardCoreViolation(
                    "omega: rho^(2) vanished at anchor separation " +
                        std::to_string(distance(x1, x2)) +
                        " (inside the hard-core radius)",
                    distance(x1, x2));
            denom = rho2;
            t2_ratio = model.rho_t(2, anchors) / rho2;
        }

        top_ = anchored_ratio_table(model, anchors, two_anchor ? 2 : 1, ys, k, denom);

        std::vector<double> tt;
        if (two_anchor) {
            const auto t1 = anchored_ratio_table(model, x1, 1, ys, k, rho);
            const auto t2 = anchored_ratio_table(model, x2, 1, ys, k, rho);
            // tt[S] = sum over ordered 2-splits (A, S\A) of t1[A] t2[S\A];
            // the empty part contributes rho_T^(1)/rho = 1 through t[0].
            tt.assign(size_, 0.0);
            for (unsigned mask = 0; mask < size_; ++mask) {
                double s = t1[0] * t2[mask];
                for (unsigned sub = mask; sub; sub = (sub - 1) & mask)
                    s += t1[sub] * t2[mask & ~sub];
                tt[mask] = s;
            }
        }

        omega_.assign(size_, 0.0);
        part_.assign(size_, 0.0); // part_[S] = sum over all partitions of S of prod omega
        part_[0] = 1.0;
        for (unsigned mask = 1; mask < size_; ++mask) {
            const unsigned low = mask & (~mask + 1u);
            double value = top_[mask];
            double multi = 0.0; // partitions with >= 2 blocks
            for (unsigned sub = mask; sub; sub = (sub - 1) & mask)
                if ((sub & low) && sub != mask) multi += omega_[sub] * part_[mask & ~sub];
            if (two_anchor) {
                value -= t2_ratio * tt[mask];
                // Ordered 3-splits: a proper non-empty part carrying the
                // lower-order omega products, the rest split over the anchors.
                for (unsigned s3 = mask; s3; s3 = (s3 - 1) & mask)
                    if (s3 != mask) value -= tt[mask & ~s3] * part_[s3];
            }
            value -= multi;
            omega_[mask] = value;
            part_[mask] = value + multi;
        }
    }

    double top_value() const { return omega_.back(); }

private:
    std::size_t size_;
    std::vector<double> top_;
    std::vector<double> omega_;
    std::vector<double> part_;
};

void check_order(const CorrelationModel& model, int needed, const char* who) {
    if (needed > model.max_order())
        throw LimitExceeded(std::string(who) + ": needs correlation order " +
                            std::to_string(needed) + " but model " + model.name() +
                            " supports " + std::to_string(model.max_order()));
}

} // namespace

double omega_one(const CorrelationModel& model, std::span<const double> x,
                 std::span<const double> ys, int k) {
    if (k < 1) throw std::invalid_argument("omega_one: k must be >= 1");
    check_order(model, 1 + k, "omega_one");
    return OmegaFill(model, x, {}, false, ys, k).top_value();
}

double omega_two(const CorrelationModel& model, std::span<const double> x1,
                 std::span<const double> x2, std::span<const double> ys, int k) {
    if (k < 1) throw std::invalid_argument("omega_two: k must be >= 1");
    check_order(model, 2 + k, "omega_two");
    return OmegaFill(model, x1, x2, true, ys, k).top_value();
}

double f2_family(const CorrelationModel& model, std::span<const double> x1,
                 std::span<const double> x2, std::span<const double> ys, int k) {
    return model.rho_t(k, ys) + omega_one(model, x1, ys, k) + omega_one(model, x2, ys, k) +
           omega_two(model, x1, x2, ys, k);
}

double reconstruct_check(const CorrelationModel& model, std::span<const double> x1,
                         std::span<const double> x2, std::span<const double> ys, int k) {
    check_order(model, 2 + k, "reconstruct_check");
    std::vector<double> a1(x1.begin(), x1.end());
    std::vector<double> a2(x2.begin(), x2.end());
    FiniteFamily f(k, model.dim(), 0.0,
                   [&model, a1, a2](int n, std::span<const double> pts) {
                       return f2_family(model, a1, a2, pts, n);
                   });
    const double lhs_factor = star_exp(f)(k, ys);

    std::vector<double> anchors(a1);
    anchors.insert(anchors.end(), a2.begin(), a2.end());
    const double rho2 = model.rho(2, anchors);

    std::vector<double> full(anchors);
    full.insert(full.end(), ys.begin(), ys.end());
    return std::abs(rho2 * lhs_factor - model.rho(2 + k, full));
}

} // namespace corrinv
