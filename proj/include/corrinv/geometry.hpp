#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "corrinv/errors.hpp"

namespace corrinv {

/// Symmetric box Lambda = [-L, L]^d.
struct Box {
    int dim = 1;
    double halfwidth = 6.0;

    double volume(int k = 1) const {
        return std::pow(2.0 * halfwidth, dim * k);
    }
};

/// A point tuple is a flat coordinate buffer: point i occupies
/// [i*dim, (i+1)*dim). Helpers below keep that convention in one place.
inline std::span<const double> point_at(std::span<const double> pts, int i, int dim) {
    return pts.subspan(static_cast<std::size_t>(i) * dim, dim);
}

inline int tuple_size(std::span<const double> pts, int dim) {
    return static_cast<int>(pts.size()) / dim;
}

inline double distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

inline void append_point(std::vector<double>& buf, std::span<const double> p) {
    buf.insert(buf.end(), p.begin(), p.end());
}

/// Gathers the points selected by a subset bitmask into `out` (cleared first).
inline void gather_subset(std::span<const double> pts, int dim, unsigned mask,
                          std::vector<double>& out) {
    out.clear();
    const int n = tuple_size(pts, dim);
    for (int i = 0; i < n; ++i)
        if (mask & (1u << i)) append_point(out, point_at(pts, i, dim));
}

} // namespace corrinv
