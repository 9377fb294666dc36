#include "corrinv/combinatorics.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <string>

#include "corrinv/errors.hpp"

namespace corrinv {

namespace {

Partition partition_from_rgs(std::span<const int> a) {
    Partition p;
    int nblocks = a.empty() ? 0 : *std::max_element(a.begin(), a.end()) + 1;
    p.blocks.resize(nblocks);
    for (int i = 0; i < static_cast<int>(a.size()); ++i)
        p.blocks[a[i]].push_back(i);
    return p;
}

// Restricted growth strings: a[0]=0, a[i] <= 1 + max(a[0..i-1]).
void rgs_walk(int n, int pos, std::vector<int>& a, int hi,
              const std::function<void(const Partition&)>& visit) {
    if (pos == n) {
        visit(partition_from_rgs(a));
        return;
    }
    for (int label = 0; label <= hi; ++label) {
        a[pos] = label;
        rgs_walk(n, pos + 1, a, std::max(hi, label + 1), visit);
    }
}

struct UnionFind {
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
    std::vector<int> parent;
};

} // namespace

void set_partitions(int n, const std::function<void(const Partition&)>& visit) {
    if (n < 0) throw LimitExceeded("set_partitions: n must be >= 0");
    if (n == 0) {
        visit(Partition{});
        return;
    }
    std::vector<int> a(n, 0);
    rgs_walk(n, 1, a, 1, visit);
}

std::vector<Partition> set_partitions(int n) {
    std::vector<Partition> out;
    set_partitions(n, [&](const Partition& p) { out.push_back(p); });
    return out;
}

void set_partitions_with_blocks(int n, int blocks,
                                const std::function<void(const Partition&)>& visit) {
    set_partitions(n, [&](const Partition& p) {
        if (static_cast<int>(p.blocks.size()) == blocks) visit(p);
    });
}

void ordered_splits(const std::vector<int>& indices, int m, const SplitConstraints& c,
                    const std::function<void(const OrderedSplit&)>& visit) {
    const int k = static_cast<int>(indices.size());
    std::vector<int> assign(k, 0);
    std::vector<int> part_size(m, 0);

    auto admissible = [&]() {
        if (c.at_least_one_nonempty &&
            std::all_of(part_size.begin(), part_size.end(), [](int s) { return s == 0; }))
            return false;
        for (int p : c.required_nonempty)
            if (part_size[p] == 0) return false;
        for (int p : c.required_proper)
            if (part_size[p] == k) return false;
        return true;
    };

    // Lexicographic walk over all m^k assignments.
    std::function<void(int)> walk = [&](int pos) {
        if (pos == k) {
            if (!admissible()) return;
            OrderedSplit s;
            s.parts.resize(m);
            for (int i = 0; i < k; ++i) s.parts[assign[i]].push_back(indices[i]);
            visit(s);
            return;
        }
        for (int p = 0; p < m; ++p) {
            assign[pos] = p;
            ++part_size[p];
            walk(pos + 1);
            --part_size[p];
        }
    };
    walk(0);
}

std::vector<OrderedSplit> ordered_splits(const std::vector<int>& indices, int m,
                                         const SplitConstraints& c) {
    std::vector<OrderedSplit> out;
    ordered_splits(indices, m, c, [&](const OrderedSplit& s) { out.push_back(s); });
    return out;
}

double bell_polynomial(std::span<const double> t) {
    // B_k = sum_{j=1..k} C(k-1, j-1) t_j B_{k-j}, B_0 = 1.
    const int k = static_cast<int>(t.size());
    std::vector<double> b(k + 1);
    b[0] = 1.0;
    for (int n = 1; n <= k; ++n) {
        double s = 0.0;
        for (int j = 1; j <= n; ++j) s += binomial(n - 1, j - 1) * t[j - 1] * b[n - j];
        b[n] = s;
    }
    return b[k];
}

std::vector<std::pair<int, int>> vertex_pairs(int n) {
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    return pairs;
}

bool edge_mask_connected(int n, std::uint32_t mask) {
    if (n <= 1) return true;
    const auto pairs = vertex_pairs(n);
    UnionFind uf(n);
    for (std::size_t e = 0; e < pairs.size(); ++e)
        if (mask & (std::uint32_t{1} << e)) uf.unite(pairs[e].first, pairs[e].second);
    const int root = uf.find(0);
    for (int v = 1; v < n; ++v)
        if (uf.find(v) != root) return false;
    return true;
}

void connected_graphs(int n,
                      const std::function<void(std::span<const std::pair<int, int>>)>& visit) {
    if (n < 1 || n > kMaxGraphOrder)
        throw LimitExceeded("connected_graphs: n = " + std::to_string(n) +
                            " outside [1, " + std::to_string(kMaxGraphOrder) + "]");
    const auto pairs = vertex_pairs(n);
    const std::uint32_t total = std::uint32_t{1} << pairs.size();
    std::vector<std::pair<int, int>> edges;
    for (std::uint32_t mask = 0; mask < total; ++mask) {
        if (!edge_mask_connected(n, mask)) continue;
        edges.clear();
        for (std::size_t e = 0; e < pairs.size(); ++e)
            if (mask & (std::uint32_t{1} << e)) edges.push_back(pairs[e]);
        visit(edges);
    }
}

const std::vector<std::uint32_t>& connected_edge_masks(int n) {
    if (n < 1 || n > kMaxCachedGraphOrder)
        throw LimitExceeded("connected_edge_masks: n = " + std::to_string(n) +
                            " outside [1, " + std::to_string(kMaxCachedGraphOrder) + "]");
    static std::vector<std::uint32_t> cache[kMaxCachedGraphOrder + 1];
    static std::once_flag built[kMaxCachedGraphOrder + 1];
    std::call_once(built[n], [n] {
        const auto pairs = vertex_pairs(n);
        const std::uint32_t total = std::uint32_t{1} << pairs.size();
        for (std::uint32_t mask = 0; mask < total; ++mask)
            if (edge_mask_connected(n, mask)) cache[n].push_back(mask);
    });
    return cache[n];
}

void bicolored_graphs(int n_white, int k_black,
                      const std::function<void(const ColoredGraph&)>& visit) {
    if (n_white != 1 && n_white != 2)
        throw LimitExceeded("bicolored_graphs: n_white must be 1 or 2");
    if (k_black < 0 || k_black > kMaxBicoloredBlack)
        throw LimitExceeded("bicolored_graphs: k_black = " + std::to_string(k_black) +
                            " outside [0, " + std::to_string(kMaxBicoloredBlack) + "]");
    if (k_black == 0) {
        // A lone white vertex is connected; two whites with no admissible edge are not.
        if (n_white == 1) visit(ColoredGraph{1, 0, {}});
        return;
    }

    const auto black_pairs = vertex_pairs(k_black);
    const std::uint32_t att_total = std::uint32_t{1} << k_black;

    ColoredGraph g;
    g.n_white = n_white;
    g.n_black = k_black;
    // Deleting the whites must leave the blacks connected, and every white
    // needs at least one black neighbour to keep the whole graph connected.
    for (std::uint32_t bmask : connected_edge_masks(k_black)) {
        for (std::uint32_t a1 = 1; a1 < att_total; ++a1) {
            const std::uint32_t a2_begin = (n_white == 2) ? 1 : 0;
            const std::uint32_t a2_end = (n_white == 2) ? att_total : 1;
            for (std::uint32_t a2 = a2_begin; a2 < a2_end; ++a2) {
                g.edges.clear();
                for (int b = 0; b < k_black; ++b)
                    if (a1 & (std::uint32_t{1} << b)) g.edges.emplace_back(0, n_white + b);
                if (n_white == 2)
                    for (int b = 0; b < k_black; ++b)
                        if (a2 & (std::uint32_t{1} << b)) g.edges.emplace_back(1, n_white + b);
                for (std::size_t e = 0; e < black_pairs.size(); ++e)
                    if (bmask & (std::uint32_t{1} << e))
                        g.edges.emplace_back(n_white + black_pairs[e].first,
                                             n_white + black_pairs[e].second);
                visit(g);
            }
        }
    }
}

std::vector<ColoredGraph> bicolored_graphs(int n_white, int k_black) {
    std::vector<ColoredGraph> out;
    bicolored_graphs(n_white, k_black, [&](const ColoredGraph& g) { out.push_back(g); });
    return out;
}

void cyclic_permutations(int n, const std::function<void(std::span<const int>)>& visit) {
    if (n < 1 || n > kMaxCycleOrder)
        throw LimitExceeded("cyclic_permutations: n = " + std::to_string(n) +
                            " outside [1, " + std::to_string(kMaxCycleOrder) + "]");
    if (n == 1) {
        const int fixed[] = {0};
        visit(fixed);
        return;
    }
    std::vector<int> rest(n - 1);
    std::iota(rest.begin(), rest.end(), 1);
    std::vector<int> sigma(n);
    do {
        // Cycle 0 -> rest[0] -> ... -> rest[n-2] -> 0.
        sigma[0] = rest[0];
        for (int i = 0; i + 1 < n - 1; ++i) sigma[rest[i]] = rest[i + 1];
        sigma[rest[n - 2]] = 0;
        visit(sigma);
    } while (std::next_permutation(rest.begin(), rest.end()));
}

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double b = 1.0;
    for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
    return b;
}

} // namespace corrinv
