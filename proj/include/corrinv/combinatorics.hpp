#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace corrinv {

/// Unordered set partition of {0..n-1}. Blocks are disjoint, non-empty and
/// sorted by least element, so enumeration is canonical and duplicate-free.
struct Partition {
    std::vector<std::vector<int>> blocks;
};

/// Ordered split of an index set into exactly m labeled, possibly empty parts.
struct OrderedSplit {
    std::vector<std::vector<int>> parts;
};

/// Graph with n_white anchor vertices (ids 0..n_white-1) followed by n_black
/// field vertices. Members of the admissible classes have no white-white edge,
/// are connected, and stay connected after deleting the white vertices.
struct ColoredGraph {
    int n_white = 0;
    int n_black = 0;
    std::vector<std::pair<int, int>> edges;
};

/// Emptiness constraints for ordered_splits. `required_nonempty[p]` forces
/// part p to hold at least one index; `required_proper[p]` forces part p to
/// omit at least one index.
struct SplitConstraints {
    bool at_least_one_nonempty = false;
    std::vector<int> required_nonempty;
    std::vector<int> required_proper;
};

inline constexpr int kMaxGraphOrder = 8;      // connected-graph enumeration ceiling
inline constexpr int kMaxCachedGraphOrder = 7;
inline constexpr int kMaxBicoloredBlack = 7;
inline constexpr int kMaxCycleOrder = 9;

/// All unordered set partitions of {0..n-1}, in restricted-growth-string
/// order. n = 0 yields the single empty partition.
void set_partitions(int n, const std::function<void(const Partition&)>& visit);
std::vector<Partition> set_partitions(int n);

/// Partitions restricted to exactly `blocks` blocks (Stirling subsets).
void set_partitions_with_blocks(int n, int blocks,
                                const std::function<void(const Partition&)>& visit);

/// Ordered assignments of `indices` to m labeled parts, filtered by `c`.
void ordered_splits(const std::vector<int>& indices, int m, const SplitConstraints& c,
                    const std::function<void(const OrderedSplit&)>& visit);
std::vector<OrderedSplit> ordered_splits(const std::vector<int>& indices, int m,
                                         const SplitConstraints& c = {});

/// Complete Bell polynomial B_k(t_1,...,t_k): sum over unordered set
/// partitions of {1..k} of the product of t_{block size}; B_0 = 1.
/// t[j] holds t_{j+1}.
double bell_polynomial(std::span<const double> t);

/// Lexicographic pair list [(0,1),(0,2),...,(n-2,n-1)]; the bit order used by
/// every edge mask below.
std::vector<std::pair<int, int>> vertex_pairs(int n);

/// Connectivity of the graph on n vertices given by an edge bitmask over
/// vertex_pairs(n). A graph with no vertices counts as connected.
bool edge_mask_connected(int n, std::uint32_t mask);

/// Streams all connected simple graphs on n labeled vertices as edge lists.
void connected_graphs(int n,
                      const std::function<void(std::span<const std::pair<int, int>>)>& visit);

/// Cached edge-bitmask form, for hot loops. n <= kMaxCachedGraphOrder.
const std::vector<std::uint32_t>& connected_edge_masks(int n);

/// Streams the admissible bicolored classes: connected, no white-white edge,
/// still connected after removing all whites. n_white must be 1 or 2.
void bicolored_graphs(int n_white, int k_black,
                      const std::function<void(const ColoredGraph&)>& visit);
std::vector<ColoredGraph> bicolored_graphs(int n_white, int k_black);

/// All (n-1)! permutations of {0..n-1} that form a single n-cycle.
/// sigma[i] is the image of i.
void cyclic_permutations(int n, const std::function<void(std::span<const int>)>& visit);

double factorial(int n);
double binomial(int n, int k);

} // namespace corrinv
