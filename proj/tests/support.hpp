#pragma once

#include <gossiplab/graph.hpp>
#include <gossiplab/types.hpp>

#include <cmath>
#include <cstdint>

namespace testing_support {

using namespace gossiplab;

inline DiGraph rgg(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    return random_geometric_graph(n, default_rgg_radius(n), rng);
}

inline DiGraph directed_rgg(std::size_t n, std::uint64_t seed, double p_asym = 0.3) {
    Rng rng(seed);
    const auto g = random_geometric_graph(n, default_rgg_radius(n), rng);
    return directify(g, p_asym, rng);
}

inline DiGraph complete_graph(std::size_t n) {
    std::vector<Edge> edges;
    for (NodeId i = 0; i < n; ++i)
        for (NodeId j = 0; j < n; ++j)
            if (i != j) edges.push_back({i, j});
    return DiGraph(n, edges);
}

/// i receives from i+1 (mod n): a directed cycle.
inline DiGraph directed_cycle(std::size_t n) {
    std::vector<Edge> edges;
    for (NodeId i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n});
    return DiGraph(n, edges);
}

/// 1-based edge list {(1,2),(2,3),(3,1),(1,3)}.
inline DiGraph three_node_digraph() { return DiGraph(3, {{0, 1}, {1, 2}, {2, 0}, {0, 2}}); }

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace testing_support
