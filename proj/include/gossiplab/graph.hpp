#pragma once

#include "gossiplab/errors.hpp"
#include "gossiplab/types.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace gossiplab {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

/// A directed edge (receiver, sender): `receiver` hears every broadcast of `sender`.
struct Edge {
    NodeId receiver;
    NodeId sender;

    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/**
 * Directed communication graph on nodes 0..n-1.
 *
 * Edge (i, j) means node i receives messages transmitted by node j, so
 * in_neighbors(i) are the nodes i hears from and out_neighbors(j) are the
 * nodes reached by a broadcast of j. Immutable once constructed.
 */
class DiGraph {
public:
    DiGraph() = default;

    DiGraph(std::size_t n, std::vector<Edge> edges, std::optional<std::vector<Point>> coords = std::nullopt)
        : n_(n), edges_(std::move(edges)), coords_(std::move(coords)) {
        std::sort(edges_.begin(), edges_.end());
        edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
        if (coords_ && coords_->size() != n_) {
            throw InvalidArgument("coordinate count " + std::to_string(coords_->size()) +
                                  " does not match node count " + std::to_string(n_));
        }
        in_.assign(n_, {});
        out_.assign(n_, {});
        for (const auto& e : edges_) {
            if (e.receiver >= n_ || e.sender >= n_) {
                throw InvalidArgument("edge references node outside 0.." + std::to_string(n_ - 1));
            }
            if (e.receiver == e.sender) {
                throw InvalidArgument("self-loop on node " + std::to_string(e.receiver + 1));
            }
            in_[e.receiver].push_back(e.sender);
            out_[e.sender].push_back(e.receiver);
        }
        for (auto& v : out_) std::sort(v.begin(), v.end());
    }

    std::size_t size() const noexcept { return n_; }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    std::span<const Edge> edges() const noexcept { return edges_; }

    /// Nodes that `i` receives from.
    std::span<const NodeId> in_neighbors(NodeId i) const { return in_.at(i); }
    /// Nodes that receive broadcasts of `i`.
    std::span<const NodeId> out_neighbors(NodeId i) const { return out_.at(i); }
    std::size_t in_degree(NodeId i) const { return in_.at(i).size(); }
    std::size_t out_degree(NodeId i) const { return out_.at(i).size(); }

    bool has_edge(NodeId receiver, NodeId sender) const {
        return std::binary_search(edges_.begin(), edges_.end(), Edge{receiver, sender});
    }

    bool has_coords() const noexcept { return coords_.has_value(); }
    const std::optional<std::vector<Point>>& coords() const noexcept { return coords_; }

    bool is_symmetric() const {
        return std::all_of(edges_.begin(), edges_.end(),
                           [this](const Edge& e) { return has_edge(e.sender, e.receiver); });
    }

    friend bool operator==(const DiGraph&, const DiGraph&) = default;

private:
    std::size_t n_ = 0;
    std::vector<Edge> edges_;
    std::optional<std::vector<Point>> coords_;
    std::vector<std::vector<NodeId>> in_;
    std::vector<std::vector<NodeId>> out_;
};

namespace detail {

inline std::size_t count_reachable(const DiGraph& g, bool along_broadcasts) {
    std::vector<char> seen(g.size(), 0);
    std::vector<NodeId> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
        const NodeId u = stack.back();
        stack.pop_back();
        const auto next = along_broadcasts ? g.out_neighbors(u) : g.in_neighbors(u);
        for (NodeId v : next) {
            if (!seen[v]) {
                seen[v] = 1;
                ++count;
                stack.push_back(v);
            }
        }
    }
    return count;
}

}  // namespace detail

/// True iff every node reaches every other node along directed edges.
inline bool is_strongly_connected(const DiGraph& g) {
    if (g.size() == 0) throw InvalidArgument("is_strongly_connected: empty graph");
    if (g.size() == 1) return true;
    return detail::count_reachable(g, true) == g.size() && detail::count_reachable(g, false) == g.size();
}

inline double default_rgg_radius(std::size_t n) {
    return std::sqrt(2.0 * std::log(static_cast<double>(n)) / static_cast<double>(n));
}

inline constexpr int kDefaultRetryBudget = 1000;

/**
 * Random geometric graph in the unit square: n uniform points, an edge in both
 * directions between every pair within `radius`. Whole placements are redrawn
 * until the graph is connected.
 */
inline DiGraph random_geometric_graph(std::size_t n, double radius, Rng& rng,
                                      int max_retries = kDefaultRetryBudget) {
    if (n < 2) throw InvalidArgument("random_geometric_graph: need n >= 2");
    if (!(radius > 0.0)) throw InvalidArgument("random_geometric_graph: radius must be positive");

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double r2 = radius * radius;
    for (int attempt = 0; attempt < max_retries; ++attempt) {
        std::vector<Point> pts(n);
        for (auto& p : pts) {
            p.x = unit(rng);
            p.y = unit(rng);
        }
        std::vector<Edge> edges;
        for (NodeId i = 0; i < n; ++i) {
            for (NodeId j = i + 1; j < n; ++j) {
                const double dx = pts[i].x - pts[j].x;
                const double dy = pts[i].y - pts[j].y;
                if (dx * dx + dy * dy <= r2) {
                    edges.push_back({i, j});
                    edges.push_back({j, i});
                }
            }
        }
        DiGraph g(n, std::move(edges), std::move(pts));
        if (is_strongly_connected(g)) return g;
    }
    throw RetryExhausted("random_geometric_graph: no connected placement within " +
                         std::to_string(max_retries) + " draws; radius " + std::to_string(radius) +
                         " is too small for n=" + std::to_string(n));
}

/**
 * Turns a symmetric graph into a digraph: each bidirectional pair independently
 * keeps only one (random) direction with probability `p_asym`. Coin flips are
 * redrawn wholesale until the result is strongly connected.
 */
inline DiGraph directify(const DiGraph& g, double p_asym, Rng& rng, int max_retries = kDefaultRetryBudget) {
    if (!(p_asym >= 0.0 && p_asym < 1.0)) throw InvalidArgument("directify: p_asym must lie in [0, 1)");
    if (!g.is_symmetric()) throw InvalidArgument("directify: input graph must be symmetric");
    if (!is_strongly_connected(g)) throw NotStronglyConnected("directify: input graph is not connected");

    std::bernoulli_distribution flip(p_asym);
    std::bernoulli_distribution coin(0.5);
    for (int attempt = 0; attempt < max_retries; ++attempt) {
        std::vector<Edge> edges;
        edges.reserve(g.edge_count());
        for (const auto& e : g.edges()) {
            if (e.receiver > e.sender) continue;  // visit each pair once
            if (flip(rng)) {
                if (coin(rng)) {
                    edges.push_back(e);
                } else {
                    edges.push_back({e.sender, e.receiver});
                }
            } else {
                edges.push_back(e);
                edges.push_back({e.sender, e.receiver});
            }
        }
        DiGraph d(g.size(), std::move(edges), g.coords());
        if (is_strongly_connected(d)) return d;
    }
    throw RetryExhausted("directify: no strongly connected orientation within " + std::to_string(max_retries) +
                         " draws");
}

/// L = diag(A 1) - A. The diagonal is the row sum of A, so L 1 = 0 up to rounding.
inline WeightedMatrix laplacian(const WeightedMatrix& a) {
    if (a.rows() != a.cols()) throw InvalidArgument("laplacian: matrix must be square");
    WeightedMatrix l = -a;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        double row = 0.0;
        for (Eigen::Index j = 0; j < a.cols(); ++j) row += a(i, j);
        l(i, i) = row - a(i, i);
    }
    return l;
}

// ---------------------------------------------------------------------------
// Edge-list text format
//
//   # optional comment lines
//   n <count>
//   <i> <j>            one per directed edge (i receives from j), 1-based
//   coord <i> <x> <y>  optional, 1-based
// ---------------------------------------------------------------------------

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_edge_list(std::ostream& os, const DiGraph& g) {
    os << "n " << g.size() << '\n';
    for (const auto& e : g.edges()) os << e.receiver + 1 << ' ' << e.sender + 1 << '\n';
    if (g.coords()) {
        const auto& pts = *g.coords();
        for (NodeId i = 0; i < pts.size(); ++i) {
            os << "coord " << i + 1 << ' ' << format_double(pts[i].x) << ' ' << format_double(pts[i].y) << '\n';
        }
    }
}

inline DiGraph read_edge_list(std::istream& is) {
    std::string line;
    std::optional<std::size_t> n;
    std::vector<Edge> edges;
    std::vector<std::optional<Point>> coords;
    std::size_t lineno = 0;

    auto fail = [&](const std::string& msg) {
        throw InvalidArgument("edge list line " + std::to_string(lineno) + ": " + msg);
    };
    auto node = [&](long long id) -> NodeId {
        if (id < 1 || static_cast<std::size_t>(id) > *n) fail("node id " + std::to_string(id) + " out of range");
        return static_cast<NodeId>(id - 1);
    };

    while (std::getline(is, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line);
        std::string head;
        ls >> head;
        if (!n) {
            long long count = 0;
            if (head != "n" || !(ls >> count) || count < 1) fail("expected header 'n <count>'");
            n = static_cast<std::size_t>(count);
            coords.assign(*n, std::nullopt);
            continue;
        }
        if (head == "coord") {
            long long id = 0;
            Point p;
            if (!(ls >> id >> p.x >> p.y)) fail("expected 'coord <i> <x> <y>'");
            coords[node(id)] = p;
            continue;
        }
        long long i = 0, j = 0;
        std::istringstream es(line);
        if (!(es >> i >> j)) fail("expected '<i> <j>'");
        edges.push_back({node(i), node(j)});
    }
    if (!n) throw InvalidArgument("edge list: missing 'n <count>' header");

    std::optional<std::vector<Point>> pts;
    const auto with_coords = std::count_if(coords.begin(), coords.end(), [](const auto& c) { return c.has_value(); });
    if (with_coords == static_cast<long>(*n)) {
        pts.emplace();
        for (const auto& c : coords) pts->push_back(*c);
    } else if (with_coords != 0) {
        throw InvalidArgument("edge list: coordinates given for some nodes but not all");
    }
    return DiGraph(*n, std::move(edges), std::move(pts));
}

}  // namespace gossiplab
