#pragma once

#include "gossiplab/errors.hpp"
#include "gossiplab/graph.hpp"
#include "gossiplab/types.hpp"

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gossiplab {

enum class SchemeKind { UBGA1, UBGA2, UBGA3, BBGA, ClassicBGA, Custom };

/// How the companion weights B are derived from the graph.
enum class CompanionRule {
    Unbiased,  // B_{j,k} = 1/outdeg(k): column-stochastic
    Biased,    // B_{j,k} = 1/indeg(j): row-stochastic
    None,      // B = 0, d = 0 (classic broadcast gossip)
};

inline std::string_view to_string(SchemeKind kind) {
    switch (kind) {
        case SchemeKind::UBGA1: return "ubga1";
        case SchemeKind::UBGA2: return "ubga2";
        case SchemeKind::UBGA3: return "ubga3";
        case SchemeKind::BBGA: return "bbga";
        case SchemeKind::ClassicBGA: return "classic";
        case SchemeKind::Custom: return "custom";
    }
    return "?";
}

inline SchemeKind parse_scheme_kind(std::string_view name) {
    for (auto kind : {SchemeKind::UBGA1, SchemeKind::UBGA2, SchemeKind::UBGA3, SchemeKind::BBGA,
                      SchemeKind::ClassicBGA, SchemeKind::Custom}) {
        if (name == to_string(kind)) return kind;
    }
    throw InvalidArgument("unknown scheme '" + std::string(name) + "' (expected ubga1|ubga2|ubga3|bbga|classic)");
}

inline CompanionRule companion_rule(SchemeKind kind) {
    switch (kind) {
        case SchemeKind::UBGA1:
        case SchemeKind::UBGA2:
        case SchemeKind::UBGA3: return CompanionRule::Unbiased;
        case SchemeKind::BBGA: return CompanionRule::Biased;
        case SchemeKind::ClassicBGA: return CompanionRule::None;
        case SchemeKind::Custom: break;
    }
    throw InvalidArgument("custom schemes carry their own companion rule");
}

/// Weights used by one receiver j when node k broadcasts.
struct ReceiverWeights {
    NodeId node;
    double a;  // a_{j,k}
    double b;  // b_{j,k}
    double d;  // d_j^(k)
};

/**
 * Parameters of one broadcast gossip algorithm on a fixed graph.
 *
 * Dense A, B, D are kept for analysis; `receivers(k)` is the sparse view used
 * by the simulator. Column k of D is d^(k), so D(j, k) = d_j^(k).
 */
class ParamScheme {
public:
    ParamScheme(SchemeKind kind, CompanionRule rule, double epsilon, double gamma, WeightedMatrix a,
                WeightedMatrix b, Matrix d, const DiGraph& g)
        : kind_(kind), rule_(rule), epsilon_(epsilon), gamma_(gamma), a_(std::move(a)), b_(std::move(b)),
          d_(std::move(d)) {
        const auto n = g.size();
        receivers_.assign(n, {});
        for (NodeId k = 0; k < n; ++k) {
            for (NodeId j : g.out_neighbors(k)) {
                receivers_[k].push_back({j, a_(j, k), b_(j, k), d_(j, k)});
            }
        }
    }

    SchemeKind kind() const noexcept { return kind_; }
    CompanionRule rule() const noexcept { return rule_; }
    double epsilon() const noexcept { return epsilon_; }
    /// Classic-BGA mixing weight; meaningless for other kinds.
    double gamma() const noexcept { return gamma_; }
    std::size_t size() const noexcept { return receivers_.size(); }

    const WeightedMatrix& a() const noexcept { return a_; }
    const WeightedMatrix& b() const noexcept { return b_; }
    const Matrix& d() const noexcept { return d_; }
    const std::vector<ReceiverWeights>& receivers(NodeId k) const { return receivers_.at(k); }

    /// Same weights, different perturbation parameter.
    ParamScheme with_epsilon(double epsilon) const {
        if (rule_ != CompanionRule::None && !(epsilon > 0.0)) {
            throw InvalidEpsilon("epsilon must be positive, got " + std::to_string(epsilon));
        }
        ParamScheme copy = *this;
        copy.epsilon_ = rule_ == CompanionRule::None ? 0.0 : epsilon;
        return copy;
    }

    std::string label() const {
        std::string s(to_string(kind_));
        if (rule_ != CompanionRule::None) s += "(eps=" + format_double(epsilon_) + ")";
        else s += "(gamma=" + format_double(gamma_) + ")";
        return s;
    }

private:
    SchemeKind kind_;
    CompanionRule rule_;
    double epsilon_;
    double gamma_;
    WeightedMatrix a_;
    WeightedMatrix b_;
    Matrix d_;
    std::vector<std::vector<ReceiverWeights>> receivers_;
};

namespace detail {

inline void check_scheme_inputs(const DiGraph& g, CompanionRule rule, double epsilon) {
    if (!is_strongly_connected(g)) throw NotStronglyConnected("scheme requires a strongly connected graph");
    if (rule != CompanionRule::None && !(epsilon > 0.0)) {
        throw InvalidEpsilon("epsilon must be positive, got " + std::to_string(epsilon));
    }
}

inline void fill_companions(const DiGraph& g, CompanionRule rule, WeightedMatrix& b, Matrix& d) {
    const auto n = g.size();
    b = WeightedMatrix::Zero(n, n);
    d = Matrix::Zero(n, n);
    if (rule == CompanionRule::None) return;
    for (NodeId k = 0; k < n; ++k) {
        for (NodeId j : g.out_neighbors(k)) {
            const double inv_in_j = 1.0 / static_cast<double>(g.in_degree(j));
            d(j, k) = inv_in_j;
            b(j, k) = rule == CompanionRule::Unbiased ? 1.0 / static_cast<double>(g.out_degree(k)) : inv_in_j;
        }
    }
}

}  // namespace detail

/**
 * Builds one of the named parameterizations on `g`.
 *
 * All kinds with companions use d_j^(k) = 1/indeg(j). A is 0.5 (UBGA-1),
 * 1/indeg(j) (UBGA-2, BBGA) or 1/outdeg(j) (UBGA-3) on every edge. ClassicBGA
 * uses a = gamma with epsilon, B and d all zero.
 */
inline ParamScheme build_scheme(SchemeKind kind, const DiGraph& g, double epsilon, double gamma = 0.5) {
    if (kind == SchemeKind::Custom) throw InvalidArgument("build_scheme: use build_custom_scheme for custom weights");
    const auto rule = companion_rule(kind);
    detail::check_scheme_inputs(g, rule, epsilon);
    if (kind == SchemeKind::ClassicBGA && !(gamma > 0.0 && gamma <= 1.0)) {
        throw InvalidArgument("gamma must lie in (0, 1], got " + std::to_string(gamma));
    }

    const auto n = g.size();
    WeightedMatrix a = WeightedMatrix::Zero(n, n);
    for (NodeId k = 0; k < n; ++k) {
        for (NodeId j : g.out_neighbors(k)) {
            switch (kind) {
                case SchemeKind::UBGA1: a(j, k) = 0.5; break;
                case SchemeKind::UBGA2:
                case SchemeKind::BBGA: a(j, k) = 1.0 / static_cast<double>(g.in_degree(j)); break;
                case SchemeKind::UBGA3: a(j, k) = 1.0 / static_cast<double>(g.out_degree(j)); break;
                case SchemeKind::ClassicBGA: a(j, k) = gamma; break;
                case SchemeKind::Custom: break;
            }
        }
    }
    WeightedMatrix b;
    Matrix d;
    detail::fill_companions(g, rule, b, d);
    const double eps = rule == CompanionRule::None ? 0.0 : epsilon;
    return ParamScheme(kind, rule, eps, gamma, std::move(a), std::move(b), std::move(d), g);
}

/// Scheme with caller-supplied A; only the graph-conformance constraint 0 < a <= 1 on edges is checked.
inline ParamScheme build_custom_scheme(const DiGraph& g, WeightedMatrix a, CompanionRule rule, double epsilon) {
    detail::check_scheme_inputs(g, rule, epsilon);
    const auto n = static_cast<Eigen::Index>(g.size());
    if (a.rows() != n || a.cols() != n) throw InvalidArgument("custom A has wrong dimensions");
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const bool edge = g.has_edge(static_cast<NodeId>(i), static_cast<NodeId>(j));
            const double v = a(i, j);
            if (edge && !(v > 0.0 && v <= 1.0)) {
                throw InvalidArgument("custom A: entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                      ") must lie in (0, 1] on an edge");
            }
            if (!edge && v != 0.0) {
                throw InvalidArgument("custom A: entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                      ") must be zero off the edge set");
            }
        }
    }
    WeightedMatrix b;
    Matrix d;
    detail::fill_companions(g, rule, b, d);
    const double eps = rule == CompanionRule::None ? 0.0 : epsilon;
    return ParamScheme(SchemeKind::Custom, rule, eps, 0.0, std::move(a), std::move(b), std::move(d), g);
}

/// Per-node state x and companion y; `t` counts broadcasts applied so far.
struct GossipState {
    Vector x;
    Vector y;
    std::uint64_t t = 0;

    static GossipState initial(const Vector& x0) { return {x0, Vector::Zero(x0.size()), 0}; }

    Vector stacked() const {
        Vector z(x.size() + y.size());
        z << x, y;
        return z;
    }
};

/**
 * Applies the broadcast of node k in place and returns the squared Euclidean
 * norm of the change in the stacked state [x; y].
 *
 * Receivers only read their own registers and the broadcaster's, and the
 * broadcaster's registers are written last, so every read sees time-t values.
 */
inline double apply_broadcast(GossipState& s, NodeId k, const ParamScheme& scheme) {
    const double eps = scheme.epsilon();
    const double xk = s.x[k];
    const double yk = s.y[k];
    double changed = 0.0;
    for (const auto& r : scheme.receivers(k)) {
        const double xj = s.x[r.node];
        const double yj = s.y[r.node];
        const double diff = xj - xk;
        const double inject = eps * r.d * yj;
        const double x_new = xj - r.a * diff + inject;
        const double y_new = r.a * diff + yj - inject + r.b * yk;
        changed += (x_new - xj) * (x_new - xj) + (y_new - yj) * (y_new - yj);
        s.x[r.node] = x_new;
        s.y[r.node] = y_new;
    }
    changed += yk * yk;
    s.y[k] = 0.0;
    ++s.t;
    return changed;
}

inline GossipState local_update(GossipState s, NodeId k, const ParamScheme& scheme) {
    if (k >= scheme.size()) throw InvalidArgument("local_update: broadcaster out of range");
    apply_broadcast(s, k, scheme);
    return s;
}

/// Dense 2n x 2n matrix of the broadcast by node k: [[I - L_k, eps D_k], [L_k, S_k - eps D_k]].
inline Matrix assemble_wk(const ParamScheme& scheme, NodeId k) {
    const auto n = static_cast<Eigen::Index>(scheme.size());
    const auto kk = static_cast<Eigen::Index>(k);
    if (kk >= n) throw InvalidArgument("assemble_wk: node out of range");

    // A_k keeps column k of A only, so L_k = diag(A(:,k)) - A(:,k) e_k^T.
    Matrix lk = Matrix::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        lk(j, j) = scheme.a()(j, kk);
        lk(j, kk) -= scheme.a()(j, kk);
    }
    Matrix sk = Matrix::Identity(n, n);
    sk(kk, kk) = 0.0;
    sk.col(kk) += scheme.b().col(kk);
    const Matrix dk = (scheme.epsilon() * scheme.d().col(kk)).asDiagonal();

    Matrix w(2 * n, 2 * n);
    w.topLeftCorner(n, n) = Matrix::Identity(n, n) - lk;
    w.topRightCorner(n, n) = dk;
    w.bottomLeftCorner(n, n) = lk;
    w.bottomRightCorner(n, n) = sk - dk;
    return w;
}

inline NodeId sample_broadcaster(std::size_t n, Rng& rng) {
    std::uniform_int_distribution<NodeId> pick(0, n - 1);
    return pick(rng);
}

/// One asynchronous tick: a uniformly chosen node broadcasts. Returns the broadcaster.
inline NodeId step(GossipState& s, const ParamScheme& scheme, Rng& rng) {
    const NodeId k = sample_broadcaster(scheme.size(), rng);
    apply_broadcast(s, k, scheme);
    return k;
}

}  // namespace gossiplab
