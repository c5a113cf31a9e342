#pragma once

#include "gossiplab/errors.hpp"
#include "gossiplab/graph.hpp"
#include "gossiplab/protocol.hpp"
#include "gossiplab/spectra.hpp"
#include "gossiplab/types.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gossiplab {

/// Tolerances for classifying the spectrum of the expected update matrix.
struct AnalysisConfig {
    double unit_tolerance = 1e-8;     // distance from 1 that still counts as "the" unit eigenvalue
    double stability_margin = 1e-10;  // other moduli must stay below 1 - margin
    double real_spectrum_tolerance = 1e-8;
    std::size_t kron_max_nodes = 22;  // 4 n^2 = 1936 rows for the second-moment matrix
};

inline const AnalysisConfig& default_analysis_config() {
    static const AnalysisConfig config{};
    return config;
}

/**
 * Expected update matrix W_bar = (1/n) sum_k W_k together with its split
 * W_bar = W0 + eps E, where
 *   W0 = [[I - L_bar, 0], [L_bar, S_bar]],  E = [[0, D_bar], [0, -D_bar]],
 *   L_bar = L / n,  D_bar = diag(sum_k d^(k)) / n,  S_bar = (1 - 1/n) I + B / n.
 * `w_bar` is the averaged sum; `w0` and `e` are built from the block formulas.
 */
struct ExpectedMatrix {
    Matrix w_bar;
    Matrix w0;
    Matrix e;
    Matrix l_bar;
    Matrix d_bar;
    Matrix s_bar;
};

inline ExpectedMatrix expected_matrix(const ParamScheme& scheme) {
    const auto n = static_cast<Eigen::Index>(scheme.size());
    const double inv_n = 1.0 / static_cast<double>(n);

    ExpectedMatrix out;
    out.w_bar = Matrix::Zero(2 * n, 2 * n);
    for (NodeId k = 0; k < scheme.size(); ++k) out.w_bar += assemble_wk(scheme, k);
    out.w_bar *= inv_n;

    out.l_bar = laplacian(scheme.a()) * inv_n;
    out.d_bar = (scheme.d().rowwise().sum() * inv_n).asDiagonal();
    out.s_bar = (1.0 - inv_n) * Matrix::Identity(n, n) + scheme.b() * inv_n;

    out.w0 = Matrix::Zero(2 * n, 2 * n);
    out.w0.topLeftCorner(n, n) = Matrix::Identity(n, n) - out.l_bar;
    out.w0.bottomLeftCorner(n, n) = out.l_bar;
    out.w0.bottomRightCorner(n, n) = out.s_bar;

    out.e = Matrix::Zero(2 * n, 2 * n);
    out.e.topRightCorner(n, n) = out.d_bar;
    out.e.bottomRightCorner(n, n) = -out.d_bar;
    return out;
}

/// Spectrum of W_bar and the convergence-in-expectation verdict.
struct SpectralReport {
    ComplexSpectrum spectrum;
    bool is_simple_one = false;
    double second_largest_modulus = 0.0;
    Complex second_largest_value{};
    /// Left eigenvector for eigenvalue 1, state half then companion half, with w1^T 1 = 1.
    Vector w1;
    Vector w2;
};

namespace detail {

/// Index of the eigenvalue closest to 1 and the largest-modulus value among the rest.
inline std::pair<std::size_t, std::size_t> unit_and_runner_up(const ComplexSpectrum& s) {
    std::size_t unit = 0;
    for (std::size_t i = 1; i < s.size(); ++i) {
        if (std::abs(s[i] - 1.0) < std::abs(s[unit] - 1.0)) unit = i;
    }
    std::size_t second = unit == 0 ? 1 : 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i == unit) continue;
        const double mi = std::abs(s[i]);
        const double ms = std::abs(s[second]);
        if (mi > ms || (mi == ms && s[i].real() > s[second].real())) second = i;
    }
    return {unit, second};
}

}  // namespace detail

/**
 * Classifies W_bar: `is_simple_one` holds iff exactly one eigenvalue sits
 * within `unit_tolerance` of 1 and every other modulus is below
 * 1 - `stability_margin`. A failed classification is reported in-band.
 */
inline SpectralReport classify_expectation(const ParamScheme& scheme,
                                           const AnalysisConfig& config = default_analysis_config()) {
    const auto w = expected_matrix(scheme).w_bar;
    SpectralReport report;
    report.spectrum = eigenvalues(w);
    const auto [unit, second] = detail::unit_and_runner_up(report.spectrum);
    report.second_largest_value = report.spectrum[second];
    report.second_largest_modulus = std::abs(report.second_largest_value);

    std::size_t near_one = 0;
    bool others_stable = true;
    for (std::size_t i = 0; i < report.spectrum.size(); ++i) {
        if (std::abs(report.spectrum[i] - 1.0) <= config.unit_tolerance) ++near_one;
        if (i != unit && std::abs(report.spectrum[i]) >= 1.0 - config.stability_margin) others_stable = false;
    }
    report.is_simple_one = near_one == 1 && others_stable;
    if (!report.is_simple_one) return report;

    const auto n = static_cast<Eigen::Index>(scheme.size());
    Vector mask = Vector::Zero(2 * n);
    mask.head(n).setOnes();
    try {
        const ComplexVector u = left_eigenvector(w, 1.0, SumToOne{mask});
        report.w1 = u.head(n).real();
        report.w2 = u.tail(n).real();
    } catch (const NotSimple&) {
        report.is_simple_one = false;
    }
    return report;
}

/// Consensus value w1^T x0 predicted for the expected iteration.
inline double predicted_consensus(const SpectralReport& report, const Vector& x0) {
    if (!report.is_simple_one) throw NotSimple("predicted_consensus: 1 is not a simple eigenvalue of W_bar");
    if (report.w1.size() != x0.size()) throw InvalidArgument("predicted_consensus: size mismatch");
    return report.w1.dot(x0);
}

/// v with v^T B = v^T and v^T 1 = 1 (stationary vector of the companion weights).
inline Vector companion_stationary_vector(const ParamScheme& scheme) {
    const auto n = static_cast<Eigen::Index>(scheme.size());
    const ComplexVector v = left_eigenvector(scheme.b(), 1.0, SumToOne{Vector::Ones(n)});
    return v.real();
}

/**
 * Second-moment operator. `expected_kron` is E[W (x) W] = (1/n) sum_k W_k (x) W_k,
 * `deflated` subtracts the rank-one projector (p (x) p)(q (x) q)^T with
 * p = [1; 0] and q = [v; v]; mean-square convergence holds iff
 * rho(deflated) < 1.
 */
struct SecondMoment {
    Matrix expected_kron;
    Matrix deflated;
    Vector right;  // p (x) p
    Vector left;   // q (x) q
};

inline SecondMoment second_moment_matrix(const ParamScheme& scheme, const Vector& v,
                                         const AnalysisConfig& config = default_analysis_config()) {
    const auto n = static_cast<Eigen::Index>(scheme.size());
    if (scheme.size() > config.kron_max_nodes) {
        throw SizeOverflow("second_moment_matrix: n=" + std::to_string(n) + " exceeds Kronecker cap of " +
                           std::to_string(config.kron_max_nodes) + " nodes");
    }
    if (v.size() != n) throw BadStationaryVector("second_moment_matrix: v has wrong size");
    const double stationarity = (v.transpose() * scheme.b() - v.transpose()).norm();
    if (stationarity > 1e-8 || std::abs(v.sum() - 1.0) > 1e-8) {
        throw BadStationaryVector("second_moment_matrix: v^T B = v^T, v^T 1 = 1 violated (residual " +
                                  std::to_string(stationarity) + ", sum " + std::to_string(v.sum()) + ")");
    }

    const auto dim = 4 * n * n;
    SecondMoment out;
    out.expected_kron = Matrix::Zero(dim, dim);
    for (NodeId k = 0; k < scheme.size(); ++k) {
        const Matrix wk = assemble_wk(scheme, k);
        out.expected_kron += kron(wk, wk);
    }
    out.expected_kron /= static_cast<double>(n);

    Vector p = Vector::Zero(2 * n);
    p.head(n).setOnes();
    Vector q(2 * n);
    q << v, v;
    out.right = kron(p, p);
    out.left = kron(q, q);
    out.deflated = out.expected_kron - out.right * out.left.transpose();
    return out;
}

// ---------------------------------------------------------------------------
// Closed forms for BBGA with a_{j,k} = 1/indeg(j)
// ---------------------------------------------------------------------------

/// The two eigenvalues of W_bar attached to one Laplacian eigenvalue xi.
struct ClosedPair {
    Complex lower;  // 1 - xi/n - eps/(2n) - sqrt(eps xi + eps^2/4)/n
    Complex upper;  // same with +sqrt
};

inline ClosedPair bbga_closed_pair(Complex xi, double epsilon, std::size_t n) {
    const double nd = static_cast<double>(n);
    const Complex centre = 1.0 - xi / nd - epsilon / (2.0 * nd);
    const Complex root = std::sqrt(epsilon * xi + epsilon * epsilon / 4.0) / nd;
    return {centre - root, centre + root};
}

/// All 2n eigenvalues of W_bar for BBGA, from the Laplacian spectrum.
inline ComplexSpectrum bbga_closed_eigs(const ComplexSpectrum& xi, double epsilon, std::size_t n) {
    std::vector<Complex> out;
    out.reserve(2 * xi.size());
    for (const auto& x : xi) {
        const auto [lo, hi] = bbga_closed_pair(x, epsilon, n);
        out.push_back(lo);
        out.push_back(hi);
    }
    return ComplexSpectrum(std::move(out));
}

/// Largest epsilon keeping BBGA stable in expectation: 2n + xi_n^2/(2n) - 2 xi_n.
inline double eta_bound(double xi_n, std::size_t n) {
    constexpr double slack = 1e-9;
    if (!(xi_n >= -slack && xi_n <= 2.0 + slack)) {
        throw XiOutOfRange("eta_bound: largest Laplacian eigenvalue " + std::to_string(xi_n) +
                           " outside [0, 2]");
    }
    const double nd = static_cast<double>(n);
    return 2.0 * nd + xi_n * xi_n / (2.0 * nd) - 2.0 * xi_n;
}

/// Topology-free guideline 2 (n-1)^2 / n, the value of eta_bound at xi_n = 2.
inline double eta_practical(std::size_t n) {
    const double nd = static_cast<double>(n);
    return 2.0 * (nd - 1.0) * (nd - 1.0) / nd;
}

struct OptimalEpsilon {
    double epsilon;
    double lambda2;  // second largest eigenvalue modulus of W_bar at `epsilon`
};

/**
 * Perturbation parameter minimizing the second largest eigenvalue modulus of
 * W_bar for BBGA: xi_2 / 2 with lambda2 = 1 - xi_2/(2n) for n >= 3, and
 * 2 - sqrt(2) for n = 2 (where the Laplacian spectrum is {0, 2}).
 */
inline OptimalEpsilon optimal_epsilon(double xi2, std::size_t n) {
    if (n < 2) throw InvalidArgument("optimal_epsilon: need n >= 2");
    if (!(xi2 > 0.0)) throw BadXi("optimal_epsilon: xi_2 must be positive, got " + std::to_string(xi2));
    const double nd = static_cast<double>(n);
    if (n >= 3) return {xi2 / 2.0, 1.0 - xi2 / (2.0 * nd)};

    const double eps = 2.0 - std::sqrt(2.0);
    const auto spectrum = bbga_closed_eigs(ComplexSpectrum({0.0, 2.0}), eps, n);
    const auto [unit, second] = detail::unit_and_runner_up(spectrum);
    return {eps, std::abs(spectrum[second])};
}

/// Laplacian of the BBGA weights a_{j,k} = 1/indeg(j) on `g`.
inline WeightedMatrix bbga_laplacian(const DiGraph& g) {
    return laplacian(build_scheme(SchemeKind::BBGA, g, 1.0).a());
}

/// Stability bound and optimal epsilon derived from the BBGA Laplacian spectrum.
struct EpsilonReport {
    ComplexSpectrum xi;
    bool spectrum_real = false;
    double xi2 = 0.0;  // real part of the second smallest
    double xi_n = 0.0; // real part of the largest
    std::optional<double> eta_formula;  // only when the spectrum is real
    double eta_practical = 0.0;
    double epsilon_star = 0.0;
    double lambda2_at_star = 0.0;
    /// True when epsilon_star is the Re(xi_2)/2 guideline for a complex spectrum.
    bool approximate = false;
};

inline EpsilonReport epsilon_report(const DiGraph& g, const AnalysisConfig& config = default_analysis_config()) {
    if (g.size() < 2) throw InvalidArgument("epsilon_report: need n >= 2");
    EpsilonReport r;
    r.xi = eigenvalues(bbga_laplacian(g));
    r.spectrum_real = r.xi.max_abs_imag() <= config.real_spectrum_tolerance;
    r.xi2 = r.xi[1].real();
    r.xi_n = r.xi[r.xi.size() - 1].real();
    const auto n = g.size();
    r.eta_practical = eta_practical(n);
    if (r.spectrum_real) r.eta_formula = eta_bound(std::clamp(r.xi_n, 0.0, 2.0), n);
    const auto opt = optimal_epsilon(r.xi2, n);
    r.epsilon_star = opt.epsilon;
    r.lambda2_at_star = opt.lambda2;
    r.approximate = !r.spectrum_real;
    return r;
}

/// Outcome of the monotonicity checks on the closed-form eigenvalue branches.
struct MonotonicityReport {
    bool lower_strictly_decreasing_in_eps = true;
    bool upper_nondecreasing_in_eps = true;   // strictly for xi > 0
    bool unit_branch_constant = true;         // xi = 0 upper branch stays at 1
    bool nonincreasing_in_xi = true;
    bool lower_below_upper = true;
    std::vector<std::string> violations;

    bool ok() const { return violations.empty(); }
};

/**
 * Evaluates the closed forms on an epsilon grid and checks the branch
 * orderings: lower branches strictly decrease in eps, upper branches
 * increase (strictly when xi > 0, constant 1 when xi = 0), and at fixed eps
 * both branches are nonincreasing in xi.
 */
inline MonotonicityReport monotonicity_check(std::span<const double> xi, std::span<const double> eps_grid,
                                             std::size_t n) {
    MonotonicityReport rep;
    auto fail = [&](bool& flag, std::string msg) {
        flag = false;
        rep.violations.push_back(std::move(msg));
    };
    for (double x : xi) {
        if (!(x >= 0.0)) throw InvalidArgument("monotonicity_check: xi must be real and nonnegative");
    }
    std::vector<double> grid(eps_grid.begin(), eps_grid.end());
    std::sort(grid.begin(), grid.end());
    std::vector<double> xs(xi.begin(), xi.end());
    std::sort(xs.begin(), xs.end());

    auto lower = [&](double x, double e) { return bbga_closed_pair(x, e, n).lower.real(); };
    auto upper = [&](double x, double e) { return bbga_closed_pair(x, e, n).upper.real(); };

    for (double x : xs) {
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double e = grid[i];
            if (lower(x, e) > upper(x, e)) {
                fail(rep.lower_below_upper, "lower > upper at xi=" + format_double(x) + " eps=" + format_double(e));
            }
            if (x == 0.0 && std::abs(upper(x, e) - 1.0) > 1e-14) {
                fail(rep.unit_branch_constant, "unit branch moved to " + format_double(upper(x, e)) +
                                                   " at eps=" + format_double(e));
            }
            if (i == 0) continue;
            const double ep = grid[i - 1];
            if (!(lower(x, e) < lower(x, ep))) {
                fail(rep.lower_strictly_decreasing_in_eps,
                     "lower branch not decreasing at xi=" + format_double(x) + " eps=" + format_double(e));
            }
            const bool up_ok = x > 0.0 ? upper(x, e) > upper(x, ep) : upper(x, e) >= upper(x, ep);
            if (!up_ok) {
                fail(rep.upper_nondecreasing_in_eps,
                     "upper branch not increasing at xi=" + format_double(x) + " eps=" + format_double(e));
            }
        }
    }
    for (double e : grid) {
        for (std::size_t k = 1; k < xs.size(); ++k) {
            if (lower(xs[k], e) > lower(xs[k - 1], e) || upper(xs[k], e) > upper(xs[k - 1], e)) {
                fail(rep.nonincreasing_in_xi, "branch increases with xi at eps=" + format_double(e) +
                                                  " xi=" + format_double(xs[k]));
            }
        }
    }
    return rep;
}

/// Analytic second largest eigenvalue modulus of W_bar over an epsilon grid.
struct AnalyticPoint {
    double epsilon;
    double second_largest_modulus;
    bool is_simple_one;
};

inline std::vector<AnalyticPoint> analytic_sweep(const ParamScheme& scheme, std::span<const double> grid,
                                                 const AnalysisConfig& config = default_analysis_config()) {
    std::vector<AnalyticPoint> out;
    out.reserve(grid.size());
    for (double e : grid) {
        const auto rep = classify_expectation(scheme.with_epsilon(e), config);
        out.push_back({e, rep.second_largest_modulus, rep.is_simple_one});
    }
    return out;
}

/// Grid eps_start, eps_start + step, ..., up to eps_stop (inclusive, rounded to the grid).
inline std::vector<double> epsilon_grid(double start, double stop, double step) {
    if (!(step > 0.0) || stop < start) throw InvalidArgument("epsilon_grid: need step > 0 and stop >= start");
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    std::vector<double> g(count);
    for (std::size_t i = 0; i < count; ++i) g[i] = start + static_cast<double>(i) * step;
    return g;
}

}  // namespace gossiplab
