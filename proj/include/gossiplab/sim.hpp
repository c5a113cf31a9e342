#pragma once

#include "gossiplab/analysis.hpp"
#include "gossiplab/errors.hpp"
#include "gossiplab/graph.hpp"
#include "gossiplab/protocol.hpp"
#include "gossiplab/types.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace gossiplab {

enum class InitKind { Uniform, Gaussian, Spike, Slope };

inline std::string_view to_string(InitKind kind) {
    switch (kind) {
        case InitKind::Uniform: return "uniform";
        case InitKind::Gaussian: return "gaussian";
        case InitKind::Spike: return "spike";
        case InitKind::Slope: return "slope";
    }
    return "?";
}

inline InitKind parse_init_kind(std::string_view name) {
    for (auto kind : {InitKind::Uniform, InitKind::Gaussian, InitKind::Spike, InitKind::Slope}) {
        if (name == to_string(kind)) return kind;
    }
    throw InvalidArgument("unknown init '" + std::string(name) + "' (expected uniform|gaussian|spike|slope)");
}

/// Initial node values: iid U[0,1], iid N(0,1), a single random 1, or x + y of the node position.
inline Vector init_values(InitKind kind, const DiGraph& g, Rng& rng) {
    const auto n = static_cast<Eigen::Index>(g.size());
    Vector x(n);
    switch (kind) {
        case InitKind::Uniform: {
            std::uniform_real_distribution<double> u(0.0, 1.0);
            for (Eigen::Index i = 0; i < n; ++i) x[i] = u(rng);
            break;
        }
        case InitKind::Gaussian: {
            std::normal_distribution<double> z(0.0, 1.0);
            for (Eigen::Index i = 0; i < n; ++i) x[i] = z(rng);
            break;
        }
        case InitKind::Spike: {
            x.setZero();
            x[static_cast<Eigen::Index>(sample_broadcaster(g.size(), rng))] = 1.0;
            break;
        }
        case InitKind::Slope: {
            if (!g.has_coords()) throw MissingCoords("slope initialization needs node coordinates");
            const auto& pts = *g.coords();
            for (Eigen::Index i = 0; i < n; ++i) x[i] = pts[i].x + pts[i].y;
            break;
        }
    }
    return x;
}

/// r = ||x - mean(x0) 1||^2 / n, the mean squared error to the true average.
inline double mse_to_average(const Vector& x, double average) {
    return (x.array() - average).square().sum() / static_cast<double>(x.size());
}

/// q = ||x - mean(x) 1||^2 / n, the deviation from the current empirical mean.
inline double deviation(const Vector& x) { return mse_to_average(x, x.mean()); }

enum class StopRule {
    Increment,  // ||z(t) - z(t-1)||_2 <= threshold
    Deviation,  // q(t) <= threshold
};

inline std::string_view to_string(StopRule rule) { return rule == StopRule::Increment ? "increment" : "deviation"; }

inline StopRule parse_stop_rule(std::string_view name) {
    if (name == "increment") return StopRule::Increment;
    if (name == "deviation") return StopRule::Deviation;
    throw InvalidArgument("unknown stop rule '" + std::string(name) + "' (expected increment|deviation)");
}

/**
 * Iterations at which r(t) and q(t) are stored: every iteration up to 10^4,
 * then a geometric grid with ratio 1.01. Shared by all trials so that series
 * line up for aggregation.
 */
class RecordGrid {
public:
    static constexpr std::uint64_t kDense = 10'000;

    explicit RecordGrid(bool full = false) : full_(full) {}

    bool recorded(std::uint64_t t) {
        if (full_ || t <= kDense) return true;
        while (next_ < t) advance();
        return next_ == t;
    }

private:
    void advance() {
        next_ = std::max(next_ + 1, static_cast<std::uint64_t>(static_cast<double>(next_) * 1.01));
    }

    bool full_;
    std::uint64_t next_ = kDense;
};

struct TrialOptions {
    double threshold = 1e-5;
    std::uint64_t max_iters = 10'000'000;
    /// The stopping rule is only evaluated when t is a multiple of the stride.
    /// A stride above 1 can delay a convergence declaration but never create one.
    std::uint64_t stride = 1;
    StopRule rule = StopRule::Increment;
    /// When set, w^T (x + y) must stay at w^T x0 (relative to sum |w_i x0_i|) after every broadcast.
    std::optional<Vector> conserved_weights;
    double conservation_tolerance = 1e-9;
    bool full_series = false;
};

struct TrialRecord {
    std::optional<std::uint64_t> converged_at;
    std::uint64_t broadcasts = 0;  // iterations executed
    double consensus_value = 0.0;  // mean of x at stop
    double final_r = 0.0;
    double final_q = 0.0;
    std::vector<std::uint64_t> t_series;
    std::vector<double> r_series;
    std::vector<double> q_series;
    std::uint64_t seed = 0;
    std::optional<double> predicted;
    Vector x0;
    bool failed = false;
    std::string failure;
};

/**
 * Runs broadcasts from (x0, y = 0) until the stopping rule holds or
 * `max_iters` broadcasts have been made. With the increment rule the
 * statistic is ||z(t) - z(t-1)||_2 for z = [x; y]; it equals the change of the
 * error vector m(t) = z(t) - J z(0) because J z(0) is fixed along a trial.
 */
inline TrialRecord run_trial(const ParamScheme& scheme, const Vector& x0, const TrialOptions& options, Rng& rng) {
    if (!(options.threshold > 0.0)) throw InvalidArgument("run_trial: threshold must be positive");
    if (options.max_iters < 1) throw InvalidArgument("run_trial: max_iters must be >= 1");
    if (options.stride < 1) throw InvalidArgument("run_trial: stride must be >= 1");
    if (static_cast<std::size_t>(x0.size()) != scheme.size()) throw InvalidArgument("run_trial: x0 has wrong size");

    TrialRecord rec;
    rec.x0 = x0;
    GossipState s = GossipState::initial(x0);
    const double average = x0.mean();
    RecordGrid grid(options.full_series);

    auto record = [&](std::uint64_t t) {
        rec.t_series.push_back(t);
        rec.r_series.push_back(mse_to_average(s.x, average));
        rec.q_series.push_back(deviation(s.x));
    };
    record(0);

    const Vector* w = options.conserved_weights ? &*options.conserved_weights : nullptr;
    if (w && w->size() != x0.size()) throw InvalidArgument("run_trial: conserved weights have wrong size");
    double mass = 0.0, mass_scale = 0.0;
    if (w) {
        mass = w->dot(x0);
        mass_scale = std::max((w->array() * x0.array()).abs().sum(), std::numeric_limits<double>::min());
    }
    const double mass0 = mass;
    auto local_mass = [&](NodeId k) {
        double m = (*w)[k] * (s.x[k] + s.y[k]);
        for (const auto& r : scheme.receivers(k)) m += (*w)[r.node] * (s.x[r.node] + s.y[r.node]);
        return m;
    };

    const double threshold_sq = options.threshold * options.threshold;
    const std::size_t n = scheme.size();
    for (std::uint64_t t = 1; t <= options.max_iters; ++t) {
        const NodeId k = sample_broadcaster(n, rng);
        const double before = w ? local_mass(k) : 0.0;
        const double change_sq = apply_broadcast(s, k, scheme);
        rec.broadcasts = t;

        if (w) {
            mass += local_mass(k) - before;
            if (std::abs(mass - mass0) > options.conservation_tolerance * mass_scale) {
                rec.failed = true;
                rec.failure = "conservation violated at t=" + std::to_string(t) + ": drift " +
                              format_double(std::abs(mass - mass0) / mass_scale);
                record(t);
                break;
            }
        }

        bool stop = false;
        if (t % options.stride == 0) {
            stop = options.rule == StopRule::Increment ? change_sq <= threshold_sq
                                                       : deviation(s.x) <= options.threshold;
        }
        if (stop) {
            rec.converged_at = t;
            record(t);
            break;
        }
        if (grid.recorded(t)) record(t);
    }
    if (rec.t_series.back() != rec.broadcasts) record(rec.broadcasts);
    rec.consensus_value = s.x.mean();
    rec.final_r = rec.r_series.back();
    rec.final_q = rec.q_series.back();
    return rec;
}

/// Number of worker threads: GOSSIPLAB_THREADS if set, else the hardware concurrency.
inline unsigned default_thread_count() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("GOSSIPLAB_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    return hw;
}

/// Runs `count` independent jobs on up to `threads` workers; job i writes slot i.
template <typename Job>
void parallel_for(std::size_t count, unsigned threads, Job&& job) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i) job(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    job(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

struct MonteCarloOptions {
    InitKind init = InitKind::Uniform;
    std::size_t trials = 100;
    std::uint64_t base_seed = 1;
    TrialOptions trial;
    /// Check w^T (x + y) conservation with w = 1 for UBGA kinds and w = v for BBGA.
    bool monitor_conservation = true;
    /// Attach w1^T x0 from the expected-matrix analysis to every record.
    bool predict = false;
    unsigned threads = 0;  // 0: default_thread_count()
};

struct TrajectoryPoint {
    std::uint64_t t;
    double mean_r;
    double mean_q;
};

struct MonteCarloResult {
    std::vector<TrialRecord> records;  // ordered by trial index
    std::size_t trials = 0;
    double mean_broadcasts = 0.0;
    double median_broadcasts = 0.0;
    double mean_q_final = 0.0;
    double mean_r_final = 0.0;
    std::size_t converged = 0;
    std::size_t failed = 0;
};

/// Seed of trial i in a campaign rooted at `base_seed`.
inline std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t index) {
    return splitmix64(base_seed + static_cast<std::uint64_t>(index));
}

/// Weights whose combination with x + y is invariant under every broadcast, if the scheme has one.
inline std::optional<Vector> conserved_weights(const ParamScheme& scheme) {
    switch (scheme.rule()) {
        case CompanionRule::Unbiased: return Vector::Ones(static_cast<Eigen::Index>(scheme.size()));
        case CompanionRule::Biased: return companion_stationary_vector(scheme);
        case CompanionRule::None: return std::nullopt;
    }
    return std::nullopt;
}

/**
 * Independent trials on one scheme. Trial i draws x0 and its broadcaster
 * sequence from a generator seeded with trial_seed(base_seed, i), so two
 * schemes run with the same base seed see identical initial values and
 * broadcast orders. Broadcast statistics count non-converged trials at the
 * number of iterations they ran.
 */
inline MonteCarloResult monte_carlo(const ParamScheme& scheme, const DiGraph& g, const MonteCarloOptions& options) {
    if (options.trials < 1) throw InvalidArgument("monte_carlo: need at least one trial");
    if (g.size() != scheme.size()) throw InvalidArgument("monte_carlo: graph and scheme sizes differ");

    TrialOptions trial_options = options.trial;
    if (options.monitor_conservation && !trial_options.conserved_weights) {
        trial_options.conserved_weights = conserved_weights(scheme);
    }
    std::optional<Vector> w1;
    if (options.predict) {
        const auto report = classify_expectation(scheme);
        if (report.is_simple_one) w1 = report.w1;
    }

    MonteCarloResult result;
    result.trials = options.trials;
    result.records.resize(options.trials);
    const unsigned threads = options.threads ? options.threads : default_thread_count();
    parallel_for(options.trials, threads, [&](std::size_t i) {
        const auto seed = trial_seed(options.base_seed, i);
        Rng rng(seed);
        TrialRecord rec;
        try {
            const Vector x0 = init_values(options.init, g, rng);
            rec = run_trial(scheme, x0, trial_options, rng);
            if (w1) rec.predicted = w1->dot(x0);
        } catch (const Error& e) {
            rec.failed = true;
            rec.failure = e.what();
        }
        rec.seed = seed;
        result.records[i] = std::move(rec);
    });

    std::vector<double> counts;
    double sum_q = 0.0, sum_r = 0.0;
    for (const auto& rec : result.records) {
        if (rec.failed) {
            ++result.failed;
            continue;
        }
        if (rec.converged_at) ++result.converged;
        counts.push_back(static_cast<double>(rec.broadcasts));
        sum_q += rec.final_q;
        sum_r += rec.final_r;
    }
    if (!counts.empty()) {
        const double m = static_cast<double>(counts.size());
        double total = 0.0;
        for (double c : counts) total += c;
        result.mean_broadcasts = total / m;
        result.mean_q_final = sum_q / m;
        result.mean_r_final = sum_r / m;
        std::sort(counts.begin(), counts.end());
        const auto mid = counts.size() / 2;
        result.median_broadcasts = counts.size() % 2 ? counts[mid] : 0.5 * (counts[mid - 1] + counts[mid]);
    }
    return result;
}

/**
 * Mean r(t), q(t) across trials on the shared record grid. A trial that has
 * stopped contributes its final values at later grid points.
 */
inline std::vector<TrajectoryPoint> aggregate_trajectory(std::span<const TrialRecord> records) {
    std::vector<const TrialRecord*> live;
    for (const auto& r : records) {
        if (!r.failed && !r.t_series.empty()) live.push_back(&r);
    }
    if (live.empty()) return {};

    std::vector<std::uint64_t> grid;
    for (const auto* r : live) grid.insert(grid.end(), r->t_series.begin(), r->t_series.end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    std::vector<TrajectoryPoint> out;
    out.reserve(grid.size());
    std::vector<std::size_t> cursor(live.size(), 0);
    for (auto t : grid) {
        double sr = 0.0, sq = 0.0;
        for (std::size_t i = 0; i < live.size(); ++i) {
            const auto& ts = live[i]->t_series;
            auto& c = cursor[i];
            while (c + 1 < ts.size() && ts[c + 1] <= t) ++c;
            sr += live[i]->r_series[c];
            sq += live[i]->q_series[c];
        }
        const double m = static_cast<double>(live.size());
        out.push_back({t, sr / m, sq / m});
    }
    return out;
}

struct SweepPoint {
    double epsilon;
    MonteCarloResult result;
    double analytic_lambda2;  // second largest eigenvalue modulus of W_bar
    bool analytic_simple;
};

/**
 * Monte Carlo campaign at every epsilon of `grid`, all with the same base
 * seed so that grid points share initial values and broadcast orders.
 */
inline std::vector<SweepPoint> epsilon_sweep(const ParamScheme& scheme, const DiGraph& g,
                                             std::span<const double> grid, const MonteCarloOptions& options,
                                             bool keep_records = false) {
    std::vector<SweepPoint> out;
    out.reserve(grid.size());
    for (double e : grid) {
        const auto s = scheme.with_epsilon(e);
        SweepPoint p{e, monte_carlo(s, g, options), 0.0, false};
        const auto rep = classify_expectation(s);
        p.analytic_lambda2 = rep.second_largest_modulus;
        p.analytic_simple = rep.is_simple_one;
        if (!keep_records) p.result.records.clear();
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace gossiplab
