#pragma once

#include "gossiplab/errors.hpp"
#include "gossiplab/types.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

namespace gossiplab {

/// Tolerances shared by the eigen-analysis routines.
struct SpectralConfig {
    double pairing_tolerance = 1e-9;  // conjugate pairing / multiset matching
    double simplicity_gap = 1e-8;     // minimum distance to the nearest other eigenvalue
    double residual_tolerance = 1e-8; // relative to the matrix norm
    std::size_t kron_max_entries = 4'000'000;
};

inline const SpectralConfig& default_spectral_config() {
    static const SpectralConfig config{};
    return config;
}

/// Eigenvalues with multiplicity, ordered by real part then imaginary part.
class ComplexSpectrum {
public:
    ComplexSpectrum() = default;
    explicit ComplexSpectrum(std::vector<Complex> values) : values_(std::move(values)) {
        std::sort(values_.begin(), values_.end(), [](const Complex& a, const Complex& b) {
            if (a.real() != b.real()) return a.real() < b.real();
            return a.imag() < b.imag();
        });
    }

    std::size_t size() const noexcept { return values_.size(); }
    const Complex& operator[](std::size_t i) const { return values_[i]; }
    const std::vector<Complex>& values() const noexcept { return values_; }
    auto begin() const noexcept { return values_.begin(); }
    auto end() const noexcept { return values_.end(); }

    double max_abs_imag() const {
        double m = 0.0;
        for (const auto& v : values_) m = std::max(m, std::abs(v.imag()));
        return m;
    }

    double max_modulus() const {
        double m = 0.0;
        for (const auto& v : values_) m = std::max(m, std::abs(v));
        return m;
    }

    /// Every non-real value has its conjugate present within `tol`.
    bool closed_under_conjugation(double tol) const {
        std::vector<char> used(values_.size(), 0);
        for (std::size_t i = 0; i < values_.size(); ++i) {
            if (used[i]) continue;
            if (std::abs(values_[i].imag()) <= tol) {
                used[i] = 1;
                continue;
            }
            bool found = false;
            for (std::size_t j = 0; j < values_.size() && !found; ++j) {
                if (j != i && !used[j] && std::abs(values_[j] - std::conj(values_[i])) <= tol) {
                    used[i] = used[j] = 1;
                    found = true;
                }
            }
            if (!found) return false;
        }
        return true;
    }

private:
    std::vector<Complex> values_;
};

namespace detail {

inline void require_square(const Matrix& m, const char* who) {
    if (m.rows() != m.cols()) throw InvalidArgument(std::string(who) + ": matrix must be square");
    if (!m.allFinite()) throw InvalidArgument(std::string(who) + ": matrix has non-finite entries");
}

inline Eigen::EigenSolver<Matrix> solve_eigen(const Matrix& m, bool vectors, const char* who) {
    Eigen::EigenSolver<Matrix> solver;
    solver.compute(m, vectors);
    if (solver.info() != Eigen::Success) {
        throw NoConvergence(std::string(who) + ": shifted QR iteration failed",
                            static_cast<long>(solver.getMaxIterations()) * static_cast<long>(m.rows()));
    }
    return solver;
}

}  // namespace detail

/// Full spectrum by Hessenberg reduction and shifted QR (Eigen's real Schur).
inline ComplexSpectrum eigenvalues(const Matrix& m) {
    detail::require_square(m, "eigenvalues");
    if (m.rows() == 0) return {};
    const auto solver = detail::solve_eigen(m, false, "eigenvalues");
    const auto& ev = solver.eigenvalues();
    return ComplexSpectrum(std::vector<Complex>(ev.data(), ev.data() + ev.size()));
}

inline double spectral_radius(const Matrix& m) { return eigenvalues(m).max_modulus(); }

/// Normalize so that the entries selected by `mask` sum to one: u^T mask = 1.
struct SumToOne {
    Vector mask;
};

/// Normalize so that u^T right = 1.
struct UnitDotWithRight {
    ComplexVector right;
};

using EigenNormalization = std::variant<SumToOne, UnitDotWithRight>;

/**
 * Left eigenvector u of `m` for the simple eigenvalue closest to `lambda`,
 * i.e. u^T m = lambda u^T. Throws NotSimple if another eigenvalue lies within
 * the simplicity gap, since the normalization is then ill-posed.
 */
inline ComplexVector left_eigenvector(const Matrix& m, Complex lambda, const EigenNormalization& normalization,
                                      const SpectralConfig& config = default_spectral_config()) {
    detail::require_square(m, "left_eigenvector");
    const Matrix mt = m.transpose();
    const auto solver = detail::solve_eigen(mt, true, "left_eigenvector");
    const ComplexVector ev = solver.eigenvalues();

    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < ev.size(); ++i) {
        if (std::abs(ev[i] - lambda) < std::abs(ev[best] - lambda)) best = i;
    }
    double gap = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (i != best) gap = std::min(gap, std::abs(ev[i] - ev[best]));
    }
    if (gap <= config.simplicity_gap) {
        throw NotSimple("left_eigenvector: eigenvalue near (" + std::to_string(lambda.real()) + ", " +
                        std::to_string(lambda.imag()) + ") has gap " + std::to_string(gap));
    }

    ComplexVector u = solver.eigenvectors().col(best);
    const Complex scale = std::visit(
        [&](const auto& norm) -> Complex {
            using T = std::decay_t<decltype(norm)>;
            if constexpr (std::is_same_v<T, SumToOne>) {
                if (norm.mask.size() != u.size()) throw InvalidArgument("left_eigenvector: mask size mismatch");
                return u.cwiseProduct(norm.mask.template cast<Complex>()).sum();
            } else {
                if (norm.right.size() != u.size()) throw InvalidArgument("left_eigenvector: right vector size mismatch");
                return u.cwiseProduct(norm.right).sum();
            }
        },
        normalization);
    if (std::abs(scale) < 1e-300) throw NotSimple("left_eigenvector: normalization functional vanishes");
    u /= scale;

    const ComplexVector residual = mt.cast<Complex>() * u - ev[best] * u;
    const double tol = config.residual_tolerance * std::max(1.0, m.norm()) * std::max(1.0, u.norm());
    if (residual.norm() > tol) {
        throw NumericalError("left_eigenvector: residual " + std::to_string(residual.norm()) + " exceeds tolerance");
    }
    return u;
}

/// Standard Kronecker product; refuses outputs with more than `max_entries` entries.
inline Matrix kron(const Matrix& a, const Matrix& b, std::size_t max_entries = default_spectral_config().kron_max_entries) {
    const auto rows = static_cast<std::size_t>(a.rows() * b.rows());
    const auto cols = static_cast<std::size_t>(a.cols() * b.cols());
    if (rows != 0 && cols > max_entries / rows) {
        throw SizeOverflow("kron: output " + std::to_string(rows) + "x" + std::to_string(cols) + " exceeds cap of " +
                           std::to_string(max_entries) + " entries");
    }
    Matrix out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

/**
 * Distance between two eigenvalue multisets: pairs are formed greedily by
 * increasing distance over all candidate pairs, and the largest paired
 * distance is returned. Sizes must match.
 */
inline double matched_distance(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    if (a.size() != b.size()) throw InvalidArgument("matched_distance: multisets differ in size");
    struct Candidate {
        double d;
        std::size_t i, j;
    };
    std::vector<Candidate> pairs;
    pairs.reserve(a.size() * b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) pairs.push_back({std::abs(a[i] - b[j]), i, j});
    }
    std::sort(pairs.begin(), pairs.end(), [](const Candidate& x, const Candidate& y) {
        if (x.d != y.d) return x.d < y.d;
        if (x.i != y.i) return x.i < y.i;
        return x.j < y.j;
    });
    std::vector<char> used_a(a.size(), 0), used_b(b.size(), 0);
    double worst = 0.0;
    std::size_t matched = 0;
    for (const auto& p : pairs) {
        if (matched == a.size()) break;
        if (used_a[p.i] || used_b[p.j]) continue;
        used_a[p.i] = used_b[p.j] = 1;
        worst = std::max(worst, p.d);
        ++matched;
    }
    return worst;
}

inline double matched_distance(const ComplexSpectrum& a, const ComplexSpectrum& b) {
    return matched_distance(a.values(), b.values());
}

}  // namespace gossiplab
