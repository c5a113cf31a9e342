#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>

namespace gossiplab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;

/// Dense n x n weights indexed by node id; used for A, B and Laplacians.
using WeightedMatrix = Matrix;

/// Node ids are 0-based inside the library and 1-based in every file format.
using NodeId = std::size_t;

/// Seeded generator used throughout; every random quantity flows from one of these.
using Rng = std::mt19937_64;

/// SplitMix64 finalizer. Turns consecutive integers into decorrelated seeds.
inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

}  // namespace gossiplab
