#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <stdexcept>
#include <string>

namespace hgx {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using SpMatrix = Eigen::SparseMatrix<double>;

/// Largest vertex count for which |V| x |V| dense matrices are built.
inline constexpr Index kDeskScale = 5000;

/// Input failed a structural or precondition check (CLI exit code 1).
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A numerical procedure failed to converge or produced invalid values
/// (CLI exit code 2).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// File or format problem (CLI exit code 3).
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Deterministic uniform deviates from a mt19937_64 stream. The standard
/// distributions are implementation-defined, so seeded fixtures and weight
/// init go through this instead.
class SplitMix {
public:
    explicit SplitMix(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    /// Uniform integer in [lo, hi] inclusive.
    int uniform_int(int lo, int hi) {
        return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
    }

private:
    std::uint64_t state_;
};

}  // namespace hgx
