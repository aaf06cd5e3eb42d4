#pragma once

// Probability-vector primitives and symmetric Dirichlet sampling.

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace onehot_nb {

inline constexpr double kSumTolerance = 1e-9;

/// Nonnegative vector of length >= 2 whose entries sum to 1.
///
/// Construction validates the raw entries (sum within kSumTolerance of 1) and
/// divides every entry by the exact sum. Immutable afterwards.
class ProbVector {
public:
    explicit ProbVector(std::span<const double> raw);
    ProbVector(std::initializer_list<double> raw);

    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    double at(std::size_t i) const;
    std::span<const double> values() const noexcept { return values_; }

    auto begin() const noexcept { return values_.begin(); }
    auto end() const noexcept { return values_.end(); }

    friend bool operator==(const ProbVector&, const ProbVector&) = default;

private:
    std::vector<double> values_;
};

ProbVector make_prob_vector(std::span<const double> raw);

/// Identifies one reproducible random stream: (master_seed, stream_index).
struct RngSeed {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_index = 0;
};

using Engine = std::mt19937_64;

/// Engine seeded from a splitmix64 mix of both seed fields, so neighbouring
/// stream indices give unrelated streams.
Engine make_engine(RngSeed seed);

ProbVector sample_dirichlet(double alpha, std::size_t dim, RngSeed seed);

/// Same draw, consuming from an existing engine.
ProbVector sample_dirichlet(double alpha, std::size_t dim, Engine& engine);

}  // namespace onehot_nb
