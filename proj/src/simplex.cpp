#include "onehot_nb/simplex.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "onehot_nb/error.hpp"

namespace onehot_nb {

namespace {

std::vector<double> validate_and_normalize(std::span<const double> raw) {
    if (raw.size() < 2) {
        throw Error(ErrorCode::TooShort,
                    "probability vector needs at least 2 entries, got " + std::to_string(raw.size()));
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (!(raw[i] >= 0.0) || !std::isfinite(raw[i])) {
            throw Error(ErrorCode::NegativeEntry,
                        "entry " + std::to_string(i) + " is " + std::to_string(raw[i]));
        }
        sum += raw[i];
    }
    if (std::abs(sum - 1.0) > kSumTolerance) {
        throw Error(ErrorCode::BadSum, "entries sum to " + std::to_string(sum));
    }
    std::vector<double> out(raw.begin(), raw.end());
    for (double& v : out) v /= sum;
    return out;
}

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

ProbVector::ProbVector(std::span<const double> raw) : values_(validate_and_normalize(raw)) {}

ProbVector::ProbVector(std::initializer_list<double> raw)
    : values_(validate_and_normalize(std::span<const double>(raw.begin(), raw.size()))) {}

double ProbVector::at(std::size_t i) const {
    if (i >= values_.size()) {
        throw Error(ErrorCode::IndexOutOfRange,
                    "index " + std::to_string(i) + " for vector of length " + std::to_string(values_.size()));
    }
    return values_[i];
}

ProbVector make_prob_vector(std::span<const double> raw) { return ProbVector(raw); }

Engine make_engine(RngSeed seed) {
    std::uint64_t state = seed.master_seed;
    std::uint64_t a = splitmix64(state);
    state ^= seed.stream_index * 0xd1b54a32d192ed03ULL;
    std::uint64_t b = splitmix64(state);
    std::uint64_t c = splitmix64(state);
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
                      static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32)};
    return Engine(seq);
}

ProbVector sample_dirichlet(double alpha, std::size_t dim, RngSeed seed) {
    Engine engine = make_engine(seed);
    return sample_dirichlet(alpha, dim, engine);
}

ProbVector sample_dirichlet(double alpha, std::size_t dim, Engine& engine) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw Error(ErrorCode::BadAlpha, "concentration must be positive, got " + std::to_string(alpha));
    }
    if (dim < 2) {
        throw Error(ErrorCode::TooShort, "Dirichlet dimension must be >= 2, got " + std::to_string(dim));
    }
    std::gamma_distribution<double> gamma(alpha, 1.0);
    std::vector<double> draws(dim);
    double sum = 0.0;
    // With tiny alpha every gamma draw can underflow to zero; redraw in that case.
    do {
        for (double& g : draws) g = gamma(engine);
        sum = std::accumulate(draws.begin(), draws.end(), 0.0);
    } while (!(sum > 0.0));
    for (double& g : draws) g /= sum;
    return ProbVector(draws);
}

}  // namespace onehot_nb
