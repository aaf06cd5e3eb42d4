#pragma once

// Categorical Naive Bayes and the product-of-Bernoullis (PoB) model that
// arises when each categorical feature is one-hot encoded and its bits are
// treated as independent.
//
// Indices are 0-based everywhere: class i, feature f, value j.

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "onehot_nb/simplex.hpp"

namespace onehot_nb {

/// Per-feature conditional table: one ProbVector over the K values per class.
using FeatureTable = std::vector<ProbVector>;

/// Class prior plus one conditional table per feature.
///
/// The PoB model shares these parameters: under maximum likelihood the
/// per-bit Bernoulli estimates coincide with the categorical ones, so no
/// separate set is stored.
class NBParams {
public:
    NBParams(ProbVector prior, std::vector<FeatureTable> tables);

    std::size_t num_classes() const noexcept { return prior_.size(); }
    std::size_t num_features() const noexcept { return tables_.size(); }
    std::size_t num_values(std::size_t feature) const { return tables_.at(feature).front().size(); }

    const ProbVector& prior() const noexcept { return prior_; }
    const FeatureTable& table(std::size_t feature) const { return tables_.at(feature); }
    const std::vector<FeatureTable>& tables() const noexcept { return tables_; }

    /// p(x_feature = value | y = cls)
    double theta(std::size_t feature, std::size_t cls, std::size_t value) const {
        return tables_[feature][cls][value];
    }

    friend bool operator==(const NBParams&, const NBParams&) = default;

private:
    ProbVector prior_;
    std::vector<FeatureTable> tables_;
};

/// One value index per feature.
using Observation = std::vector<std::size_t>;

/// Bits of one encoded feature. Any pattern is admissible, not only one-hot codes.
using BitPattern = std::vector<std::uint8_t>;

struct LabeledObservation {
    Observation x;
    std::size_t label = 0;
};

enum class Model { Categorical, PoB };
enum class Layout { Ordinal, OneHot };

/// prod_{k != j} (1 - theta_k): probability that every bit other than j is off.
double q_factor(const ProbVector& theta, std::size_t j);

/// Independent-bits likelihood prod_k theta_k^b_k (1 - theta_k)^(1 - b_k).
double pob_likelihood(const ProbVector& theta, std::span<const std::uint8_t> pattern);

ProbVector categorical_posterior(const NBParams& params, std::size_t j, std::size_t feature = 0);
ProbVector pob_posterior(const NBParams& params, std::size_t j, std::size_t feature = 0);

/// Posterior over classes given all features, accumulated in log space.
/// Zero likelihoods give -inf scores; if every class is -inf, throws ZeroEvidence.
/// With a single feature this is exactly categorical_posterior / pob_posterior.
ProbVector multi_feature_posterior(const NBParams& params, const Observation& obs, Model model);

/// Index of the largest entry; ties go to the lowest index.
std::size_t map_class(const ProbVector& posterior);

/// Maximum-likelihood fit with additive smoothing.
///
/// prior_i = (n_i + s) / (N + C s), theta_ji = (n_ji + s) / (n_i + K s).
/// The OneHot layout encodes every observation and estimates each bit's
/// Bernoulli parameter from its own on-count; the result is identical to the
/// Ordinal fit entry for entry. A class with no rows and s = 0 gets a zero
/// prior and a uniform table row.
NBParams fit_mle(std::span<const LabeledObservation> data, Layout layout, double smoothing,
                 std::size_t num_classes, std::span<const std::size_t> values_per_feature);

/// Per-bit Bernoulli fit directly on encoded rows. Each row holds the
/// concatenated bits of every feature, in feature order.
NBParams fit_mle_bits(std::span<const std::vector<std::uint8_t>> bit_rows,
                      std::span<const std::size_t> labels, double smoothing, std::size_t num_classes,
                      std::span<const std::size_t> values_per_feature);

}  // namespace onehot_nb
