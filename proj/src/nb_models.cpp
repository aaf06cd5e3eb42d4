#include "onehot_nb/nb_models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "onehot_nb/error.hpp"

namespace onehot_nb {

namespace {

void check_value_index(std::size_t j, std::size_t k) {
    if (j >= k) {
        throw Error(ErrorCode::IndexOutOfRange,
                    "value index " + std::to_string(j) + " out of range for K=" + std::to_string(k));
    }
}

const FeatureTable& checked_table(const NBParams& params, std::size_t feature) {
    if (feature >= params.num_features()) {
        throw Error(ErrorCode::IndexOutOfRange, "feature " + std::to_string(feature) + " out of range");
    }
    return params.table(feature);
}

// 1 - theta_k. For theta_k > 1/2 the sum of the other entries is used
// instead; it is the same number on the simplex without the cancellation.
// With two values the other entry is returned as is, so f_j = theta_j^2 exactly.
double complement(const ProbVector& theta, std::size_t k) {
    if (theta.size() == 2) return theta[1 - k];
    if (theta[k] <= 0.5) return 1.0 - theta[k];
    double rest = 0.0;
    for (std::size_t m = 0; m < theta.size(); ++m) {
        if (m != k) rest += theta[m];
    }
    return rest;
}

ProbVector normalize_scores(std::vector<double> scores) {
    double total = 0.0;
    for (double s : scores) total += s;
    if (!(total > 0.0)) {
        throw Error(ErrorCode::ZeroEvidence, "observation has zero probability under every class");
    }
    for (double& s : scores) s /= total;
    return ProbVector(scores);
}

double log_q_factor(const ProbVector& theta, std::size_t j) {
    double acc = 0.0;
    for (std::size_t k = 0; k < theta.size(); ++k) {
        if (k != j) acc += std::log(complement(theta, k));
    }
    return acc;
}

ProbVector uniform(std::size_t k) { return ProbVector(std::vector<double>(k, 1.0 / static_cast<double>(k))); }

void check_fit_inputs(double smoothing, std::size_t num_classes, std::span<const std::size_t> values_per_feature) {
    if (!(smoothing >= 0.0) || !std::isfinite(smoothing)) {
        throw Error(ErrorCode::BadSmoothing, "smoothing must be >= 0, got " + std::to_string(smoothing));
    }
    if (num_classes < 2) throw Error(ErrorCode::TooShort, "need at least 2 classes");
    if (values_per_feature.empty()) throw Error(ErrorCode::EmptyData, "no features");
    for (std::size_t k : values_per_feature) {
        if (k < 2) throw Error(ErrorCode::BadK, "every feature needs K >= 2");
    }
}

// Shared by both layouts: the estimates depend only on the integer counts.
NBParams params_from_counts(const std::vector<std::size_t>& class_counts,
                            const std::vector<std::vector<std::vector<std::size_t>>>& value_counts,
                            double smoothing, std::span<const std::size_t> values_per_feature) {
    const std::size_t num_classes = class_counts.size();
    std::size_t total = 0;
    for (std::size_t n : class_counts) total += n;

    std::vector<double> prior(num_classes);
    const double prior_denominator = static_cast<double>(total) + static_cast<double>(num_classes) * smoothing;
    for (std::size_t i = 0; i < num_classes; ++i) {
        prior[i] = (static_cast<double>(class_counts[i]) + smoothing) / prior_denominator;
    }

    std::vector<FeatureTable> tables;
    tables.reserve(values_per_feature.size());
    for (std::size_t f = 0; f < values_per_feature.size(); ++f) {
        const std::size_t k = values_per_feature[f];
        FeatureTable table;
        table.reserve(num_classes);
        for (std::size_t i = 0; i < num_classes; ++i) {
            const double denominator = static_cast<double>(class_counts[i]) + static_cast<double>(k) * smoothing;
            if (denominator == 0.0) {
                table.push_back(uniform(k));
                continue;
            }
            std::vector<double> row(k);
            for (std::size_t j = 0; j < k; ++j) {
                row[j] = (static_cast<double>(value_counts[f][i][j]) + smoothing) / denominator;
            }
            table.emplace_back(row);
        }
        tables.push_back(std::move(table));
    }
    return NBParams(ProbVector(prior), std::move(tables));
}

}  // namespace

NBParams::NBParams(ProbVector prior, std::vector<FeatureTable> tables)
    : prior_(std::move(prior)), tables_(std::move(tables)) {
    if (tables_.empty()) throw Error(ErrorCode::EmptyData, "NBParams needs at least one feature");
    for (std::size_t f = 0; f < tables_.size(); ++f) {
        const FeatureTable& t = tables_[f];
        if (t.size() != prior_.size()) {
            throw Error(ErrorCode::LengthMismatch, "feature " + std::to_string(f) + " has " +
                                                       std::to_string(t.size()) + " class rows, expected " +
                                                       std::to_string(prior_.size()));
        }
        for (const ProbVector& row : t) {
            if (row.size() != t.front().size()) {
                throw Error(ErrorCode::LengthMismatch,
                            "feature " + std::to_string(f) + " rows have differing numbers of values");
            }
        }
    }
}

double q_factor(const ProbVector& theta, std::size_t j) {
    check_value_index(j, theta.size());
    double q = 1.0;
    for (std::size_t k = 0; k < theta.size(); ++k) {
        if (k != j) q *= complement(theta, k);
    }
    return q;
}

double pob_likelihood(const ProbVector& theta, std::span<const std::uint8_t> pattern) {
    if (pattern.size() != theta.size()) {
        throw Error(ErrorCode::LengthMismatch, "pattern has " + std::to_string(pattern.size()) +
                                                   " bits, theta has " + std::to_string(theta.size()));
    }
    double p = 1.0;
    for (std::size_t k = 0; k < theta.size(); ++k) {
        p *= pattern[k] ? theta[k] : complement(theta, k);
    }
    return p;
}

ProbVector categorical_posterior(const NBParams& params, std::size_t j, std::size_t feature) {
    const FeatureTable& table = checked_table(params, feature);
    check_value_index(j, table.front().size());
    std::vector<double> scores(params.num_classes());
    for (std::size_t i = 0; i < scores.size(); ++i) scores[i] = params.prior()[i] * table[i][j];
    return normalize_scores(std::move(scores));
}

ProbVector pob_posterior(const NBParams& params, std::size_t j, std::size_t feature) {
    const FeatureTable& table = checked_table(params, feature);
    check_value_index(j, table.front().size());
    std::vector<double> scores(params.num_classes());
    for (std::size_t i = 0; i < scores.size(); ++i) {
        scores[i] = params.prior()[i] * q_factor(table[i], j) * table[i][j];
    }
    return normalize_scores(std::move(scores));
}

ProbVector multi_feature_posterior(const NBParams& params, const Observation& obs, Model model) {
    if (obs.size() != params.num_features()) {
        throw Error(ErrorCode::LengthMismatch, "observation has " + std::to_string(obs.size()) +
                                                   " features, params have " +
                                                   std::to_string(params.num_features()));
    }
    for (std::size_t f = 0; f < obs.size(); ++f) check_value_index(obs[f], params.num_values(f));
    if (obs.size() == 1) {
        return model == Model::PoB ? pob_posterior(params, obs[0]) : categorical_posterior(params, obs[0]);
    }

    constexpr double kNegInf = -std::numeric_limits<double>::infinity();
    std::vector<double> log_scores(params.num_classes());
    for (std::size_t i = 0; i < log_scores.size(); ++i) {
        double s = std::log(params.prior()[i]);
        for (std::size_t f = 0; f < obs.size() && s != kNegInf; ++f) {
            const ProbVector& row = params.table(f)[i];
            s += std::log(row[obs[f]]);
            if (model == Model::PoB) s += log_q_factor(row, obs[f]);
        }
        log_scores[i] = s;
    }
    const double max_score = *std::max_element(log_scores.begin(), log_scores.end());
    if (max_score == kNegInf) {
        throw Error(ErrorCode::ZeroEvidence, "observation has zero probability under every class");
    }
    for (double& s : log_scores) s = std::exp(s - max_score);
    return normalize_scores(std::move(log_scores));
}

std::size_t map_class(const ProbVector& posterior) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < posterior.size(); ++i) {
        if (posterior[i] > posterior[best]) best = i;
    }
    return best;
}

NBParams fit_mle(std::span<const LabeledObservation> data, Layout layout, double smoothing,
                 std::size_t num_classes, std::span<const std::size_t> values_per_feature) {
    check_fit_inputs(smoothing, num_classes, values_per_feature);
    if (data.empty()) throw Error(ErrorCode::EmptyData, "no training rows");
    for (std::size_t r = 0; r < data.size(); ++r) {
        const LabeledObservation& row = data[r];
        if (row.label >= num_classes) {
            throw Error(ErrorCode::LabelOutOfRange, "row " + std::to_string(r) + " has label " +
                                                        std::to_string(row.label));
        }
        if (row.x.size() != values_per_feature.size()) {
            throw Error(ErrorCode::LengthMismatch, "row " + std::to_string(r) + " has " +
                                                       std::to_string(row.x.size()) + " features");
        }
        for (std::size_t f = 0; f < row.x.size(); ++f) check_value_index(row.x[f], values_per_feature[f]);
    }

    if (layout == Layout::OneHot) {
        std::vector<std::vector<std::uint8_t>> bits;
        std::vector<std::size_t> labels;
        bits.reserve(data.size());
        labels.reserve(data.size());
        for (const LabeledObservation& row : data) {
            std::vector<std::uint8_t> encoded;
            for (std::size_t f = 0; f < row.x.size(); ++f) {
                for (std::size_t j = 0; j < values_per_feature[f]; ++j) encoded.push_back(j == row.x[f] ? 1 : 0);
            }
            bits.push_back(std::move(encoded));
            labels.push_back(row.label);
        }
        return fit_mle_bits(bits, labels, smoothing, num_classes, values_per_feature);
    }

    std::vector<std::size_t> class_counts(num_classes, 0);
    std::vector<std::vector<std::vector<std::size_t>>> value_counts(values_per_feature.size());
    for (std::size_t f = 0; f < values_per_feature.size(); ++f) {
        value_counts[f].assign(num_classes, std::vector<std::size_t>(values_per_feature[f], 0));
    }
    for (const LabeledObservation& row : data) {
        ++class_counts[row.label];
        for (std::size_t f = 0; f < row.x.size(); ++f) ++value_counts[f][row.label][row.x[f]];
    }
    return params_from_counts(class_counts, value_counts, smoothing, values_per_feature);
}

NBParams fit_mle_bits(std::span<const std::vector<std::uint8_t>> bit_rows, std::span<const std::size_t> labels,
                      double smoothing, std::size_t num_classes, std::span<const std::size_t> values_per_feature) {
    check_fit_inputs(smoothing, num_classes, values_per_feature);
    if (bit_rows.empty()) throw Error(ErrorCode::EmptyData, "no training rows");
    if (labels.size() != bit_rows.size()) {
        throw Error(ErrorCode::LengthMismatch, "label count differs from row count");
    }
    std::size_t width = 0;
    for (std::size_t k : values_per_feature) width += k;

    // Every bit column is its own Bernoulli variable: count its on-events per class.
    std::vector<std::size_t> class_counts(num_classes, 0);
    std::vector<std::vector<std::size_t>> on_counts(num_classes, std::vector<std::size_t>(width, 0));
    for (std::size_t r = 0; r < bit_rows.size(); ++r) {
        if (labels[r] >= num_classes) {
            throw Error(ErrorCode::LabelOutOfRange, "row " + std::to_string(r) + " has label " +
                                                        std::to_string(labels[r]));
        }
        if (bit_rows[r].size() != width) {
            throw Error(ErrorCode::LengthMismatch, "row " + std::to_string(r) + " has " +
                                                       std::to_string(bit_rows[r].size()) + " bits, expected " +
                                                       std::to_string(width));
        }
        ++class_counts[labels[r]];
        for (std::size_t b = 0; b < width; ++b) {
            if (bit_rows[r][b]) ++on_counts[labels[r]][b];
        }
    }

    std::vector<std::vector<std::vector<std::size_t>>> value_counts(values_per_feature.size());
    std::size_t offset = 0;
    for (std::size_t f = 0; f < values_per_feature.size(); ++f) {
        value_counts[f].resize(num_classes);
        for (std::size_t i = 0; i < num_classes; ++i) {
            value_counts[f][i].assign(on_counts[i].begin() + static_cast<std::ptrdiff_t>(offset),
                                      on_counts[i].begin() + static_cast<std::ptrdiff_t>(offset + values_per_feature[f]));
        }
        offset += values_per_feature[f];
    }
    return params_from_counts(class_counts, value_counts, smoothing, values_per_feature);
}

}  // namespace onehot_nb
