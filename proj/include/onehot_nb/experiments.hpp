#pragma once

// Monte-Carlo comparison of the categorical and PoB classifiers on randomly
// sampled classifiers, plus the figure datasets (Q surface, bound curves,
// log-ratio scatter).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "onehot_nb/nb_models.hpp"
#include "onehot_nb/qfactor.hpp"
#include "onehot_nb/simplex.hpp"

namespace onehot_nb {

/// Classifiers have one feature. Every table row is drawn from
/// Dir(alpha_theta), the prior from Dir(alpha_prior).
struct ExperimentConfig {
    std::size_t classes = 4;
    std::size_t values = 3;
    double alpha_theta = 1.0;
    double alpha_prior = 1.0;
    std::size_t samples = 100;
    std::uint64_t seed = 0;
    /// Worker threads; results do not depend on this.
    std::size_t threads = 1;

    void validate() const;
};

/// Classifier number stream_index of the experiment; depends only on
/// (config.seed, stream_index) and the shape parameters.
NBParams sample_classifier(const ExperimentConfig& config, std::uint64_t stream_index);

struct ScatterRecord {
    std::size_t classifier_index = 0;
    std::size_t j = 0;
    std::size_t c = 0;
    std::size_t d = 0;
    double log_theta_ratio = 0.0;
    double log_f_ratio = 0.0;
};

struct ScatterResult {
    std::vector<ScatterRecord> records;
    std::size_t skipped = 0;  // ordered pairs dropped because a theta or f fell below kScatterFloor
};

inline constexpr double kScatterFloor = 1e-300;

/// All ordered class pairs (c, d), c != d, for every classifier and value j,
/// sorted by (classifier_index, j, c, d). (d, c) is the exact negation of (c, d).
ScatterResult run_scatter(const ExperimentConfig& config);

/// Least-squares slope (with intercept) of log_f_ratio on log_theta_ratio,
/// using records with |log_theta_ratio| < max_abs_x.
double restricted_slope(const std::vector<ScatterRecord>& records, double max_abs_x = 1.0);

/// Fraction of records with log_theta_ratio > min_x lying within `band` of
/// the line y = 2x. Returns 0 when no record qualifies.
double slope_two_band_fraction(const std::vector<ScatterRecord>& records, double min_x = 2.0,
                               double band = 0.1);

struct ComparisonRecord {
    std::size_t classifier_index = 0;
    std::size_t j = 0;
    ProbVector categorical;
    ProbVector pob;
    std::size_t categorical_map = 0;
    std::size_t pob_map = 0;
    double max_cat = 0.0;
    double max_pob = 0.0;
};

struct SummaryStats {
    std::size_t n_cases = 0;
    double pct_pob_max_higher = 0.0;
    double pct_map_disagree = 0.0;
};

struct ComparisonResult {
    std::vector<ComparisonRecord> records;
    SummaryStats summary;
};

ComparisonRecord compare_at(const NBParams& params, std::size_t classifier_index, std::size_t j);

/// "Higher" is strict: exact ties count as not higher.
SummaryStats summarize(const std::vector<ComparisonRecord>& records);

/// One record per (classifier, j), n*K in total, ordered by (classifier, j).
ComparisonResult run_posterior_comparison(const ExperimentConfig& config);

/// MAP-disagreement percentage among records whose categorical MAP
/// probability lies in [lo, hi). nullopt if no record falls in the range.
std::optional<double> disagreement_rate_in_band(const std::vector<ComparisonRecord>& records, double lo,
                                                double hi);

/// Two-class view at an observed value j. c is the categorical winner, d the
/// other class and rho = prior_d / prior_c.
struct WinningClassReport {
    std::size_t categorical_winner = 0;
    std::size_t pob_winner = 0;
    double rho = 0.0;
    double log_rho = 0.0;
    double log_theta_ratio = 0.0;  // log(theta_jc / theta_jd)
    double log_f_ratio = 0.0;      // log(f_j(theta_c) / f_j(theta_d))
    bool flipped = false;
};

WinningClassReport winning_class_analysis(const NBParams& params, std::size_t j);

struct FlipExample {
    std::size_t classifier_index = 0;
    std::size_t j = 0;
    WinningClassReport report;
};

/// Scans sampled two-class classifiers of `config` (classes is forced to 2)
/// in stream order for the first observation where the prior favours the
/// categorical winner c, the evidence favours d (log rho < log theta ratio < 0)
/// and the PoB model hands the win to d.
std::optional<FlipExample> find_flip_example(ExperimentConfig config);

struct SurfacePoint {
    double theta1 = 0.0;
    double theta2 = 0.0;
    double theta3 = 0.0;
    double q = 0.0;
};

/// Barycentric grid over the 3-point simplex at resolution `step` with
/// q = (1 - theta1)(1 - theta2)(1 - theta3). 1/step must be an integer.
std::vector<SurfacePoint> surface_grid(double step);

struct BoundPoint {
    double theta_j = 0.0;
    double lower = 0.0;
    double upper = 0.0;
};

/// theta_j = 0, step, ..., 1 with both bounds. 1/step must be an integer.
std::vector<BoundPoint> bound_curves(std::size_t k, double step);

}  // namespace onehot_nb
