#include "onehot_nb/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include "onehot_nb/error.hpp"

namespace onehot_nb {

namespace {

// Runs fn(i) for i in [0, n) on up to `threads` workers. Each index writes
// only to its own output slot, so the result is independent of scheduling.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn&& fn) {
    threads = std::max<std::size_t>(1, std::min(threads, n));
    if (threads == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
        workers.emplace_back([&, t] {
            for (std::size_t i = t; i < n; i += threads) fn(i);
        });
    }
}

std::size_t grid_divisions(double step) {
    if (!(step > 0.0 && step <= 0.5)) {
        throw Error(ErrorCode::BadStep, "step must lie in (0, 0.5], got " + std::to_string(step));
    }
    const double inverse = 1.0 / step;
    const double rounded = std::round(inverse);
    if (std::abs(rounded * step - 1.0) > 1e-9) {
        throw Error(ErrorCode::BadStep, "1/step must be an integer, got step " + std::to_string(step));
    }
    return static_cast<std::size_t>(rounded);
}

void scatter_for_classifier(const NBParams& params, std::size_t index, std::vector<ScatterRecord>& out,
                            std::size_t& skipped) {
    const std::size_t classes = params.num_classes();
    const std::size_t k = params.num_values(0);
    const FeatureTable& table = params.table(0);

    struct PairValue {
        bool valid = false;
        double x = 0.0;
        double y = 0.0;
    };
    std::vector<PairValue> upper(classes * classes);

    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t c = 0; c < classes; ++c) {
            for (std::size_t d = c + 1; d < classes; ++d) {
                const double tc = table[c][j];
                const double td = table[d][j];
                const double fc = f_j(table[c], j);
                const double fd = f_j(table[d], j);
                PairValue& pv = upper[c * classes + d];
                pv.valid = tc >= kScatterFloor && td >= kScatterFloor && fc >= kScatterFloor && fd >= kScatterFloor;
                if (pv.valid) {
                    pv.x = std::log(tc / td);
                    pv.y = std::log(fc / fd);
                }
            }
        }
        for (std::size_t c = 0; c < classes; ++c) {
            for (std::size_t d = 0; d < classes; ++d) {
                if (c == d) continue;
                const bool mirrored = c > d;
                const PairValue& pv = mirrored ? upper[d * classes + c] : upper[c * classes + d];
                if (!pv.valid) {
                    ++skipped;
                    continue;
                }
                out.push_back({index, j, c, d, mirrored ? -pv.x : pv.x, mirrored ? -pv.y : pv.y});
            }
        }
    }
}

}  // namespace

void ExperimentConfig::validate() const {
    if (classes < 2) throw Error(ErrorCode::BadConfig, "classes must be >= 2");
    if (values < 2) throw Error(ErrorCode::BadConfig, "values must be >= 2");
    if (samples < 1) throw Error(ErrorCode::BadConfig, "samples must be >= 1");
    if (!(alpha_theta > 0.0) || !std::isfinite(alpha_theta)) {
        throw Error(ErrorCode::BadAlpha, "alpha must be positive");
    }
    if (!(alpha_prior > 0.0) || !std::isfinite(alpha_prior)) {
        throw Error(ErrorCode::BadAlpha, "prior alpha must be positive");
    }
}

NBParams sample_classifier(const ExperimentConfig& config, std::uint64_t stream_index) {
    Engine engine = make_engine({config.seed, stream_index});
    ProbVector prior = sample_dirichlet(config.alpha_prior, config.classes, engine);
    FeatureTable table;
    table.reserve(config.classes);
    for (std::size_t i = 0; i < config.classes; ++i) {
        table.push_back(sample_dirichlet(config.alpha_theta, config.values, engine));
    }
    return NBParams(std::move(prior), {std::move(table)});
}

ScatterResult run_scatter(const ExperimentConfig& config) {
    config.validate();
    std::vector<std::vector<ScatterRecord>> per_classifier(config.samples);
    std::vector<std::size_t> skips(config.samples, 0);
    parallel_for(config.samples, config.threads, [&](std::size_t i) {
        scatter_for_classifier(sample_classifier(config, i), i, per_classifier[i], skips[i]);
    });
    ScatterResult result;
    for (std::size_t i = 0; i < config.samples; ++i) {
        result.records.insert(result.records.end(), per_classifier[i].begin(), per_classifier[i].end());
        result.skipped += skips[i];
    }
    return result;
}

double restricted_slope(const std::vector<ScatterRecord>& records, double max_abs_x) {
    double n = 0.0, sx = 0.0, sy = 0.0;
    for (const ScatterRecord& r : records) {
        if (std::abs(r.log_theta_ratio) < max_abs_x) {
            n += 1.0;
            sx += r.log_theta_ratio;
            sy += r.log_f_ratio;
        }
    }
    if (n < 2.0) return std::nan("");
    const double mx = sx / n;
    const double my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (const ScatterRecord& r : records) {
        if (std::abs(r.log_theta_ratio) < max_abs_x) {
            const double dx = r.log_theta_ratio - mx;
            sxx += dx * dx;
            sxy += dx * (r.log_f_ratio - my);
        }
    }
    return sxx > 0.0 ? sxy / sxx : std::nan("");
}

double slope_two_band_fraction(const std::vector<ScatterRecord>& records, double min_x, double band) {
    std::size_t eligible = 0;
    std::size_t in_band = 0;
    for (const ScatterRecord& r : records) {
        if (r.log_theta_ratio > min_x) {
            ++eligible;
            if (std::abs(r.log_f_ratio - 2.0 * r.log_theta_ratio) < band) ++in_band;
        }
    }
    return eligible == 0 ? 0.0 : static_cast<double>(in_band) / static_cast<double>(eligible);
}

ComparisonRecord compare_at(const NBParams& params, std::size_t classifier_index, std::size_t j) {
    ProbVector cat = categorical_posterior(params, j);
    ProbVector pob = pob_posterior(params, j);
    const std::size_t cat_map = map_class(cat);
    const std::size_t pob_map = map_class(pob);
    const double max_cat = cat[cat_map];
    const double max_pob = pob[pob_map];
    return {classifier_index, j, std::move(cat), std::move(pob), cat_map, pob_map, max_cat, max_pob};
}

SummaryStats summarize(const std::vector<ComparisonRecord>& records) {
    SummaryStats s;
    s.n_cases = records.size();
    if (records.empty()) return s;
    std::size_t higher = 0;
    std::size_t disagree = 0;
    for (const ComparisonRecord& r : records) {
        if (r.max_pob > r.max_cat) ++higher;
        if (r.pob_map != r.categorical_map) ++disagree;
    }
    const double n = static_cast<double>(records.size());
    s.pct_pob_max_higher = 100.0 * static_cast<double>(higher) / n;
    s.pct_map_disagree = 100.0 * static_cast<double>(disagree) / n;
    return s;
}

ComparisonResult run_posterior_comparison(const ExperimentConfig& config) {
    config.validate();
    std::vector<std::vector<ComparisonRecord>> per_classifier(config.samples);
    parallel_for(config.samples, config.threads, [&](std::size_t i) {
        const NBParams params = sample_classifier(config, i);
        per_classifier[i].reserve(config.values);
        for (std::size_t j = 0; j < config.values; ++j) per_classifier[i].push_back(compare_at(params, i, j));
    });
    ComparisonResult result;
    result.records.reserve(config.samples * config.values);
    for (auto& chunk : per_classifier) {
        for (auto& r : chunk) result.records.push_back(std::move(r));
    }
    result.summary = summarize(result.records);
    return result;
}

std::optional<double> disagreement_rate_in_band(const std::vector<ComparisonRecord>& records, double lo,
                                                double hi) {
    std::size_t count = 0;
    std::size_t disagree = 0;
    for (const ComparisonRecord& r : records) {
        if (r.max_cat >= lo && r.max_cat < hi) {
            ++count;
            if (r.pob_map != r.categorical_map) ++disagree;
        }
    }
    if (count == 0) return std::nullopt;
    return 100.0 * static_cast<double>(disagree) / static_cast<double>(count);
}

WinningClassReport winning_class_analysis(const NBParams& params, std::size_t j) {
    if (params.num_classes() != 2) {
        throw Error(ErrorCode::BadConfig, "winning-class analysis needs exactly 2 classes");
    }
    const ProbVector cat = categorical_posterior(params, j);
    const ProbVector pob = pob_posterior(params, j);
    WinningClassReport report;
    report.categorical_winner = map_class(cat);
    report.pob_winner = map_class(pob);
    report.flipped = report.categorical_winner != report.pob_winner;

    const std::size_t c = report.categorical_winner;
    const std::size_t d = 1 - c;
    const double prior_c = params.prior()[c];
    if (prior_c == 0.0) throw Error(ErrorCode::UndefinedRho, "winning class has zero prior");
    report.rho = params.prior()[d] / prior_c;
    report.log_rho = std::log(report.rho);

    const FeatureTable& table = params.table(0);
    report.log_theta_ratio = std::log(table[c][j] / table[d][j]);
    report.log_f_ratio = std::log(f_j(table[c], j) / f_j(table[d], j));
    return report;
}

std::optional<FlipExample> find_flip_example(ExperimentConfig config) {
    config.classes = 2;
    config.validate();
    for (std::size_t i = 0; i < config.samples; ++i) {
        const NBParams params = sample_classifier(config, i);
        for (std::size_t j = 0; j < config.values; ++j) {
            const WinningClassReport report = winning_class_analysis(params, j);
            if (report.flipped && report.log_rho < report.log_theta_ratio && report.log_theta_ratio < 0.0) {
                return FlipExample{i, j, report};
            }
        }
    }
    return std::nullopt;
}

std::vector<SurfacePoint> surface_grid(double step) {
    const std::size_t n = grid_divisions(step);
    const double dn = static_cast<double>(n);
    auto point = [](double t1, double t2, double t3) {
        return SurfacePoint{t1, t2, t3, (1.0 - t1) * (1.0 - t2) * (1.0 - t3)};
    };

    std::vector<SurfacePoint> grid;
    grid.reserve((n + 1) * (n + 2) / 2 + 1);
    // The centroid is added explicitly when the lattice misses it (n not a multiple of 3).
    const bool add_centroid = n % 3 != 0;
    const double third = 1.0 / 3.0;
    for (std::size_t a = 0; a <= n; ++a) {
        for (std::size_t b = 0; a + b <= n; ++b) {
            const double t1 = static_cast<double>(a) / dn;
            const double t2 = static_cast<double>(b) / dn;
            const double t3 = static_cast<double>(n - a - b) / dn;
            grid.push_back(point(t1, t2, t3));
        }
    }
    if (add_centroid) {
        const SurfacePoint centre = point(third, third, third);
        auto pos = std::lower_bound(grid.begin(), grid.end(), centre, [](const SurfacePoint& x, const SurfacePoint& y) {
            return x.theta1 < y.theta1 || (x.theta1 == y.theta1 && x.theta2 < y.theta2);
        });
        grid.insert(pos, centre);
    }
    return grid;
}

std::vector<BoundPoint> bound_curves(std::size_t k, double step) {
    if (k < 2) throw Error(ErrorCode::BadK, "K must be >= 2, got " + std::to_string(k));
    const std::size_t n = grid_divisions(step);
    std::vector<BoundPoint> curve;
    curve.reserve(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(n);
        curve.push_back({t, lower_bound(t), upper_bound(t, k)});
    }
    return curve;
}

}  // namespace onehot_nb
