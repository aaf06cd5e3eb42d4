#include "onehot_nb/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <json.hpp>
#include <optional>
#include <ostream>
#include <sstream>

#include "onehot_nb/csv_io.hpp"
#include "onehot_nb/error.hpp"
#include "onehot_nb/experiments.hpp"

namespace onehot_nb::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct SimulationOptions {
    std::size_t classes = 4;
    std::size_t values = 3;
    std::string alpha = "1";
    double alpha_prior = 1.0;
    std::size_t samples = 100;
    std::uint64_t seed = 0;
    std::size_t threads = 1;
    std::string out;
};

// Output set written by one command. Paths inside are relative to dir.
class OutputSet {
public:
    OutputSet(const std::string& dir, std::string command) : dir_(dir), command_(std::move(command)) {
        if (dir.empty()) throw Error(ErrorCode::Parse, "--out is required");
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec || !fs::is_directory(dir_)) throw Error(ErrorCode::Io, "cannot create output directory " + dir);
    }

    void write(const std::string& name, std::string_view content) {
        io::write_file_atomic(dir_ / name, content);
        files_.push_back(name);
    }

    // Written last so that it lists every artifact; contains nothing that
    // varies between identical invocations.
    void finish(const std::vector<std::string>& args, json config, std::uint64_t seed, json results = json::object()) {
        json manifest;
        manifest["tool"] = kToolName;
        manifest["version"] = kToolVersion;
        manifest["command"] = command_;
        manifest["args"] = args;
        manifest["config"] = std::move(config);
        manifest["seed"] = seed;
        manifest["files"] = files_;
        manifest["results"] = std::move(results);
        io::write_file_atomic(dir_ / "manifest.json", manifest.dump(2) + "\n");
    }

private:
    fs::path dir_;
    std::string command_;
    std::vector<std::string> files_;
};

std::string absolute_path(const std::string& p) { return fs::absolute(p).lexically_normal().string(); }

ExperimentConfig to_config(const SimulationOptions& o) {
    ExperimentConfig c;
    c.classes = o.classes;
    c.values = o.values;
    if (o.alpha == "inv-k") {
        c.alpha_theta = 1.0 / static_cast<double>(o.values);
    } else {
        c.alpha_theta = io::parse_double(o.alpha, "--alpha");
    }
    c.alpha_prior = o.alpha_prior;
    c.samples = o.samples;
    c.seed = o.seed;
    c.threads = std::max<std::size_t>(1, o.threads);
    c.validate();
    return c;
}

std::vector<std::string> simulation_args(const std::string& command, const SimulationOptions& o) {
    return {command,   "--classes", std::to_string(o.classes),
            "--values", std::to_string(o.values),
            "--alpha", o.alpha,
            "--alpha-prior", io::format_double(o.alpha_prior),
            "--samples", std::to_string(o.samples),
            "--seed",   std::to_string(o.seed)};
}

json config_json(const ExperimentConfig& c, const std::string& alpha_text) {
    return {{"classes", c.classes},         {"values", c.values},   {"alpha", alpha_text},
            {"alpha_theta", c.alpha_theta}, {"alpha_prior", c.alpha_prior},
            {"samples", c.samples},         {"seed", c.seed}};
}

void add_simulation_options(CLI::App* sub, SimulationOptions& o) {
    sub->add_option("--classes", o.classes, "number of classes C")->capture_default_str();
    sub->add_option("--values", o.values, "number of values K")->capture_default_str();
    sub->add_option("--alpha", o.alpha, "Dirichlet concentration for table rows: a number or 'inv-k'")
        ->capture_default_str();
    sub->add_option("--alpha-prior", o.alpha_prior, "Dirichlet concentration for the class prior")
        ->capture_default_str();
    sub->add_option("--samples", o.samples, "number of sampled classifiers n")->capture_default_str();
    sub->add_option("--seed", o.seed, "master seed")->capture_default_str();
    sub->add_option("--threads", o.threads, "worker threads (output does not depend on it)")
        ->capture_default_str();
    sub->add_option("--out", o.out, "output directory")->required();
}

std::string probability_columns(const std::string& prefix, std::size_t n) {
    std::string s;
    for (std::size_t i = 0; i < n; ++i) s += "," + prefix + std::to_string(i);
    return s;
}

// ---- commands --------------------------------------------------------------

int cmd_classify(const std::string& params_file, const std::string& obs_text, const std::string& model,
                 std::ostream& out) {
    const NBParams params = io::params_from_csv(io::read_text_file(params_file));
    Observation obs;
    for (const std::string& cell : io::split_csv_line(obs_text)) obs.push_back(io::parse_index(cell, "--obs"));
    if (obs.size() != params.num_features()) {
        throw Error(ErrorCode::LengthMismatch, "--obs has " + std::to_string(obs.size()) +
                                                   " values, params file has " +
                                                   std::to_string(params.num_features()) + " features");
    }
    for (std::size_t f = 0; f < obs.size(); ++f) {
        if (obs[f] >= params.num_values(f)) {
            throw Error(ErrorCode::IndexOutOfRange, "--obs value for feature " + std::to_string(f) + " is " +
                                                        std::to_string(obs[f]) + ", K=" +
                                                        std::to_string(params.num_values(f)));
        }
    }

    std::ostringstream text;
    text << "model" << probability_columns("p", params.num_classes()) << ",map\n";
    auto emit = [&](const char* name, Model m) {
        const ProbVector post = multi_feature_posterior(params, obs, m);
        text << name;
        for (double p : post) text << ',' << io::format_double(p);
        text << ',' << map_class(post) << '\n';
    };
    if (model == "categorical" || model == "both") emit("categorical", Model::Categorical);
    if (model == "pob" || model == "both") emit("pob", Model::PoB);
    out << text.str();
    return kOk;
}

int cmd_simulate(const SimulationOptions& o, std::ostream& out) {
    const ExperimentConfig config = to_config(o);
    const ComparisonResult result = run_posterior_comparison(config);

    std::string csv = "classifier_index,j" + probability_columns("cat_p", config.classes) +
                      probability_columns("pob_p", config.classes) + ",cat_map,pob_map,max_cat,max_pob\n";
    for (const ComparisonRecord& r : result.records) {
        csv += std::to_string(r.classifier_index) + ',' + std::to_string(r.j);
        for (double p : r.categorical) csv += ',' + io::format_double(p);
        for (double p : r.pob) csv += ',' + io::format_double(p);
        csv += ',' + std::to_string(r.categorical_map) + ',' + std::to_string(r.pob_map) + ',' +
               io::format_double(r.max_cat) + ',' + io::format_double(r.max_pob) + '\n';
    }
    const SummaryStats& s = result.summary;
    const std::string summary =
        "classes,values,alpha_theta,alpha_prior,samples,seed,n_cases,pct_pob_max_higher,pct_map_disagree\n" +
        std::to_string(config.classes) + ',' + std::to_string(config.values) + ',' +
        io::format_double(config.alpha_theta) + ',' + io::format_double(config.alpha_prior) + ',' +
        std::to_string(config.samples) + ',' + std::to_string(config.seed) + ',' + std::to_string(s.n_cases) + ',' +
        io::format_double(s.pct_pob_max_higher) + ',' + io::format_double(s.pct_map_disagree) + '\n';

    OutputSet set(o.out, "simulate");
    set.write("comparison.csv", csv);
    set.write("summary.csv", summary);
    set.finish(simulation_args("simulate", o), config_json(config, o.alpha), config.seed,
               {{"n_cases", s.n_cases},
                {"pct_pob_max_higher", s.pct_pob_max_higher},
                {"pct_map_disagree", s.pct_map_disagree}});
    out << "n_cases," << s.n_cases << "\npct_pob_max_higher," << io::format_double(s.pct_pob_max_higher)
        << "\npct_map_disagree," << io::format_double(s.pct_map_disagree) << '\n';
    return kOk;
}

int cmd_scatter(const SimulationOptions& o, std::ostream& out) {
    const ExperimentConfig config = to_config(o);
    const ScatterResult result = run_scatter(config);

    std::string csv = "classifier_index,j,c,d,log_theta_ratio,log_f_ratio\n";
    for (const ScatterRecord& r : result.records) {
        csv += std::to_string(r.classifier_index) + ',' + std::to_string(r.j) + ',' + std::to_string(r.c) + ',' +
               std::to_string(r.d) + ',' + io::format_double(r.log_theta_ratio) + ',' +
               io::format_double(r.log_f_ratio) + '\n';
    }
    const double slope = restricted_slope(result.records);
    OutputSet set(o.out, "scatter");
    set.write("scatter.csv", csv);
    set.finish(simulation_args("scatter", o), config_json(config, o.alpha), config.seed,
               {{"records", result.records.size()}, {"skipped", result.skipped}});
    out << "records," << result.records.size() << "\nskipped," << result.skipped << "\nrestricted_slope,"
        << io::format_double(slope) << '\n';
    return kOk;
}

int cmd_bounds(std::size_t k, double step, const std::string& out_dir, std::ostream& out) {
    const std::vector<BoundPoint> curve = bound_curves(k, step);
    std::string csv = "theta_j,lower,upper\n";
    for (const BoundPoint& p : curve) {
        csv += io::format_double(p.theta_j) + ',' + io::format_double(p.lower) + ',' + io::format_double(p.upper) +
               '\n';
    }
    OutputSet set(out_dir, "bounds");
    set.write("bounds.csv", csv);
    set.finish({"bounds", "--values", std::to_string(k), "--step", io::format_double(step)},
               {{"values", k}, {"step", step}}, 0);
    out << "rows," << curve.size() << '\n';
    return kOk;
}

int cmd_surface(double step, const std::string& out_dir, std::ostream& out) {
    const std::vector<SurfacePoint> grid = surface_grid(step);
    std::string csv = "theta1,theta2,theta3,q\n";
    for (const SurfacePoint& p : grid) {
        csv += io::format_double(p.theta1) + ',' + io::format_double(p.theta2) + ',' + io::format_double(p.theta3) +
               ',' + io::format_double(p.q) + '\n';
    }
    OutputSet set(out_dir, "surface");
    set.write("surface.csv", csv);
    set.finish({"surface", "--step", io::format_double(step)}, {{"step", step}}, 0);
    out << "rows," << grid.size() << '\n';
    return kOk;
}

int cmd_generate(const std::string& params_file, std::size_t rows, std::uint64_t seed, const std::string& out_dir,
                 std::ostream& out) {
    const NBParams params = io::params_from_csv(io::read_text_file(params_file));
    const std::vector<LabeledObservation> data = generate_dataset(params, rows, {seed, 0});
    std::vector<std::size_t> layout;
    for (std::size_t f = 0; f < params.num_features(); ++f) layout.push_back(params.num_values(f));

    OutputSet set(out_dir, "generate");
    set.write("dataset.csv", io::dataset_to_csv(data));
    set.write("dataset_onehot.csv", io::encoded_dataset_to_csv(data, layout));
    const std::string abs_params = absolute_path(params_file);
    set.finish({"generate", "--params", abs_params, "--rows", std::to_string(rows), "--seed", std::to_string(seed)},
               {{"params", abs_params}, {"rows", rows}}, seed);
    out << "rows," << data.size() << '\n';
    return kOk;
}

int cmd_fit(const std::string& data_file, const std::string& layout_name, double smoothing,
            std::optional<std::size_t> classes_opt, std::optional<std::size_t> values_opt, const std::string& out_dir,
            std::ostream& out) {
    const io::CsvTable table = io::parse_csv(io::read_text_file(data_file));
    if (table.rows.empty()) throw Error(ErrorCode::EmptyData, data_file + " has no data rows");

    std::vector<LabeledObservation> decoded;
    std::vector<std::vector<std::uint8_t>> bits;
    std::vector<std::size_t> labels;
    std::vector<std::size_t> layout;
    if (layout_name == "one-hot") {
        io::EncodedDataset ds = io::encoded_dataset_from_table(table);
        layout = ds.values_per_feature;
        for (std::size_t r = 0; r < ds.bits.size(); ++r) {
            try {
                decoded.push_back({one_hot_decode(ds.bits[r], layout), ds.labels[r]});
            } catch (const Error& e) {
                throw Error(e.code(), "dataset row " + std::to_string(r + 2) + ": " + e.what());
            }
        }
        bits = std::move(ds.bits);
        labels = std::move(ds.labels);
    } else {
        decoded = io::dataset_from_table(table);
        const std::size_t features = decoded.front().x.size();
        layout.assign(features, 2);
        for (const LabeledObservation& row : decoded) {
            for (std::size_t f = 0; f < features; ++f) layout[f] = std::max(layout[f], row.x[f] + 1);
        }
        if (values_opt) {
            for (std::size_t& k : layout) {
                if (*values_opt < k) {
                    throw Error(ErrorCode::IndexOutOfRange, "--values is smaller than an observed value index");
                }
                k = *values_opt;
            }
        }
        for (const LabeledObservation& row : decoded) {
            bits.push_back(one_hot_encode(row.x, layout));
            labels.push_back(row.label);
        }
    }

    std::size_t classes = 2;
    for (const LabeledObservation& row : decoded) classes = std::max(classes, row.label + 1);
    if (classes_opt) {
        if (*classes_opt < classes) throw Error(ErrorCode::LabelOutOfRange, "--classes is smaller than a label");
        classes = *classes_opt;
    }

    const NBParams ordinal = fit_mle(decoded, Layout::Ordinal, smoothing, classes, layout);
    const NBParams one_hot = fit_mle_bits(bits, labels, smoothing, classes, layout);
    const bool agree = ordinal == one_hot;
    const NBParams& chosen = layout_name == "one-hot" ? one_hot : ordinal;

    OutputSet set(out_dir, "fit");
    set.write("params.csv", io::params_to_csv(chosen));
    const std::string abs_data = absolute_path(data_file);
    std::vector<std::string> args{"fit", "--data", abs_data, "--layout", layout_name, "--smoothing",
                                  io::format_double(smoothing), "--classes", std::to_string(classes)};
    if (values_opt) {
        args.push_back("--values");
        args.push_back(std::to_string(*values_opt));
    }
    set.finish(args, {{"data", abs_data}, {"layout", layout_name}, {"smoothing", smoothing}, {"classes", classes}},
               0, {{"layouts_agree", agree}});
    out << "rows," << decoded.size() << "\nlayouts_agree," << (agree ? "true" : "false") << '\n';
    return kOk;
}

int cmd_audit(const std::string& data_file, const std::string& out_dir, std::ostream& out) {
    const io::CsvTable table = io::parse_csv(io::read_text_file(data_file));
    if (table.rows.empty()) throw Error(ErrorCode::EmptyData, data_file + " has no data rows");
    std::vector<std::string> names;
    const BitMatrix m = io::bit_matrix_from_table(table, &names);
    const GroupDetection detection = detect_one_hot_groups(m);

    std::string report = "group,k,columns\n";
    for (std::size_t g = 0; g < detection.groups.size(); ++g) {
        std::string cols;
        for (std::size_t c : detection.groups[g].columns) cols += (cols.empty() ? "" : " ") + names[c];
        report += std::to_string(g) + ',' + std::to_string(detection.groups[g].k()) + ',' + cols + '\n';
    }
    out << report << "ambiguous," << (detection.ambiguous ? "true" : "false") << '\n';
    if (!out_dir.empty()) {
        OutputSet set(out_dir, "audit");
        set.write("groups.csv", report);
        const std::string abs_data = absolute_path(data_file);
        set.finish({"audit", "--data", abs_data}, {{"data", abs_data}}, 0,
                   {{"groups", detection.groups.size()}, {"ambiguous", detection.ambiguous}});
    }
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Categorical vs one-hot (product-of-Bernoullis) Naive Bayes analysis", std::string(kToolName)};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));

    std::string params_file, obs_text, model = "both";
    auto* classify = app.add_subcommand("classify", "posterior for one observation");
    classify->add_option("--params", params_file, "params CSV")->required();
    classify->add_option("--obs", obs_text, "comma-separated value index per feature (0-based)")->required();
    classify->add_option("--model", model, "categorical | pob | both")
        ->check(CLI::IsMember({"categorical", "pob", "both"}))
        ->capture_default_str();

    SimulationOptions sim;
    auto* simulate = app.add_subcommand("simulate", "posterior comparison over sampled classifiers");
    add_simulation_options(simulate, sim);
    SimulationOptions scat;
    auto* scatter = app.add_subcommand("scatter", "log f-ratio vs log theta-ratio data");
    add_simulation_options(scatter, scat);

    std::size_t bounds_k = 6;
    double step = 0.001;
    std::string out_dir;
    auto* bounds = app.add_subcommand("bounds", "lower/upper bound curves of f_j");
    bounds->add_option("--values", bounds_k, "K")->capture_default_str();
    bounds->add_option("--step", step, "theta_j step")->capture_default_str();
    bounds->add_option("--out", out_dir, "output directory")->required();

    double surface_step = 0.01;
    auto* surface = app.add_subcommand("surface", "Q factor over the 3-simplex grid");
    surface->add_option("--step", surface_step, "barycentric step")->capture_default_str();
    surface->add_option("--out", out_dir, "output directory")->required();

    std::size_t rows = 1000;
    std::uint64_t gen_seed = 0;
    auto* generate = app.add_subcommand("generate", "sample a dataset from a params file");
    generate->add_option("--params", params_file, "params CSV")->required();
    generate->add_option("--rows", rows, "number of rows")->capture_default_str();
    generate->add_option("--seed", gen_seed, "seed")->capture_default_str();
    generate->add_option("--out", out_dir, "output directory")->required();

    std::string data_file, layout = "ordinal";
    double smoothing = 0.0;
    std::optional<std::size_t> fit_classes, fit_values;
    auto* fit = app.add_subcommand("fit", "maximum-likelihood fit from a dataset");
    fit->add_option("--data", data_file, "dataset CSV")->required();
    fit->add_option("--layout", layout, "ordinal | one-hot")
        ->check(CLI::IsMember({"ordinal", "one-hot"}))
        ->capture_default_str();
    fit->add_option("--smoothing", smoothing, "additive smoothing")->capture_default_str();
    fit->add_option("--classes", fit_classes, "number of classes (default: max label + 1)");
    fit->add_option("--values", fit_values, "K for every feature of an ordinal dataset (default: max + 1)");
    fit->add_option("--out", out_dir, "output directory")->required();

    auto* audit = app.add_subcommand("audit", "detect one-hot column groups in a bit matrix");
    audit->add_option("--data", data_file, "bit matrix CSV (a 'label' column is ignored)")->required();
    audit->add_option("--out", out_dir, "optional output directory for groups.csv");

    std::string manifest_file;
    auto* replay = app.add_subcommand("replay", "re-run the command recorded in a manifest");
    replay->add_option("--manifest", manifest_file, "manifest.json")->required();
    replay->add_option("--out", out_dir, "output directory")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInputError;
    }

    try {
        if (*classify) return cmd_classify(params_file, obs_text, model, out);
        if (*simulate) return cmd_simulate(sim, out);
        if (*scatter) return cmd_scatter(scat, out);
        if (*bounds) return cmd_bounds(bounds_k, step, out_dir, out);
        if (*surface) return cmd_surface(surface_step, out_dir, out);
        if (*generate) return cmd_generate(params_file, rows, gen_seed, out_dir, out);
        if (*fit) return cmd_fit(data_file, layout, smoothing, fit_classes, fit_values, out_dir, out);
        if (*audit) return cmd_audit(data_file, out_dir, out);
        if (*replay) {
            json manifest;
            try {
                manifest = json::parse(io::read_text_file(manifest_file));
            } catch (const json::exception& e) {
                throw Error(ErrorCode::Parse, manifest_file + ": " + e.what());
            }
            if (!manifest.contains("args") || !manifest["args"].is_array()) {
                throw Error(ErrorCode::Parse, manifest_file + ": missing 'args'");
            }
            auto recorded = manifest["args"].get<std::vector<std::string>>();
            if (recorded.empty() || recorded.front() == "replay") {
                throw Error(ErrorCode::Parse, manifest_file + ": invalid 'args'");
            }
            recorded.push_back("--out");
            recorded.push_back(out_dir);
            return run(recorded, out, err);
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return e.code() == ErrorCode::Io ? kIoError : kInputError;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kIoError;
    }
    return kInputError;
}

}  // namespace onehot_nb::cli
