#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include <json.hpp>

#include "onehot_nb/cli.hpp"
#include "onehot_nb/csv_io.hpp"

namespace fs = std::filesystem;
using onehot_nb::io::parse_csv;
using onehot_nb::io::read_text_file;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = onehot_nb::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

class TempDir {
public:
    TempDir() : path_(fs::temp_directory_path() / ("onehot_nb_cli_" + std::to_string(::getpid()) + "_" +
                                                    std::to_string(counter_++))) {
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    std::string str(const std::string& sub = "") const { return (path_ / sub).string(); }

private:
    static inline int counter_ = 0;
    fs::path path_;
};

const std::string kExampleParams = std::string(ONEHOT_NB_SOURCE_DIR) + "/data/example_params.csv";

double cell(const std::string& csv_text, std::size_t row, const std::string& column) {
    const auto table = parse_csv(csv_text);
    const auto it = std::find(table.header.begin(), table.header.end(), column);
    REQUIRE(it != table.header.end());
    return onehot_nb::io::parse_double(table.rows.at(row).at(static_cast<std::size_t>(it - table.header.begin())),
                                       column);
}

}  // namespace

TEST_CASE("classify matches hand Bayes arithmetic") {
    const Run r = run({"classify", "--params", kExampleParams, "--obs", "0"});
    REQUIRE(r.code == 0);
    // categorical: 0.6*0.5 = 0.3 vs 0.4*0.1 = 0.04
    CHECK(cell(r.out, 0, "p0") == doctest::Approx(0.3 / 0.34).epsilon(1e-14));
    CHECK(cell(r.out, 0, "p1") == doctest::Approx(0.04 / 0.34).epsilon(1e-14));
    // PoB: Q = 0.7*0.8 = 0.56 and 0.7*0.4 = 0.28, so 0.168 vs 0.0112
    CHECK(cell(r.out, 1, "p0") == doctest::Approx(0.9375).epsilon(1e-14));
    CHECK(cell(r.out, 1, "p1") == doctest::Approx(0.0625).epsilon(1e-14));
    CHECK(r.out.rfind("model,p0,p1,map\ncategorical,", 0) == 0);

    const Run one = run({"classify", "--params", kExampleParams, "--obs", "2", "--model", "pob"});
    REQUIRE(one.code == 0);
    CHECK(parse_csv(one.out).rows.size() == 1);
}

TEST_CASE("classify with identical tables gives equal outputs") {
    TempDir dir;
    onehot_nb::io::write_file_atomic(dir.str("same.csv"),
                                     "kind,feature,class,p0,p1,p2\nprior,,,0.3,0.7,\n"
                                     "table,0,0,0.2,0.5,0.3\ntable,0,1,0.2,0.5,0.3\n");
    const Run r = run({"classify", "--params", dir.str("same.csv"), "--obs", "1"});
    REQUIRE(r.code == 0);
    CHECK(cell(r.out, 0, "p0") == doctest::Approx(cell(r.out, 1, "p0")).epsilon(1e-15));
    CHECK(cell(r.out, 0, "p1") == doctest::Approx(cell(r.out, 1, "p1")).epsilon(1e-15));
}

TEST_CASE("classify input errors exit 2") {
    CHECK(run({"classify", "--params", kExampleParams, "--obs", "3"}).code == 2);
    CHECK(run({"classify", "--params", kExampleParams, "--obs", "0,1"}).code == 2);
    CHECK(run({"classify", "--params", kExampleParams, "--obs", "x"}).code == 2);
    CHECK(run({"classify", "--params", kExampleParams, "--obs", "0", "--model", "gauss"}).code == 2);
    CHECK(run({"classify", "--params", "/nonexistent/params.csv", "--obs", "0"}).code == 3);

    TempDir dir;
    onehot_nb::io::write_file_atomic(dir.str("bad.csv"),
                                     "kind,feature,class,p0,p1\nprior,,,0.5,0.5\ntable,0,0,0.5,0.5\n"
                                     "table,0,1,0.9,0.5\n");
    const Run r = run({"classify", "--params", dir.str("bad.csv"), "--obs", "0"});
    CHECK(r.code == 2);
    CHECK(r.err.find("class 1") != std::string::npos);
    CHECK(run({}).code == 2);
    CHECK(run({"bogus"}).code == 2);
}

TEST_CASE("simulate writes comparison, summary and manifest") {
    TempDir dir;
    const Run r = run({"simulate", "--classes", "4", "--values", "3", "--alpha", "1", "--samples", "100",
                       "--seed", "0", "--out", dir.str("run")});
    REQUIRE(r.code == 0);
    const auto comparison = parse_csv(read_text_file(dir.str("run/comparison.csv")));
    CHECK(comparison.rows.size() == 300);
    CHECK(comparison.header.size() == 2 + 4 + 4 + 4);
    const auto summary = parse_csv(read_text_file(dir.str("run/summary.csv")));
    CHECK(summary.rows.size() == 1);
    const auto manifest = nlohmann::json::parse(read_text_file(dir.str("run/manifest.json")));
    CHECK(manifest["command"] == "simulate");
    CHECK(manifest["seed"] == 0);
    CHECK(manifest["files"] == nlohmann::json::array({"comparison.csv", "summary.csv"}));
    CHECK(manifest["config"]["alpha_theta"] == 1.0);
}

TEST_CASE("simulate with inv-k and sparse alpha") {
    TempDir dir;
    REQUIRE(run({"simulate", "--values", "10", "--alpha", "0.1", "--out", dir.str("a")}).code == 0);
    const std::string summary = read_text_file(dir.str("a/summary.csv"));
    CHECK(cell(summary, 0, "n_cases") == 1000);
    CHECK(cell(summary, 0, "pct_pob_max_higher") >= 0.0);
    CHECK(cell(summary, 0, "pct_pob_max_higher") <= 100.0);
    CHECK(cell(summary, 0, "pct_map_disagree") <= 100.0);

    REQUIRE(run({"simulate", "--values", "10", "--alpha", "inv-k", "--out", dir.str("b")}).code == 0);
    CHECK(read_text_file(dir.str("a/comparison.csv")) == read_text_file(dir.str("b/comparison.csv")));
    CHECK(cell(read_text_file(dir.str("b/summary.csv")), 0, "alpha_theta") == 0.1);
}

TEST_CASE("simulate is byte-reproducible, serial or parallel, and from its manifest") {
    TempDir dir;
    REQUIRE(run({"simulate", "--seed", "12", "--out", dir.str("a")}).code == 0);
    REQUIRE(run({"simulate", "--seed", "12", "--threads", "3", "--out", dir.str("b")}).code == 0);
    REQUIRE(run({"replay", "--manifest", dir.str("a/manifest.json"), "--out", dir.str("c")}).code == 0);
    for (const char* f : {"comparison.csv", "summary.csv", "manifest.json"}) {
        const std::string a = read_text_file(dir.str(std::string("a/") + f));
        CHECK(a == read_text_file(dir.str(std::string("b/") + f)));
        CHECK(a == read_text_file(dir.str(std::string("c/") + f)));
    }
    REQUIRE(run({"simulate", "--seed", "13", "--out", dir.str("d")}).code == 0);
    CHECK(read_text_file(dir.str("a/comparison.csv")) != read_text_file(dir.str("d/comparison.csv")));
}

TEST_CASE("simulate errors") {
    TempDir dir;
    CHECK(run({"simulate", "--classes", "1", "--out", dir.str("x")}).code == 2);
    CHECK(run({"simulate", "--alpha", "-1", "--out", dir.str("x")}).code == 2);
    CHECK(run({"simulate", "--alpha", "lots", "--out", dir.str("x")}).code == 2);
    CHECK(run({"simulate", "--samples", "0", "--out", dir.str("x")}).code == 2);
    CHECK(run({"simulate"}).code == 2);
    onehot_nb::io::write_file_atomic(dir.str("file"), "x");
    CHECK(run({"simulate", "--out", dir.str("file/sub")}).code == 3);
}

TEST_CASE("scatter output") {
    TempDir dir;
    REQUIRE(run({"scatter", "--classes", "2", "--samples", "1", "--values", "3", "--out", dir.str("s")}).code == 0);
    const auto small = parse_csv(read_text_file(dir.str("s/scatter.csv")));
    CHECK(small.header ==
          std::vector<std::string>{"classifier_index", "j", "c", "d", "log_theta_ratio", "log_f_ratio"});
    REQUIRE(small.rows.size() == 6);
    for (std::size_t i = 0; i < 6; i += 2) {
        CHECK(small.rows[i][2] == small.rows[i + 1][3]);
        CHECK(onehot_nb::io::parse_double(small.rows[i][4], "x") ==
              -onehot_nb::io::parse_double(small.rows[i + 1][4], "x"));
        CHECK(onehot_nb::io::parse_double(small.rows[i][5], "y") ==
              -onehot_nb::io::parse_double(small.rows[i + 1][5], "y"));
    }

    REQUIRE(run({"scatter", "--values", "3", "--samples", "100", "--out", dir.str("big")}).code == 0);
    const auto big = parse_csv(read_text_file(dir.str("big/scatter.csv")));
    double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& row : big.rows) {
        const double x = std::stod(row[4]), y = std::stod(row[5]);
        if (std::abs(x) >= 1.0) continue;
        n += 1;
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double slope = (sxy - sx * sy / n) / (sxx - sx * sx / n);
    CHECK(slope > 1.0);
}

TEST_CASE("bounds and surface outputs") {
    TempDir dir;
    REQUIRE(run({"bounds", "--values", "6", "--step", "0.001", "--out", dir.str("b")}).code == 0);
    const auto bounds = parse_csv(read_text_file(dir.str("b/bounds.csv")));
    REQUIRE(bounds.rows.size() == 1001);
    CHECK(bounds.rows.front() == std::vector<std::string>{"0", "0", "0"});
    CHECK(bounds.rows.back() == std::vector<std::string>{"1", "1", "1"});

    REQUIRE(run({"bounds", "--values", "2", "--step", "0.01", "--out", dir.str("b2")}).code == 0);
    for (const auto& row : parse_csv(read_text_file(dir.str("b2/bounds.csv"))).rows) CHECK(row[1] == row[2]);

    CHECK(run({"bounds", "--values", "1", "--out", dir.str("b3")}).code == 2);
    CHECK(run({"bounds", "--step", "0.7", "--out", dir.str("b3")}).code == 2);

    REQUIRE(run({"surface", "--step", "0.01", "--out", dir.str("s")}).code == 0);
    const auto surface = parse_csv(read_text_file(dir.str("s/surface.csv")));
    std::size_t best = 0;
    for (std::size_t i = 0; i < surface.rows.size(); ++i)
        if (std::stod(surface.rows[i][3]) > std::stod(surface.rows[best][3])) best = i;
    CHECK(std::stod(surface.rows[best][0]) == doctest::Approx(1.0 / 3.0));
    CHECK(std::stod(surface.rows[best][3]) == doctest::Approx(8.0 / 27.0).epsilon(1e-15));
    CHECK(run({"surface", "--step", "0", "--out", dir.str("s2")}).code == 2);
}

TEST_CASE("generate, fit and audit") {
    TempDir dir;
    const std::string params = std::string(ONEHOT_NB_SOURCE_DIR) + "/data/example_params_two_features.csv";
    REQUIRE(run({"generate", "--params", params, "--rows", "2000", "--seed", "4", "--out", dir.str("g")}).code == 0);

    const Run ordinal = run({"fit", "--data", dir.str("g/dataset.csv"), "--layout", "ordinal", "--out",
                             dir.str("fo")});
    REQUIRE(ordinal.code == 0);
    CHECK(ordinal.out.find("layouts_agree,true") != std::string::npos);
    const Run encoded = run({"fit", "--data", dir.str("g/dataset_onehot.csv"), "--layout", "one-hot", "--out",
                             dir.str("fe")});
    REQUIRE(encoded.code == 0);
    CHECK(encoded.out.find("layouts_agree,true") != std::string::npos);
    CHECK(read_text_file(dir.str("fo/params.csv")) == read_text_file(dir.str("fe/params.csv")));

    const Run audit = run({"audit", "--data", dir.str("g/dataset_onehot.csv"), "--out", dir.str("a")});
    REQUIRE(audit.code == 0);
    CHECK(audit.out ==
          "group,k,columns\n0,3,x0_0 x0_1 x0_2\n1,4,x1_0 x1_1 x1_2 x1_3\nambiguous,false\n");
    CHECK(fs::exists(dir.str("a/groups.csv")));
    CHECK(fs::exists(dir.str("a/manifest.json")));

    REQUIRE(run({"replay", "--manifest", dir.str("fo/manifest.json"), "--out", dir.str("fo2")}).code == 0);
    CHECK(read_text_file(dir.str("fo/params.csv")) == read_text_file(dir.str("fo2/params.csv")));

    onehot_nb::io::write_file_atomic(dir.str("empty.csv"), "x0,label\n");
    CHECK(run({"fit", "--data", dir.str("empty.csv"), "--out", dir.str("f3")}).code == 2);
    CHECK(run({"audit", "--data", dir.str("empty.csv")}).code == 2);
    onehot_nb::io::write_file_atomic(dir.str("broken.csv"), "x0,label\n1,0\n2\n");
    CHECK(run({"fit", "--data", dir.str("broken.csv"), "--out", dir.str("f4")}).code == 2);
    onehot_nb::io::write_file_atomic(dir.str("nothot.csv"), "x0_0,x0_1,label\n1,1,0\n");
    CHECK(run({"fit", "--data", dir.str("nothot.csv"), "--layout", "one-hot", "--out", dir.str("f5")}).code == 2);
}

TEST_CASE("executable exit codes") {
    const std::string cli = ONEHOT_NB_CLI_PATH;
    TempDir dir;
    auto status = [](const std::string& cmd) {
        const int raw = std::system((cmd + " > /dev/null 2>&1").c_str());
        return WEXITSTATUS(raw);
    };
    CHECK(status(cli + " classify --params " + kExampleParams + " --obs 0") == 0);
    CHECK(status(cli + " classify --params " + kExampleParams + " --obs 7") == 2);
    CHECK(status(cli + " simulate --samples 5 --out " + dir.str("x")) == 0);
    CHECK(status(cli + " --version") == 0);
}
