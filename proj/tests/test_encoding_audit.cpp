#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "onehot_nb/encoding_audit.hpp"
#include "onehot_nb/error.hpp"
#include "test_support.hpp"

using namespace onehot_nb;
using test_support::make_params;

namespace {

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an onehot_nb::Error");
    return ErrorCode::Io;
}

// Every reported group must have exactly one set bit per row.
bool groups_valid(const BitMatrix& m, const GroupDetection& d) {
    for (const OneHotGroup& g : d.groups) {
        if (g.k() < 2) return false;
        for (std::size_t r = 0; r < m.rows(); ++r) {
            int ones = 0;
            for (std::size_t c : g.columns) ones += m.get(r, c);
            if (ones != 1) return false;
        }
    }
    return true;
}

}  // namespace

TEST_CASE("one-hot encode and decode") {
    CHECK(one_hot_encode(1, 3) == BitPattern{0, 1, 0});
    CHECK(code_of([] { one_hot_encode(3, 3); }) == ErrorCode::IndexOutOfRange);
    CHECK(code_of([] { one_hot_decode(BitPattern{0, 0, 0}); }) == ErrorCode::NotOneHot);
    CHECK(code_of([] { one_hot_decode(BitPattern{1, 0, 1}); }) == ErrorCode::NotOneHot);
    for (std::size_t k = 2; k <= 10; ++k)
        for (std::size_t j = 0; j < k; ++j) REQUIRE(one_hot_decode(one_hot_encode(j, k)) == j);

    const std::vector<std::size_t> layout{3, 2, 4};
    const Observation obs{2, 0, 3};
    const BitPattern bits = one_hot_encode(obs, layout);
    CHECK(bits == BitPattern{0, 0, 1, 1, 0, 0, 0, 0, 1});
    CHECK(one_hot_decode(bits, layout) == obs);
    CHECK(code_of([&] { one_hot_decode(BitPattern{1, 0}, layout); }) == ErrorCode::LengthMismatch);
}

TEST_CASE("generate_dataset") {
    SUBCASE("degenerate prior") {
        const NBParams p = make_params({1.0, 0.0, 0.0}, {{{0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5}}});
        for (const auto& row : generate_dataset(p, 500, {1, 0})) REQUIRE(row.label == 0);
    }
    SUBCASE("degenerate tables") {
        const NBParams p = make_params({0.5, 0.5}, {{{1.0, 0.0, 0.0}, {1.0, 0.0, 0.0}}});
        for (const auto& row : generate_dataset(p, 500, {1, 0})) REQUIRE(row.x[0] == 0);
    }
    SUBCASE("label frequencies follow the prior") {
        std::mt19937_64 rng(4);
        const NBParams p = test_support::random_params(4, {3, 5}, rng);
        const auto data = generate_dataset(p, 100000, {9, 0});
        std::vector<double> freq(4, 0.0);
        for (const auto& row : data) freq[row.label] += 1.0 / 100000.0;
        for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(freq[i] - p.prior()[i]) < 0.01);
    }
    SUBCASE("deterministic per seed") {
        const NBParams p = make_params({0.3, 0.7}, {{{0.2, 0.8}, {0.6, 0.4}}});
        const auto a = generate_dataset(p, 50, {3, 1});
        const auto b = generate_dataset(p, 50, {3, 1});
        for (std::size_t r = 0; r < 50; ++r) {
            REQUIRE(a[r].label == b[r].label);
            REQUIRE(a[r].x == b[r].x);
        }
    }
    CHECK(code_of([] { generate_dataset(make_params({0.5, 0.5}, {{{1.0, 0.0}, {1.0, 0.0}}}), 0, {}); }) ==
          ErrorCode::EmptyData);
}

TEST_CASE("detect_one_hot_groups on a single encoded variable") {
    const NBParams p = make_params({0.5, 0.5}, {{{0.2, 0.3, 0.5}, {0.6, 0.2, 0.2}}});
    const auto data = generate_dataset(p, 300, {5, 0});
    std::vector<std::vector<std::uint8_t>> rows;
    for (const auto& row : data) rows.push_back(one_hot_encode(row.x[0], 3));
    const BitMatrix m = BitMatrix::from_rows(rows);
    const GroupDetection d = detect_one_hot_groups(m);
    REQUIRE(d.groups.size() == 1);
    CHECK(d.groups[0].columns == std::vector<std::size_t>{0, 1, 2});
    CHECK(d.groups[0].k() == 3);
    CHECK_FALSE(d.ambiguous);
}

TEST_CASE("independent Bernoulli columns form no group") {
    std::mt19937_64 rng(2718);
    BitMatrix m(1000, 8);
    for (std::size_t r = 0; r < 1000; ++r)
        for (std::size_t c = 0; c < 8; ++c) m.set(r, c, rng() & 1U);
    // Row sums inspected directly: no column pair is complementary on every row.
    bool complementary_pair = false;
    for (std::size_t a = 0; a < 8; ++a)
        for (std::size_t b = a + 1; b < 8; ++b) {
            bool all = true;
            for (std::size_t r = 0; r < 1000 && all; ++r) all = m.get(r, a) + m.get(r, b) == 1;
            complementary_pair |= all;
        }
    REQUIRE_FALSE(complementary_pair);
    CHECK(detect_one_hot_groups(m).groups.empty());
}

TEST_CASE("two interleaved variables are both recovered") {
    // K = 3 variable in columns {0, 2, 5}, K = 4 variable in {1, 3, 4, 6}.
    const std::vector<std::size_t> first{0, 2, 5};
    const std::vector<std::size_t> second{1, 3, 4, 6};
    std::mt19937_64 rng(6);
    BitMatrix m(500, 7);
    for (std::size_t r = 0; r < 500; ++r) {
        m.set(r, first[rng() % 3], true);
        m.set(r, second[rng() % 4], true);
    }
    const GroupDetection d = detect_one_hot_groups(m);
    CHECK(groups_valid(m, d));
    REQUIRE(d.groups.size() == 2);
    CHECK(d.groups[0].columns == first);
    CHECK(d.groups[1].columns == second);
    CHECK_FALSE(d.ambiguous);
}

TEST_CASE("ambiguous partitions are flagged") {
    // Two K = 2 variables that happen to be identical: {0,1}, {2,3} and {0,3}, {1,2} both work.
    std::mt19937_64 rng(7);
    BitMatrix m(100, 4);
    for (std::size_t r = 0; r < 100; ++r) {
        const bool a = rng() & 1U;
        m.set(r, 0, a);
        m.set(r, 1, !a);
        m.set(r, 2, a);
        m.set(r, 3, !a);
    }
    const GroupDetection d = detect_one_hot_groups(m);
    CHECK(groups_valid(m, d));
    REQUIRE(d.groups.size() == 2);
    CHECK(d.groups[0].columns == std::vector<std::size_t>{0, 1});
    CHECK(d.groups[1].columns == std::vector<std::size_t>{2, 3});
    CHECK(d.ambiguous);
}

TEST_CASE("noise columns and constant columns are left out") {
    std::mt19937_64 rng(8);
    BitMatrix m(200, 6);
    for (std::size_t r = 0; r < 200; ++r) {
        m.set(r, 0, rng() & 1U);       // noise
        m.set(r, 1 + rng() % 3, true);  // K = 3 in {1, 2, 3}
        m.set(r, 5, true);              // constant 1; column 4 stays all zero
    }
    const GroupDetection d = detect_one_hot_groups(m);
    REQUIRE(d.groups.size() == 1);
    CHECK(d.groups[0].columns == std::vector<std::size_t>{1, 2, 3});
}

TEST_CASE("detection never reports an invalid group") {
    std::mt19937_64 rng(10);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t rows = 1 + rng() % 30;
        const std::size_t cols = 2 + rng() % 9;
        BitMatrix m(rows, cols);
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c) m.set(r, c, rng() % 3 == 0);
        REQUIRE(groups_valid(m, detect_one_hot_groups(m)));
    }
}

TEST_CASE("BitMatrix::from_rows validation") {
    CHECK(code_of([] { BitMatrix::from_rows({{0, 1}, {1}}); }) == ErrorCode::LengthMismatch);
    CHECK(code_of([] { BitMatrix::from_rows({{0, 2}}); }) == ErrorCode::Parse);
}

TEST_CASE("generate, encode, fit: layouts agree end to end") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 10; ++trial) {
        const std::vector<std::size_t> ks{3, 6};
        const NBParams truth = test_support::random_params(4, ks, rng);
        const auto data = generate_dataset(truth, 1000, {static_cast<std::uint64_t>(trial), 1});
        std::vector<std::vector<std::uint8_t>> bits;
        std::vector<std::size_t> labels;
        std::vector<LabeledObservation> decoded;
        for (const auto& row : data) {
            bits.push_back(one_hot_encode(row.x, ks));
            labels.push_back(row.label);
            decoded.push_back({one_hot_decode(bits.back(), ks), row.label});
        }
        REQUIRE(fit_mle_bits(bits, labels, 0.0, 4, ks) == fit_mle(decoded, Layout::Ordinal, 0.0, 4, ks));
    }
}
