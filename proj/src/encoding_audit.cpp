#include "onehot_nb/encoding_audit.hpp"

#include <algorithm>
#include <string>

#include "onehot_nb/error.hpp"

namespace onehot_nb {

namespace {

using Bits = std::vector<std::uint64_t>;

bool disjoint(const Bits& a, const Bits& b) {
    for (std::size_t w = 0; w < a.size(); ++w) {
        if (a[w] & b[w]) return false;
    }
    return true;
}

void merge_into(Bits& acc, const Bits& b) {
    for (std::size_t w = 0; w < acc.size(); ++w) acc[w] |= b[w];
}

bool is_empty(const Bits& a) {
    return std::all_of(a.begin(), a.end(), [](std::uint64_t w) { return w == 0; });
}

class CoverSearch {
public:
    explicit CoverSearch(const BitMatrix& m) : words_((m.rows() + 63) / 64), full_(words_, 0), columns_(m.cols()) {
        for (std::size_t r = 0; r < m.rows(); ++r) full_[r / 64] |= std::uint64_t{1} << (r % 64);
        for (std::size_t c = 0; c < m.cols(); ++c) {
            columns_[c].assign(words_, 0);
            for (std::size_t r = 0; r < m.rows(); ++r) {
                if (m.get(r, c)) columns_[c][r / 64] |= std::uint64_t{1} << (r % 64);
            }
        }
    }

    // A column can be part of a group only if it is neither all-zero nor all-one.
    bool eligible(std::size_t c) const { return !is_empty(columns_[c]) && columns_[c] != full_; }

    // Visits every exact cover that contains `seed` and otherwise uses
    // candidates (ascending) in lexicographic order; stops when visit returns false.
    template <typename Visit>
    void for_each_cover(std::size_t seed, const std::vector<std::size_t>& candidates, Visit&& visit) const {
        std::vector<std::size_t> chosen{seed};
        bool stop = false;
        extend(columns_[seed], candidates, 0, chosen, visit, stop);
    }

private:
    template <typename Visit>
    void extend(const Bits& covered, const std::vector<std::size_t>& candidates, std::size_t from,
                std::vector<std::size_t>& chosen, Visit& visit, bool& stop) const {
        if (covered == full_) {
            if (chosen.size() >= 2 && !visit(chosen)) stop = true;
            return;
        }
        for (std::size_t i = from; i < candidates.size() && !stop; ++i) {
            const Bits& col = columns_[candidates[i]];
            if (!disjoint(covered, col)) continue;
            Bits next = covered;
            merge_into(next, col);
            chosen.push_back(candidates[i]);
            extend(next, candidates, i + 1, chosen, visit, stop);
            chosen.pop_back();
        }
    }

    std::size_t words_;
    Bits full_;
    std::vector<Bits> columns_;
};

// Number of ways (capped at 2) to split `remaining` into one-hot groups.
std::size_t count_partitions(const CoverSearch& search, std::vector<std::size_t> remaining) {
    if (remaining.empty()) return 1;
    const std::size_t seed = remaining.front();
    const std::vector<std::size_t> rest(remaining.begin() + 1, remaining.end());
    std::size_t total = 0;
    search.for_each_cover(seed, rest, [&](const std::vector<std::size_t>& cover) {
        std::vector<std::size_t> left;
        std::set_difference(rest.begin(), rest.end(), cover.begin() + 1, cover.end(), std::back_inserter(left));
        total += count_partitions(search, std::move(left));
        return total < 2;
    });
    return std::min<std::size_t>(total, 2);
}

}  // namespace

BitMatrix BitMatrix::from_rows(const std::vector<std::vector<std::uint8_t>>& rows) {
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    BitMatrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols) {
            throw Error(ErrorCode::LengthMismatch, "row " + std::to_string(r) + " has " +
                                                       std::to_string(rows[r].size()) + " columns, expected " +
                                                       std::to_string(cols));
        }
        for (std::size_t c = 0; c < cols; ++c) {
            if (rows[r][c] > 1) {
                throw Error(ErrorCode::Parse, "row " + std::to_string(r) + " column " + std::to_string(c) +
                                                  " is not a bit");
            }
            m.set(r, c, rows[r][c] != 0);
        }
    }
    return m;
}

std::vector<LabeledObservation> generate_dataset(const NBParams& params, std::size_t n_rows, RngSeed seed) {
    if (n_rows < 1) throw Error(ErrorCode::EmptyData, "n_rows must be >= 1");
    Engine engine = make_engine(seed);
    auto draw = [&engine](const ProbVector& p) {
        std::discrete_distribution<std::size_t> dist(p.begin(), p.end());
        return dist(engine);
    };
    std::vector<LabeledObservation> data;
    data.reserve(n_rows);
    for (std::size_t r = 0; r < n_rows; ++r) {
        LabeledObservation row;
        row.label = draw(params.prior());
        row.x.reserve(params.num_features());
        for (std::size_t f = 0; f < params.num_features(); ++f) row.x.push_back(draw(params.table(f)[row.label]));
        data.push_back(std::move(row));
    }
    return data;
}

BitPattern one_hot_encode(std::size_t j, std::size_t k) {
    if (j >= k) {
        throw Error(ErrorCode::IndexOutOfRange,
                    "value index " + std::to_string(j) + " out of range for K=" + std::to_string(k));
    }
    BitPattern bits(k, 0);
    bits[j] = 1;
    return bits;
}

BitPattern one_hot_encode(const Observation& obs, std::span<const std::size_t> values_per_feature) {
    if (obs.size() != values_per_feature.size()) {
        throw Error(ErrorCode::LengthMismatch, "observation and layout differ in feature count");
    }
    BitPattern bits;
    for (std::size_t f = 0; f < obs.size(); ++f) {
        const BitPattern piece = one_hot_encode(obs[f], values_per_feature[f]);
        bits.insert(bits.end(), piece.begin(), piece.end());
    }
    return bits;
}

std::size_t one_hot_decode(std::span<const std::uint8_t> pattern) {
    std::size_t set = 0;
    std::size_t index = 0;
    for (std::size_t k = 0; k < pattern.size(); ++k) {
        if (pattern[k]) {
            ++set;
            index = k;
        }
    }
    if (set != 1) throw Error(ErrorCode::NotOneHot, std::to_string(set) + " bits set, expected exactly 1");
    return index;
}

Observation one_hot_decode(std::span<const std::uint8_t> bits, std::span<const std::size_t> values_per_feature) {
    std::size_t width = 0;
    for (std::size_t k : values_per_feature) width += k;
    if (bits.size() != width) {
        throw Error(ErrorCode::LengthMismatch,
                    std::to_string(bits.size()) + " bits, layout needs " + std::to_string(width));
    }
    Observation obs;
    std::size_t offset = 0;
    for (std::size_t k : values_per_feature) {
        obs.push_back(one_hot_decode(bits.subspan(offset, k)));
        offset += k;
    }
    return obs;
}

GroupDetection detect_one_hot_groups(const BitMatrix& m) {
    GroupDetection result;
    if (m.rows() == 0 || m.cols() < 2) return result;

    const CoverSearch search(m);
    std::vector<bool> used(m.cols(), false);
    for (std::size_t seed = 0; seed < m.cols(); ++seed) {
        if (used[seed] || !search.eligible(seed)) continue;
        std::vector<std::size_t> candidates;
        for (std::size_t c = seed + 1; c < m.cols(); ++c) {
            if (!used[c] && search.eligible(c)) candidates.push_back(c);
        }
        std::vector<std::size_t> found;
        search.for_each_cover(seed, candidates, [&](const std::vector<std::size_t>& cover) {
            found = cover;
            return false;
        });
        if (found.empty()) continue;
        for (std::size_t c : found) used[c] = true;
        result.groups.push_back({found});
    }

    std::vector<std::size_t> involved;
    for (const OneHotGroup& g : result.groups) involved.insert(involved.end(), g.columns.begin(), g.columns.end());
    std::sort(involved.begin(), involved.end());
    result.ambiguous = !involved.empty() && count_partitions(search, involved) > 1;
    return result;
}

}  // namespace onehot_nb
