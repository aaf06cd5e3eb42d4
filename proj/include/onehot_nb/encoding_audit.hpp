#pragma once

// Synthetic datasets, one-hot encode/decode and detection of one-hot column
// groups in a bare bit matrix.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "onehot_nb/nb_models.hpp"
#include "onehot_nb/simplex.hpp"

namespace onehot_nb {

/// Dense row-major 0/1 matrix.
class BitMatrix {
public:
    BitMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), bits_(rows * cols, 0) {}
    /// Throws LengthMismatch on ragged rows, Parse on entries other than 0/1.
    static BitMatrix from_rows(const std::vector<std::vector<std::uint8_t>>& rows);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::uint8_t get(std::size_t r, std::size_t c) const { return bits_[r * cols_ + c]; }
    void set(std::size_t r, std::size_t c, bool on) { bits_[r * cols_ + c] = on ? 1 : 0; }

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<std::uint8_t> bits_;
};

struct OneHotGroup {
    std::vector<std::size_t> columns;  // ascending
    std::size_t k() const noexcept { return columns.size(); }
};

struct GroupDetection {
    std::vector<OneHotGroup> groups;
    /// Set when the grouped columns admit more than one partition into
    /// one-hot groups, i.e. the greedy choice was not forced.
    bool ambiguous = false;
};

/// Rows drawn as y ~ prior, then x_f ~ table row of y for every feature.
std::vector<LabeledObservation> generate_dataset(const NBParams& params, std::size_t n_rows, RngSeed seed);

BitPattern one_hot_encode(std::size_t j, std::size_t k);
/// Concatenated encoding of every feature.
BitPattern one_hot_encode(const Observation& obs, std::span<const std::size_t> values_per_feature);

/// Throws NotOneHot unless exactly one bit is set.
std::size_t one_hot_decode(std::span<const std::uint8_t> pattern);
/// Splits the concatenated bits by values_per_feature and decodes each piece.
Observation one_hot_decode(std::span<const std::uint8_t> bits, std::span<const std::size_t> values_per_feature);

/// Column sets of size >= 2 whose bits sum to exactly 1 in every row.
///
/// Greedy: the lowest unused column that can start a group gets the
/// lexicographically first completing set of higher unused columns.
/// All-zero columns never join a group.
GroupDetection detect_one_hot_groups(const BitMatrix& m);

}  // namespace onehot_nb
