#pragma once

// Plain-text formats: NBParams files, ordinal and one-hot datasets, bit
// matrices. CSV output uses '.' decimals, shortest round-trip doubles and
// LF line endings.

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "onehot_nb/encoding_audit.hpp"
#include "onehot_nb/nb_models.hpp"

namespace onehot_nb::io {

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);
double parse_double(std::string_view text, std::string_view what);
std::size_t parse_index(std::string_view text, std::string_view what);

std::vector<std::string> split_csv_line(std::string_view line);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

CsvTable parse_csv(std::string_view text);
std::string read_text_file(const std::filesystem::path& path);

/// Writes to a temporary sibling, then renames over `path`. Throws Io.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Params layout:
///   kind,feature,class,p0,...,p{W-1}
///   prior,,,pi_0,...,pi_{C-1}
///   table,f,i,theta_0i,...,theta_{K_f-1,i}
/// W is the widest row; shorter rows leave trailing cells empty.
std::string params_to_csv(const NBParams& params);
NBParams params_from_csv(std::string_view text);

/// Ordinal dataset: x0,...,x{F-1},label
std::string dataset_to_csv(const std::vector<LabeledObservation>& data);
std::vector<LabeledObservation> dataset_from_table(const CsvTable& table);

/// One-hot dataset: one column x{f}_{j} per bit, then label.
struct EncodedDataset {
    std::vector<std::size_t> values_per_feature;
    std::vector<std::vector<std::uint8_t>> bits;
    std::vector<std::size_t> labels;
};

std::string encoded_dataset_to_csv(const std::vector<LabeledObservation>& data,
                                   const std::vector<std::size_t>& values_per_feature);
EncodedDataset encoded_dataset_from_table(const CsvTable& table);

/// Every column except an optional `label` column, read as bits.
BitMatrix bit_matrix_from_table(const CsvTable& table, std::vector<std::string>* column_names = nullptr);

}  // namespace onehot_nb::io
