#include "onehot_nb/csv_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <system_error>

#include "onehot_nb/error.hpp"

namespace onehot_nb::io {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::string join(const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) line += ',';
        line += cells[i];
    }
    line += '\n';
    return line;
}

std::size_t label_column(const CsvTable& table) {
    const auto it = std::find(table.header.begin(), table.header.end(), "label");
    if (it == table.header.end()) throw Error(ErrorCode::Parse, "dataset has no 'label' column");
    return static_cast<std::size_t>(it - table.header.begin());
}

}  // namespace

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view text, std::string_view what) {
    text = trim(text);
    double value = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
        throw Error(ErrorCode::Parse, std::string(what) + ": '" + std::string(text) + "' is not a number");
    }
    return value;
}

std::size_t parse_index(std::string_view text, std::string_view what) {
    text = trim(text);
    std::size_t value = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
        throw Error(ErrorCode::Parse,
                    std::string(what) + ": '" + std::string(text) + "' is not a nonnegative integer");
    }
    return value;
}

std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        cells.emplace_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return cells;
}

CsvTable parse_csv(std::string_view text) {
    CsvTable table;
    bool have_header = false;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        const std::string_view line = trim(text.substr(pos, eol - pos));
        pos = eol + 1;
        if (line.empty()) continue;
        if (!have_header) {
            table.header = split_csv_line(line);
            have_header = true;
        } else {
            table.rows.push_back(split_csv_line(line));
        }
    }
    if (!have_header) throw Error(ErrorCode::Parse, "CSV input is empty");
    return table;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::Io, "cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw Error(ErrorCode::Io, "write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw Error(ErrorCode::Io, "cannot move output into place at " + path.string());
    }
}

std::string params_to_csv(const NBParams& params) {
    std::size_t width = params.num_classes();
    for (std::size_t f = 0; f < params.num_features(); ++f) width = std::max(width, params.num_values(f));

    std::vector<std::string> header{"kind", "feature", "class"};
    for (std::size_t i = 0; i < width; ++i) header.push_back("p" + std::to_string(i));
    std::string out = join(header);

    auto row = [&](std::string kind, std::string feature, std::string cls, const ProbVector& v) {
        std::vector<std::string> cells{std::move(kind), std::move(feature), std::move(cls)};
        for (std::size_t i = 0; i < width; ++i) cells.push_back(i < v.size() ? format_double(v[i]) : "");
        out += join(cells);
    };
    row("prior", "", "", params.prior());
    for (std::size_t f = 0; f < params.num_features(); ++f) {
        for (std::size_t i = 0; i < params.num_classes(); ++i) {
            row("table", std::to_string(f), std::to_string(i), params.table(f)[i]);
        }
    }
    return out;
}

NBParams params_from_csv(std::string_view text) {
    const CsvTable table = parse_csv(text);
    if (table.header.size() < 5 || table.header[0] != "kind" || table.header[1] != "feature" ||
        table.header[2] != "class") {
        throw Error(ErrorCode::Parse, "params header must start with kind,feature,class followed by p columns");
    }

    auto values_of = [](const std::vector<std::string>& cells, const std::string& where) {
        std::vector<double> v;
        std::size_t last = cells.size();
        while (last > 3 && cells[last - 1].empty()) --last;
        for (std::size_t i = 3; i < last; ++i) {
            if (cells[i].empty()) throw Error(ErrorCode::Parse, where + ": empty cell p" + std::to_string(i - 3));
            v.push_back(parse_double(cells[i], where + " p" + std::to_string(i - 3)));
        }
        return v;
    };
    auto checked = [](const std::vector<double>& v, const std::string& where) {
        try {
            return ProbVector(v);
        } catch (const Error& e) {
            throw Error(e.code(), where + ": " + e.what());
        }
    };

    std::optional<ProbVector> prior;
    std::map<std::size_t, std::map<std::size_t, ProbVector>> rows;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& cells = table.rows[r];
        const std::string where = "params row " + std::to_string(r + 2);
        if (cells.size() > table.header.size()) throw Error(ErrorCode::Parse, where + ": too many cells");
        if (cells.empty() || cells[0].empty()) throw Error(ErrorCode::Parse, where + ": missing kind");
        if (cells[0] == "prior") {
            if (prior) throw Error(ErrorCode::Parse, where + ": duplicate prior row");
            prior = checked(values_of(cells, where), where + " (prior)");
        } else if (cells[0] == "table") {
            if (cells.size() < 3) throw Error(ErrorCode::Parse, where + ": missing feature/class");
            const std::size_t f = parse_index(cells[1], where + " feature");
            const std::size_t c = parse_index(cells[2], where + " class");
            const std::string label = where + " (feature " + std::to_string(f) + ", class " + std::to_string(c) + ")";
            if (!rows[f].emplace(c, checked(values_of(cells, where), label)).second) {
                throw Error(ErrorCode::Parse, label + ": duplicate row");
            }
        } else {
            throw Error(ErrorCode::Parse, where + ": unknown kind '" + cells[0] + "'");
        }
    }
    if (!prior) throw Error(ErrorCode::Parse, "params file has no prior row");
    if (rows.empty()) throw Error(ErrorCode::Parse, "params file has no table rows");

    std::vector<FeatureTable> tables;
    std::size_t expected_feature = 0;
    for (auto& [f, by_class] : rows) {
        if (f != expected_feature) {
            throw Error(ErrorCode::Parse, "feature " + std::to_string(expected_feature) + " has no table rows");
        }
        ++expected_feature;
        FeatureTable t;
        std::size_t expected_class = 0;
        for (auto& [c, row] : by_class) {
            if (c != expected_class || c >= prior->size()) {
                throw Error(ErrorCode::Parse, "feature " + std::to_string(f) + ": class rows must be 0.." +
                                                  std::to_string(prior->size() - 1));
            }
            ++expected_class;
            t.push_back(row);
        }
        if (t.size() != prior->size()) {
            throw Error(ErrorCode::Parse, "feature " + std::to_string(f) + " is missing class rows");
        }
        tables.push_back(std::move(t));
    }
    return NBParams(*prior, std::move(tables));
}

std::string dataset_to_csv(const std::vector<LabeledObservation>& data) {
    const std::size_t features = data.empty() ? 0 : data.front().x.size();
    std::vector<std::string> header;
    for (std::size_t f = 0; f < features; ++f) header.push_back("x" + std::to_string(f));
    header.push_back("label");
    std::string out = join(header);
    for (const LabeledObservation& row : data) {
        std::vector<std::string> cells;
        for (std::size_t v : row.x) cells.push_back(std::to_string(v));
        cells.push_back(std::to_string(row.label));
        out += join(cells);
    }
    return out;
}

std::vector<LabeledObservation> dataset_from_table(const CsvTable& table) {
    const std::size_t label_col = label_column(table);
    std::vector<LabeledObservation> data;
    data.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& cells = table.rows[r];
        if (cells.size() != table.header.size()) {
            throw Error(ErrorCode::Parse, "dataset row " + std::to_string(r + 2) + " has " +
                                              std::to_string(cells.size()) + " cells, header has " +
                                              std::to_string(table.header.size()));
        }
        LabeledObservation row;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            const std::size_t v = parse_index(cells[c], "dataset row " + std::to_string(r + 2) + " column " +
                                                             table.header[c]);
            if (c == label_col) {
                row.label = v;
            } else {
                row.x.push_back(v);
            }
        }
        data.push_back(std::move(row));
    }
    return data;
}

std::string encoded_dataset_to_csv(const std::vector<LabeledObservation>& data,
                                   const std::vector<std::size_t>& values_per_feature) {
    std::vector<std::string> header;
    for (std::size_t f = 0; f < values_per_feature.size(); ++f) {
        for (std::size_t j = 0; j < values_per_feature[f]; ++j) {
            header.push_back("x" + std::to_string(f) + "_" + std::to_string(j));
        }
    }
    header.push_back("label");
    std::string out = join(header);
    for (const LabeledObservation& row : data) {
        std::vector<std::string> cells;
        for (std::uint8_t b : one_hot_encode(row.x, values_per_feature)) cells.push_back(b ? "1" : "0");
        cells.push_back(std::to_string(row.label));
        out += join(cells);
    }
    return out;
}

EncodedDataset encoded_dataset_from_table(const CsvTable& table) {
    const std::size_t label_col = label_column(table);
    EncodedDataset ds;
    std::string current_prefix;
    for (std::size_t c = 0; c < table.header.size(); ++c) {
        if (c == label_col) continue;
        const std::string& name = table.header[c];
        const std::size_t underscore = name.rfind('_');
        if (underscore == std::string::npos || underscore == 0) {
            throw Error(ErrorCode::Parse, "one-hot column '" + name + "' is not named <feature>_<value>");
        }
        const std::string prefix = name.substr(0, underscore);
        if (ds.values_per_feature.empty() || prefix != current_prefix) {
            ds.values_per_feature.push_back(0);
            current_prefix = prefix;
        }
        ++ds.values_per_feature.back();
    }
    if (ds.values_per_feature.empty()) throw Error(ErrorCode::Parse, "one-hot dataset has no bit columns");

    std::vector<std::string> names;
    const BitMatrix m = bit_matrix_from_table(table, &names);
    ds.bits.assign(m.rows(), std::vector<std::uint8_t>(m.cols()));
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) ds.bits[r][c] = m.get(r, c);
        ds.labels.push_back(parse_index(table.rows[r][label_col], "dataset row " + std::to_string(r + 2) + " label"));
    }
    return ds;
}

BitMatrix bit_matrix_from_table(const CsvTable& table, std::vector<std::string>* column_names) {
    std::vector<std::size_t> columns;
    for (std::size_t c = 0; c < table.header.size(); ++c) {
        if (table.header[c] != "label") columns.push_back(c);
    }
    if (column_names) {
        column_names->clear();
        for (std::size_t c : columns) column_names->push_back(table.header[c]);
    }
    BitMatrix m(table.rows.size(), columns.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& cells = table.rows[r];
        if (cells.size() != table.header.size()) {
            throw Error(ErrorCode::Parse, "row " + std::to_string(r + 2) + " has " + std::to_string(cells.size()) +
                                              " cells, header has " + std::to_string(table.header.size()));
        }
        for (std::size_t i = 0; i < columns.size(); ++i) {
            const std::string& cell = cells[columns[i]];
            if (cell != "0" && cell != "1") {
                throw Error(ErrorCode::Parse, "row " + std::to_string(r + 2) + " column " +
                                                  table.header[columns[i]] + ": '" + cell + "' is not 0 or 1");
            }
            m.set(r, i, cell == "1");
        }
    }
    return m;
}

}  // namespace onehot_nb::io
