#include "dq/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <unordered_map>

#include "dq/csv.hpp"
#include "dq/error.hpp"
#include "dq/rng.hpp"

namespace dq {

namespace {

std::size_t find_label_column(const std::vector<std::string>& header,
                              const std::string& label_column) {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == label_column) return i;
    // fall back to a zero-based index
    std::size_t idx = 0;
    auto res = std::from_chars(label_column.data(),
                               label_column.data() + label_column.size(), idx);
    if (res.ec == std::errc{} &&
        res.ptr == label_column.data() + label_column.size() &&
        idx < header.size())
        return idx;
    throw input_error("label column '" + label_column +
                      "' not found in header");
}

Dataset build_dataset(const csv::Table& table, const std::string& label_column,
                      const CsvOptions& options) {
    if (table.rows.size() < 2)
        throw input_error("dataset needs at least 2 rows, got " +
                          std::to_string(table.rows.size()));
    std::size_t label_idx = find_label_column(table.header, label_column);
    if (table.header.size() < 2)
        throw input_error("dataset needs at least one feature column");

    std::size_t n = table.rows.size();
    std::size_t width = table.header.size();

    Dataset d;
    d.n = n;
    d.d = width - 1;
    d.class_count = 0;
    d.features.assign(n * d.d, kMissing);
    d.labels.assign(n, 0);

    auto forced_numeric = [&](const std::string& name) {
        return std::find(options.force_numeric.begin(),
                         options.force_numeric.end(),
                         name) != options.force_numeric.end();
    };

    std::size_t out_col = 0;
    for (std::size_t c = 0; c < width; ++c) {
        if (c == label_idx) continue;
        ColumnSchema col;
        col.name = table.header[c];
        col.source_column = c;

        // a column is numeric when every non-empty cell parses as a finite real
        bool numeric = true;
        for (std::size_t r = 0; r < n && numeric; ++r) {
            const std::string& cell = table.rows[r][c];
            if (cell.empty()) continue;
            if (!csv::parse_double(cell)) numeric = false;
        }
        if (!numeric && forced_numeric(col.name)) {
            for (std::size_t r = 0; r < n; ++r) {
                const std::string& cell = table.rows[r][c];
                if (!cell.empty() && !csv::parse_double(cell))
                    throw input_error("column '" + col.name + "' row " +
                                      std::to_string(r + 2) +
                                      ": cannot parse '" + cell +
                                      "' as a number");
            }
        }

        bool any = false;
        if (numeric) {
            col.kind = ColumnKind::numeric;
            for (std::size_t r = 0; r < n; ++r) {
                const std::string& cell = table.rows[r][c];
                if (cell.empty()) continue;
                double v = *csv::parse_double(cell);
                d.features[r * d.d + out_col] = v;
                if (!any) {
                    col.observed_min = col.observed_max = v;
                    any = true;
                } else {
                    col.observed_min = std::min(col.observed_min, v);
                    col.observed_max = std::max(col.observed_max, v);
                }
            }
        } else {
            col.kind = ColumnKind::categorical;
            std::unordered_map<std::string, int> codes;
            for (std::size_t r = 0; r < n; ++r) {
                const std::string& cell = table.rows[r][c];
                if (cell.empty()) continue;
                auto it = codes.find(cell);
                int code;
                if (it == codes.end()) {
                    code = static_cast<int>(col.categories.size());
                    codes.emplace(cell, code);
                    col.categories.push_back(cell);
                } else {
                    code = it->second;
                }
                double v = static_cast<double>(code);
                d.features[r * d.d + out_col] = v;
                if (!any) {
                    col.observed_min = col.observed_max = v;
                    any = true;
                } else {
                    col.observed_min = std::min(col.observed_min, v);
                    col.observed_max = std::max(col.observed_max, v);
                }
            }
        }
        d.schema.push_back(std::move(col));
        ++out_col;
    }

    ColumnSchema label;
    label.name = table.header[label_idx];
    label.kind = ColumnKind::label;
    label.source_column = label_idx;
    std::unordered_map<std::string, int> codes;
    for (std::size_t r = 0; r < n; ++r) {
        const std::string& cell = table.rows[r][label_idx];
        if (cell.empty())
            throw input_error("missing label in row " + std::to_string(r + 2));
        auto it = codes.find(cell);
        int code;
        if (it == codes.end()) {
            code = static_cast<int>(label.categories.size());
            codes.emplace(cell, code);
            label.categories.push_back(cell);
        } else {
            code = it->second;
        }
        d.labels[r] = code;
    }
    d.class_count = static_cast<int>(label.categories.size());
    if (d.class_count < 2)
        throw input_error("label column '" + label.name + "' has " +
                          std::to_string(d.class_count) +
                          " distinct value(s); at least 2 classes required");
    label.observed_min = 0.0;
    label.observed_max = static_cast<double>(d.class_count - 1);
    d.schema.push_back(std::move(label));
    return d;
}

} // namespace

Dataset load_csv(const std::string& path, const std::string& label_column,
                 const CsvOptions& options) {
    return build_dataset(csv::read_file(path, options.delimiter), label_column,
                         options);
}

Dataset parse_csv(const std::string& text, const std::string& label_column,
                  const CsvOptions& options) {
    return build_dataset(csv::parse(text, options.delimiter), label_column,
                         options);
}

std::string decode_category(const ColumnSchema& col, int code) {
    if (code < 0 || code >= static_cast<int>(col.categories.size()))
        throw std::invalid_argument("category code " + std::to_string(code) +
                                    " out of range for column '" + col.name +
                                    "'");
    return col.categories[static_cast<std::size_t>(code)];
}

void save_csv(const Dataset& d, const std::string& path, char delimiter) {
    csv::Table table;
    std::size_t width = d.schema.size();
    table.header.assign(width, "");
    // column order in the file follows the recorded source positions when
    // they form a permutation; otherwise features first, label last
    std::vector<std::size_t> dest(width);
    std::vector<bool> seen(width, false);
    bool valid = true;
    for (std::size_t i = 0; i < width; ++i) {
        std::size_t s = d.schema[i].source_column;
        if (s >= width || seen[s]) {
            valid = false;
            break;
        }
        seen[s] = true;
        dest[i] = s;
    }
    if (!valid)
        for (std::size_t i = 0; i < width; ++i) dest[i] = i;

    for (std::size_t i = 0; i < width; ++i) table.header[dest[i]] = d.schema[i].name;

    table.rows.assign(d.n, std::vector<std::string>(width));
    for (std::size_t r = 0; r < d.n; ++r) {
        for (std::size_t c = 0; c < d.d; ++c) {
            double v = d.at(r, c);
            std::string& out = table.rows[r][dest[c]];
            if (is_missing(v)) {
                out.clear();
            } else if (d.schema[c].kind == ColumnKind::categorical) {
                out = decode_category(d.schema[c],
                                      static_cast<int>(std::llround(v)));
            } else {
                out = csv::format_double(v);
            }
        }
        table.rows[r][dest[d.d]] = decode_category(d.label_schema(),
                                                   d.labels[r]);
    }
    csv::write_file(path, table, delimiter);
}

std::size_t scaled_count(double rate, std::size_t count) {
    double x = rate * static_cast<double>(count) + 1e-9;
    if (x <= 0.0) return 0;
    auto k = static_cast<std::size_t>(x);
    return std::min(k, count);
}

Dataset take_rows(const Dataset& d, const std::vector<std::size_t>& rows) {
    Dataset out;
    out.n = rows.size();
    out.d = d.d;
    out.class_count = d.class_count;
    out.schema = d.schema;
    out.features.resize(out.n * out.d);
    out.labels.resize(out.n);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::size_t r = rows[i];
        std::copy_n(d.features.begin() + static_cast<std::ptrdiff_t>(r * d.d),
                    d.d,
                    out.features.begin() + static_cast<std::ptrdiff_t>(i * d.d));
        out.labels[i] = d.labels[r];
    }
    return out;
}

TrainTestSplit split_random(const Dataset& d, double train_fraction,
                            std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw input_error("train fraction must be in (0, 1), got " +
                          csv::format_double(train_fraction));
    std::size_t n_train = scaled_count(train_fraction, d.n);
    if (n_train < 1 || d.n - n_train < 1)
        throw input_error("split leaves an empty partition (n=" +
                          std::to_string(d.n) + ", fraction=" +
                          csv::format_double(train_fraction) + ")");

    std::vector<std::size_t> perm(d.n);
    for (std::size_t i = 0; i < d.n; ++i) perm[i] = i;
    rng64 rng(seed);
    for (std::size_t i = d.n - 1; i > 0; --i) {
        std::size_t j = static_cast<std::size_t>(uniform_below(rng, i + 1));
        std::swap(perm[i], perm[j]);
    }

    TrainTestSplit split;
    split.train_fraction = train_fraction;
    split.seed = seed;
    split.train = take_rows(
        d, std::vector<std::size_t>(perm.begin(),
                                    perm.begin() + static_cast<std::ptrdiff_t>(n_train)));
    split.test = take_rows(
        d, std::vector<std::size_t>(perm.begin() + static_cast<std::ptrdiff_t>(n_train),
                                    perm.end()));
    return split;
}

TrainTestSplit impute_train_mean(const TrainTestSplit& split) {
    TrainTestSplit out = split;
    const Dataset& train = split.train;
    std::vector<double> fill(train.d, 0.0);
    for (std::size_t c = 0; c < train.d; ++c) {
        double sum = 0.0;
        std::size_t count = 0;
        for (std::size_t r = 0; r < train.n; ++r) {
            double v = train.at(r, c);
            if (!is_missing(v)) {
                sum += v;
                ++count;
            }
        }
        fill[c] = count ? sum / static_cast<double>(count) : 0.0;
    }
    auto apply = [&](Dataset& ds) {
        for (std::size_t r = 0; r < ds.n; ++r)
            for (std::size_t c = 0; c < ds.d; ++c)
                if (is_missing(ds.at(r, c))) ds.at(r, c) = fill[c];
    };
    apply(out.train);
    apply(out.test);
    return out;
}

int class_count(const Dataset& d) { return d.class_count; }

Dataset align_to_schema(const Dataset& d, const Dataset& reference) {
    if (d.d != reference.d)
        throw input_error("column count mismatch: " + std::to_string(d.d) +
                          " vs " + std::to_string(reference.d));
    for (std::size_t c = 0; c < d.schema.size(); ++c) {
        if (d.schema[c].name != reference.schema[c].name)
            throw input_error("column name mismatch at position " +
                              std::to_string(c) + ": '" + d.schema[c].name +
                              "' vs '" + reference.schema[c].name + "'");
        if (d.schema[c].kind != reference.schema[c].kind)
            throw input_error("column kind mismatch for '" +
                              d.schema[c].name + "'");
    }

    Dataset out = d;
    out.schema = reference.schema;
    out.class_count = reference.class_count;

    auto code_map = [](const ColumnSchema& from, const ColumnSchema& to,
                       const char* what) {
        std::vector<int> map(from.categories.size(), -1);
        for (std::size_t i = 0; i < from.categories.size(); ++i) {
            auto it = std::find(to.categories.begin(), to.categories.end(),
                                from.categories[i]);
            if (it == to.categories.end())
                throw input_error(std::string(what) + " '" +
                                  from.categories[i] + "' in column '" +
                                  from.name + "' not present in the reference "
                                  "dataset");
            map[i] = static_cast<int>(it - to.categories.begin());
        }
        return map;
    };

    for (std::size_t c = 0; c < d.d; ++c) {
        if (d.schema[c].kind != ColumnKind::categorical) continue;
        std::vector<int> map =
            code_map(d.schema[c], reference.schema[c], "category");
        for (std::size_t r = 0; r < d.n; ++r) {
            double v = d.at(r, c);
            if (is_missing(v)) continue;
            out.at(r, c) = static_cast<double>(
                map[static_cast<std::size_t>(std::llround(v))]);
        }
    }
    std::vector<int> label_map =
        code_map(d.label_schema(), reference.label_schema(), "label");
    for (std::size_t r = 0; r < d.n; ++r)
        out.labels[r] = label_map[static_cast<std::size_t>(d.labels[r])];
    return out;
}

} // namespace dq
