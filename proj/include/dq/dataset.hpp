#pragma once
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace dq {

// Missing cells are quiet NaN; every legal value is a finite real.
inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();
inline bool is_missing(double v) { return std::isnan(v); }

enum class ColumnKind { numeric, categorical, label };

struct ColumnSchema {
    std::string name;
    ColumnKind kind = ColumnKind::numeric;
    std::size_t source_column = 0; // position in the original file
    double observed_min = 0.0;     // over non-missing cells at load time
    double observed_max = 0.0;
    std::vector<std::string> categories; // code -> text (categorical/label)
};

// Tabular classification dataset. Categorical features are integer-coded in
// order of first appearance; the label column is always coded the same way.
// class_count is frozen when the dataset is built and never changes under
// splitting or corruption.
struct Dataset {
    std::vector<double> features; // row-major, n x d
    std::vector<int> labels;      // values in [0, class_count)
    std::vector<ColumnSchema> schema; // d feature columns, then the label
    int class_count = 0;
    std::size_t n = 0;
    std::size_t d = 0;

    double at(std::size_t row, std::size_t col) const {
        return features[row * d + col];
    }
    double& at(std::size_t row, std::size_t col) {
        return features[row * d + col];
    }
    const ColumnSchema& label_schema() const { return schema.back(); }
};

struct CsvOptions {
    char delimiter = ',';
    // Columns that must parse as reals; an unparseable cell in one of these
    // is an error instead of flipping the column to categorical.
    std::vector<std::string> force_numeric;
};

// label_column is a header name, or a zero-based column index when no header
// matches. Empty fields become the missing marker; a missing label is an
// error, as is a label column with fewer than two distinct values.
Dataset load_csv(const std::string& path, const std::string& label_column,
                 const CsvOptions& options = {});
Dataset parse_csv(const std::string& text, const std::string& label_column,
                  const CsvOptions& options = {});

// Writes columns back at their original positions; missing cells become
// empty fields, categorical codes and labels are decoded to their text.
void save_csv(const Dataset& d, const std::string& path, char delimiter = ',');

std::string decode_category(const ColumnSchema& col, int code);

struct TrainTestSplit {
    Dataset train;
    Dataset test;
    double train_fraction = 0.8;
    std::uint64_t seed = 0;
};

// Seeded uniform shuffle; the first floor(n * train_fraction) rows form the
// training partition. Both partitions must end up non-empty.
TrainTestSplit split_random(const Dataset& d, double train_fraction,
                            std::uint64_t seed);

// Fills missing cells in both partitions with the per-column mean of the
// non-missing *training* cells; an all-missing training column fills with 0.
// Idempotent.
TrainTestSplit impute_train_mean(const TrainTestSplit& split);

int class_count(const Dataset& d);

Dataset take_rows(const Dataset& d, const std::vector<std::size_t>& rows);

// Re-encodes a dataset loaded from a second file against the reference's
// category and label maps (first-appearance codes differ between files).
// Column names, order and kinds must match; unseen categories or labels are
// errors.
Dataset align_to_schema(const Dataset& d, const Dataset& reference);

// floor(rate * count) evaluated with a tiny epsilon so products that are
// exact in decimal (0.95 * 80 = 76) land on the intended integer.
std::size_t scaled_count(double rate, std::size_t count);

} // namespace dq
