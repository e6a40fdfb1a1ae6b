#pragma once
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "dq/dataset.hpp"

namespace dq {

enum class ErrorType { missing, outlier, fuzzing };

inline constexpr std::array<ErrorType, 3> kAllErrorTypes{
    ErrorType::missing, ErrorType::outlier, ErrorType::fuzzing};

std::string to_string(ErrorType e);
std::optional<ErrorType> parse_error_type(std::string_view name);

enum class InjectionTarget { train_only, whole_dataset };

struct InjectionPlan {
    ErrorType error = ErrorType::missing;
    double rate = 0.0; // fraction in [0, 1]
    std::uint64_t seed = 0;
    InjectionTarget target = InjectionTarget::whole_dataset;

    void validate() const;
};

// Sets exactly floor(rate * n * d) distinct feature cells (chosen uniformly
// without replacement over the whole grid, already-missing cells included)
// to the missing marker. Labels, schema and row count are untouched.
Dataset inject_missing(const Dataset& d, double rate, std::uint64_t seed);

// Replaces exactly floor(rate * n * d_numeric) distinct numeric feature
// cells with values drawn uniformly from [min-3R, min-R] or [max+R, max+3R]
// (fair coin per cell), where [min, max] is the column's clean observed
// range recorded in the schema and R its width; R == 0 falls back to
// max(1, |max|). Errors if the dataset has no numeric feature columns.
Dataset inject_outliers(const Dataset& d, double rate, std::uint64_t seed);

// Replaces exactly floor(rate * n) distinct rows with partial duplicates: a
// uniformly chosen source row k != i supplies features and label, then each
// numeric feature is perturbed by uniform noise in +/-0.01*R_j. Requires at
// least two rows when rate > 0.
Dataset inject_fuzzing(const Dataset& d, double rate, std::uint64_t seed);

// Dispatches on plan.error; plan.target is honored by the split overload
// (train_only corrupts just the training partition).
Dataset inject(const Dataset& d, const InjectionPlan& plan);
TrainTestSplit inject(const TrainTestSplit& split, const InjectionPlan& plan);

} // namespace dq
