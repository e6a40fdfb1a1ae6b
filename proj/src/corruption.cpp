#include "dq/corruption.hpp"

#include <algorithm>
#include <cmath>

#include "dq/csv.hpp"
#include "dq/error.hpp"
#include "dq/rng.hpp"

namespace dq {

std::string to_string(ErrorType e) {
    switch (e) {
        case ErrorType::missing: return "missing";
        case ErrorType::outlier: return "outlier";
        case ErrorType::fuzzing: return "fuzzing";
    }
    return "unknown";
}

std::optional<ErrorType> parse_error_type(std::string_view name) {
    if (name == "missing") return ErrorType::missing;
    if (name == "outlier") return ErrorType::outlier;
    if (name == "fuzzing") return ErrorType::fuzzing;
    return std::nullopt;
}

void InjectionPlan::validate() const {
    if (!(rate >= 0.0 && rate <= 1.0))
        throw input_error("injection rate must be in [0, 1], got " +
                          csv::format_double(rate));
}

namespace {

void check_rate(double rate) {
    if (!(rate >= 0.0 && rate <= 1.0))
        throw input_error("injection rate must be in [0, 1], got " +
                          csv::format_double(rate));
}

// First k of a seeded partial Fisher-Yates over [0, population). The choice
// depends only on (population, k, seed), never on cell contents.
std::vector<std::size_t> sample_without_replacement(std::size_t population,
                                                    std::size_t k,
                                                    rng64& rng) {
    std::vector<std::size_t> idx(population);
    for (std::size_t i = 0; i < population; ++i) idx[i] = i;
    for (std::size_t i = 0; i < k; ++i) {
        std::size_t j =
            i + static_cast<std::size_t>(uniform_below(rng, population - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    return idx;
}

} // namespace

Dataset inject_missing(const Dataset& d, double rate, std::uint64_t seed) {
    check_rate(rate);
    Dataset out = d;
    std::size_t cells = d.n * d.d;
    std::size_t budget = scaled_count(rate, cells);
    rng64 rng(seed);
    for (std::size_t cell : sample_without_replacement(cells, budget, rng))
        out.features[cell] = kMissing;
    return out;
}

Dataset inject_outliers(const Dataset& d, double rate, std::uint64_t seed) {
    check_rate(rate);
    std::vector<std::size_t> numeric_cols;
    for (std::size_t c = 0; c < d.d; ++c)
        if (d.schema[c].kind == ColumnKind::numeric) numeric_cols.push_back(c);
    if (numeric_cols.empty())
        throw input_error("outlier injection needs at least one numeric "
                          "feature column");

    Dataset out = d;
    std::size_t cells = d.n * numeric_cols.size();
    std::size_t budget = scaled_count(rate, cells);
    rng64 rng(seed);
    for (std::size_t cell : sample_without_replacement(cells, budget, rng)) {
        std::size_t row = cell / numeric_cols.size();
        std::size_t col = numeric_cols[cell % numeric_cols.size()];
        const ColumnSchema& schema = d.schema[col];
        double lo = schema.observed_min, hi = schema.observed_max;
        double range = hi - lo;
        if (range <= 0.0) range = std::max(1.0, std::fabs(hi));
        bool low_band = uniform_unit(rng) < 0.5;
        double value = low_band
                           ? uniform_range(rng, lo - 3.0 * range, lo - range)
                           : uniform_range(rng, hi + range, hi + 3.0 * range);
        out.at(row, col) = value;
    }
    return out;
}

Dataset inject_fuzzing(const Dataset& d, double rate, std::uint64_t seed) {
    check_rate(rate);
    std::size_t budget = scaled_count(rate, d.n);
    if (budget > 0 && d.n < 2)
        throw input_error("fuzzing needs at least two rows");

    Dataset out = d;
    rng64 rng(seed);
    for (std::size_t row : sample_without_replacement(d.n, budget, rng)) {
        // source rows always come from the uncorrupted input
        std::size_t u = static_cast<std::size_t>(uniform_below(rng, d.n - 1));
        std::size_t src = u >= row ? u + 1 : u;
        for (std::size_t c = 0; c < d.d; ++c) {
            double v = d.at(src, c);
            if (d.schema[c].kind == ColumnKind::numeric) {
                double range =
                    d.schema[c].observed_max - d.schema[c].observed_min;
                double noise =
                    uniform_range(rng, -0.01 * range, 0.01 * range);
                out.at(row, c) = v + noise; // missing stays missing
            } else {
                out.at(row, c) = v;
            }
        }
        out.labels[row] = d.labels[src];
    }
    return out;
}

Dataset inject(const Dataset& d, const InjectionPlan& plan) {
    plan.validate();
    switch (plan.error) {
        case ErrorType::missing: return inject_missing(d, plan.rate, plan.seed);
        case ErrorType::outlier: return inject_outliers(d, plan.rate, plan.seed);
        case ErrorType::fuzzing: return inject_fuzzing(d, plan.rate, plan.seed);
    }
    throw std::logic_error("unreachable error type");
}

TrainTestSplit inject(const TrainTestSplit& split, const InjectionPlan& plan) {
    plan.validate();
    TrainTestSplit out = split;
    if (plan.target == InjectionTarget::train_only) {
        out.train = inject(split.train, plan);
        return out;
    }
    InjectionPlan side = plan;
    side.seed = derive_seed(plan.seed, {seed_purpose::inject, 0});
    out.train = inject(split.train, side);
    side.seed = derive_seed(plan.seed, {seed_purpose::inject, 1});
    out.test = inject(split.test, side);
    return out;
}

} // namespace dq
