#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dq/corruption.hpp"
#include "dq/dataset.hpp"
#include "dq/metrics.hpp"
#include "dq/models.hpp"

namespace dq {

// Level grid [from, from+step, ...] clipped to `to`, values snapped to a
// 1e-9 grid so they print cleanly. All levels must land in [0, 1).
std::vector<double> make_levels(double from, double to, double step);

struct SweepConfig {
    std::vector<ErrorType> error_types{ErrorType::missing, ErrorType::outlier,
                                       ErrorType::fuzzing};
    std::vector<double> levels = make_levels(0.0, 0.95, 0.05);
    int iterations = 30;
    InjectionTarget scope = InjectionTarget::whole_dataset;
    std::vector<ClassifierSpec> suite = default_suite();
    std::uint64_t master_seed = 0;
    double train_fraction = 0.8;
    double p = 0.05;            // probe rate for per-cell quality scores
    double sensitivity_factor = 10.0;
    Thresholds thresholds;
    unsigned jobs = 1; // 0 = all hardware threads; never affects results

    void validate() const;
};

struct SweepCell {
    ErrorType error = ErrorType::missing;
    double level = 0.0;
    int iteration = 0;
    AccuracyVector accuracies;
    std::optional<QualityScore> quality;
};

struct SweepAggregate {
    ErrorType error = ErrorType::missing;
    double level = 0.0;
    double mean_accuracy = 0.0;
    std::optional<double> mean_qa;
    std::optional<double> mean_qa1;
    std::optional<double> mean_qa2;
};

struct SweepResult {
    SweepConfig config;
    std::vector<SweepCell> cells; // error-major, then level, then iteration
    std::vector<SweepAggregate> aggregates; // one per (error, level)
};

// One cell per (error type, level, iteration): corrupt per scope, split
// 80/20, impute, evaluate the suite.
SweepResult sweep_accuracy(const Dataset& d, const SweepConfig& config);

// As sweep_accuracy, but each cell also carries a single-pass quality score
// of the corrupted dataset (probes all three error types at rate p on the
// cell's own split).
SweepResult sweep_quality(const Dataset& d, const SweepConfig& config);

struct CombinerRow {
    ErrorType error = ErrorType::missing;
    double level = 0.0;
    double qa1 = 0.0;
    double qa2 = 0.0;
    double qa_max = 0.0;
    std::vector<double> blends; // alpha*qa1 + (1-alpha)*qa2 per alpha
};
struct CombinerTable {
    std::vector<double> alphas;
    std::vector<CombinerRow> rows;
};

// Per (error, level): mean qa1/qa2 over iterations, combined with max and
// with each alpha blend, all from the same underlying values.
CombinerTable compare_combiners(const Dataset& d, const SweepConfig& config,
                                const std::vector<double>& alphas);

enum class CurveFormat { csv, json };

// Long-format rows (error, level, iteration, model, accuracy, qa, qa1, qa2)
// plus one flagged aggregate row per (error, level). Quality fields are
// empty for accuracy-only sweeps. Values round-trip exactly.
void emit_curves(const SweepResult& result, const std::string& path,
                 CurveFormat format);

void emit_combiner_table(const CombinerTable& table, const std::string& path,
                         CurveFormat format);

} // namespace dq
