#pragma once
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dq/corruption.hpp"
#include "dq/dataset.hpp"
#include "dq/models.hpp"

namespace dq {

struct Thresholds {
    double good_upper = 0.3;
    double medium_upper = 0.6;
    void validate() const; // requires 0 < good_upper < medium_upper < 1
};

enum class QualityLevel { good, medium, bad };
std::string to_string(QualityLevel level);

struct QualityScore {
    double qa = 0.0;  // always max(qa1, qa2)
    double qa1 = 0.0; // accuracy-based component
    double qa2 = 0.0; // corruption-sensitivity component
    double mean_accuracy = 0.0;
    AccuracyVector per_model;                 // means over resamples
    std::map<ErrorType, double> per_error_delta; // means over resamples
    int resample_count = 0;
    double p = 0.05;
    QualityLevel level = QualityLevel::good;
};

struct AssessConfig {
    std::vector<ClassifierSpec> suite = default_suite();
    std::vector<ErrorType> error_set{ErrorType::missing, ErrorType::outlier,
                                     ErrorType::fuzzing};
    double p = 0.05;          // probe injection rate, as a fraction
    int resamples = 30;       // ignored when trusted_test is set
    double train_fraction = 0.8;
    std::optional<Dataset> trusted_test;
    std::uint64_t master_seed = 0;
    double sensitivity_factor = 10.0;
    Thresholds thresholds;
    unsigned jobs = 1; // 0 = all hardware threads; never affects results

    void validate() const;
};

// Mean of the member accuracies; errors on an empty vector.
double mean_accuracy(const AccuracyVector& acc);

// 1 when the suite beats random guessing (a_m > 1/c), else 0. Strict.
int delta1(double a_m, int c);

// 1 - ((c*a_m - 1) / (c - 1)) * delta1(a_m, c); 1 at or below random, 0 at
// perfect accuracy.
double q_a1(double a_m, int c);

// Mean absolute per-member accuracy change; suites must have the same
// membership and order.
double delta_accuracy(const AccuracyVector& base,
                      const AccuracyVector& corrupted);

// 1 when the accuracy shift exceeds the probe rate p, else 0. Strict.
int delta2(double delta_a, double p);

// min(factor / |E| * sum_e delta_e * delta2(delta_e, p), 1).
double q_a2(const std::map<ErrorType, double>& deltas, double p,
            double factor);

double combine_max(double q1, double q2);
double combine_alpha(double q1, double q2, double alpha);

// good when qa <= good_upper, medium when qa <= medium_upper, else bad.
QualityLevel interpret(double qa, const Thresholds& thresholds = {});

// Seeds used by assess for one resample pass, echoed into reports.
struct ResampleSeeds {
    std::uint64_t split = 0;
    std::map<ErrorType, std::uint64_t> inject;
};
std::vector<ResampleSeeds> assess_seed_schedule(const AssessConfig& config);

// Full quality assessment. With a trusted test set the whole dataset trains
// in a single pass (resample_count = 1); otherwise the dataset is split
// `resamples` times and the reported qa1/qa2 are the means of the
// per-resample values, combined with max at the end.
QualityScore assess(const Dataset& d, const AssessConfig& config);

} // namespace dq
