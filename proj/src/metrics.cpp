#include "dq/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "dq/csv.hpp"
#include "dq/error.hpp"
#include "dq/parallel.hpp"
#include "dq/rng.hpp"

namespace dq {

void Thresholds::validate() const {
    if (!(0.0 < good_upper && good_upper < medium_upper && medium_upper < 1.0))
        throw input_error("thresholds must satisfy 0 < good < medium < 1, got " +
                          csv::format_double(good_upper) + ", " +
                          csv::format_double(medium_upper));
}

std::string to_string(QualityLevel level) {
    switch (level) {
        case QualityLevel::good: return "good";
        case QualityLevel::medium: return "medium";
        case QualityLevel::bad: return "bad";
    }
    return "unknown";
}

void AssessConfig::validate() const {
    if (suite.empty()) throw input_error("classifier suite is empty");
    for (const auto& spec : suite) spec.validate();
    if (error_set.empty()) throw input_error("error set is empty");
    for (std::size_t i = 0; i < error_set.size(); ++i)
        for (std::size_t j = i + 1; j < error_set.size(); ++j)
            if (error_set[i] == error_set[j])
                throw input_error("error set repeats '" +
                                  to_string(error_set[i]) + "'");
    if (!(p > 0.0 && p < 1.0))
        throw input_error("probe rate p must be in (0, 1), got " +
                          csv::format_double(p));
    if (resamples < 1)
        throw input_error("resamples must be >= 1, got " +
                          std::to_string(resamples));
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw input_error("train fraction must be in (0, 1), got " +
                          csv::format_double(train_fraction));
    if (!(sensitivity_factor > 0.0))
        throw input_error("sensitivity factor must be > 0, got " +
                          csv::format_double(sensitivity_factor));
    thresholds.validate();
}

double mean_accuracy(const AccuracyVector& acc) {
    if (acc.entries.empty())
        throw std::invalid_argument("mean_accuracy: empty accuracy vector");
    double sum = 0.0;
    for (const auto& e : acc.entries) sum += e.value;
    return sum / static_cast<double>(acc.entries.size());
}

int delta1(double a_m, int c) {
    if (c < 2)
        throw std::invalid_argument("delta1: class count must be >= 2");
    return a_m > 1.0 / static_cast<double>(c) ? 1 : 0;
}

double q_a1(double a_m, int c) {
    if (c < 2) throw std::invalid_argument("q_a1: class count must be >= 2");
    int gate = delta1(a_m, c);
    if (gate == 0) return 1.0;
    double cd = static_cast<double>(c);
    return 1.0 - (cd * a_m - 1.0) / (cd - 1.0);
}

double delta_accuracy(const AccuracyVector& base,
                      const AccuracyVector& corrupted) {
    if (base.entries.empty())
        throw std::invalid_argument("delta_accuracy: empty accuracy vector");
    if (base.entries.size() != corrupted.entries.size())
        throw std::invalid_argument(
            "delta_accuracy: suite sizes differ (" +
            std::to_string(base.entries.size()) + " vs " +
            std::to_string(corrupted.entries.size()) + ")");
    double sum = 0.0;
    for (std::size_t i = 0; i < base.entries.size(); ++i) {
        if (base.entries[i].model != corrupted.entries[i].model)
            throw std::invalid_argument(
                "delta_accuracy: suite member mismatch at position " +
                std::to_string(i) + " ('" + base.entries[i].model + "' vs '" +
                corrupted.entries[i].model + "')");
        sum += std::fabs(base.entries[i].value - corrupted.entries[i].value);
    }
    return sum / static_cast<double>(base.entries.size());
}

int delta2(double delta_a, double p) { return delta_a > p ? 1 : 0; }

double q_a2(const std::map<ErrorType, double>& deltas, double p,
            double factor) {
    if (deltas.empty()) throw std::invalid_argument("q_a2: no error deltas");
    if (!(factor > 0.0))
        throw std::invalid_argument("q_a2: factor must be > 0");
    double sum = 0.0;
    for (const auto& [err, delta] : deltas)
        sum += delta * static_cast<double>(delta2(delta, p));
    double value = factor / static_cast<double>(deltas.size()) * sum;
    return std::min(value, 1.0);
}

double combine_max(double q1, double q2) { return std::max(q1, q2); }

double combine_alpha(double q1, double q2, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::invalid_argument("combine_alpha: alpha must be in [0, 1]");
    return alpha * q1 + (1.0 - alpha) * q2;
}

QualityLevel interpret(double qa, const Thresholds& thresholds) {
    thresholds.validate();
    if (qa <= thresholds.good_upper) return QualityLevel::good;
    if (qa <= thresholds.medium_upper) return QualityLevel::medium;
    return QualityLevel::bad;
}

std::vector<ResampleSeeds> assess_seed_schedule(const AssessConfig& config) {
    int passes = config.trusted_test.has_value() ? 1 : config.resamples;
    std::vector<ResampleSeeds> seeds(static_cast<std::size_t>(passes));
    for (int i = 0; i < passes; ++i) {
        auto idx = static_cast<std::uint64_t>(i);
        ResampleSeeds& s = seeds[static_cast<std::size_t>(i)];
        s.split = derive_seed(config.master_seed, {seed_purpose::split, idx});
        for (ErrorType e : config.error_set)
            s.inject[e] = derive_seed(
                config.master_seed,
                {seed_purpose::inject, idx,
                 static_cast<std::uint64_t>(e)});
    }
    return seeds;
}

namespace {

struct PassResult {
    double qa1 = 0.0;
    double qa2 = 0.0;
    double mean_acc = 0.0;
    AccuracyVector base;
    std::map<ErrorType, double> deltas;
};

Dataset inject_error(const Dataset& d, ErrorType e, double rate,
                     std::uint64_t seed) {
    switch (e) {
        case ErrorType::missing: return inject_missing(d, rate, seed);
        case ErrorType::outlier: return inject_outliers(d, rate, seed);
        case ErrorType::fuzzing: return inject_fuzzing(d, rate, seed);
    }
    throw std::logic_error("unreachable error type");
}

PassResult run_pass(const Dataset& d, const AssessConfig& config,
                    const ResampleSeeds& seeds, unsigned jobs) {
    TrainTestSplit split;
    if (config.trusted_test.has_value()) {
        split.train = d;
        split.test = *config.trusted_test;
        split.train_fraction = 1.0;
        split.seed = config.master_seed;
    } else {
        split = split_random(d, config.train_fraction, seeds.split);
    }

    PassResult pass;
    pass.base = evaluate_suite(config.suite, split, jobs);
    pass.mean_acc = mean_accuracy(pass.base);
    pass.qa1 = q_a1(pass.mean_acc, d.class_count);

    // probes corrupt the raw training partition; imputation happens inside
    // evaluate_suite, after injection
    for (ErrorType e : config.error_set) {
        TrainTestSplit probe = split;
        probe.train = inject_error(split.train, e, config.p,
                                   seeds.inject.at(e));
        AccuracyVector corrupted = evaluate_suite(config.suite, probe, jobs);
        pass.deltas[e] = delta_accuracy(pass.base, corrupted);
    }
    pass.qa2 = q_a2(pass.deltas, config.p, config.sensitivity_factor);
    return pass;
}

} // namespace

QualityScore assess(const Dataset& d, const AssessConfig& config) {
    config.validate();
    if (config.trusted_test.has_value()) {
        const Dataset& t = *config.trusted_test;
        if (t.d != d.d)
            throw input_error("trusted test set has " + std::to_string(t.d) +
                              " feature columns, dataset has " +
                              std::to_string(d.d));
        if (t.class_count != d.class_count)
            throw input_error("trusted test set has " +
                              std::to_string(t.class_count) +
                              " classes, dataset has " +
                              std::to_string(d.class_count));
    }

    std::vector<ResampleSeeds> seeds = assess_seed_schedule(config);
    std::size_t passes = seeds.size();
    std::vector<PassResult> results(passes);
    // resamples run in parallel; the suite parallelizes only when there is a
    // single pass, so workers never oversubscribe
    unsigned inner_jobs = passes > 1 ? 1 : config.jobs;
    parallel_for(passes, config.jobs, [&](std::size_t i) {
        results[i] = run_pass(d, config, seeds[i], inner_jobs);
    });

    QualityScore score;
    score.resample_count = static_cast<int>(passes);
    score.p = config.p;

    double inv = 1.0 / static_cast<double>(passes);
    double qa1 = 0.0, qa2 = 0.0, acc = 0.0;
    for (const auto& r : results) {
        qa1 += r.qa1;
        qa2 += r.qa2;
        acc += r.mean_acc;
    }
    score.qa1 = qa1 * inv;
    score.qa2 = qa2 * inv;
    score.mean_accuracy = acc * inv;
    score.qa = combine_max(score.qa1, score.qa2);
    score.level = interpret(score.qa, config.thresholds);

    score.per_model.entries.resize(results[0].base.entries.size());
    for (std::size_t m = 0; m < score.per_model.entries.size(); ++m) {
        double sum = 0.0;
        for (const auto& r : results) sum += r.base.entries[m].value;
        score.per_model.entries[m] = {results[0].base.entries[m].model,
                                      sum * inv};
    }
    for (ErrorType e : config.error_set) {
        double sum = 0.0;
        for (const auto& r : results) sum += r.deltas.at(e);
        score.per_error_delta[e] = sum * inv;
    }
    return score;
}

} // namespace dq
