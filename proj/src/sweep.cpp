#include "dq/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "dq/csv.hpp"
#include "dq/error.hpp"
#include "dq/parallel.hpp"
#include "dq/report.hpp"
#include "dq/rng.hpp"

namespace dq {

std::vector<double> make_levels(double from, double to, double step) {
    if (!(step >= 1e-9))
        throw input_error("level step must be positive, got " +
                          csv::format_double(step));
    if (!(from >= 0.0 && from <= to && to < 1.0))
        throw input_error("level range must satisfy 0 <= from <= to < 1, got " +
                          csv::format_double(from) + " .. " +
                          csv::format_double(to));
    auto count = static_cast<std::size_t>((to - from) / step + 1e-9) + 1;
    std::vector<double> levels(count);
    for (std::size_t i = 0; i < count; ++i) {
        double v = from + static_cast<double>(i) * step;
        levels[i] = std::round(v * 1e9) / 1e9; // snap for clean printing
    }
    return levels;
}

void SweepConfig::validate() const {
    if (error_types.empty()) throw input_error("sweep has no error types");
    for (std::size_t i = 0; i < error_types.size(); ++i)
        for (std::size_t j = i + 1; j < error_types.size(); ++j)
            if (error_types[i] == error_types[j])
                throw input_error("sweep repeats error type '" +
                                  to_string(error_types[i]) + "'");
    if (levels.empty()) throw input_error("sweep has no levels");
    for (double v : levels)
        if (!(v >= 0.0 && v < 1.0))
            throw input_error("sweep level must be in [0, 1), got " +
                              csv::format_double(v));
    for (std::size_t i = 1; i < levels.size(); ++i)
        if (!(levels[i] > levels[i - 1]))
            throw input_error("sweep levels must be strictly ascending");
    if (iterations < 1)
        throw input_error("sweep iterations must be >= 1, got " +
                          std::to_string(iterations));
    if (suite.empty()) throw input_error("classifier suite is empty");
    for (const auto& spec : suite) spec.validate();
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw input_error("train fraction must be in (0, 1), got " +
                          csv::format_double(train_fraction));
    if (!(p > 0.0 && p < 1.0))
        throw input_error("probe rate p must be in (0, 1), got " +
                          csv::format_double(p));
    if (!(sensitivity_factor > 0.0))
        throw input_error("sensitivity factor must be > 0, got " +
                          csv::format_double(sensitivity_factor));
    thresholds.validate();
}

namespace {

Dataset inject_error(const Dataset& d, ErrorType e, double rate,
                     std::uint64_t seed) {
    switch (e) {
        case ErrorType::missing: return inject_missing(d, rate, seed);
        case ErrorType::outlier: return inject_outliers(d, rate, seed);
        case ErrorType::fuzzing: return inject_fuzzing(d, rate, seed);
    }
    throw std::logic_error("unreachable error type");
}

SweepCell run_cell(const Dataset& d, const SweepConfig& config,
                   std::size_t error_idx, std::size_t level_idx,
                   int iteration, bool with_quality) {
    SweepCell cell;
    cell.error = config.error_types[error_idx];
    cell.level = config.levels[level_idx];
    cell.iteration = iteration;

    std::uint64_t cell_seed = derive_seed(
        config.master_seed,
        {seed_purpose::cell, error_idx, level_idx,
         static_cast<std::uint64_t>(iteration)});
    std::uint64_t split_seed = derive_seed(cell_seed, {seed_purpose::split});
    std::uint64_t inject_seed = derive_seed(cell_seed, {seed_purpose::inject});

    TrainTestSplit split;
    if (config.scope == InjectionTarget::whole_dataset) {
        Dataset corrupted =
            inject_error(d, cell.error, cell.level, inject_seed);
        split = split_random(corrupted, config.train_fraction, split_seed);
    } else {
        split = split_random(d, config.train_fraction, split_seed);
        split.train =
            inject_error(split.train, cell.error, cell.level, inject_seed);
    }

    cell.accuracies = evaluate_suite(config.suite, split, 1);

    if (with_quality) {
        // single-pass score of the corrupted dataset on this cell's split;
        // the level aggregate then averages these across iterations
        QualityScore qs;
        qs.resample_count = 1;
        qs.p = config.p;
        qs.mean_accuracy = mean_accuracy(cell.accuracies);
        qs.qa1 = q_a1(qs.mean_accuracy, d.class_count);
        qs.per_model = cell.accuracies;
        for (std::size_t pe = 0; pe < kAllErrorTypes.size(); ++pe) {
            ErrorType probe_error = kAllErrorTypes[pe];
            std::uint64_t probe_seed =
                derive_seed(cell_seed, {seed_purpose::probe, pe});
            TrainTestSplit probe = split;
            probe.train =
                inject_error(split.train, probe_error, config.p, probe_seed);
            AccuracyVector corrupted =
                evaluate_suite(config.suite, probe, 1);
            qs.per_error_delta[probe_error] =
                delta_accuracy(cell.accuracies, corrupted);
        }
        qs.qa2 = q_a2(qs.per_error_delta, config.p, config.sensitivity_factor);
        qs.qa = combine_max(qs.qa1, qs.qa2);
        qs.level = interpret(qs.qa, config.thresholds);
        cell.quality = std::move(qs);
    }
    return cell;
}

SweepResult run_sweep(const Dataset& d, const SweepConfig& config,
                      bool with_quality) {
    config.validate();
    SweepResult result;
    result.config = config;

    std::size_t n_err = config.error_types.size();
    std::size_t n_lvl = config.levels.size();
    auto n_iter = static_cast<std::size_t>(config.iterations);
    result.cells.resize(n_err * n_lvl * n_iter);

    parallel_for(result.cells.size(), config.jobs, [&](std::size_t i) {
        std::size_t e = i / (n_lvl * n_iter);
        std::size_t l = (i / n_iter) % n_lvl;
        int it = static_cast<int>(i % n_iter);
        result.cells[i] = run_cell(d, config, e, l, it, with_quality);
    });

    for (std::size_t e = 0; e < n_err; ++e) {
        for (std::size_t l = 0; l < n_lvl; ++l) {
            SweepAggregate agg;
            agg.error = config.error_types[e];
            agg.level = config.levels[l];
            double acc = 0.0, qa = 0.0, qa1 = 0.0, qa2 = 0.0;
            for (std::size_t it = 0; it < n_iter; ++it) {
                const SweepCell& cell =
                    result.cells[(e * n_lvl + l) * n_iter + it];
                acc += mean_accuracy(cell.accuracies);
                if (with_quality) {
                    qa += cell.quality->qa;
                    qa1 += cell.quality->qa1;
                    qa2 += cell.quality->qa2;
                }
            }
            double inv = 1.0 / static_cast<double>(n_iter);
            agg.mean_accuracy = acc * inv;
            if (with_quality) {
                agg.mean_qa = qa * inv;
                agg.mean_qa1 = qa1 * inv;
                agg.mean_qa2 = qa2 * inv;
            }
            result.aggregates.push_back(agg);
        }
    }
    return result;
}

} // namespace

SweepResult sweep_accuracy(const Dataset& d, const SweepConfig& config) {
    return run_sweep(d, config, false);
}

SweepResult sweep_quality(const Dataset& d, const SweepConfig& config) {
    return run_sweep(d, config, true);
}

CombinerTable compare_combiners(const Dataset& d, const SweepConfig& config,
                                const std::vector<double>& alphas) {
    if (alphas.empty()) throw input_error("no alpha values given");
    for (double a : alphas)
        if (!(a >= 0.0 && a <= 1.0))
            throw input_error("alpha must be in [0, 1], got " +
                              csv::format_double(a));
    SweepResult result = sweep_quality(d, config);

    CombinerTable table;
    table.alphas = alphas;
    for (const SweepAggregate& agg : result.aggregates) {
        CombinerRow row;
        row.error = agg.error;
        row.level = agg.level;
        row.qa1 = *agg.mean_qa1;
        row.qa2 = *agg.mean_qa2;
        row.qa_max = combine_max(row.qa1, row.qa2);
        for (double a : alphas)
            row.blends.push_back(combine_alpha(row.qa1, row.qa2, a));
        table.rows.push_back(std::move(row));
    }
    return table;
}

namespace {

std::string opt_field(const std::optional<double>& v) {
    return v ? csv::format_double(*v) : std::string();
}

} // namespace

void emit_curves(const SweepResult& result, const std::string& path,
                 CurveFormat format) {
    if (result.cells.empty())
        throw input_error("sweep result has no cells; nothing to write");

    if (format == CurveFormat::csv) {
        csv::Table table;
        table.header = {"error", "level",    "iteration", "model", "accuracy",
                        "qa",    "qa1",      "qa2",       "aggregate"};
        for (const SweepCell& cell : result.cells) {
            std::string qa, qa1, qa2;
            if (cell.quality) {
                qa = csv::format_double(cell.quality->qa);
                qa1 = csv::format_double(cell.quality->qa1);
                qa2 = csv::format_double(cell.quality->qa2);
            }
            for (const AccuracyEntry& entry : cell.accuracies.entries)
                table.rows.push_back({to_string(cell.error),
                                      csv::format_double(cell.level),
                                      std::to_string(cell.iteration),
                                      entry.model,
                                      csv::format_double(entry.value), qa, qa1,
                                      qa2, "0"});
        }
        for (const SweepAggregate& agg : result.aggregates)
            table.rows.push_back({to_string(agg.error),
                                  csv::format_double(agg.level), "", "",
                                  csv::format_double(agg.mean_accuracy),
                                  opt_field(agg.mean_qa),
                                  opt_field(agg.mean_qa1),
                                  opt_field(agg.mean_qa2), "1"});
        csv::write_file(path, table);
        return;
    }

    nlohmann::json doc;
    doc["kind"] = "degradation_curves";
    doc["config"] = config_json(result.config);
    nlohmann::json rows = nlohmann::json::array();
    for (const SweepCell& cell : result.cells) {
        for (const AccuracyEntry& entry : cell.accuracies.entries) {
            nlohmann::json row{{"error", to_string(cell.error)},
                               {"level", cell.level},
                               {"iteration", cell.iteration},
                               {"model", entry.model},
                               {"accuracy", entry.value},
                               {"aggregate", false}};
            if (cell.quality) {
                row["qa"] = cell.quality->qa;
                row["qa1"] = cell.quality->qa1;
                row["qa2"] = cell.quality->qa2;
            }
            rows.push_back(std::move(row));
        }
    }
    for (const SweepAggregate& agg : result.aggregates) {
        nlohmann::json row{{"error", to_string(agg.error)},
                           {"level", agg.level},
                           {"accuracy", agg.mean_accuracy},
                           {"aggregate", true}};
        if (agg.mean_qa) {
            row["qa"] = *agg.mean_qa;
            row["qa1"] = *agg.mean_qa1;
            row["qa2"] = *agg.mean_qa2;
        }
        rows.push_back(std::move(row));
    }
    doc["rows"] = std::move(rows);
    write_json(path, doc);
}

void emit_combiner_table(const CombinerTable& table, const std::string& path,
                         CurveFormat format) {
    if (table.rows.empty())
        throw input_error("combiner table has no rows; nothing to write");

    if (format == CurveFormat::csv) {
        csv::Table out;
        out.header = {"error", "level", "qa1", "qa2", "qa_max"};
        for (double a : table.alphas)
            out.header.push_back("qa_alpha_" + csv::format_double(a));
        for (const CombinerRow& row : table.rows) {
            std::vector<std::string> fields{
                to_string(row.error), csv::format_double(row.level),
                csv::format_double(row.qa1), csv::format_double(row.qa2),
                csv::format_double(row.qa_max)};
            for (double b : row.blends)
                fields.push_back(csv::format_double(b));
            out.rows.push_back(std::move(fields));
        }
        csv::write_file(path, out);
        return;
    }

    nlohmann::json doc;
    doc["kind"] = "combiner_comparison";
    doc["alphas"] = table.alphas;
    nlohmann::json rows = nlohmann::json::array();
    for (const CombinerRow& row : table.rows) {
        nlohmann::json r{{"error", to_string(row.error)},
                         {"level", row.level},
                         {"qa1", row.qa1},
                         {"qa2", row.qa2},
                         {"qa_max", row.qa_max}};
        nlohmann::json blends = nlohmann::json::object();
        for (std::size_t i = 0; i < table.alphas.size(); ++i)
            blends[csv::format_double(table.alphas[i])] = row.blends[i];
        r["qa_alpha"] = std::move(blends);
        rows.push_back(std::move(r));
    }
    doc["rows"] = std::move(rows);
    write_json(path, doc);
}

} // namespace dq
