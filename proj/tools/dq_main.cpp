// Command-line front end: assess, inject, sweep, compare.
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dq/corruption.hpp"
#include "dq/dataset.hpp"
#include "dq/error.hpp"
#include "dq/metrics.hpp"
#include "dq/models.hpp"
#include "dq/report.hpp"
#include "dq/rng.hpp"
#include "dq/sweep.hpp"

namespace {

struct DataOpts {
    std::string data;
    std::string label;
    std::string delimiter = ",";
    std::vector<std::string> force_numeric;
};

struct SuiteOpts {
    std::vector<std::string> kinds;
    std::uint64_t model_seed = 1000;
    dq::LogisticParams logistic;
    dq::GaussianNbParams nb;
    dq::KnnParams knn;
    dq::DecisionTreeParams tree;
    dq::RandomForestParams forest;
};

void add_data_opts(CLI::App* cmd, DataOpts& opts) {
    cmd->add_option("--data", opts.data, "Input CSV file")->required();
    cmd->add_option("--label", opts.label,
                    "Label column (header name or zero-based index)")
        ->required();
    cmd->add_option("--delimiter", opts.delimiter, "Field delimiter")
        ->default_val(",");
    cmd->add_option("--force-numeric", opts.force_numeric,
                    "Columns that must parse as numbers");
}

void add_suite_opts(CLI::App* cmd, SuiteOpts& opts) {
    cmd->add_option("--suite", opts.kinds,
                    "Classifier kinds (default: all five)")
        ->delimiter(',');
    cmd->add_option("--model-seed", opts.model_seed,
                    "Base seed for per-model seeds");
    cmd->add_option("--lr-rate", opts.logistic.learning_rate,
                    "Logistic regression learning rate");
    cmd->add_option("--lr-epochs", opts.logistic.epochs,
                    "Logistic regression epochs");
    cmd->add_option("--nb-floor", opts.nb.variance_floor,
                    "Gaussian naive Bayes variance floor");
    cmd->add_option("--knn-k", opts.knn.k, "Neighbor count for knn");
    cmd->add_option("--tree-depth", opts.tree.max_depth,
                    "Decision tree max depth");
    cmd->add_option("--tree-min-leaf", opts.tree.min_leaf,
                    "Decision tree min samples per leaf");
    cmd->add_option("--forest-trees", opts.forest.trees,
                    "Random forest tree count");
    cmd->add_option("--forest-depth", opts.forest.max_depth,
                    "Random forest max depth");
    cmd->add_option("--forest-min-leaf", opts.forest.min_leaf,
                    "Random forest min samples per leaf");
    cmd->add_option("--forest-mtry", opts.forest.features_per_split,
                    "Features tried per split (0 = sqrt)");
}

dq::CsvOptions csv_options(const DataOpts& opts) {
    if (opts.delimiter.size() != 1)
        throw dq::input_error("delimiter must be a single character");
    dq::CsvOptions csv;
    csv.delimiter = opts.delimiter[0];
    csv.force_numeric = opts.force_numeric;
    return csv;
}

dq::ClassifierSpec make_spec(dq::ModelKind kind, const SuiteOpts& opts) {
    dq::ClassifierSpec spec;
    spec.kind = kind;
    spec.logistic = opts.logistic;
    spec.nb = opts.nb;
    spec.knn = opts.knn;
    spec.tree = opts.tree;
    spec.forest = opts.forest;
    spec.seed = dq::derive_seed(
        opts.model_seed,
        {dq::seed_purpose::model, static_cast<std::uint64_t>(kind)});
    return spec;
}

std::vector<dq::ClassifierSpec> build_suite(const SuiteOpts& opts) {
    std::vector<dq::ModelKind> kinds;
    if (opts.kinds.empty()) {
        kinds = {dq::ModelKind::logistic_regression, dq::ModelKind::gaussian_nb,
                 dq::ModelKind::knn, dq::ModelKind::decision_tree,
                 dq::ModelKind::random_forest};
    } else {
        for (const std::string& name : opts.kinds) {
            auto kind = dq::parse_model_kind(name);
            if (!kind)
                throw dq::input_error("unknown classifier kind '" + name +
                                      "'");
            kinds.push_back(*kind);
        }
    }
    std::vector<dq::ClassifierSpec> suite;
    for (dq::ModelKind kind : kinds) suite.push_back(make_spec(kind, opts));
    return suite;
}

std::vector<dq::ErrorType> parse_errors(const std::vector<std::string>& names) {
    std::vector<dq::ErrorType> out;
    for (const std::string& name : names) {
        auto e = dq::parse_error_type(name);
        if (!e) throw dq::input_error("unknown error type '" + name + "'");
        out.push_back(*e);
    }
    return out;
}

dq::Thresholds parse_thresholds(const std::vector<double>& values) {
    dq::Thresholds t;
    if (!values.empty()) {
        t.good_upper = values[0];
        t.medium_upper = values[1];
    }
    t.validate();
    return t;
}

dq::CurveFormat parse_format(const std::string& name) {
    if (name == "csv") return dq::CurveFormat::csv;
    if (name == "json") return dq::CurveFormat::json;
    throw dq::input_error("unknown format '" + name + "' (use csv or json)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Data quality assessment for tabular classification data"};
    app.require_subcommand(1);
    app.set_config("--config", "",
                   "Config file (INI/TOML: flag = value, [subcommand] "
                   "sections)");

    // ---- assess ----
    auto* assess_cmd = app.add_subcommand(
        "assess", "Score a dataset and report qa, qa1, qa2 and a level");
    DataOpts assess_data;
    SuiteOpts assess_suite;
    add_data_opts(assess_cmd, assess_data);
    add_suite_opts(assess_cmd, assess_suite);
    std::string assess_test;
    double assess_p = 0.05;
    int assess_resamples = 30;
    double assess_fraction = 0.8;
    std::uint64_t assess_seed = 0;
    double assess_factor = 10.0;
    std::vector<std::string> assess_errors{"missing", "outlier", "fuzzing"};
    std::vector<double> assess_thresholds;
    unsigned assess_jobs = 0;
    std::string assess_out = "report.json";
    assess_cmd->add_option("--test", assess_test,
                           "Trusted test CSV (single-pass mode)");
    assess_cmd->add_option("--p", assess_p, "Probe injection rate");
    assess_cmd->add_option("--resamples", assess_resamples,
                           "Resampling iterations");
    assess_cmd->add_option("--train-fraction", assess_fraction,
                           "Training fraction per resample");
    assess_cmd->add_option("--seed", assess_seed, "Master seed");
    assess_cmd->add_option("--factor", assess_factor,
                           "Sensitivity amplification factor");
    assess_cmd->add_option("--errors", assess_errors, "Probe error types")
        ->delimiter(',');
    assess_cmd->add_option("--thresholds", assess_thresholds,
                           "Good and medium upper bounds")
        ->expected(2)
        ->delimiter(',');
    assess_cmd->add_option("--jobs", assess_jobs,
                           "Worker threads (0 = all cores)");
    assess_cmd->add_option("--out", assess_out, "Report path")
        ->default_val("report.json");

    // ---- inject ----
    auto* inject_cmd = app.add_subcommand(
        "inject", "Write a corrupted copy of a dataset");
    DataOpts inject_data;
    add_data_opts(inject_cmd, inject_data);
    std::string inject_error_name;
    double inject_rate = 0.0;
    std::uint64_t inject_seed = 0;
    std::string inject_out;
    inject_cmd
        ->add_option("--error", inject_error_name,
                     "Error type: missing, outlier or fuzzing")
        ->required();
    inject_cmd->add_option("--rate", inject_rate, "Corruption rate in [0, 1]")
        ->required();
    inject_cmd->add_option("--seed", inject_seed, "Injection seed");
    inject_cmd->add_option("--out", inject_out, "Output CSV path")->required();

    // ---- sweep ----
    auto* sweep_cmd = app.add_subcommand(
        "sweep", "Trace accuracy (and optionally quality) degradation curves");
    DataOpts sweep_data;
    SuiteOpts sweep_suite;
    add_data_opts(sweep_cmd, sweep_data);
    add_suite_opts(sweep_cmd, sweep_suite);
    std::vector<std::string> sweep_errors{"missing", "outlier", "fuzzing"};
    double sweep_from = 0.0, sweep_to = 0.95, sweep_step = 0.05;
    int sweep_iterations = 30;
    std::string sweep_scope = "whole";
    bool sweep_with_quality = false;
    std::uint64_t sweep_seed = 0;
    double sweep_fraction = 0.8, sweep_p = 0.05, sweep_factor = 10.0;
    std::vector<double> sweep_thresholds;
    unsigned sweep_jobs = 0;
    std::string sweep_out;
    std::string sweep_format = "csv";
    sweep_cmd->add_option("--errors", sweep_errors, "Error types to sweep")
        ->delimiter(',');
    sweep_cmd->add_option("--from", sweep_from, "First level");
    sweep_cmd->add_option("--to", sweep_to, "Last level");
    sweep_cmd->add_option("--step", sweep_step, "Level increment");
    sweep_cmd->add_option("--iterations", sweep_iterations,
                          "Iterations per level");
    sweep_cmd->add_option("--scope", sweep_scope,
                          "Corruption scope: whole or train");
    sweep_cmd->add_flag("--quality", sweep_with_quality,
                        "Also score quality per cell");
    sweep_cmd->add_option("--seed", sweep_seed, "Master seed");
    sweep_cmd->add_option("--train-fraction", sweep_fraction,
                          "Training fraction");
    sweep_cmd->add_option("--p", sweep_p, "Probe rate for quality cells");
    sweep_cmd->add_option("--factor", sweep_factor,
                          "Sensitivity amplification factor");
    sweep_cmd->add_option("--thresholds", sweep_thresholds,
                          "Good and medium upper bounds")
        ->expected(2)
        ->delimiter(',');
    sweep_cmd->add_option("--jobs", sweep_jobs,
                          "Worker threads (0 = all cores)");
    sweep_cmd->add_option("--out", sweep_out, "Curve file path")->required();
    sweep_cmd->add_option("--format", sweep_format, "csv or json")
        ->default_val("csv");

    // ---- compare ----
    auto* compare_cmd = app.add_subcommand(
        "compare", "Compare the max combiner against alpha blends");
    DataOpts compare_data;
    SuiteOpts compare_suite;
    add_data_opts(compare_cmd, compare_data);
    add_suite_opts(compare_cmd, compare_suite);
    std::vector<std::string> compare_errors{"missing", "outlier", "fuzzing"};
    double compare_from = 0.0, compare_to = 0.95, compare_step = 0.05;
    int compare_iterations = 30;
    std::string compare_scope = "whole";
    std::uint64_t compare_seed = 0;
    double compare_fraction = 0.8, compare_p = 0.05, compare_factor = 10.0;
    std::vector<double> compare_thresholds;
    std::vector<double> compare_alphas{0.25, 0.5, 0.75};
    unsigned compare_jobs = 0;
    std::string compare_out;
    std::string compare_format = "csv";
    compare_cmd->add_option("--errors", compare_errors, "Error types to sweep")
        ->delimiter(',');
    compare_cmd->add_option("--from", compare_from, "First level");
    compare_cmd->add_option("--to", compare_to, "Last level");
    compare_cmd->add_option("--step", compare_step, "Level increment");
    compare_cmd->add_option("--iterations", compare_iterations,
                            "Iterations per level");
    compare_cmd->add_option("--scope", compare_scope,
                            "Corruption scope: whole or train");
    compare_cmd->add_option("--seed", compare_seed, "Master seed");
    compare_cmd->add_option("--train-fraction", compare_fraction,
                            "Training fraction");
    compare_cmd->add_option("--p", compare_p, "Probe rate for quality cells");
    compare_cmd->add_option("--factor", compare_factor,
                            "Sensitivity amplification factor");
    compare_cmd->add_option("--thresholds", compare_thresholds,
                            "Good and medium upper bounds")
        ->expected(2)
        ->delimiter(',');
    compare_cmd->add_option("--alphas", compare_alphas, "Alpha blend weights")
        ->delimiter(',');
    compare_cmd->add_option("--jobs", compare_jobs,
                            "Worker threads (0 = all cores)");
    compare_cmd->add_option("--out", compare_out, "Table file path")
        ->required();
    compare_cmd->add_option("--format", compare_format, "csv or json")
        ->default_val("csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (assess_cmd->parsed()) {
            dq::Dataset data =
                dq::load_csv(assess_data.data, assess_data.label,
                             csv_options(assess_data));
            dq::AssessConfig config;
            config.suite = build_suite(assess_suite);
            config.error_set = parse_errors(assess_errors);
            config.p = assess_p;
            config.resamples = assess_resamples;
            config.train_fraction = assess_fraction;
            config.master_seed = assess_seed;
            config.sensitivity_factor = assess_factor;
            config.thresholds = parse_thresholds(assess_thresholds);
            config.jobs = assess_jobs;
            if (!assess_test.empty()) {
                dq::Dataset test = dq::load_csv(
                    assess_test, assess_data.label, csv_options(assess_data));
                config.trusted_test = dq::align_to_schema(test, data);
            }
            dq::QualityScore score = dq::assess(data, config);
            dq::write_json(assess_out, dq::quality_report(score, config));
            std::printf("qa=%.4f qa1=%.4f qa2=%.4f level=%s\n", score.qa,
                        score.qa1, score.qa2,
                        dq::to_string(score.level).c_str());
            return 0;
        }

        if (inject_cmd->parsed()) {
            dq::Dataset data =
                dq::load_csv(inject_data.data, inject_data.label,
                             csv_options(inject_data));
            auto error = dq::parse_error_type(inject_error_name);
            if (!error)
                throw dq::input_error("unknown error type '" +
                                      inject_error_name + "'");
            dq::InjectionPlan plan;
            plan.error = *error;
            plan.rate = inject_rate;
            plan.seed = inject_seed;
            plan.target = dq::InjectionTarget::whole_dataset;
            dq::Dataset corrupted = dq::inject(data, plan);
            dq::save_csv(corrupted, inject_out,
                         csv_options(inject_data).delimiter);
            nlohmann::json meta{{"command", "inject"},
                                {"data", inject_data.data},
                                {"label", inject_data.label},
                                {"error", dq::to_string(plan.error)},
                                {"rate", plan.rate},
                                {"seed", plan.seed},
                                {"out", inject_out}};
            dq::write_json(inject_out + ".meta.json", meta);
            return 0;
        }

        auto fill_sweep_config =
            [](const SuiteOpts& suite_opts,
               const std::vector<std::string>& error_names, double from,
               double to, double step, int iterations,
               const std::string& scope, std::uint64_t seed, double fraction,
               double p, double factor, const std::vector<double>& thresholds,
               unsigned jobs) {
                dq::SweepConfig config;
                config.error_types = parse_errors(error_names);
                config.levels = dq::make_levels(from, to, step);
                config.iterations = iterations;
                if (scope == "whole")
                    config.scope = dq::InjectionTarget::whole_dataset;
                else if (scope == "train")
                    config.scope = dq::InjectionTarget::train_only;
                else
                    throw dq::input_error("unknown scope '" + scope +
                                          "' (use whole or train)");
                config.suite = build_suite(suite_opts);
                config.master_seed = seed;
                config.train_fraction = fraction;
                config.p = p;
                config.sensitivity_factor = factor;
                config.thresholds = parse_thresholds(thresholds);
                config.jobs = jobs;
                return config;
            };

        if (sweep_cmd->parsed()) {
            dq::Dataset data = dq::load_csv(sweep_data.data, sweep_data.label,
                                            csv_options(sweep_data));
            dq::SweepConfig config = fill_sweep_config(
                sweep_suite, sweep_errors, sweep_from, sweep_to, sweep_step,
                sweep_iterations, sweep_scope, sweep_seed, sweep_fraction,
                sweep_p, sweep_factor, sweep_thresholds, sweep_jobs);
            dq::CurveFormat format = parse_format(sweep_format);
            dq::SweepResult result = sweep_with_quality
                                         ? dq::sweep_quality(data, config)
                                         : dq::sweep_accuracy(data, config);
            dq::emit_curves(result, sweep_out, format);
            if (format == dq::CurveFormat::csv) {
                nlohmann::json meta{{"command", "sweep"},
                                    {"data", sweep_data.data},
                                    {"label", sweep_data.label},
                                    {"quality", sweep_with_quality},
                                    {"config", dq::config_json(config)},
                                    {"out", sweep_out}};
                dq::write_json(sweep_out + ".meta.json", meta);
            }
            return 0;
        }

        if (compare_cmd->parsed()) {
            dq::Dataset data =
                dq::load_csv(compare_data.data, compare_data.label,
                             csv_options(compare_data));
            dq::SweepConfig config = fill_sweep_config(
                compare_suite, compare_errors, compare_from, compare_to,
                compare_step, compare_iterations, compare_scope, compare_seed,
                compare_fraction, compare_p, compare_factor,
                compare_thresholds, compare_jobs);
            dq::CurveFormat format = parse_format(compare_format);
            dq::CombinerTable table =
                dq::compare_combiners(data, config, compare_alphas);
            dq::emit_combiner_table(table, compare_out, format);
            if (format == dq::CurveFormat::csv) {
                nlohmann::json meta{{"command", "compare"},
                                    {"data", compare_data.data},
                                    {"label", compare_data.label},
                                    {"alphas", compare_alphas},
                                    {"config", dq::config_json(config)},
                                    {"out", compare_out}};
                dq::write_json(compare_out + ".meta.json", meta);
            }
            return 0;
        }
    } catch (const dq::input_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
