#include "dq/report.hpp"

#include <fstream>

#include "dq/error.hpp"

namespace dq {

namespace {

nlohmann::json spec_json(const ClassifierSpec& spec) {
    nlohmann::json j{{"kind", to_string(spec.kind)},
                     {"seed", spec.seed}};
    switch (spec.kind) {
        case ModelKind::logistic_regression:
            j["learning_rate"] = spec.logistic.learning_rate;
            j["epochs"] = spec.logistic.epochs;
            break;
        case ModelKind::gaussian_nb:
            j["variance_floor"] = spec.nb.variance_floor;
            break;
        case ModelKind::knn:
            j["k"] = spec.knn.k;
            break;
        case ModelKind::decision_tree:
            j["max_depth"] = spec.tree.max_depth;
            j["min_leaf"] = spec.tree.min_leaf;
            break;
        case ModelKind::random_forest:
            j["trees"] = spec.forest.trees;
            j["max_depth"] = spec.forest.max_depth;
            j["min_leaf"] = spec.forest.min_leaf;
            j["features_per_split"] = spec.forest.features_per_split;
            break;
    }
    return j;
}

nlohmann::json suite_json(const std::vector<ClassifierSpec>& suite) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& spec : suite) arr.push_back(spec_json(spec));
    return arr;
}

nlohmann::json errors_json(const std::vector<ErrorType>& errors) {
    nlohmann::json arr = nlohmann::json::array();
    for (ErrorType e : errors) arr.push_back(to_string(e));
    return arr;
}

nlohmann::json thresholds_json(const Thresholds& t) {
    return {{"good_upper", t.good_upper}, {"medium_upper", t.medium_upper}};
}

} // namespace

nlohmann::json config_json(const AssessConfig& config) {
    return {{"suite", suite_json(config.suite)},
            {"error_set", errors_json(config.error_set)},
            {"p", config.p},
            {"resamples", config.resamples},
            {"train_fraction", config.train_fraction},
            {"trusted_test", config.trusted_test.has_value()},
            {"master_seed", config.master_seed},
            {"sensitivity_factor", config.sensitivity_factor},
            {"thresholds", thresholds_json(config.thresholds)}};
}

nlohmann::json config_json(const SweepConfig& config) {
    return {{"error_types", errors_json(config.error_types)},
            {"levels", config.levels},
            {"iterations", config.iterations},
            {"scope", config.scope == InjectionTarget::whole_dataset
                          ? "whole"
                          : "train"},
            {"suite", suite_json(config.suite)},
            {"master_seed", config.master_seed},
            {"train_fraction", config.train_fraction},
            {"p", config.p},
            {"sensitivity_factor", config.sensitivity_factor},
            {"thresholds", thresholds_json(config.thresholds)}};
}

nlohmann::json quality_report(const QualityScore& score,
                              const AssessConfig& config) {
    nlohmann::json per_model = nlohmann::json::array();
    for (const auto& entry : score.per_model.entries)
        per_model.push_back(
            {{"model", entry.model}, {"accuracy", entry.value}});

    nlohmann::json deltas = nlohmann::json::object();
    for (const auto& [err, delta] : score.per_error_delta)
        deltas[to_string(err)] = delta;

    nlohmann::json derived = nlohmann::json::array();
    for (const auto& s : assess_seed_schedule(config)) {
        nlohmann::json inject = nlohmann::json::object();
        for (const auto& [err, seed] : s.inject)
            inject[to_string(err)] = seed;
        derived.push_back({{"split", s.split}, {"inject", std::move(inject)}});
    }

    return {{"qa", score.qa},
            {"qa1", score.qa1},
            {"qa2", score.qa2},
            {"level", to_string(score.level)},
            {"mean_accuracy", score.mean_accuracy},
            {"per_model", std::move(per_model)},
            {"per_error_delta", std::move(deltas)},
            {"resample_count", score.resample_count},
            {"p", score.p},
            {"seed", config.master_seed},
            {"derived_seeds", std::move(derived)},
            {"config", config_json(config)}};
}

void write_json(const std::string& path, const nlohmann::json& doc) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw input_error("cannot write file: " + path);
    out << doc.dump(2) << '\n';
    if (!out) throw input_error("write failed: " + path);
}

} // namespace dq
