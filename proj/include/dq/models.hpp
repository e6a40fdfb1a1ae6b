#pragma once
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dq/dataset.hpp"

namespace dq {

enum class ModelKind {
    logistic_regression,
    gaussian_nb,
    knn,
    decision_tree,
    random_forest,
};

std::string to_string(ModelKind kind);
std::optional<ModelKind> parse_model_kind(std::string_view name);

struct LogisticParams {
    double learning_rate = 0.1;
    int epochs = 300;
};
struct GaussianNbParams {
    double variance_floor = 1e-9;
};
struct KnnParams {
    int k = 5;
};
struct DecisionTreeParams {
    int max_depth = 12;
    int min_leaf = 2;
};
struct RandomForestParams {
    int trees = 25;
    int max_depth = 12;
    int min_leaf = 2;
    int features_per_split = 0; // 0 = floor(sqrt(d)), capped at d
};

struct ClassifierSpec {
    ModelKind kind = ModelKind::logistic_regression;
    LogisticParams logistic;
    GaussianNbParams nb;
    KnnParams knn;
    DecisionTreeParams tree;
    RandomForestParams forest;
    std::uint64_t seed = 0;

    void validate() const; // throws input_error on bad hyper-parameters
};

// One spec of each kind, in declaration order, with per-member derived seeds.
std::vector<ClassifierSpec> default_suite(std::uint64_t seed_base = 1000);

class TrainedModel {
  public:
    // row must hold d finite values; ties always resolve to the lowest
    // class index.
    int predict(std::span<const double> row) const;
    int class_count() const;
    std::size_t feature_count() const;
    const ClassifierSpec& spec() const;

    struct Impl;
    explicit TrainedModel(std::shared_ptr<const Impl> impl);

  private:
    std::shared_ptr<const Impl> impl_;
};

// train_data must be free of missing cells (impute first). Training is
// deterministic for a fixed (spec, data) pair; classes absent from the
// training set are never predicted.
TrainedModel train(const ClassifierSpec& spec, const Dataset& train_data);

// Fraction of rows classified correctly; test must be non-empty and free of
// missing cells.
double accuracy(const TrainedModel& model, const Dataset& test);

struct AccuracyEntry {
    std::string model;
    double value = 0.0;
};
struct AccuracyVector {
    std::vector<AccuracyEntry> entries;
};

// Names are the kind strings, disambiguated with "#<occurrence>" only when a
// kind appears more than once.
std::vector<std::string> suite_member_names(
    const std::vector<ClassifierSpec>& suite);

// Imputes the split (idempotent), then trains and scores every member.
// Order of entries matches the suite; identical for every jobs value.
AccuracyVector evaluate_suite(const std::vector<ClassifierSpec>& suite,
                              const TrainTestSplit& split, unsigned jobs = 1);

} // namespace dq
