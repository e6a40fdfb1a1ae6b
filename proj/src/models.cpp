#include "dq/models.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "dq/error.hpp"
#include "dq/parallel.hpp"
#include "dq/rng.hpp"

namespace dq {

std::string to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::logistic_regression: return "logistic_regression";
        case ModelKind::gaussian_nb: return "gaussian_nb";
        case ModelKind::knn: return "knn";
        case ModelKind::decision_tree: return "decision_tree";
        case ModelKind::random_forest: return "random_forest";
    }
    return "unknown";
}

std::optional<ModelKind> parse_model_kind(std::string_view name) {
    if (name == "logistic_regression") return ModelKind::logistic_regression;
    if (name == "gaussian_nb") return ModelKind::gaussian_nb;
    if (name == "knn") return ModelKind::knn;
    if (name == "decision_tree") return ModelKind::decision_tree;
    if (name == "random_forest") return ModelKind::random_forest;
    return std::nullopt;
}

void ClassifierSpec::validate() const {
    auto bad = [&](const std::string& what) {
        throw input_error("invalid " + to_string(kind) +
                          " hyper-parameter: " + what);
    };
    switch (kind) {
        case ModelKind::logistic_regression:
            if (!(logistic.learning_rate > 0)) bad("learning_rate must be > 0");
            if (logistic.epochs < 1) bad("epochs must be >= 1");
            break;
        case ModelKind::gaussian_nb:
            if (!(nb.variance_floor > 0)) bad("variance_floor must be > 0");
            break;
        case ModelKind::knn:
            if (knn.k < 1) bad("k must be >= 1");
            break;
        case ModelKind::decision_tree:
            if (tree.max_depth < 1) bad("max_depth must be >= 1");
            if (tree.min_leaf < 1) bad("min_leaf must be >= 1");
            break;
        case ModelKind::random_forest:
            if (forest.trees < 1) bad("trees must be >= 1");
            if (forest.max_depth < 1) bad("max_depth must be >= 1");
            if (forest.min_leaf < 1) bad("min_leaf must be >= 1");
            if (forest.features_per_split < 0)
                bad("features_per_split must be >= 0");
            break;
    }
}

std::vector<ClassifierSpec> default_suite(std::uint64_t seed_base) {
    std::vector<ClassifierSpec> suite;
    ModelKind kinds[] = {ModelKind::logistic_regression, ModelKind::gaussian_nb,
                         ModelKind::knn, ModelKind::decision_tree,
                         ModelKind::random_forest};
    for (std::size_t i = 0; i < 5; ++i) {
        ClassifierSpec spec;
        spec.kind = kinds[i];
        spec.seed = derive_seed(seed_base, {seed_purpose::model, i});
        suite.push_back(spec);
    }
    return suite;
}

namespace {

void require_complete(const Dataset& d, const char* what) {
    for (double v : d.features)
        if (is_missing(v))
            throw std::invalid_argument(std::string(what) +
                                        " contains missing cells; impute first");
}

// Train-fit column standardizer; zero-variance columns pass through.
struct Standardizer {
    std::vector<double> mean;
    std::vector<double> scale;

    static Standardizer fit(const Dataset& train) {
        Standardizer s;
        s.mean.assign(train.d, 0.0);
        s.scale.assign(train.d, 1.0);
        for (std::size_t c = 0; c < train.d; ++c) {
            double sum = 0.0;
            for (std::size_t r = 0; r < train.n; ++r) sum += train.at(r, c);
            double m = sum / static_cast<double>(train.n);
            double var = 0.0;
            for (std::size_t r = 0; r < train.n; ++r) {
                double dv = train.at(r, c) - m;
                var += dv * dv;
            }
            var /= static_cast<double>(train.n);
            s.mean[c] = m;
            s.scale[c] = var > 0.0 ? std::sqrt(var) : 1.0;
        }
        return s;
    }

    void apply(std::span<const double> row, std::vector<double>& out) const {
        out.resize(row.size());
        for (std::size_t c = 0; c < row.size(); ++c)
            out[c] = (row[c] - mean[c]) / scale[c];
    }

    std::vector<double> transform_all(const Dataset& d) const {
        std::vector<double> out(d.features.size());
        for (std::size_t r = 0; r < d.n; ++r)
            for (std::size_t c = 0; c < d.d; ++c)
                out[r * d.d + c] = (d.at(r, c) - mean[c]) / scale[c];
        return out;
    }
};

std::vector<int> seen_classes(const Dataset& d) {
    std::vector<bool> present(static_cast<std::size_t>(d.class_count), false);
    for (int y : d.labels) present[static_cast<std::size_t>(y)] = true;
    std::vector<int> out;
    for (int k = 0; k < d.class_count; ++k)
        if (present[static_cast<std::size_t>(k)]) out.push_back(k);
    return out;
}

// argmax over (class, score) pairs; ties resolve to the lowest class index
// because candidates arrive in ascending class order and comparison is strict.
int argmax_class(const std::vector<int>& classes,
                 const std::vector<double>& scores) {
    int best = classes[0];
    double best_score = scores[0];
    for (std::size_t i = 1; i < classes.size(); ++i) {
        if (scores[i] > best_score) {
            best_score = scores[i];
            best = classes[i];
        }
    }
    return best;
}

int majority_label(const std::vector<int>& counts) {
    int best = 0;
    for (int k = 1; k < static_cast<int>(counts.size()); ++k)
        if (counts[static_cast<std::size_t>(k)] >
            counts[static_cast<std::size_t>(best)])
            best = k;
    return best;
}

} // namespace

struct TrainedModel::Impl {
    ClassifierSpec spec;
    int classes = 0;
    std::size_t features = 0;
    virtual ~Impl() = default;
    virtual int predict_row(std::span<const double> row) const = 0;
};

namespace {

double sigmoid(double z) {
    if (z > 40.0) return 1.0;
    if (z < -40.0) return 0.0;
    return 1.0 / (1.0 + std::exp(-z));
}

struct LogisticModel final : TrainedModel::Impl {
    Standardizer scaler;
    std::vector<int> class_ids; // ascending
    std::vector<std::vector<double>> weights; // per class id, size d
    std::vector<double> bias;

    int predict_row(std::span<const double> row) const override {
        std::vector<double> x;
        scaler.apply(row, x);
        std::vector<double> scores(class_ids.size());
        for (std::size_t k = 0; k < class_ids.size(); ++k) {
            double z = bias[k];
            const auto& w = weights[k];
            for (std::size_t c = 0; c < x.size(); ++c) z += w[c] * x[c];
            scores[k] = z;
        }
        return argmax_class(class_ids, scores);
    }
};

std::shared_ptr<const TrainedModel::Impl> train_logistic(
    const ClassifierSpec& spec, const Dataset& train) {
    auto m = std::make_shared<LogisticModel>();
    m->scaler = Standardizer::fit(train);
    m->class_ids = seen_classes(train);
    std::vector<double> x = m->scaler.transform_all(train);
    std::size_t n = train.n, d = train.d;
    double lr = spec.logistic.learning_rate;

    for (int cls : m->class_ids) {
        std::vector<double> w(d, 0.0);
        double b = 0.0;
        std::vector<double> grad(d);
        for (int epoch = 0; epoch < spec.logistic.epochs; ++epoch) {
            std::fill(grad.begin(), grad.end(), 0.0);
            double grad_b = 0.0;
            for (std::size_t r = 0; r < n; ++r) {
                double z = b;
                const double* row = x.data() + r * d;
                for (std::size_t c = 0; c < d; ++c) z += w[c] * row[c];
                double err = sigmoid(z) - (train.labels[r] == cls ? 1.0 : 0.0);
                for (std::size_t c = 0; c < d; ++c) grad[c] += err * row[c];
                grad_b += err;
            }
            double inv_n = 1.0 / static_cast<double>(n);
            for (std::size_t c = 0; c < d; ++c) w[c] -= lr * grad[c] * inv_n;
            b -= lr * grad_b * inv_n;
        }
        m->weights.push_back(std::move(w));
        m->bias.push_back(b);
    }
    return m;
}

struct GaussianNbModel final : TrainedModel::Impl {
    std::vector<int> class_ids;
    std::vector<double> log_prior;
    std::vector<std::vector<double>> means; // per class, size d
    std::vector<std::vector<double>> vars;  // per class, size d

    int predict_row(std::span<const double> row) const override {
        std::vector<double> scores(class_ids.size());
        for (std::size_t k = 0; k < class_ids.size(); ++k) {
            double s = log_prior[k];
            const auto& mu = means[k];
            const auto& var = vars[k];
            constexpr double two_pi = 6.283185307179586476925286766559;
            for (std::size_t c = 0; c < row.size(); ++c) {
                double dv = row[c] - mu[c];
                s -= 0.5 * (std::log(two_pi * var[c]) + dv * dv / var[c]);
            }
            scores[k] = s;
        }
        return argmax_class(class_ids, scores);
    }
};

std::shared_ptr<const TrainedModel::Impl> train_gaussian_nb(
    const ClassifierSpec& spec, const Dataset& train) {
    auto m = std::make_shared<GaussianNbModel>();
    m->class_ids = seen_classes(train);
    double floor = spec.nb.variance_floor;
    for (int cls : m->class_ids) {
        std::vector<double> mu(train.d, 0.0), var(train.d, 0.0);
        std::size_t count = 0;
        for (std::size_t r = 0; r < train.n; ++r) {
            if (train.labels[r] != cls) continue;
            ++count;
            for (std::size_t c = 0; c < train.d; ++c) mu[c] += train.at(r, c);
        }
        for (double& v : mu) v /= static_cast<double>(count);
        for (std::size_t r = 0; r < train.n; ++r) {
            if (train.labels[r] != cls) continue;
            for (std::size_t c = 0; c < train.d; ++c) {
                double dv = train.at(r, c) - mu[c];
                var[c] += dv * dv;
            }
        }
        for (double& v : var) {
            v /= static_cast<double>(count);
            v = std::max(v, floor);
        }
        m->log_prior.push_back(std::log(static_cast<double>(count) /
                                        static_cast<double>(train.n)));
        m->means.push_back(std::move(mu));
        m->vars.push_back(std::move(var));
    }
    return m;
}

struct KnnModel final : TrainedModel::Impl {
    Standardizer scaler;
    std::vector<double> points; // standardized, n x d
    std::vector<int> labels;
    int k = 5;

    int predict_row(std::span<const double> row) const override {
        std::vector<double> x;
        scaler.apply(row, x);
        std::size_t n = labels.size(), d = x.size();
        std::vector<std::pair<double, std::size_t>> dist(n);
        for (std::size_t r = 0; r < n; ++r) {
            double s = 0.0;
            const double* p = points.data() + r * d;
            for (std::size_t c = 0; c < d; ++c) {
                double dv = x[c] - p[c];
                s += dv * dv;
            }
            dist[r] = {s, r};
        }
        std::size_t kk = std::min<std::size_t>(static_cast<std::size_t>(k), n);
        std::partial_sort(dist.begin(),
                          dist.begin() + static_cast<std::ptrdiff_t>(kk),
                          dist.end()); // (distance, index) orders ties
        std::vector<int> votes(static_cast<std::size_t>(classes), 0);
        for (std::size_t i = 0; i < kk; ++i)
            ++votes[static_cast<std::size_t>(labels[dist[i].second])];
        return majority_label(votes);
    }
};

std::shared_ptr<const TrainedModel::Impl> train_knn(const ClassifierSpec& spec,
                                                    const Dataset& train) {
    auto m = std::make_shared<KnnModel>();
    m->scaler = Standardizer::fit(train);
    m->points = m->scaler.transform_all(train);
    m->labels = train.labels;
    m->k = spec.knn.k;
    return m;
}

struct TreeNode {
    int feature = -1; // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    int label = 0;
};

struct TreeParams {
    int max_depth = 12;
    int min_leaf = 2;
    int features_per_split = 0; // 0 = all features, no sampling
};

class TreeBuilder {
  public:
    TreeBuilder(const Dataset& data, const std::vector<std::size_t>& rows,
                const TreeParams& params, rng64* rng)
        : data_(data), params_(params), rng_(rng) {
        build(rows, 0);
    }

    std::vector<TreeNode> take() { return std::move(nodes_); }

  private:
    const Dataset& data_;
    TreeParams params_;
    rng64* rng_;
    std::vector<TreeNode> nodes_;

    static double gini(const std::vector<int>& counts, std::size_t total) {
        double g = 1.0;
        for (int c : counts) {
            double p = static_cast<double>(c) / static_cast<double>(total);
            g -= p * p;
        }
        return g;
    }

    std::vector<std::size_t> candidate_features() {
        std::size_t d = data_.d;
        std::vector<std::size_t> feats(d);
        std::iota(feats.begin(), feats.end(), 0);
        if (rng_ == nullptr || params_.features_per_split <= 0 ||
            static_cast<std::size_t>(params_.features_per_split) >= d)
            return feats;
        std::size_t m = static_cast<std::size_t>(params_.features_per_split);
        for (std::size_t i = 0; i < m; ++i) {
            std::size_t j =
                i + static_cast<std::size_t>(uniform_below(*rng_, d - i));
            std::swap(feats[i], feats[j]);
        }
        feats.resize(m);
        std::sort(feats.begin(), feats.end()); // lowest-index tie-breaks
        return feats;
    }

    int build(const std::vector<std::size_t>& rows, int depth) {
        int node_id = static_cast<int>(nodes_.size());
        nodes_.emplace_back();

        std::vector<int> counts(static_cast<std::size_t>(data_.class_count), 0);
        for (std::size_t r : rows)
            ++counts[static_cast<std::size_t>(data_.labels[r])];
        int label = majority_label(counts);
        nodes_[static_cast<std::size_t>(node_id)].label = label;

        std::size_t m = rows.size();
        bool pure = counts[static_cast<std::size_t>(label)] ==
                    static_cast<int>(m);
        if (depth >= params_.max_depth || pure ||
            m < 2 * static_cast<std::size_t>(params_.min_leaf))
            return node_id;

        double parent_gini = gini(counts, m);
        double best_score = parent_gini - 1e-12; // require real improvement
        int best_feature = -1;
        double best_threshold = 0.0;

        std::vector<std::pair<double, int>> vals(m);
        for (std::size_t f : candidate_features()) {
            for (std::size_t i = 0; i < m; ++i)
                vals[i] = {data_.at(rows[i], f), data_.labels[rows[i]]};
            std::sort(vals.begin(), vals.end());
            if (vals.front().first == vals.back().first) continue;

            std::vector<int> left(static_cast<std::size_t>(data_.class_count),
                                  0);
            std::vector<int> right = counts;
            for (std::size_t i = 1; i < m; ++i) {
                int y = vals[i - 1].second;
                ++left[static_cast<std::size_t>(y)];
                --right[static_cast<std::size_t>(y)];
                if (vals[i - 1].first == vals[i].first) continue;
                if (i < static_cast<std::size_t>(params_.min_leaf) ||
                    m - i < static_cast<std::size_t>(params_.min_leaf))
                    continue;
                double score =
                    (static_cast<double>(i) * gini(left, i) +
                     static_cast<double>(m - i) * gini(right, m - i)) /
                    static_cast<double>(m);
                if (score < best_score) {
                    best_score = score;
                    best_feature = static_cast<int>(f);
                    best_threshold =
                        vals[i - 1].first +
                        (vals[i].first - vals[i - 1].first) / 2.0;
                }
            }
        }
        if (best_feature < 0) return node_id;

        std::vector<std::size_t> left_rows, right_rows;
        left_rows.reserve(m);
        right_rows.reserve(m);
        for (std::size_t r : rows) {
            if (data_.at(r, static_cast<std::size_t>(best_feature)) <
                best_threshold)
                left_rows.push_back(r);
            else
                right_rows.push_back(r);
        }
        if (left_rows.empty() || right_rows.empty()) return node_id;

        nodes_[static_cast<std::size_t>(node_id)].feature = best_feature;
        nodes_[static_cast<std::size_t>(node_id)].threshold = best_threshold;
        int left_id = build(left_rows, depth + 1);
        nodes_[static_cast<std::size_t>(node_id)].left = left_id;
        int right_id = build(right_rows, depth + 1);
        nodes_[static_cast<std::size_t>(node_id)].right = right_id;
        return node_id;
    }
};

int tree_predict(const std::vector<TreeNode>& nodes,
                 std::span<const double> row) {
    int id = 0;
    for (;;) {
        const TreeNode& node = nodes[static_cast<std::size_t>(id)];
        if (node.feature < 0) return node.label;
        id = row[static_cast<std::size_t>(node.feature)] < node.threshold
                 ? node.left
                 : node.right;
    }
}

struct DecisionTreeModel final : TrainedModel::Impl {
    std::vector<TreeNode> nodes;
    int predict_row(std::span<const double> row) const override {
        return tree_predict(nodes, row);
    }
};

std::shared_ptr<const TrainedModel::Impl> train_decision_tree(
    const ClassifierSpec& spec, const Dataset& train) {
    auto m = std::make_shared<DecisionTreeModel>();
    std::vector<std::size_t> rows(train.n);
    std::iota(rows.begin(), rows.end(), 0);
    TreeParams params{spec.tree.max_depth, spec.tree.min_leaf, 0};
    TreeBuilder builder(train, rows, params, nullptr);
    m->nodes = builder.take();
    return m;
}

struct RandomForestModel final : TrainedModel::Impl {
    std::vector<std::vector<TreeNode>> trees;

    int predict_row(std::span<const double> row) const override {
        std::vector<int> votes(static_cast<std::size_t>(classes), 0);
        for (const auto& t : trees)
            ++votes[static_cast<std::size_t>(tree_predict(t, row))];
        return majority_label(votes);
    }
};

std::shared_ptr<const TrainedModel::Impl> train_random_forest(
    const ClassifierSpec& spec, const Dataset& train) {
    auto m = std::make_shared<RandomForestModel>();
    int mtry = spec.forest.features_per_split;
    if (mtry == 0)
        mtry = std::max(
            1, static_cast<int>(std::sqrt(static_cast<double>(train.d))));
    mtry = std::min<int>(mtry, static_cast<int>(train.d));
    TreeParams params{spec.forest.max_depth, spec.forest.min_leaf, mtry};

    for (int t = 0; t < spec.forest.trees; ++t) {
        rng64 rng(derive_seed(spec.seed,
                              {seed_purpose::model,
                               static_cast<std::uint64_t>(t)}));
        std::vector<std::size_t> rows(train.n);
        for (std::size_t i = 0; i < train.n; ++i)
            rows[i] = static_cast<std::size_t>(uniform_below(rng, train.n));
        TreeBuilder builder(train, rows, params, &rng);
        m->trees.push_back(builder.take());
    }
    return m;
}

} // namespace

TrainedModel::TrainedModel(std::shared_ptr<const Impl> impl)
    : impl_(std::move(impl)) {}

int TrainedModel::predict(std::span<const double> row) const {
    if (row.size() != impl_->features)
        throw std::invalid_argument(
            "predict: row has " + std::to_string(row.size()) +
            " values, model expects " + std::to_string(impl_->features));
    for (double v : row)
        if (!std::isfinite(v))
            throw std::invalid_argument("predict: row contains a non-finite value");
    return impl_->predict_row(row);
}

int TrainedModel::class_count() const { return impl_->classes; }
std::size_t TrainedModel::feature_count() const { return impl_->features; }
const ClassifierSpec& TrainedModel::spec() const { return impl_->spec; }

TrainedModel train(const ClassifierSpec& spec, const Dataset& train_data) {
    spec.validate();
    if (train_data.n < 1) throw input_error("training set is empty");
    require_complete(train_data, "training set");

    std::shared_ptr<const TrainedModel::Impl> impl;
    switch (spec.kind) {
        case ModelKind::logistic_regression:
            impl = train_logistic(spec, train_data);
            break;
        case ModelKind::gaussian_nb:
            impl = train_gaussian_nb(spec, train_data);
            break;
        case ModelKind::knn:
            impl = train_knn(spec, train_data);
            break;
        case ModelKind::decision_tree:
            impl = train_decision_tree(spec, train_data);
            break;
        case ModelKind::random_forest:
            impl = train_random_forest(spec, train_data);
            break;
    }
    auto mut = std::const_pointer_cast<TrainedModel::Impl>(impl);
    mut->spec = spec;
    mut->classes = train_data.class_count;
    mut->features = train_data.d;
    return TrainedModel(impl);
}

double accuracy(const TrainedModel& model, const Dataset& test) {
    if (test.n < 1) throw input_error("test set is empty");
    require_complete(test, "test set");
    std::size_t correct = 0;
    for (std::size_t r = 0; r < test.n; ++r) {
        std::span<const double> row(test.features.data() + r * test.d, test.d);
        if (model.predict(row) == test.labels[r]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(test.n);
}

std::vector<std::string> suite_member_names(
    const std::vector<ClassifierSpec>& suite) {
    std::vector<std::string> names;
    names.reserve(suite.size());
    std::map<std::string, int> totals, seen;
    for (const auto& spec : suite) ++totals[to_string(spec.kind)];
    for (const auto& spec : suite) {
        std::string base = to_string(spec.kind);
        int occurrence = ++seen[base];
        names.push_back(totals[base] > 1
                            ? base + "#" + std::to_string(occurrence)
                            : base);
    }
    return names;
}

AccuracyVector evaluate_suite(const std::vector<ClassifierSpec>& suite,
                              const TrainTestSplit& split, unsigned jobs) {
    if (suite.empty()) throw input_error("classifier suite is empty");
    for (const auto& spec : suite) spec.validate();
    TrainTestSplit complete = impute_train_mean(split);
    std::vector<std::string> names = suite_member_names(suite);

    AccuracyVector result;
    result.entries.resize(suite.size());
    parallel_for(suite.size(), jobs, [&](std::size_t i) {
        TrainedModel model = train(suite[i], complete.train);
        result.entries[i] = {names[i], accuracy(model, complete.test)};
    });
    return result;
}

} // namespace dq
