#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "dq/error.hpp"
#include "dq/metrics.hpp"
#include "dq/rng.hpp"
#include "support/synth.hpp"

using dq::ErrorType;

namespace {

dq::AccuracyVector acc_vec(std::initializer_list<double> values) {
    dq::AccuracyVector v;
    int i = 0;
    for (double x : values) v.entries.push_back({"m" + std::to_string(i++), x});
    return v;
}

} // namespace

TEST_CASE("accuracy component follows the closed form") {
    CHECK(dq::q_a1(0.84, 2) == doctest::Approx(0.32).epsilon(1e-12));
    CHECK(dq::q_a1(1.0, 2) == 0.0);
    CHECK(dq::q_a1(1.0, 7) == 0.0);
    CHECK(dq::q_a1(0.9, 3) == doctest::Approx(1.0 - (3 * 0.9 - 1) / 2.0));
    // at or below chance the gate closes and the score pins to 1
    for (int c = 2; c <= 10; ++c) {
        CHECK(dq::q_a1(1.0 / c, c) == 1.0);
        CHECK(dq::q_a1(1.0 / c - 0.01, c) == 1.0);
        CHECK(dq::q_a1(0.0, c) == 1.0);
        CHECK(dq::q_a1(1.0 / c + 1e-9, c) < 1.0);
    }
    CHECK_THROWS_AS(dq::q_a1(0.5, 1), std::invalid_argument);
}

TEST_CASE("gates are strict") {
    CHECK(dq::delta1(0.5, 2) == 0);
    CHECK(dq::delta1(0.5 + 1e-12, 2) == 1);
    CHECK(dq::delta2(0.05, 0.05) == 0);
    CHECK(dq::delta2(0.05 + 1e-12, 0.05) == 1);
    CHECK(dq::delta2(0.0, 0.05) == 0);
}

TEST_CASE("sensitivity component gates, averages and clamps") {
    std::map<ErrorType, double> mixed{{ErrorType::missing, 0.12},
                                      {ErrorType::outlier, 0.02},
                                      {ErrorType::fuzzing, 0.02}};
    CHECK(dq::q_a2(mixed, 0.05, 10.0) == doctest::Approx(0.4).epsilon(1e-12));

    std::map<ErrorType, double> strong{{ErrorType::missing, 0.10},
                                       {ErrorType::outlier, 0.10},
                                       {ErrorType::fuzzing, 0.10}};
    CHECK(dq::q_a2(strong, 0.05, 10.0) == 1.0);
    std::map<ErrorType, double> huge{{ErrorType::missing, 0.9},
                                     {ErrorType::outlier, 0.9},
                                     {ErrorType::fuzzing, 0.9}};
    CHECK(dq::q_a2(huge, 0.05, 10.0) == 1.0);

    std::map<ErrorType, double> quiet{{ErrorType::missing, 0.05},
                                      {ErrorType::outlier, 0.01},
                                      {ErrorType::fuzzing, 0.0}};
    CHECK(dq::q_a2(quiet, 0.05, 10.0) == 0.0);

    std::map<ErrorType, double> single{{ErrorType::missing, 0.08}};
    CHECK(dq::q_a2(single, 0.05, 10.0) ==
          doctest::Approx(0.8).epsilon(1e-12));
    CHECK(dq::q_a2(single, 0.05, 5.0) == doctest::Approx(0.4).epsilon(1e-12));

    CHECK_THROWS_AS(dq::q_a2({}, 0.05, 10.0), std::invalid_argument);
    CHECK_THROWS_AS(dq::q_a2(single, 0.05, 0.0), std::invalid_argument);
}

TEST_CASE("mean and delta accuracy validate their inputs") {
    CHECK(dq::mean_accuracy(acc_vec({0.5, 0.7, 0.9})) ==
          doctest::Approx(0.7).epsilon(1e-12));
    CHECK_THROWS_AS(dq::mean_accuracy({}), std::invalid_argument);

    dq::AccuracyVector base = acc_vec({0.9, 0.8});
    dq::AccuracyVector moved = acc_vec({0.7, 0.9});
    CHECK(dq::delta_accuracy(base, moved) ==
          doctest::Approx(0.15).epsilon(1e-12));
    CHECK_THROWS_AS(dq::delta_accuracy(base, acc_vec({0.5})),
                    std::invalid_argument);
    dq::AccuracyVector renamed = acc_vec({0.7, 0.9});
    renamed.entries[1].model = "other";
    CHECK_THROWS_AS(dq::delta_accuracy(base, renamed), std::invalid_argument);
}

TEST_CASE("combiners") {
    CHECK(dq::combine_max(0.3, 0.7) == 0.7);
    CHECK(dq::combine_max(0.7, 0.3) == 0.7);
    CHECK(dq::combine_alpha(0.4, 0.8, 1.0) == 0.4);
    CHECK(dq::combine_alpha(0.4, 0.8, 0.0) == 0.8);
    CHECK(dq::combine_alpha(0.4, 0.8, 0.25) ==
          doctest::Approx(0.7).epsilon(1e-12));
    CHECK_THROWS_AS(dq::combine_alpha(0.4, 0.8, 1.5), std::invalid_argument);
}

TEST_CASE("level interpretation uses inclusive upper bounds") {
    CHECK(dq::interpret(0.0) == dq::QualityLevel::good);
    CHECK(dq::interpret(0.29) == dq::QualityLevel::good);
    CHECK(dq::interpret(0.3) == dq::QualityLevel::good);
    CHECK(dq::interpret(0.32) == dq::QualityLevel::medium);
    CHECK(dq::interpret(0.42) == dq::QualityLevel::medium);
    CHECK(dq::interpret(0.6) == dq::QualityLevel::medium);
    CHECK(dq::interpret(0.61) == dq::QualityLevel::bad);
    CHECK(dq::interpret(1.0) == dq::QualityLevel::bad);

    dq::Thresholds strict{0.1, 0.2};
    CHECK(dq::interpret(0.15, strict) == dq::QualityLevel::medium);
    dq::Thresholds bad{0.6, 0.3};
    CHECK_THROWS_AS(dq::interpret(0.15, bad), dq::input_error);
}

TEST_CASE("seed schedule is per-resample and per-error") {
    dq::AssessConfig config;
    config.resamples = 4;
    config.master_seed = 42;
    auto seeds = dq::assess_seed_schedule(config);
    REQUIRE(seeds.size() == 4);
    std::set<std::uint64_t> all;
    for (const auto& s : seeds) {
        all.insert(s.split);
        REQUIRE(s.inject.size() == 3);
        for (const auto& [e, v] : s.inject) all.insert(v);
    }
    CHECK(all.size() == 16); // 4 split + 12 inject, all distinct

    config.trusted_test = synth::make_blobs(20, 2, 2, 3.0, 1);
    CHECK(dq::assess_seed_schedule(config).size() == 1);
}

TEST_CASE("config validation rejects malformed settings") {
    dq::Dataset d = synth::make_blobs(40, 3, 2, 4.0, 2);
    dq::AssessConfig config;
    config.resamples = 2;

    dq::AssessConfig bad = config;
    bad.p = 0.0;
    CHECK_THROWS_AS(dq::assess(d, bad), dq::input_error);
    bad = config;
    bad.p = 1.0;
    CHECK_THROWS_AS(dq::assess(d, bad), dq::input_error);
    bad = config;
    bad.resamples = 0;
    CHECK_THROWS_AS(dq::assess(d, bad), dq::input_error);
    bad = config;
    bad.train_fraction = 1.0;
    CHECK_THROWS_AS(dq::assess(d, bad), dq::input_error);
    bad = config;
    bad.suite.clear();
    CHECK_THROWS_AS(dq::assess(d, bad), dq::input_error);
    bad = config;
    bad.error_set = {ErrorType::missing, ErrorType::missing};
    CHECK_THROWS_AS(dq::assess(d, bad), dq::input_error);
    bad = config;
    bad.error_set.clear();
    CHECK_THROWS_AS(dq::assess(d, bad), dq::input_error);
    bad = config;
    bad.sensitivity_factor = 0.0;
    CHECK_THROWS_AS(dq::assess(d, bad), dq::input_error);
    bad = config;
    bad.thresholds = {0.7, 0.2};
    CHECK_THROWS_AS(dq::assess(d, bad), dq::input_error);
}

TEST_CASE("trusted test sets must match the dataset shape") {
    dq::Dataset d = synth::make_blobs(40, 3, 2, 4.0, 3);
    dq::AssessConfig config;
    config.trusted_test = synth::make_blobs(10, 2, 2, 4.0, 4);
    CHECK_THROWS_AS(dq::assess(d, config), dq::input_error);
    config.trusted_test = synth::make_blobs(10, 3, 4, 4.0, 5);
    CHECK_THROWS_AS(dq::assess(d, config), dq::input_error);
}

TEST_CASE("well-separated data scores good, shuffled labels score bad") {
    dq::Dataset good = synth::make_blobs(150, 4, 2, 8.0, 6, 2);
    dq::AssessConfig config;
    config.resamples = 5;
    dq::QualityScore score = dq::assess(good, config);
    CHECK(score.qa == dq::combine_max(score.qa1, score.qa2));
    CHECK(score.level == dq::QualityLevel::good);
    CHECK(score.qa <= 0.3);
    CHECK(score.mean_accuracy > 0.9);
    CHECK(score.resample_count == 5);
    REQUIRE(score.per_model.entries.size() == 5);
    REQUIRE(score.per_error_delta.size() == 3);

    dq::Dataset noise = good;
    dq::rng64 rng(99);
    for (auto& y : noise.labels) y = int(dq::uniform_below(rng, 2));
    dq::QualityScore bad = dq::assess(noise, config);
    CHECK(bad.qa1 > 0.6); // near-chance accuracy pins the first component
    CHECK(bad.level == dq::QualityLevel::bad);
}

TEST_CASE("assessment is deterministic and ignores the jobs count") {
    dq::Dataset d = synth::make_blobs(80, 3, 2, 3.0, 7);
    dq::AssessConfig config;
    config.resamples = 4;
    config.master_seed = 5;

    dq::QualityScore a = dq::assess(d, config);
    dq::QualityScore b = dq::assess(d, config);
    config.jobs = 8;
    dq::QualityScore c = dq::assess(d, config);
    for (const dq::QualityScore* s : {&b, &c}) {
        CHECK(a.qa == s->qa);
        CHECK(a.qa1 == s->qa1);
        CHECK(a.qa2 == s->qa2);
        CHECK(a.mean_accuracy == s->mean_accuracy);
        for (std::size_t m = 0; m < a.per_model.entries.size(); ++m)
            CHECK(a.per_model.entries[m].value ==
                  s->per_model.entries[m].value);
        for (const auto& [e, v] : a.per_error_delta)
            CHECK(v == s->per_error_delta.at(e));
    }

    config.jobs = 1;
    config.master_seed = 6;
    dq::QualityScore other = dq::assess(d, config);
    CHECK(other.qa1 != a.qa1); // different seed, different splits
}

TEST_CASE("trusted test mode runs a single pass on the whole dataset") {
    dq::Dataset train = synth::make_blobs(100, 3, 2, 6.0, 8);
    dq::Dataset test = synth::make_blobs(40, 3, 2, 6.0, 9);
    dq::AssessConfig config;
    config.trusted_test = test;
    config.resamples = 30; // ignored
    dq::QualityScore score = dq::assess(train, config);
    CHECK(score.resample_count == 1);
    CHECK(score.level == dq::QualityLevel::good);

    dq::QualityScore again = dq::assess(train, config);
    CHECK(score.qa == again.qa);
    CHECK(score.qa1 == again.qa1);
    CHECK(score.qa2 == again.qa2);
}

TEST_CASE("probe deltas cover exactly the configured error set") {
    dq::Dataset d = synth::make_blobs(60, 3, 2, 5.0, 10);
    dq::AssessConfig config;
    config.resamples = 2;
    config.error_set = {ErrorType::fuzzing};
    dq::QualityScore score = dq::assess(d, config);
    REQUIRE(score.per_error_delta.size() == 1);
    CHECK(score.per_error_delta.count(ErrorType::fuzzing) == 1);

    config.error_set = {ErrorType::missing, ErrorType::outlier};
    score = dq::assess(d, config);
    REQUIRE(score.per_error_delta.size() == 2);
    CHECK(score.per_error_delta.count(ErrorType::fuzzing) == 0);
}
