// End-to-end acceptance checks. Each criterion prints one PASS/FAIL line so
// the binary's output doubles as a checklist.
#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numeric>
#include <string>
#include <vector>

#include "dq/corruption.hpp"
#include "dq/dataset.hpp"
#include "dq/metrics.hpp"
#include "dq/models.hpp"
#include "dq/rng.hpp"
#include "dq/sweep.hpp"
#include "support/proc.hpp"
#include "support/synth.hpp"

namespace {

bool announce(int num, const char* name, bool pass) {
    std::printf("criterion %d (%s): %s\n", num, name, pass ? "PASS" : "FAIL");
    std::fflush(stdout);
    return pass;
}

// Shared degradation study: one dataset, a missing-value sweep over the full
// level grid and a fuzzing sweep over the low half, ten iterations each.
constexpr std::size_t kBlobInformative = 1;

struct Curves {
    dq::SweepResult missing;
    double missing_seconds = 0.0;
    dq::SweepResult fuzzing;
    double fuzzing_seconds = 0.0;
};

Curves compute_curves() {
    dq::Dataset data = synth::make_blobs(500, 5, 2, 6.0, 424242,
                                         kBlobInformative);
    dq::SweepConfig config;
    config.iterations = 10;
    config.scope = dq::InjectionTarget::whole_dataset;
    config.master_seed = 20240501;
    config.jobs = 0; // results are jobs-independent; use every core

    Curves out;
    using clock = std::chrono::steady_clock;

    config.error_types = {dq::ErrorType::missing};
    config.levels = dq::make_levels(0.0, 0.95, 0.05);
    auto t0 = clock::now();
    out.missing = dq::sweep_quality(data, config);
    out.missing_seconds = std::chrono::duration<double>(clock::now() - t0)
                              .count();

    config.error_types = {dq::ErrorType::fuzzing};
    config.levels = dq::make_levels(0.0, 0.5, 0.05);
    t0 = clock::now();
    out.fuzzing = dq::sweep_quality(data, config);
    out.fuzzing_seconds = std::chrono::duration<double>(clock::now() - t0)
                              .count();

    if (std::getenv("DQ_DUMP_CURVES")) {
        for (const auto* r : {&out.missing, &out.fuzzing}) {
            for (const dq::SweepAggregate& a : r->aggregates)
                std::printf("[curve %s] level=%.2f acc=%.4f qa=%.4f "
                            "qa1=%.4f qa2=%.4f\n",
                            dq::to_string(a.error).c_str(), a.level,
                            a.mean_accuracy, *a.mean_qa, *a.mean_qa1,
                            *a.mean_qa2);
        }
        std::printf("[curve timing] missing=%.1fs fuzzing=%.1fs\n",
                    out.missing_seconds, out.fuzzing_seconds);
        std::fflush(stdout);
    }
    return out;
}

const Curves& curves() {
    static Curves c = compute_curves();
    return c;
}

std::vector<double> rank_values(const std::vector<double>& v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(v.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
        double shared = (double(i) + double(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
        i = j + 1;
    }
    return ranks;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    double n = double(x.size());
    double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    return pearson(rank_values(x), rank_values(y));
}

} // namespace

TEST_CASE("criterion 1: accuracy component identities") {
    bool ok = std::fabs(dq::q_a1(0.84, 2) - 0.32) <= 1e-12;
    for (int c = 2; c <= 10; ++c) {
        ok = ok && std::fabs(dq::q_a1(1.0, c)) <= 1e-12;
        ok = ok && std::fabs(dq::q_a1(1.0 / c, c) - 1.0) <= 1e-12;
        ok = ok && std::fabs(dq::q_a1(0.5 / c, c) - 1.0) <= 1e-12;
        ok = ok && std::fabs(dq::q_a1(0.0, c) - 1.0) <= 1e-12;
    }
    CHECK(announce(1, "accuracy component identities", ok));
}

TEST_CASE("criterion 2: accuracy component random oracle") {
    // independent straight-line transcription of the score definition
    auto oracle = [](double accuracy, int classes) {
        double chance = 1.0 / classes;
        double gate = accuracy > chance ? 1.0 : 0.0;
        return 1.0 -
               ((classes * accuracy - 1.0) / (classes - 1.0)) * gate;
    };
    dq::rng64 rng(20240101);
    bool ok = true;
    for (int i = 0; i < 1000; ++i) {
        double a = dq::uniform_unit(rng);
        int c = 2 + int(dq::uniform_below(rng, 11));
        if (std::fabs(dq::q_a1(a, c) - oracle(a, c)) > 1e-12) ok = false;
    }
    CHECK(announce(2, "accuracy component random oracle", ok));
}

TEST_CASE("criterion 3: max combiner dominance") {
    dq::rng64 rng(20240202);
    bool ok = true;
    for (int i = 0; i < 10000; ++i) {
        double q1 = dq::uniform_unit(rng);
        double q2 = dq::uniform_unit(rng);
        double alpha = dq::uniform_unit(rng);
        double blend = dq::combine_alpha(q1, q2, alpha);
        if (dq::combine_max(q1, q2) + 1e-12 < blend) ok = false;
    }
    // exact endpoints and the tied case
    ok = ok && dq::combine_alpha(0.37, 0.81, 1.0) == 0.37;
    ok = ok && dq::combine_alpha(0.37, 0.81, 0.0) == 0.81;
    ok = ok && dq::combine_max(0.37, 0.81) == 0.81;
    for (double v : {0.0, 0.25, 0.6, 1.0}) {
        double blend = dq::combine_alpha(v, v, 0.3);
        ok = ok && std::fabs(blend - dq::combine_max(v, v)) <= 1e-15;
    }
    CHECK(announce(3, "max combiner dominance", ok));
}

TEST_CASE("criterion 4: injector exactness") {
    dq::rng64 rng(20240303);
    bool ok = true;
    for (int trial = 0; trial < 500 && ok; ++trial) {
        std::size_t n = 2 + dq::uniform_below(rng, 199);  // 2..200
        std::size_t d = 1 + dq::uniform_below(rng, 20);   // 1..20
        double rate = trial % 2 == 0
                          ? dq::uniform_unit(rng)
                          : 0.05 * double(dq::uniform_below(rng, 20));
        std::uint64_t seed = rng();

        std::vector<std::vector<double>> rows(n, std::vector<double>(d));
        std::vector<int> labels(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < d; ++j)
                rows[i][j] = dq::uniform_range(rng, -5.0, 5.0);
            labels[i] = int(i % 2);
        }
        dq::Dataset data = synth::make_dataset(rows, labels, 2);

        dq::Dataset miss = dq::inject_missing(data, rate, seed);
        std::size_t holes = 0;
        for (double v : miss.features)
            if (dq::is_missing(v)) ++holes;
        ok = ok && holes == dq::scaled_count(rate, n * d);
        ok = ok && miss.labels == data.labels;

        dq::Dataset outl = dq::inject_outliers(data, rate, seed + 1);
        std::size_t moved = 0;
        for (std::size_t i = 0; i < n && ok; ++i)
            for (std::size_t j = 0; j < d; ++j) {
                double v = outl.at(i, j);
                if (v == data.at(i, j)) continue;
                ++moved;
                double lo = data.schema[j].observed_min;
                double hi = data.schema[j].observed_max;
                ok = ok && (v < lo || v > hi);
            }
        ok = ok && moved == dq::scaled_count(rate, n * d);
        ok = ok && outl.labels == data.labels;

        dq::Dataset fuzz = dq::inject_fuzzing(data, rate, seed + 2);
        std::size_t replaced = 0;
        for (std::size_t i = 0; i < n; ++i) {
            bool same = fuzz.labels[i] == data.labels[i];
            for (std::size_t j = 0; j < d && same; ++j)
                same = fuzz.at(i, j) == data.at(i, j);
            if (!same) ++replaced;
        }
        ok = ok && replaced == dq::scaled_count(rate, n);
        ok = ok && fuzz.class_count == data.class_count;
        ok = ok && fuzz.schema.size() == data.schema.size();
    }
    CHECK(announce(4, "injector exactness", ok));
}

TEST_CASE("criterion 5: missing sweep quality response") {
    const Curves& c = curves();
    const auto& aggs = c.missing.aggregates;
    REQUIRE(aggs.size() == 20);

    std::vector<double> levels, qa;
    for (const dq::SweepAggregate& a : aggs) {
        levels.push_back(a.level);
        qa.push_back(*a.mean_qa);
    }
    bool clean_good = qa[0] <= 0.3;
    bool heavy_bad = true;
    for (std::size_t i = 0; i < aggs.size(); ++i)
        if (levels[i] >= 0.7 - 1e-9 && qa[i] < 0.6) heavy_bad = false;
    double rho = spearman(levels, qa);
    bool monotone = rho >= 0.8;
    bool fast = c.missing_seconds < 300.0;

    CHECK(clean_good);
    CHECK(heavy_bad);
    CHECK(monotone);
    CHECK(fast);
    CHECK(announce(5, "missing sweep quality response",
                   clean_good && heavy_bad && monotone && fast));
}

TEST_CASE("criterion 6: fuzzing sweep stability") {
    const Curves& c = curves();
    const auto& aggs = c.fuzzing.aggregates;
    REQUIRE(aggs.size() == 11);
    double base = *aggs[0].mean_qa;
    double worst = 0.0;
    for (const dq::SweepAggregate& a : aggs)
        worst = std::max(worst, std::fabs(*a.mean_qa - base));
    bool stable = worst <= 0.15;
    bool fast = c.fuzzing_seconds < 180.0;
    CHECK(stable);
    CHECK(fast);
    CHECK(announce(6, "fuzzing sweep stability", stable && fast));
}

TEST_CASE("criterion 7: accuracy cliff shape") {
    const Curves& c = curves();
    const auto& aggs = c.missing.aggregates;
    REQUIRE(aggs.size() == 20);
    std::vector<double> drops;
    for (std::size_t i = 0; i + 1 < aggs.size(); ++i)
        drops.push_back(aggs[i].mean_accuracy - aggs[i + 1].mean_accuracy);
    double max_drop = *std::max_element(drops.begin(), drops.end());
    std::vector<double> sorted = drops;
    std::sort(sorted.begin(), sorted.end());
    double median = sorted[sorted.size() / 2];
    bool cliff = max_drop >= 2.0 * median;
    CHECK(cliff);
    CHECK(announce(7, "accuracy cliff shape", cliff));
}

TEST_CASE("criterion 8: bit-identical reports") {
    std::string dir = proc::temp_dir();
    dq::Dataset data = synth::make_blobs(200, 4, 2, 6.0, 777);
    std::string csv_path = dir + "/data.csv";
    dq::save_csv(data, csv_path);

    std::string base =
        "assess --data " + csv_path + " --label y --seed 123 --out ";
    proc::Result a = proc::run_cli(base + dir + "/a.json --jobs 1", dir);
    proc::Result b = proc::run_cli(base + dir + "/b.json --jobs 1", dir);
    proc::Result c = proc::run_cli(base + dir + "/c.json --jobs 8", dir);

    bool ran = a.exit_code == 0 && b.exit_code == 0 && c.exit_code == 0;
    std::string bytes = proc::read_file(dir + "/a.json");
    bool rerun_same = ran && !bytes.empty() &&
                      bytes == proc::read_file(dir + "/b.json");
    bool jobs_same = ran && bytes == proc::read_file(dir + "/c.json");
    bool stdout_same = a.out == b.out && a.out == c.out;

    CHECK(ran);
    CHECK(rerun_same);
    CHECK(jobs_same);
    CHECK(stdout_same);
    CHECK(announce(8, "bit-identical reports",
                   ran && rerun_same && jobs_same && stdout_same));
}

TEST_CASE("criterion 9: level interpretation") {
    bool ok = dq::interpret(0.29) == dq::QualityLevel::good &&
              dq::interpret(0.32) == dq::QualityLevel::medium &&
              dq::interpret(0.42) == dq::QualityLevel::medium &&
              dq::interpret(0.61) == dq::QualityLevel::bad;
    CHECK(announce(9, "level interpretation", ok));
}
