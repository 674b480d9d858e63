#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "airway/baseline_detectors.hpp"
#include "airway/errors.hpp"

using airway::LogDiffSeries;

namespace {

LogDiffSeries series_of(std::vector<double> v) {
    LogDiffSeries y;
    y.y = std::move(v);
    return y;
}

LogDiffSeries random_series(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<double> v(n);
    for (auto& x : v) x = noise(gen);
    return series_of(std::move(v));
}

// Naive O(n^3) reference: direct mean/SS per segment, same lexicographic tie
// rule, no prefix sums.
struct NaivePair {
    int k1 = 0;
    int k2 = 0;
    double cost = 0.0;
};

double naive_seg_cost(const std::vector<double>& v, int b, int e) {
    double mean = 0.0;
    for (int i = b; i < e; ++i) mean += v[static_cast<std::size_t>(i)];
    mean /= static_cast<double>(e - b);
    double ss = 0.0;
    for (int i = b; i < e; ++i) {
        const double d = v[static_cast<std::size_t>(i)] - mean;
        ss += d * d;
    }
    return ss;
}

NaivePair naive_two_changepoints(const std::vector<double>& v, int sep) {
    const auto n = static_cast<int>(v.size());
    NaivePair best;
    best.cost = std::numeric_limits<double>::infinity();
    for (int k1 = sep; k1 + sep <= n - sep; ++k1) {
        for (int k2 = k1 + sep; k2 <= n - sep; ++k2) {
            const double cost = naive_seg_cost(v, 0, k1) + naive_seg_cost(v, k1, k2) +
                                naive_seg_cost(v, k2, n);
            if (cost < best.cost) best = {k1, k2, cost};
        }
    }
    return best;
}

}  // namespace

TEST_CASE("threshold call on a proximal-flat distal-high signal") {
    std::vector<double> v(100, 0.0);
    for (std::size_t i = 75; i < 100; ++i) v[i] = 1.0;
    const auto call = airway::threshold_detect(series_of(v));
    REQUIRE(call.has_value());
    CHECK(call->q3 == doctest::Approx(0.45));
    CHECK(call->point_mm == 99);
    CHECK(call->run_start_mm == 75);
    CHECK(call->smoothed.size() == 100);
    CHECK(call->exceeds[74] == 0);
    CHECK(call->exceeds[75] == 1);
}

TEST_CASE("threshold on a rising ramp calls the distal end") {
    std::vector<double> v(80);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = 0.01 * static_cast<double>(i);
    const auto call = airway::threshold_detect(series_of(v));
    REQUIRE(call.has_value());
    CHECK(call->point_mm == 79);
    CHECK(call->run_start_mm > 0);
}

TEST_CASE("threshold makes no call on a constant signal") {
    CHECK_FALSE(airway::threshold_detect(series_of(std::vector<double>(50, 0.3))).has_value());
    CHECK_THROWS_AS(airway::threshold_detect(series_of({1.0, 2.0, 3.0})), airway::InputError);
}

TEST_CASE("threshold agrees with a direct reimplementation on random signals") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const LogDiffSeries y = random_series(60 + (seed % 80), 9000 + seed);
        const auto n = static_cast<int>(y.size());

        std::vector<double> smoothed(y.size());
        for (int i = 0; i < n; ++i) {
            const int lo = std::max(0, i - 2);
            const int hi = std::min(n - 1, i + 2);
            double s = 0.0;
            for (int j = lo; j <= hi; ++j) s += y.y[static_cast<std::size_t>(j)];
            smoothed[static_cast<std::size_t>(i)] = s / (hi - lo + 1);
        }
        std::vector<double> sorted = smoothed;
        std::sort(sorted.begin(), sorted.end());
        const double h = 0.75 * static_cast<double>(n - 1);
        const auto lo_idx = static_cast<std::size_t>(h);
        const double q3 = sorted[lo_idx] +
                          (h - static_cast<double>(lo_idx)) * (sorted[lo_idx + 1] - sorted[lo_idx]);
        int expect = -1;
        for (int i = n - 1; i >= 0 && expect < 0; --i)
            if (smoothed[static_cast<std::size_t>(i)] > q3) expect = i;

        const auto call = airway::threshold_detect(y);
        REQUIRE(call.has_value());
        CHECK(call->point_mm == expect);
        CHECK(call->q3 == doctest::Approx(q3).epsilon(1e-12));
    }
}

TEST_CASE("penalized cost finds a clean single step") {
    std::vector<double> v(120, 0.0);
    for (std::size_t i = 60; i < 120; ++i) v[i] = 1.0;
    const auto call = airway::penalized_cost_detect(series_of(v));
    CHECK(call.cost == doctest::Approx(0.0));
    const bool touches_step = (call.k1 == 60) || (call.k2 == 60);
    CHECK(touches_step);
    CHECK(call.point_mm == call.k2);
    CHECK(call.beta_max >= 0.0);
}

TEST_CASE("penalized cost recovers a two-step plateau exactly") {
    std::vector<double> v(120, 0.0);
    for (std::size_t i = 40; i < 80; ++i) v[i] = 2.0;
    const auto call = airway::penalized_cost_detect(series_of(v));
    CHECK(call.k1 == 40);
    CHECK(call.k2 == 80);
    CHECK(call.point_mm == 80);
    CHECK(call.cost == doctest::Approx(0.0));
    CHECK(call.beta_max > 0.0);
}

TEST_CASE("penalized cost on a constant signal picks the smallest pair") {
    const auto call = airway::penalized_cost_detect(series_of(std::vector<double>(60, 5.0)));
    CHECK(call.k1 == 20);
    CHECK(call.k2 == 40);
    CHECK(call.cost == doctest::Approx(0.0));
    CHECK(call.beta_max == doctest::Approx(0.0));
}

TEST_CASE("penalized cost matches the naive exhaustive search") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        LogDiffSeries y = random_series(60 + (seed * 7) % 141, 500 + seed);
        // Mix in occasional real steps so both flat and structured cases occur.
        if (seed % 3 == 0) {
            const std::size_t cut = y.size() / 2;
            for (std::size_t i = cut; i < y.size(); ++i) y.y[i] += 2.5;
        }
        const NaivePair expect = naive_two_changepoints(y.y, 20);
        const auto call = airway::penalized_cost_detect(y);
        CHECK(call.k1 == expect.k1);
        CHECK(call.k2 == expect.k2);
        CHECK(call.cost == doctest::Approx(expect.cost).epsilon(1e-9));
    }
}

TEST_CASE("penalized cost is invariant to adding a constant") {
    LogDiffSeries y = random_series(100, 4242);
    const auto base = airway::penalized_cost_detect(y);
    for (double& v : y.y) v += 3.0;
    const auto shifted = airway::penalized_cost_detect(y);
    CHECK(base.k1 == shifted.k1);
    CHECK(base.k2 == shifted.k2);
    CHECK(base.cost == doctest::Approx(shifted.cost).epsilon(1e-6));
}

TEST_CASE("penalized cost needs room for the margins") {
    CHECK_THROWS_AS(airway::penalized_cost_detect(random_series(59, 2)), airway::InputError);
    CHECK_NOTHROW(airway::penalized_cost_detect(random_series(60, 2)));
}

TEST_CASE("detectors are deterministic") {
    const LogDiffSeries y = random_series(90, 31);
    const auto t1 = airway::threshold_detect(y);
    const auto t2 = airway::threshold_detect(y);
    REQUIRE(t1.has_value());
    REQUIRE(t2.has_value());
    CHECK(t1->point_mm == t2->point_mm);
    const auto p1 = airway::penalized_cost_detect(y);
    const auto p2 = airway::penalized_cost_detect(y);
    CHECK(p1.k1 == p2.k1);
    CHECK(p1.k2 == p2.k2);
}
