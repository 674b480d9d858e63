#include <doctest.h>

#include <cmath>
#include <vector>

#include "airway/area_series.hpp"
#include "airway/errors.hpp"

using airway::AreaSeries;

namespace {

AreaSeries unit_grid(const std::vector<double>& areas) {
    std::vector<double> arcs(areas.size());
    for (std::size_t i = 0; i < areas.size(); ++i) arcs[i] = static_cast<double>(i);
    return AreaSeries(arcs, areas);
}

AreaSeries sampled(double step, std::size_t count, double (*f)(double)) {
    std::vector<double> arcs(count);
    std::vector<double> areas(count);
    for (std::size_t i = 0; i < count; ++i) {
        arcs[i] = step * static_cast<double>(i);
        areas[i] = f(arcs[i]);
    }
    return AreaSeries(arcs, areas);
}

}  // namespace

TEST_CASE("validate rejects malformed series") {
    CHECK_THROWS_AS(AreaSeries({0.0, 1.0, 1.0}, {1.0, 1.0, 1.0}), airway::InputError);
    CHECK_THROWS_AS(AreaSeries({0.0, 2.0, 1.0}, {1.0, 1.0, 1.0}), airway::InputError);
    CHECK_THROWS_AS(AreaSeries({0.0, 1.0}, {1.0, 0.0}), airway::InputError);
    CHECK_THROWS_AS(AreaSeries({0.0, 1.0}, {1.0, -2.0}), airway::InputError);
    CHECK_THROWS_AS(AreaSeries({0.0}, {1.0}), airway::InputError);
    CHECK_THROWS_AS(AreaSeries({0.0, 1.0}, {1.0}), airway::InputError);
    CHECK_THROWS_AS(AreaSeries({-1.0, 1.0}, {1.0, 1.0}), airway::InputError);
}

TEST_CASE("resample is the identity on the unit grid") {
    const AreaSeries in = unit_grid({3.0, 2.5, 4.0, 1.5, 2.0, 6.0});
    const AreaSeries out = airway::resample_to_1mm(in);
    REQUIRE(out.size() == in.size());
    CHECK(out.arc_mm == in.arc_mm);
    CHECK(out.area_mm2 == in.area_mm2);
    CHECK_FALSE(out.linear_fallback);
}

TEST_CASE("resample reproduces polynomials up to degree 3") {
    struct Case {
        double (*f)(double);
    };
    const Case cases[] = {
        {[](double) { return 5.0; }},
        {[](double x) { return 2.0 + 0.3 * x; }},
        {[](double x) { return 1.0 + 0.1 * x + 0.05 * x * x; }},
        {[](double x) { return 2.0 + 0.3 * x + 0.02 * x * x * x; }},
    };
    for (const Case& c : cases) {
        const AreaSeries in = sampled(0.7, 21, c.f);  // arcs 0 .. 14.0
        const AreaSeries out = airway::resample_to_1mm(in);
        REQUIRE(out.size() == 15);
        for (std::size_t g = 0; g < out.size(); ++g) {
            CHECK(out.arc_mm[g] == static_cast<double>(g));
            CHECK(out.area_mm2[g] == doctest::Approx(c.f(out.arc_mm[g])).epsilon(1e-6));
        }
    }
}

TEST_CASE("resample falls back to linear below 4 samples") {
    const AreaSeries in({0.0, 2.0}, {1.0, 3.0});
    const AreaSeries out = airway::resample_to_1mm(in);
    CHECK(out.linear_fallback);
    REQUIRE(out.size() == 3);
    CHECK(out.area_mm2[0] == doctest::Approx(1.0));
    CHECK(out.area_mm2[1] == doctest::Approx(2.0));
    CHECK(out.area_mm2[2] == doctest::Approx(3.0));
}

TEST_CASE("cubic overshoot below zero is clamped to the floor") {
    // The interpolant through these nodes evaluates to about -1.67 at x = 2.
    const AreaSeries in({0.0, 1.0, 3.0, 4.0}, {5.0, 0.001, 0.001, 5.0});
    const AreaSeries out = airway::resample_to_1mm(in);
    REQUIRE(out.size() == 5);
    CHECK(out.area_mm2[2] == airway::kAreaFloorMm2);
}

TEST_CASE("resample truncates the fractional tail") {
    const AreaSeries in = sampled(0.9, 9, [](double x) { return 4.0 + 0.1 * x; });
    // last arc 7.2 -> grid 0..7
    const AreaSeries out = airway::resample_to_1mm(in);
    CHECK(out.size() == 8);
    CHECK(out.arc_mm.back() == 7.0);
}

namespace {

double profile(double x) { return 10.0 + 2.0 * std::sin(0.37 * x) + 0.01 * x; }

AreaSeries shifted_series(std::size_t len, int offset) {
    std::vector<double> areas(len);
    for (std::size_t i = 0; i < len; ++i)
        areas[i] = profile(static_cast<double>(i) + offset);
    return unit_grid(areas);
}

}  // namespace

TEST_CASE("align recovers a negative shift exactly") {
    const AreaSeries base = shifted_series(70, 0);
    const AreaSeries follow = shifted_series(70, -2);  // follow[j] = profile(j - 2)
    const airway::AlignedPair pair = airway::align_pair(base, follow);
    CHECK(pair.shift_a == -2);
    CHECK(pair.n == 68);
    const airway::LogDiffSeries y = airway::log_difference(pair);
    for (double v : y.y) CHECK(v == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("align recovers a positive shift and trims the head") {
    const AreaSeries base = shifted_series(70, 0);
    const AreaSeries follow = shifted_series(70, 2);
    const airway::AlignedPair pair = airway::align_pair(base, follow);
    CHECK(pair.shift_a == 2);
    CHECK(pair.n == 68);
    // Baseline sample 0 of the pair is the original baseline at arc 2 mm.
    CHECK(pair.baseline.area_mm2[0] == profile(2.0));
    CHECK(pair.followup.area_mm2[0] == profile(2.0));
}

TEST_CASE("align ties prefer zero, then the negative candidate") {
    const AreaSeries base = unit_grid(std::vector<double>(60, 7.0));
    const AreaSeries follow = unit_grid(std::vector<double>(60, 9.0));
    CHECK(airway::align_pair(base, follow).shift_a == 0);

    // Period-2 signals make +1 and -1 equally perfect while 0 is worse.
    std::vector<double> ab(60), af(60);
    for (std::size_t i = 0; i < 60; ++i) {
        ab[i] = (i % 2 == 0) ? 2.0 : 3.0;
        af[i] = (i % 2 == 0) ? 3.0 : 2.0;
    }
    CHECK(airway::align_pair(unit_grid(ab), unit_grid(af)).shift_a == -1);
}

TEST_CASE("align truncates to the shorter series") {
    const AreaSeries base = shifted_series(90, 0);
    const AreaSeries follow = shifted_series(61, 0);
    const airway::AlignedPair pair = airway::align_pair(base, follow);
    CHECK(pair.shift_a == 0);
    CHECK(pair.n == 61);
    CHECK(pair.baseline.size() == 61);
    CHECK(pair.followup.size() == 61);
}

TEST_CASE("align rejects short or off-grid input") {
    const AreaSeries ok = shifted_series(60, 0);
    const AreaSeries short_series = shifted_series(54, 0);
    CHECK_THROWS_AS(airway::align_pair(ok, short_series), airway::InputError);
    CHECK_THROWS_AS(airway::align_pair(short_series, ok), airway::InputError);

    AreaSeries off = shifted_series(60, 0);
    off.arc_mm[10] = 10.5;
    off.arc_mm[11] = 10.75;  // keep ordering valid
    CHECK_THROWS_AS(airway::align_pair(off, ok), airway::InputError);
}

TEST_CASE("log difference is the pointwise log ratio") {
    airway::AlignedPair pair;
    pair.n = 3;
    pair.baseline = unit_grid({1.0, 2.0, 4.0});
    pair.followup = unit_grid({2.0, 2.0, 1.0});
    const airway::LogDiffSeries y = airway::log_difference(pair);
    REQUIRE(y.size() == 3);
    CHECK(y.y[0] == doctest::Approx(std::log(2.0)));
    CHECK(y.y[1] == doctest::Approx(0.0));
    CHECK(y.y[2] == doctest::Approx(-std::log(4.0)));

    // Swapping the roles negates the signal.
    airway::AlignedPair swapped;
    swapped.n = 3;
    swapped.baseline = pair.followup;
    swapped.followup = pair.baseline;
    const airway::LogDiffSeries z = airway::log_difference(swapped);
    for (std::size_t i = 0; i < 3; ++i) CHECK(z.y[i] == doctest::Approx(-y.y[i]));
}
