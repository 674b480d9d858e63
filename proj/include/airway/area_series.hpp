#pragma once

#include <cstddef>
#include <vector>

namespace airway {

// Cross-sectional area of one airway on one scan, sampled along the
// centreline arc length. Index 0 is the carina (proximal end); the last
// sample is the distal point.
struct AreaSeries {
    std::vector<double> arc_mm;    // strictly increasing, >= 0
    std::vector<double> area_mm2;  // strictly positive (logs must exist)

    // Set by resample_to_1mm when fewer than 4 input samples forced a
    // linear instead of cubic interpolation.
    bool linear_fallback = false;

    AreaSeries() = default;
    AreaSeries(std::vector<double> arc, std::vector<double> area);

    std::size_t size() const { return arc_mm.size(); }

    // Throws InputError if the invariants above are violated.
    void validate() const;

    // True when the arc lengths are consecutive integers starting at 0.
    bool on_unit_grid() const;
};

// Baseline/follow-up pair transformed onto a shared 1 mm grid. Both series
// hold exactly n samples with arc lengths re-origined to 0..n-1.
struct AlignedPair {
    AreaSeries baseline;
    AreaSeries followup;
    int shift_a = 0;    // minimizing integer shift, in [-5, 5]
    std::size_t n = 0;  // common length after truncation
};

// The sampler's input: y[i] = log(followup area) - log(baseline area) on the
// shared 1 mm grid, so index i is also the arc length in mm.
struct LogDiffSeries {
    std::vector<double> y;

    std::size_t size() const { return y.size(); }
};

// Interpolated areas are clamped to this floor so logs stay finite even when
// cubic overshoot dips below zero near sharp minima.
inline constexpr double kAreaFloorMm2 = 1e-6;

// Shift search range and window for align_pair.
inline constexpr int kMaxAlignShiftMm = 5;
inline constexpr std::size_t kAlignWindow = 50;

// Resample onto the integer grid {0, 1, ...} mm up to the last input arc
// length using piecewise 4-point cubic (Lagrange) interpolation, which
// reproduces polynomials through degree 3 exactly. Falls back to linear
// interpolation when fewer than 4 samples exist (flagged on the output).
AreaSeries resample_to_1mm(const AreaSeries& series);

// Register a baseline/follow-up pair already on the 1 mm grid. The shift is
// the integer a in [-5, 5] minimizing the mean squared log-ratio of the
// first-50-sample windows over their overlap; ties prefer the smallest |a|,
// then the negative candidate. Both series are truncated to the common
// domain. Requires at least 55 samples per series.
AlignedPair align_pair(const AreaSeries& baseline, const AreaSeries& followup);

LogDiffSeries log_difference(const AlignedPair& pair);

}  // namespace airway
