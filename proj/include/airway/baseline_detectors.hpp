#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "airway/area_series.hpp"

namespace airway {

inline constexpr int kThresholdWindowMm = 5;
inline constexpr int kPenalizedMinSeparationMm = 20;

// Moving-mean threshold call. Diagnostics carry the smoothed signal, the
// quartile, the exceedance mask, and the proximal start of the exceedance run
// containing the called point.
struct ThresholdCall {
    int point_mm = 0;
    double q3 = 0.0;
    int run_start_mm = 0;
    std::vector<double> smoothed;
    std::vector<std::uint8_t> exceeds;
};

// Exact two-changepoint penalized-cost call. beta_max is the largest penalty
// under which the two-changepoint solution still beats the zero- and
// one-changepoint optima; the detector itself always reports the K=2 pair.
struct PenalizedCostCall {
    int point_mm = 0;
    int k1 = 0;
    int k2 = 0;
    double cost = 0.0;
    double beta_max = 0.0;
};

// Smooths with a centered 5-sample moving mean (edge windows truncated),
// takes the upper quartile (type-7) of the smoothed signal, and scans from
// the distal end for the first smoothed value above it. Constant signals
// produce no call.
std::optional<ThresholdCall> threshold_detect(const LogDiffSeries& y);

// Minimizes the within-segment squared-deviation cost over all pairs
// (k1, k2) with 20 mm separation between the changepoints and to both ends;
// ties go to the lexicographically smallest pair. Returns the distal
// changepoint k2 as the call.
PenalizedCostCall penalized_cost_detect(const LogDiffSeries& y);

}  // namespace airway
