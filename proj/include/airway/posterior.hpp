#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "airway/rjmh_sampler.hpp"

namespace airway {

// Marginal changepoint-location mass on the 1 mm grid, pooled over every
// changepoint of every stored state.
struct PosteriorHistogram {
    std::vector<double> mass;        // one bin per grid index, sums to 1
    bool no_changepoints = false;    // trace never visited m >= 1; mass all zero
};

struct Peak {
    int location_mm = 0;
    double mass = 0.0;  // smoothed histogram height at the peak
};

struct DilatationCall {
    int point_mm = 0;
    std::vector<Peak> peaks;  // increasing location, after separation filtering
    std::optional<Peak> discarded_proximal_peak;
};

inline constexpr int kPeakSmoothingWindow = 3;
inline constexpr double kPeakMassFloorFraction = 0.05;
inline constexpr int kPeakMinSeparationMm = 10;

PosteriorHistogram pooled_histogram(const ChainTrace& trace, std::size_t n);

// Local maxima of the 3-bin-smoothed histogram, keeping only maxima at least
// 5% of the global maximum and at least 10 mm apart (the larger of any closer
// pair survives). A flat-topped run counts as one maximum at its centre bin.
std::vector<Peak> find_peaks(const PosteriorHistogram& hist);

// Selection rule on an already-extracted peak list: with two or more peaks the
// most proximal one is discarded, then the highest remaining peak wins (ties
// go distal). A single peak is returned as-is. Empty list -> no call.
std::optional<DilatationCall> select_dilatation_point(const std::vector<Peak>& peaks);

std::optional<DilatationCall> call_dilatation_point(const PosteriorHistogram& hist);

}  // namespace airway
