#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "airway/area_series.hpp"
#include "airway/rjmh_sampler.hpp"

namespace airway {

// Logistic widening added to a log-difference series. alpha is measured from
// the distal (last) point; the curve rises toward the distal end.
struct LogisticDilatation {
    double magnitude = 0.0;          // log-area units
    double alpha_from_distal_mm = 0.0;
    double steepness = 0.5;          // per mm
};

enum class DetectorKind : int { kRjmh = 0, kThreshold = 1, kPenalizedCost = 2 };

const char* detector_name(DetectorKind kind);
DetectorKind detector_from_name(const std::string& name);  // throws InputError

struct SweepGrid {
    std::vector<double> alphas{10, 15, 20, 25, 30, 35, 40};
    std::vector<double> magnitudes{0.30, 0.55, 0.80, 1.05, 1.30,
                                   1.55, 1.80, 2.05, 2.30, 2.55, 2.80};
    std::vector<LogDiffSeries> airways;
};

struct HeatmapCell {
    double alpha_mm = 0.0;
    double magnitude = 0.0;
    DetectorKind detector = DetectorKind::kRjmh;
    std::vector<double> displacements;  // one per successful call, airway order
    int n_nocalls = 0;
    double median_displacement = 0.0;  // NaN when every airway no-called
};

struct SweepResult {
    std::vector<HeatmapCell> cells;  // ordered by (alpha, magnitude, detector)
};

// y'[i] = y[i] + magnitude / (1 + exp(-steepness * (i - x_alpha))) with
// x_alpha = (n-1) - alpha_from_distal_mm. magnitude 0 is the identity.
LogDiffSeries apply_dilatation(const LogDiffSeries& y, const LogisticDilatation& d);

// Ground-truth changepoint of the dilatation, as mm from the carina.
double dilatation_truth_mm(const LogDiffSeries& y, const LogisticDilatation& d);

// Signed localization error; positive means the prediction lies distal of
// the truth.
double displacement(double predicted_mm, double truth_mm);

// Sample median; even-sized lists average the middle pair.
double median(std::vector<double> values);

// Student-t noise series standing in for a healthy airway pair's
// log-difference signal.
LogDiffSeries synthetic_noise_series(std::size_t n, double sigma, double nu,
                                     std::uint64_t seed);

// Runs every (alpha, magnitude, airway) combination through the requested
// detectors and aggregates per-cell median displacements. Cells execute
// concurrently on `threads` workers; per-cell sampler seeds derive from
// config.seed and the cell's indices, so the result is independent of
// scheduling.
SweepResult run_sweep(const SweepGrid& grid, const std::vector<DetectorKind>& detectors,
                      const SamplerConfig& config, unsigned threads = 0);

}  // namespace airway
