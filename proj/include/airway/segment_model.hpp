#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "airway/area_series.hpp"

namespace airway {

// Student-t parameters of one segment.
struct SegmentParams {
    double mu = 0.0;
    double sigma2 = 1.0;
    double nu = 10.0;
};

// Piecewise-constant model state: m changepoints (0-based indices into the
// series, each the first index of the segment to its right) and m+1 parameter
// triples. tau is kept sorted and strictly increasing.
struct ChainState {
    int m = 0;
    std::vector<int> tau;
    std::vector<SegmentParams> segments;
};

// Fixed hyperparameters of the hierarchical prior.
struct PriorSpec {
    double mu_mean = 0.0;
    double mu_var = 1.0;
    double sigma2_nu0 = 5.0;      // scaled-inverse-chi-squared shape
    double sigma2_s2 = 0.16;      // scaled-inverse-chi-squared scale (0.4^2)
    double nu_min = 2.0;
    double nu_max = 100.0;
    double expected_changepoints = 0.5;  // binomial mean over the n-1 slots
};

// A changepoint splits two runs of at least this many samples.
inline constexpr int kMinSegmentLength = 2;

// log density of the location-scale Student-t at x.
double student_t_logpdf(double x, double mu, double sigma2, double nu);

// Normal and scaled-inverse-chi-squared log densities (prior factors).
double normal_logpdf(double x, double mean, double var);
double scaled_inv_chi2_logpdf(double x, double nu0, double s2);

double segment_loglik(std::span<const double> y, const SegmentParams& p);

// Sum of segment log likelihoods under the segmentation in `state`.
// Requires tau sorted, strictly increasing and inside [1, n-1); the
// minimum-segment-length rule is the sampler's concern, not this one's.
double total_loglik(const LogDiffSeries& data, const ChainState& state);

// Individual prior factors. The *_count factors depend on the series length n.
double log_prior_mu(double mu, const PriorSpec& prior);
double log_prior_sigma2(double sigma2, const PriorSpec& prior);
double log_prior_nu(double nu, const PriorSpec& prior);
double log_prior_m(int m, const PriorSpec& prior, std::size_t n);
double log_prior_tau_given_m(int m, std::size_t n);

// Joint log prior of a full state; -inf outside the support.
double log_prior(const ChainState& state, const PriorSpec& prior, std::size_t n);

// Sorted positions a new changepoint may occupy: at least kMinSegmentLength
// from both series ends and from every existing changepoint.
std::vector<int> admissible_birth_sites(const ChainState& state, std::size_t n);

// Validates segmentation structure (ordering, bounds, matching vector sizes);
// throws InputError on violation.
void check_state(const ChainState& state, std::size_t n);

}  // namespace airway
