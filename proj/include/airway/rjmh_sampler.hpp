#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "airway/area_series.hpp"
#include "airway/segment_model.hpp"

namespace airway {

struct SamplerConfig {
    std::uint64_t iterations = 100000;
    double burn_in_fraction = 0.25;
    std::uint64_t thin_stride = 5;
    int k_max = 10;
    double epsilon = 0.1;  // Gaussian proposal std for mu, sigma2, nu
    double lambda = 1.0;   // Poisson rate for changepoint shifts
    std::uint64_t seed = 1;

    void validate() const;  // throws InputError on out-of-range fields
};

enum class MoveKind : int {
    kResampleParams = 0,
    kShiftChangepoint = 1,
    kBirth = 2,
    kDeath = 3,
};
inline constexpr std::size_t kMoveKinds = 4;

const char* move_name(MoveKind kind);

struct MoveStats {
    std::uint64_t dispatched = 0;
    std::uint64_t accepted = 0;
    std::uint64_t rejected = 0;       // includes auto_rejected
    std::uint64_t auto_rejected = 0;  // no proposal existed (e.g. birth with no free site)
};

struct StoredSample {
    std::uint64_t iter = 0;
    ChainState state;
};

struct ChainTrace {
    std::vector<StoredSample> samples;
    std::array<MoveStats, kMoveKinds> moves{};
    SamplerConfig config;
    std::size_t n = 0;
    bool degenerate_init = false;  // zero-variance input; sigma2 floored at start
};

// Random inputs of the dimension-changing moves, exposed so tests can drive
// the state transforms deterministically. The mu/sigma2 entries are the
// proposed values themselves (the chain draws them around the empirical
// segment statistics); u_nu is the half-split added to the left nu and
// subtracted from the right one.
struct BirthRandoms {
    double mu_left = 0.0;
    double sigma2_left = 1.0;
    double mu_right = 0.0;
    double sigma2_right = 1.0;
    double u_nu = 0.0;
};

// Proposed merged-segment mean and variance for a death move.
struct DeathRandoms {
    double mu = 0.0;
    double sigma2 = 1.0;
};

struct MeanVar {
    double mean = 0.0;
    double var = 0.0;  // unbiased; 0 for a single sample
};

// Empirical mean and variance of y[begin..end).
MeanVar segment_mean_var(const LogDiffSeries& y, int begin, int end);

// One reversible-jump Metropolis-Hastings chain over (m, tau, theta). Moves:
// joint Gaussian resampling of all segment parameters, Poisson shift of one
// changepoint, and birth/death jumps between dimensions. Inadmissible moves
// (death at m=0, birth at m=k_max) are never dispatched; the state-dependent
// move probabilities enter the birth/death acceptance ratios.
class RjmhSampler {
  public:
    RjmhSampler(LogDiffSeries y, PriorSpec priors, SamplerConfig config);

    ChainTrace run();

    // Replaces the likelihood by a constant, so the chain targets the prior.
    void set_flat_likelihood(bool flat) { flat_likelihood_ = flat; }

    // Zero changepoints, empirical full-series mean/variance, midpoint nu.
    ChainState initial_state() const;

    // One dispatch of each move; returns whether the proposal was accepted.
    // The state is modified only on acceptance.
    bool move_resample_params(ChainState& state, std::mt19937_64& rng);
    bool move_shift_changepoint(ChainState& state, std::mt19937_64& rng);
    bool move_birth(ChainState& state, std::mt19937_64& rng);
    bool move_death(ChainState& state, std::mt19937_64& rng);

    // log[(likelihood x prior)(prop) / (likelihood x prior)(cur)] for moves
    // that keep the dimension. Identical states give exactly 0.
    double log_posterior_ratio(const ChainState& cur, const ChainState& prop) const;

    // Deterministic pieces of the jumps. `site` must come from
    // admissible_birth_sites; `cp_index` indexes state.tau.
    ChainState birth_state(const ChainState& state, int site, const BirthRandoms& r) const;
    ChainState death_state(const ChainState& state, int cp_index, const DeathRandoms& r) const;

    // log acceptance ratio of each jump before the min with 0; -infinity when
    // the proposed parameters leave the prior support.
    double birth_log_ratio(const ChainState& state, int site, const BirthRandoms& r) const;
    double death_log_ratio(const ChainState& state, int cp_index, const DeathRandoms& r) const;

    std::size_t n() const { return y_.size(); }
    const MoveStats& stats(MoveKind kind) const {
        return stats_[static_cast<std::size_t>(kind)];
    }

  private:
    double loglik(const ChainState& state) const;
    std::vector<MoveKind> admissible_moves(int m) const;
    double log_move_prob(MoveKind kind, int m) const;
    bool accept(double log_alpha, std::mt19937_64& rng) const;

    LogDiffSeries y_;
    PriorSpec priors_;
    SamplerConfig config_;
    std::array<MoveStats, kMoveKinds> stats_{};
    bool flat_likelihood_ = false;
    bool degenerate_init_ = false;
};

}  // namespace airway
