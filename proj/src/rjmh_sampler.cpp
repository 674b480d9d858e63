#include "airway/rjmh_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <utility>

#include "airway/errors.hpp"
#include "airway/random.hpp"

namespace airway {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Starting sigma2 when the input series has (near) zero variance.
constexpr double kInitSigma2Floor = 1e-6;

// Splits nu_old into (nu_old + u, nu_old - u). The smaller side is derived
// from the exact doubling so that the halves sum to exactly 2 * nu_old; the
// death move's midpoint then restores nu_old bit-for-bit.
void split_nu(double nu_old, double u, double& nu_left, double& nu_right) {
    const double two_nu = 2.0 * nu_old;
    if (u >= 0.0) {
        nu_left = nu_old + u;
        nu_right = two_nu - nu_left;
    } else {
        nu_right = nu_old - u;
        nu_left = two_nu - nu_right;
    }
}

}  // namespace

void SamplerConfig::validate() const {
    if (iterations == 0) throw InputError("sampler config: iterations must be positive");
    if (!(burn_in_fraction >= 0.0 && burn_in_fraction < 1.0))
        throw InputError("sampler config: burn-in fraction must be in [0, 1)");
    if (thin_stride == 0) throw InputError("sampler config: thinning stride must be positive");
    if (k_max < 1) throw InputError("sampler config: k_max must be at least 1");
    if (!(epsilon > 0.0)) throw InputError("sampler config: epsilon must be positive");
    if (!(lambda > 0.0)) throw InputError("sampler config: lambda must be positive");
}

const char* move_name(MoveKind kind) {
    switch (kind) {
        case MoveKind::kResampleParams: return "resample_params";
        case MoveKind::kShiftChangepoint: return "shift_changepoint";
        case MoveKind::kBirth: return "birth";
        case MoveKind::kDeath: return "death";
    }
    return "unknown";
}

MeanVar segment_mean_var(const LogDiffSeries& y, int begin, int end) {
    if (begin < 0 || end > static_cast<int>(y.size()) || begin >= end)
        throw InputError("segment_mean_var: bad range");
    const int count = end - begin;
    double sum = 0.0;
    for (int i = begin; i < end; ++i) sum += y.y[static_cast<std::size_t>(i)];
    const double mean = sum / count;
    if (count == 1) return {mean, 0.0};
    double ss = 0.0;
    for (int i = begin; i < end; ++i) {
        const double d = y.y[static_cast<std::size_t>(i)] - mean;
        ss += d * d;
    }
    return {mean, ss / (count - 1)};
}

RjmhSampler::RjmhSampler(LogDiffSeries y, PriorSpec priors, SamplerConfig config)
    : y_(std::move(y)), priors_(priors), config_(config) {
    if (y_.size() < 2) throw InputError("sampler: series needs at least 2 samples");
    const MeanVar mv = segment_mean_var(y_, 0, static_cast<int>(y_.size()));
    degenerate_init_ = mv.var < kInitSigma2Floor;
}

ChainState RjmhSampler::initial_state() const {
    const MeanVar mv = segment_mean_var(y_, 0, static_cast<int>(y_.size()));
    ChainState state;
    state.m = 0;
    state.segments.push_back({mv.mean, std::max(mv.var, kInitSigma2Floor),
                              0.5 * (priors_.nu_min + priors_.nu_max)});
    return state;
}

double RjmhSampler::loglik(const ChainState& state) const {
    if (flat_likelihood_) return 0.0;
    return total_loglik(y_, state);
}

std::vector<MoveKind> RjmhSampler::admissible_moves(int m) const {
    std::vector<MoveKind> moves{MoveKind::kResampleParams};
    if (m >= 1) moves.push_back(MoveKind::kShiftChangepoint);
    if (m < config_.k_max) moves.push_back(MoveKind::kBirth);
    if (m >= 1) moves.push_back(MoveKind::kDeath);
    return moves;
}

double RjmhSampler::log_move_prob(MoveKind kind, int m) const {
    const auto moves = admissible_moves(m);
    if (std::find(moves.begin(), moves.end(), kind) == moves.end()) return kNegInf;
    return -std::log(static_cast<double>(moves.size()));
}

bool RjmhSampler::accept(double log_alpha, std::mt19937_64& rng) const {
    if (log_alpha == kNegInf) return false;
    return std::log(rng::uniform01(rng)) <= log_alpha;
}

double RjmhSampler::log_posterior_ratio(const ChainState& cur, const ChainState& prop) const {
    const std::size_t n = y_.size();
    const double lp_prop = log_prior(prop, priors_, n);
    if (lp_prop == kNegInf) return kNegInf;
    const double lp_cur = log_prior(cur, priors_, n);
    return (lp_prop - lp_cur) + (loglik(prop) - loglik(cur));
}

bool RjmhSampler::move_resample_params(ChainState& state, std::mt19937_64& rng) {
    auto& st = stats_[static_cast<std::size_t>(MoveKind::kResampleParams)];
    ++st.dispatched;

    ChainState prop = state;
    for (auto& seg : prop.segments) {
        seg.mu += rng::normal_scaled(rng, config_.epsilon);
        seg.sigma2 += rng::normal_scaled(rng, config_.epsilon);
        seg.nu += rng::normal_scaled(rng, config_.epsilon);
    }
    if (accept(log_posterior_ratio(state, prop), rng)) {
        state = std::move(prop);
        ++st.accepted;
        return true;
    }
    ++st.rejected;
    return false;
}

bool RjmhSampler::move_shift_changepoint(ChainState& state, std::mt19937_64& rng) {
    auto& st = stats_[static_cast<std::size_t>(MoveKind::kShiftChangepoint)];
    ++st.dispatched;
    if (state.m < 1) throw InputError("shift move dispatched with no changepoints");

    const int n = static_cast<int>(y_.size());
    const auto j = static_cast<int>(rng::uniform_below(rng, static_cast<std::uint64_t>(state.m)));
    const auto s = static_cast<int>(rng::poisson(rng, config_.lambda));
    const bool down = rng::uniform01(rng) < 0.5;
    const int t_new = state.tau[static_cast<std::size_t>(j)] + (down ? -s : s);

    // Bounds and min-length feasibility; the sign draw makes the tau proposal
    // symmetric, so no proposal term enters the ratio.
    const int lo = (j == 0) ? kMinSegmentLength
                            : state.tau[static_cast<std::size_t>(j - 1)] + kMinSegmentLength;
    const int hi = (j == state.m - 1)
                       ? n - kMinSegmentLength
                       : state.tau[static_cast<std::size_t>(j + 1)] - kMinSegmentLength;
    if (t_new < lo || t_new > hi) {
        ++st.rejected;
        return false;
    }

    ChainState prop = state;
    prop.tau[static_cast<std::size_t>(j)] = t_new;
    for (int side = 0; side < 2; ++side) {
        auto& seg = prop.segments[static_cast<std::size_t>(j + side)];
        seg.mu += rng::normal_scaled(rng, config_.epsilon);
        seg.sigma2 += rng::normal_scaled(rng, config_.epsilon);
        seg.nu += rng::normal_scaled(rng, config_.epsilon);
    }
    if (accept(log_posterior_ratio(state, prop), rng)) {
        state = std::move(prop);
        ++st.accepted;
        return true;
    }
    ++st.rejected;
    return false;
}

ChainState RjmhSampler::birth_state(const ChainState& state, int site,
                                    const BirthRandoms& r) const {
    const auto i = static_cast<std::size_t>(
        std::upper_bound(state.tau.begin(), state.tau.end(), site) - state.tau.begin());
    const SegmentParams& old = state.segments[i];
    double nu_left = 0.0;
    double nu_right = 0.0;
    split_nu(old.nu, r.u_nu, nu_left, nu_right);

    ChainState prop;
    prop.m = state.m + 1;
    prop.tau = state.tau;
    prop.tau.insert(prop.tau.begin() + static_cast<std::ptrdiff_t>(i), site);
    prop.segments = state.segments;
    prop.segments[i] = {r.mu_left, r.sigma2_left, nu_left};
    prop.segments.insert(prop.segments.begin() + static_cast<std::ptrdiff_t>(i) + 1,
                         {r.mu_right, r.sigma2_right, nu_right});
    return prop;
}

ChainState RjmhSampler::death_state(const ChainState& state, int cp_index,
                                    const DeathRandoms& r) const {
    if (cp_index < 0 || cp_index >= state.m) throw InputError("death: bad changepoint index");
    const auto j = static_cast<std::size_t>(cp_index);
    const double nu_new = 0.5 * (state.segments[j].nu + state.segments[j + 1].nu);

    ChainState prop;
    prop.m = state.m - 1;
    prop.tau = state.tau;
    prop.tau.erase(prop.tau.begin() + cp_index);
    prop.segments = state.segments;
    prop.segments.erase(prop.segments.begin() + cp_index);
    prop.segments[j] = {r.mu, r.sigma2, nu_new};
    return prop;
}

double RjmhSampler::birth_log_ratio(const ChainState& state, int site,
                                    const BirthRandoms& r) const {
    const int n = static_cast<int>(y_.size());
    const auto sites = admissible_birth_sites(state, y_.size());
    if (std::find(sites.begin(), sites.end(), site) == sites.end())
        throw InputError("birth: site " + std::to_string(site) + " not admissible");

    const auto i = static_cast<std::size_t>(
        std::upper_bound(state.tau.begin(), state.tau.end(), site) - state.tau.begin());
    const SegmentParams& old = state.segments[i];
    const int begin = (i == 0) ? 0 : state.tau[i - 1];
    const int end = (static_cast<int>(i) == state.m) ? n : state.tau[i];

    double nu_left = 0.0;
    double nu_right = 0.0;
    split_nu(old.nu, r.u_nu, nu_left, nu_right);
    if (r.sigma2_left <= 0.0 || r.sigma2_right <= 0.0) return kNegInf;
    if (nu_left < priors_.nu_min || nu_left > priors_.nu_max) return kNegInf;
    if (nu_right < priors_.nu_min || nu_right > priors_.nu_max) return kNegInf;

    const MeanVar left = segment_mean_var(y_, begin, site);
    const MeanVar right = segment_mean_var(y_, site, end);
    const MeanVar merged = segment_mean_var(y_, begin, end);
    const double e2 = config_.epsilon * config_.epsilon;
    const std::span<const double> all(y_.y);
    const SegmentParams left_p{r.mu_left, r.sigma2_left, nu_left};
    const SegmentParams right_p{r.mu_right, r.sigma2_right, nu_right};

    double lr = 0.0;
    if (!flat_likelihood_) {
        lr += segment_loglik(all.subspan(static_cast<std::size_t>(begin),
                                         static_cast<std::size_t>(site - begin)),
                             left_p) +
              segment_loglik(all.subspan(static_cast<std::size_t>(site),
                                         static_cast<std::size_t>(end - site)),
                             right_p) -
              segment_loglik(all.subspan(static_cast<std::size_t>(begin),
                                         static_cast<std::size_t>(end - begin)),
                             old);
    }
    // Prior ratio: model size, location count, and the one split segment.
    lr += log_prior_m(state.m + 1, priors_, y_.size()) - log_prior_m(state.m, priors_, y_.size());
    lr += log_prior_tau_given_m(state.m + 1, y_.size()) - log_prior_tau_given_m(state.m, y_.size());
    lr += log_prior_mu(r.mu_left, priors_) + log_prior_mu(r.mu_right, priors_) -
          log_prior_mu(old.mu, priors_);
    lr += log_prior_sigma2(r.sigma2_left, priors_) + log_prior_sigma2(r.sigma2_right, priors_) -
          log_prior_sigma2(old.sigma2, priors_);
    lr += log_prior_nu(nu_left, priors_) + log_prior_nu(nu_right, priors_) -
          log_prior_nu(old.nu, priors_);
    // State-dependent move choice, location choice, and proposal densities
    // (reverse death over forward birth), then the Jacobian of the nu split.
    lr += log_move_prob(MoveKind::kDeath, state.m + 1) - log_move_prob(MoveKind::kBirth, state.m);
    lr += std::log(static_cast<double>(sites.size())) -
          std::log(static_cast<double>(state.m + 1));
    lr += normal_logpdf(old.mu, merged.mean, e2) + normal_logpdf(old.sigma2, merged.var, e2);
    lr -= normal_logpdf(r.mu_left, left.mean, e2) + normal_logpdf(r.mu_right, right.mean, e2) +
          normal_logpdf(r.sigma2_left, left.var, e2) +
          normal_logpdf(r.sigma2_right, right.var, e2) + normal_logpdf(r.u_nu, 0.0, e2);
    lr += std::numbers::ln2;
    return lr;
}

double RjmhSampler::death_log_ratio(const ChainState& state, int cp_index,
                                    const DeathRandoms& r) const {
    if (cp_index < 0 || cp_index >= state.m) throw InputError("death: bad changepoint index");
    const int n = static_cast<int>(y_.size());
    const auto j = static_cast<std::size_t>(cp_index);
    const SegmentParams& old_l = state.segments[j];
    const SegmentParams& old_r = state.segments[j + 1];
    const int begin = (j == 0) ? 0 : state.tau[j - 1];
    const int mid = state.tau[j];
    const int end = (cp_index == state.m - 1) ? n : state.tau[j + 1];

    const double nu_new = 0.5 * (old_l.nu + old_r.nu);
    if (r.sigma2 <= 0.0) return kNegInf;
    if (nu_new < priors_.nu_min || nu_new > priors_.nu_max) return kNegInf;
    const double u_nu_matched = 0.5 * (old_l.nu - old_r.nu);

    const MeanVar left = segment_mean_var(y_, begin, mid);
    const MeanVar right = segment_mean_var(y_, mid, end);
    const MeanVar merged = segment_mean_var(y_, begin, end);
    const double e2 = config_.epsilon * config_.epsilon;
    const std::span<const double> all(y_.y);
    const SegmentParams merged_p{r.mu, r.sigma2, nu_new};

    const ChainState post = death_state(state, cp_index, r);
    const auto sites_after = admissible_birth_sites(post, y_.size());

    double lr = 0.0;
    if (!flat_likelihood_) {
        lr += segment_loglik(all.subspan(static_cast<std::size_t>(begin),
                                         static_cast<std::size_t>(end - begin)),
                             merged_p) -
              segment_loglik(all.subspan(static_cast<std::size_t>(begin),
                                         static_cast<std::size_t>(mid - begin)),
                             old_l) -
              segment_loglik(all.subspan(static_cast<std::size_t>(mid),
                                         static_cast<std::size_t>(end - mid)),
                             old_r);
    }
    lr += log_prior_m(state.m - 1, priors_, y_.size()) - log_prior_m(state.m, priors_, y_.size());
    lr += log_prior_tau_given_m(state.m - 1, y_.size()) - log_prior_tau_given_m(state.m, y_.size());
    lr += log_prior_mu(r.mu, priors_) - log_prior_mu(old_l.mu, priors_) -
          log_prior_mu(old_r.mu, priors_);
    lr += log_prior_sigma2(r.sigma2, priors_) - log_prior_sigma2(old_l.sigma2, priors_) -
          log_prior_sigma2(old_r.sigma2, priors_);
    lr += log_prior_nu(nu_new, priors_) - log_prior_nu(old_l.nu, priors_) -
          log_prior_nu(old_r.nu, priors_);
    lr += log_move_prob(MoveKind::kBirth, state.m - 1) - log_move_prob(MoveKind::kDeath, state.m);
    lr += std::log(static_cast<double>(state.m)) -
          std::log(static_cast<double>(sites_after.size()));
    lr += normal_logpdf(old_l.mu, left.mean, e2) + normal_logpdf(old_r.mu, right.mean, e2) +
          normal_logpdf(old_l.sigma2, left.var, e2) + normal_logpdf(old_r.sigma2, right.var, e2) +
          normal_logpdf(u_nu_matched, 0.0, e2);
    lr -= normal_logpdf(r.mu, merged.mean, e2) + normal_logpdf(r.sigma2, merged.var, e2);
    lr -= std::numbers::ln2;
    return lr;
}

bool RjmhSampler::move_birth(ChainState& state, std::mt19937_64& rng) {
    auto& st = stats_[static_cast<std::size_t>(MoveKind::kBirth)];
    ++st.dispatched;
    if (state.m >= config_.k_max) throw InputError("birth move dispatched at k_max");

    const auto sites = admissible_birth_sites(state, y_.size());
    if (sites.empty()) {
        ++st.rejected;
        ++st.auto_rejected;
        return false;
    }
    const int site = sites[rng::uniform_below(rng, sites.size())];
    const auto i = static_cast<std::size_t>(
        std::upper_bound(state.tau.begin(), state.tau.end(), site) - state.tau.begin());
    const int begin = (i == 0) ? 0 : state.tau[i - 1];
    const int end =
        (static_cast<int>(i) == state.m) ? static_cast<int>(y_.size()) : state.tau[i];
    const MeanVar left = segment_mean_var(y_, begin, site);
    const MeanVar right = segment_mean_var(y_, site, end);

    BirthRandoms r;
    r.mu_left = left.mean + rng::normal_scaled(rng, config_.epsilon);
    r.sigma2_left = left.var + rng::normal_scaled(rng, config_.epsilon);
    r.mu_right = right.mean + rng::normal_scaled(rng, config_.epsilon);
    r.sigma2_right = right.var + rng::normal_scaled(rng, config_.epsilon);
    r.u_nu = rng::normal_scaled(rng, config_.epsilon);

    if (accept(birth_log_ratio(state, site, r), rng)) {
        state = birth_state(state, site, r);
        ++st.accepted;
        return true;
    }
    ++st.rejected;
    return false;
}

bool RjmhSampler::move_death(ChainState& state, std::mt19937_64& rng) {
    auto& st = stats_[static_cast<std::size_t>(MoveKind::kDeath)];
    ++st.dispatched;
    if (state.m < 1) throw InputError("death move dispatched with no changepoints");

    const auto j = static_cast<int>(rng::uniform_below(rng, static_cast<std::uint64_t>(state.m)));
    const int begin = (j == 0) ? 0 : state.tau[static_cast<std::size_t>(j - 1)];
    const int end = (j == state.m - 1) ? static_cast<int>(y_.size())
                                       : state.tau[static_cast<std::size_t>(j + 1)];
    const MeanVar merged = segment_mean_var(y_, begin, end);

    DeathRandoms r;
    r.mu = merged.mean + rng::normal_scaled(rng, config_.epsilon);
    r.sigma2 = merged.var + rng::normal_scaled(rng, config_.epsilon);

    if (accept(death_log_ratio(state, j, r), rng)) {
        state = death_state(state, j, r);
        ++st.accepted;
        return true;
    }
    ++st.rejected;
    return false;
}

ChainTrace RjmhSampler::run() {
    config_.validate();
    if (y_.size() < 2 * kMinSegmentLength)
        throw InputError("sampler: series shorter than two minimum-length segments");

    stats_ = {};
    std::mt19937_64 rng(config_.seed);
    ChainState state = initial_state();

    const std::uint64_t burn_in =
        static_cast<std::uint64_t>(std::llround(config_.burn_in_fraction *
                                                static_cast<double>(config_.iterations)));
    ChainTrace trace;
    trace.config = config_;
    trace.n = y_.size();
    trace.degenerate_init = degenerate_init_;
    trace.samples.reserve((config_.iterations - burn_in) / config_.thin_stride);

    for (std::uint64_t iter = 1; iter <= config_.iterations; ++iter) {
        const auto moves = admissible_moves(state.m);
        const MoveKind kind = moves[rng::uniform_below(rng, moves.size())];
        switch (kind) {
            case MoveKind::kResampleParams: move_resample_params(state, rng); break;
            case MoveKind::kShiftChangepoint: move_shift_changepoint(state, rng); break;
            case MoveKind::kBirth: move_birth(state, rng); break;
            case MoveKind::kDeath: move_death(state, rng); break;
        }
        if (iter > burn_in && (iter - burn_in) % config_.thin_stride == 0)
            trace.samples.push_back({iter, state});
    }
    trace.moves = stats_;
    return trace;
}

}  // namespace airway
