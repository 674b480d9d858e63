#include "airway/segment_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "airway/errors.hpp"

namespace airway {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

double student_t_logpdf(double x, double mu, double sigma2, double nu) {
    const double sigma = std::sqrt(sigma2);
    const double z = (x - mu) / sigma;
    return std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
           0.5 * std::log(nu * std::numbers::pi) - std::log(sigma) -
           0.5 * (nu + 1.0) * std::log1p(z * z / nu);
}

double normal_logpdf(double x, double mean, double var) {
    const double d = x - mean;
    return -0.5 * std::log(2.0 * std::numbers::pi * var) - 0.5 * d * d / var;
}

double scaled_inv_chi2_logpdf(double x, double nu0, double s2) {
    if (x <= 0.0) return kNegInf;
    const double h = 0.5 * nu0;
    return h * std::log(h * s2) - std::lgamma(h) - (1.0 + h) * std::log(x) -
           h * s2 / x;
}

double segment_loglik(std::span<const double> y, const SegmentParams& p) {
    if (y.empty()) return 0.0;
    // The normalization depends only on the segment parameters, so hoist it
    // out of the per-point loop.
    const double sigma = std::sqrt(p.sigma2);
    const double norm = std::lgamma(0.5 * (p.nu + 1.0)) - std::lgamma(0.5 * p.nu) -
                        0.5 * std::log(p.nu * std::numbers::pi) - std::log(sigma);
    double acc = static_cast<double>(y.size()) * norm;
    const double half_nu1 = 0.5 * (p.nu + 1.0);
    for (double v : y) {
        const double z = (v - p.mu) / sigma;
        acc -= half_nu1 * std::log1p(z * z / p.nu);
    }
    return acc;
}

double total_loglik(const LogDiffSeries& data, const ChainState& state) {
    const std::size_t n = data.size();
    check_state(state, n);
    std::span<const double> all(data.y);
    double acc = 0.0;
    std::size_t begin = 0;
    for (int l = 0; l <= state.m; ++l) {
        const std::size_t end =
            (l < state.m) ? static_cast<std::size_t>(state.tau[static_cast<std::size_t>(l)]) : n;
        acc += segment_loglik(all.subspan(begin, end - begin),
                              state.segments[static_cast<std::size_t>(l)]);
        begin = end;
    }
    return acc;
}

double log_prior_mu(double mu, const PriorSpec& prior) {
    return normal_logpdf(mu, prior.mu_mean, prior.mu_var);
}

double log_prior_sigma2(double sigma2, const PriorSpec& prior) {
    return scaled_inv_chi2_logpdf(sigma2, prior.sigma2_nu0, prior.sigma2_s2);
}

double log_prior_nu(double nu, const PriorSpec& prior) {
    if (nu < prior.nu_min || nu > prior.nu_max) return kNegInf;
    return -std::log(prior.nu_max - prior.nu_min);
}

double log_prior_m(int m, const PriorSpec& prior, std::size_t n) {
    const auto slots = static_cast<double>(n - 1);
    const double p = prior.expected_changepoints / slots;
    if (m < 0 || m > static_cast<int>(n - 1)) return kNegInf;
    // Unnormalised over the k_max truncation: binomial pmf at m.
    const double dm = m;
    return std::lgamma(slots + 1.0) - std::lgamma(dm + 1.0) -
           std::lgamma(slots - dm + 1.0) + dm * std::log(p) +
           (slots - dm) * std::log1p(-p);
}

double log_prior_tau_given_m(int m, std::size_t n) {
    if (m == 0) return 0.0;
    // Uniform over the m-subsets of the n-2 interior positions.
    const auto pool = static_cast<double>(n - 2);
    const double dm = m;
    if (dm > pool) return kNegInf;
    return -(std::lgamma(pool + 1.0) - std::lgamma(dm + 1.0) -
             std::lgamma(pool - dm + 1.0));
}

double log_prior(const ChainState& state, const PriorSpec& prior, std::size_t n) {
    double acc = log_prior_m(state.m, prior, n) + log_prior_tau_given_m(state.m, n);
    for (const auto& seg : state.segments) {
        acc += log_prior_mu(seg.mu, prior);
        acc += log_prior_sigma2(seg.sigma2, prior);
        acc += log_prior_nu(seg.nu, prior);
    }
    return acc;
}

std::vector<int> admissible_birth_sites(const ChainState& state, std::size_t n) {
    std::vector<int> sites;
    const int lo = kMinSegmentLength;
    const int hi = static_cast<int>(n) - kMinSegmentLength;
    for (int t = lo; t <= hi; ++t) {
        bool ok = true;
        for (int existing : state.tau) {
            if (std::abs(t - existing) < kMinSegmentLength) {
                ok = false;
                break;
            }
        }
        if (ok) sites.push_back(t);
    }
    return sites;
}

void check_state(const ChainState& state, std::size_t n) {
    if (state.m < 0) throw InputError("state: negative changepoint count");
    if (state.tau.size() != static_cast<std::size_t>(state.m))
        throw InputError("state: tau size does not match m");
    if (state.segments.size() != static_cast<std::size_t>(state.m) + 1)
        throw InputError("state: expected m+1 segment parameter triples");
    int prev = 0;
    for (int t : state.tau) {
        // Interior positions only: the first index of a right segment may be
        // 1 through n-2, so both outer segments are nonempty.
        if (t < 1 || t > static_cast<int>(n) - 2)
            throw InputError("state: changepoint " + std::to_string(t) + " out of range");
        if (t <= prev) throw InputError("state: changepoints not strictly increasing");
        prev = t;
    }
    for (const auto& seg : state.segments) {
        if (!(seg.sigma2 > 0.0)) throw InputError("state: non-positive sigma2");
        if (!(seg.nu > 0.0)) throw InputError("state: non-positive nu");
    }
}

}  // namespace airway
