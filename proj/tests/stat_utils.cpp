#include "stat_utils.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>

namespace testutil {

namespace {

// Lower regularized incomplete gamma by power series; valid for x < s + 1.
double gamma_p_series(double s, double x) {
    double term = 1.0 / s;
    double sum = term;
    for (int k = 1; k < 500; ++k) {
        term *= x / (s + k);
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

// Upper regularized incomplete gamma by Lentz continued fraction; x >= s + 1.
double gamma_q_cf(double s, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - s;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 500; ++i) {
        const double an = -i * (i - s);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

}  // namespace

double gamma_q(double s, double x) {
    if (s <= 0.0) throw std::invalid_argument("gamma_q: s must be positive");
    if (x < 0.0) throw std::invalid_argument("gamma_q: x must be nonnegative");
    if (x == 0.0) return 1.0;
    if (x < s + 1.0) return 1.0 - gamma_p_series(s, x);
    return gamma_q_cf(s, x);
}

double chi2_sf(double stat, double df) {
    if (stat <= 0.0) return 1.0;
    return gamma_q(0.5 * df, 0.5 * stat);
}

Chi2Gof chi2_gof(const std::vector<double>& observed_counts,
                 const std::vector<double>& expected_probs, double min_expected) {
    if (observed_counts.size() != expected_probs.size())
        throw std::invalid_argument("chi2_gof: size mismatch");
    double total = 0.0;
    for (double c : observed_counts) total += c;

    std::vector<double> obs_pooled;
    std::vector<double> exp_pooled;
    double obs_acc = 0.0;
    double exp_acc = 0.0;
    for (std::size_t i = 0; i < observed_counts.size(); ++i) {
        obs_acc += observed_counts[i];
        exp_acc += expected_probs[i] * total;
        if (exp_acc >= min_expected) {
            obs_pooled.push_back(obs_acc);
            exp_pooled.push_back(exp_acc);
            obs_acc = 0.0;
            exp_acc = 0.0;
        }
    }
    if (exp_acc > 0.0 || obs_acc > 0.0) {
        if (exp_pooled.empty()) throw std::invalid_argument("chi2_gof: too few expected counts");
        obs_pooled.back() += obs_acc;
        exp_pooled.back() += exp_acc;
    }
    if (obs_pooled.size() < 2) throw std::invalid_argument("chi2_gof: fewer than 2 bins");

    Chi2Gof out;
    for (std::size_t i = 0; i < obs_pooled.size(); ++i) {
        const double d = obs_pooled[i] - exp_pooled[i];
        out.stat += d * d / exp_pooled[i];
    }
    out.df = static_cast<double>(obs_pooled.size() - 1);
    out.p_value = chi2_sf(out.stat, out.df);
    return out;
}

double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
    if (p.size() != q.size()) throw std::invalid_argument("total_variation: size mismatch");
    double ps = 0.0;
    double qs = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        ps += p[i];
        qs += q[i];
    }
    if (ps <= 0.0 || qs <= 0.0) return std::numeric_limits<double>::quiet_NaN();
    double tv = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) tv += std::abs(p[i] / ps - q[i] / qs);
    return 0.5 * tv;
}

}  // namespace testutil
