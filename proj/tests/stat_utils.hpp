#pragma once

#include <vector>

// Statistical helpers for the test suites, independent of the library's own
// numerics so they can serve as cross-checks.
namespace testutil {

// Upper regularized incomplete gamma Q(s, x) = Gamma(s, x) / Gamma(s).
double gamma_q(double s, double x);

// Survival function of the chi-square distribution with df degrees of freedom.
double chi2_sf(double stat, double df);

struct Chi2Gof {
    double stat = 0.0;
    double df = 0.0;
    double p_value = 0.0;
};

// Pearson goodness-of-fit of observed counts against expected probabilities.
// Adjacent bins are pooled left to right until each pooled bin has expected
// count >= min_expected; a trailing short bin merges into its predecessor.
Chi2Gof chi2_gof(const std::vector<double>& observed_counts,
                 const std::vector<double>& expected_probs, double min_expected = 5.0);

// Total variation distance between two distributions on the same index set.
// Each input is normalized to sum 1 first.
double total_variation(const std::vector<double>& p, const std::vector<double>& q);

}  // namespace testutil
