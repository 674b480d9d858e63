#include "airway/baseline_detectors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "airway/errors.hpp"

namespace airway {

namespace {

std::vector<double> moving_mean(const std::vector<double>& v, int window) {
    const auto n = static_cast<int>(v.size());
    const int half = window / 2;
    std::vector<double> out(v.size());
    for (int i = 0; i < n; ++i) {
        const int lo = std::max(0, i - half);
        const int hi = std::min(n - 1, i + half);
        double sum = 0.0;
        for (int j = lo; j <= hi; ++j) sum += v[static_cast<std::size_t>(j)];
        out[static_cast<std::size_t>(i)] = sum / (hi - lo + 1);
    }
    return out;
}

// Type-7 quantile (linear interpolation between order statistics).
double quantile7(std::vector<double> v, double p) {
    std::sort(v.begin(), v.end());
    const double h = p * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(h);
    if (lo + 1 >= v.size()) return v.back();
    return v[lo] + (h - static_cast<double>(lo)) * (v[lo + 1] - v[lo]);
}

}  // namespace

std::optional<ThresholdCall> threshold_detect(const LogDiffSeries& y) {
    const auto n = static_cast<int>(y.size());
    if (n < kThresholdWindowMm)
        throw InputError("threshold: need at least " + std::to_string(kThresholdWindowMm) +
                         " samples");

    ThresholdCall call;
    call.smoothed = moving_mean(y.y, kThresholdWindowMm);
    call.q3 = quantile7(call.smoothed, 0.75);
    call.exceeds.resize(y.size());
    for (int i = 0; i < n; ++i)
        call.exceeds[static_cast<std::size_t>(i)] =
            call.smoothed[static_cast<std::size_t>(i)] > call.q3 ? 1 : 0;

    for (int i = n - 1; i >= 0; --i) {
        if (call.exceeds[static_cast<std::size_t>(i)]) {
            call.point_mm = i;
            int start = i;
            while (start > 0 && call.exceeds[static_cast<std::size_t>(start - 1)]) --start;
            call.run_start_mm = start;
            return call;
        }
    }
    return std::nullopt;
}

PenalizedCostCall penalized_cost_detect(const LogDiffSeries& y) {
    const auto n = static_cast<int>(y.size());
    const int sep = kPenalizedMinSeparationMm;
    if (n < 3 * sep)
        throw InputError("penalized cost: need at least " + std::to_string(3 * sep) +
                         " samples for two changepoints with " + std::to_string(sep) +
                         " mm margins");

    // Prefix sums make each segment's squared-deviation cost O(1).
    std::vector<double> s1(static_cast<std::size_t>(n) + 1, 0.0);
    std::vector<double> s2(static_cast<std::size_t>(n) + 1, 0.0);
    for (int i = 0; i < n; ++i) {
        const double v = y.y[static_cast<std::size_t>(i)];
        s1[static_cast<std::size_t>(i) + 1] = s1[static_cast<std::size_t>(i)] + v;
        s2[static_cast<std::size_t>(i) + 1] = s2[static_cast<std::size_t>(i)] + v * v;
    }
    const auto seg_cost = [&](int b, int e) {
        const double sum = s1[static_cast<std::size_t>(e)] - s1[static_cast<std::size_t>(b)];
        const double sq = s2[static_cast<std::size_t>(e)] - s2[static_cast<std::size_t>(b)];
        return sq - sum * sum / static_cast<double>(e - b);
    };

    PenalizedCostCall best;
    best.cost = std::numeric_limits<double>::infinity();
    for (int k1 = sep; k1 + sep <= n - sep; ++k1) {
        const double head = seg_cost(0, k1);
        for (int k2 = k1 + sep; k2 <= n - sep; ++k2) {
            const double cost = head + seg_cost(k1, k2) + seg_cost(k2, n);
            if (cost < best.cost) {
                best.cost = cost;
                best.k1 = k1;
                best.k2 = k2;
            }
        }
    }
    best.point_mm = best.k2;

    // Diagnostics: how large the per-changepoint penalty may grow before a
    // smaller model wins.
    double cost1 = std::numeric_limits<double>::infinity();
    for (int k = sep; k <= n - sep; ++k)
        cost1 = std::min(cost1, seg_cost(0, k) + seg_cost(k, n));
    const double cost0 = seg_cost(0, n);
    best.beta_max = std::max(0.0, std::min(cost1 - best.cost, 0.5 * (cost0 - best.cost)));
    return best;
}

}  // namespace airway
