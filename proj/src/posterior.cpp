#include "airway/posterior.hpp"

#include <algorithm>
#include <cmath>

#include "airway/errors.hpp"

namespace airway {

namespace {

// Centered moving average with truncated windows at the edges.
std::vector<double> smooth3(const std::vector<double>& v) {
    const auto n = static_cast<int>(v.size());
    const int half = kPeakSmoothingWindow / 2;
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

}  // namespace

PosteriorHistogram pooled_histogram(const ChainTrace& trace, std::size_t n) {
    if (trace.samples.empty()) throw InputError("posterior: trace holds no stored samples");
    PosteriorHistogram hist;
    hist.mass.assign(n, 0.0);
    std::size_t total = 0;
    for (const auto& sample : trace.samples) {
        for (int t : sample.state.tau) {
            if (t < 0 || t >= static_cast<int>(n))
                throw InputError("posterior: stored changepoint outside the grid");
            hist.mass[static_cast<std::size_t>(t)] += 1.0;
            ++total;
        }
    }
    if (total == 0) {
        hist.no_changepoints = true;
        return hist;
    }
    for (double& m : hist.mass) m /= static_cast<double>(total);
    return hist;
}

std::vector<Peak> find_peaks(const PosteriorHistogram& hist) {
    if (hist.no_changepoints || hist.mass.empty()) return {};
    const std::vector<double> s = smooth3(hist.mass);
    const auto n = static_cast<int>(s.size());

    // Candidate maxima: runs of equal value whose outside neighbours are
    // strictly lower (or absent); one candidate at the run centre.
    std::vector<Peak> candidates;
    double global_max = 0.0;
    for (double v : s) global_max = std::max(global_max, v);
    if (global_max <= 0.0) return {};
    int i = 0;
    while (i < n) {
        int j = i;
        while (j + 1 < n && s[static_cast<std::size_t>(j + 1)] == s[static_cast<std::size_t>(i)])
            ++j;
        const double v = s[static_cast<std::size_t>(i)];
        const bool left_ok = (i == 0) || s[static_cast<std::size_t>(i - 1)] < v;
        const bool right_ok = (j == n - 1) || s[static_cast<std::size_t>(j + 1)] < v;
        if (left_ok && right_ok && v >= kPeakMassFloorFraction * global_max)
            candidates.push_back({(i + j) / 2, v});
        i = j + 1;
    }

    // Separation filter: accept in decreasing mass order (ties proximal
    // first), dropping any candidate closer than the minimum to an accepted
    // peak.
    std::stable_sort(candidates.begin(), candidates.end(), [](const Peak& a, const Peak& b) {
        if (a.mass != b.mass) return a.mass > b.mass;
        return a.location_mm < b.location_mm;
    });
    std::vector<Peak> kept;
    for (const Peak& c : candidates) {
        const bool clear = std::none_of(kept.begin(), kept.end(), [&](const Peak& k) {
            return std::abs(k.location_mm - c.location_mm) < kPeakMinSeparationMm;
        });
        if (clear) kept.push_back(c);
    }
    std::sort(kept.begin(), kept.end(),
              [](const Peak& a, const Peak& b) { return a.location_mm < b.location_mm; });
    return kept;
}

std::optional<DilatationCall> select_dilatation_point(const std::vector<Peak>& peaks) {
    if (peaks.empty()) return std::nullopt;
    DilatationCall call;
    call.peaks = peaks;
    std::sort(call.peaks.begin(), call.peaks.end(),
              [](const Peak& a, const Peak& b) { return a.location_mm < b.location_mm; });

    std::size_t first = 0;
    if (call.peaks.size() >= 2) {
        call.discarded_proximal_peak = call.peaks.front();
        first = 1;
    }
    const Peak* best = &call.peaks[first];
    for (std::size_t k = first + 1; k < call.peaks.size(); ++k) {
        if (call.peaks[k].mass >= best->mass) best = &call.peaks[k];
    }
    call.point_mm = best->location_mm;
    return call;
}

std::optional<DilatationCall> call_dilatation_point(const PosteriorHistogram& hist) {
    return select_dilatation_point(find_peaks(hist));
}

}  // namespace airway
