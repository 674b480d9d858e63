#include "airway/area_series.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

#include "airway/errors.hpp"

namespace airway {

namespace {

constexpr double kGridTol = 1e-9;

// Value of the Lagrange polynomial through (xs[i], ys[i]), i in [first, first+count).
double lagrange_eval(const std::vector<double>& xs, const std::vector<double>& ys,
                     std::size_t first, std::size_t count, double x) {
    // Exact hit on a node returns the node value.
    for (std::size_t i = first; i < first + count; ++i) {
        if (xs[i] == x) return ys[i];
    }
    double acc = 0.0;
    for (std::size_t i = first; i < first + count; ++i) {
        double basis = 1.0;
        for (std::size_t j = first; j < first + count; ++j) {
            if (j == i) continue;
            basis *= (x - xs[j]) / (xs[i] - xs[j]);
        }
        acc += ys[i] * basis;
    }
    return acc;
}

}  // namespace

AreaSeries::AreaSeries(std::vector<double> arc, std::vector<double> area)
    : arc_mm(std::move(arc)), area_mm2(std::move(area)) {
    validate();
}

void AreaSeries::validate() const {
    if (arc_mm.size() != area_mm2.size())
        throw InputError("area series: arc/area length mismatch");
    if (arc_mm.size() < 2)
        throw InputError("area series: need at least 2 samples");
    if (arc_mm.front() < 0.0)
        throw InputError("area series: negative arc length");
    for (std::size_t i = 0; i < arc_mm.size(); ++i) {
        if (!std::isfinite(arc_mm[i]) || !std::isfinite(area_mm2[i]))
            throw InputError("area series: non-finite sample at row " + std::to_string(i));
        if (i > 0 && arc_mm[i] <= arc_mm[i - 1])
            throw InputError("area series: arc lengths not strictly increasing at row " +
                             std::to_string(i));
        if (area_mm2[i] <= 0.0)
            throw InputError("area series: non-positive area at row " + std::to_string(i));
    }
}

bool AreaSeries::on_unit_grid() const {
    for (std::size_t i = 0; i < arc_mm.size(); ++i) {
        if (std::abs(arc_mm[i] - static_cast<double>(i)) > kGridTol) return false;
    }
    return true;
}

AreaSeries resample_to_1mm(const AreaSeries& series) {
    series.validate();
    const std::size_t n_in = series.size();
    const bool linear = n_in < 4;

    const double last = series.arc_mm.back();
    const auto n_out = static_cast<std::size_t>(std::floor(last + kGridTol)) + 1;

    AreaSeries out;
    out.linear_fallback = linear;
    out.arc_mm.reserve(n_out);
    out.area_mm2.reserve(n_out);

    const auto& xs = series.arc_mm;
    const auto& ys = series.area_mm2;
    std::size_t seg = 0;  // xs[seg] <= x < xs[seg+1], clamped at the ends
    for (std::size_t g = 0; g < n_out; ++g) {
        const double x = static_cast<double>(g);
        while (seg + 2 < n_in && xs[seg + 1] <= x) ++seg;
        double value;
        if (linear) {
            const double t = (x - xs[seg]) / (xs[seg + 1] - xs[seg]);
            value = ys[seg] + t * (ys[seg + 1] - ys[seg]);
        } else {
            // 4-point stencil centred on the bracketing interval, shifted
            // inward at the ends (also covers extrapolation below xs[0]).
            std::size_t first = (seg == 0) ? 0 : seg - 1;
            first = std::min(first, n_in - 4);
            value = lagrange_eval(xs, ys, first, 4, x);
        }
        out.arc_mm.push_back(x);
        out.area_mm2.push_back(std::max(value, kAreaFloorMm2));
    }
    if (out.size() < 2)
        throw InputError("resample: series spans less than 2 mm");
    return out;
}

AlignedPair align_pair(const AreaSeries& baseline, const AreaSeries& followup) {
    baseline.validate();
    followup.validate();
    if (!baseline.on_unit_grid() || !followup.on_unit_grid())
        throw InputError("align: series must be resampled to the 1 mm grid first");
    const std::size_t min_len = kAlignWindow + kMaxAlignShiftMm;
    if (baseline.size() < min_len || followup.size() < min_len)
        throw InputError("align: both series need at least " + std::to_string(min_len) +
                         " samples");

    // Mean squared log-ratio over the overlap of the two 50-point windows.
    const auto objective = [&](int a) {
        double sum = 0.0;
        std::size_t count = 0;
        for (std::size_t x = 0; x < kAlignWindow; ++x) {
            const long long xf = static_cast<long long>(x) - a;
            if (xf < 0 || xf >= static_cast<long long>(kAlignWindow)) continue;
            const double r = std::log(baseline.area_mm2[x] /
                                      followup.area_mm2[static_cast<std::size_t>(xf)]);
            sum += r * r;
            ++count;
        }
        return sum / static_cast<double>(count);
    };

    // Candidate order encodes the tie-break: smallest |a| first, negative
    // before positive.
    int best_a = 0;
    double best = objective(0);
    for (int mag = 1; mag <= kMaxAlignShiftMm; ++mag) {
        for (int a : {-mag, mag}) {
            const double v = objective(a);
            if (v < best) {
                best = v;
                best_a = a;
            }
        }
    }

    // Aligned follow-up value at baseline position x is followup[x - a]. The
    // common domain starts at max(0, a) (a head trim is forced when a > 0)
    // and the longer tail is truncated from the distal end.
    const int a = best_a;
    const long long start = std::max(0, a);
    const long long len_b = static_cast<long long>(baseline.size());
    const long long len_f = static_cast<long long>(followup.size());
    const long long stop = std::min(len_b, len_f + a);
    if (stop <= start) throw InputError("align: no overlap after shift");
    const auto n = static_cast<std::size_t>(stop - start);

    AlignedPair pair;
    pair.shift_a = a;
    pair.n = n;
    pair.baseline.arc_mm.reserve(n);
    pair.baseline.area_mm2.reserve(n);
    pair.followup.arc_mm.reserve(n);
    pair.followup.area_mm2.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        pair.baseline.arc_mm.push_back(static_cast<double>(i));
        pair.followup.arc_mm.push_back(static_cast<double>(i));
        pair.baseline.area_mm2.push_back(
            baseline.area_mm2[static_cast<std::size_t>(start) + i]);
        pair.followup.area_mm2.push_back(
            followup.area_mm2[static_cast<std::size_t>(start - a) + i]);
    }
    return pair;
}

LogDiffSeries log_difference(const AlignedPair& pair) {
    if (pair.baseline.size() != pair.n || pair.followup.size() != pair.n)
        throw InputError("log_difference: pair length mismatch");
    LogDiffSeries out;
    out.y.reserve(pair.n);
    for (std::size_t i = 0; i < pair.n; ++i)
        out.y.push_back(std::log(pair.followup.area_mm2[i]) -
                        std::log(pair.baseline.area_mm2[i]));
    return out;
}

}  // namespace airway
