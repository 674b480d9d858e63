#include "airway/volume_metrics.hpp"

#include <cmath>
#include <cstddef>
#include <string>

#include "airway/errors.hpp"

namespace airway {

namespace {

constexpr double kGridTol = 1e-9;

std::size_t grid_index(const AreaSeries& series, double x_mm) {
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (std::abs(series.arc_mm[i] - x_mm) <= kGridTol) return i;
    }
    throw InputError("volume: bound " + std::to_string(x_mm) + " mm is not a grid point");
}

// Integration tolerates zero areas (a cross section may vanish at a bound),
// so only the structural invariants are enforced here.
void check_integrable(const AreaSeries& series) {
    if (series.arc_mm.size() != series.area_mm2.size())
        throw InputError("volume: arc/area length mismatch");
    if (series.size() < 2) throw InputError("volume: need at least 2 samples");
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (!std::isfinite(series.arc_mm[i]) || !std::isfinite(series.area_mm2[i]))
            throw InputError("volume: non-finite sample");
        if (i > 0 && series.arc_mm[i] <= series.arc_mm[i - 1])
            throw InputError("volume: arc lengths not strictly increasing");
    }
}

}  // namespace

double trapezium_volume(const AreaSeries& series, double from_mm, double to_mm) {
    check_integrable(series);
    if (!(from_mm < to_mm)) throw InputError("volume: bounds reversed or equal");
    const std::size_t lo = grid_index(series, from_mm);
    const std::size_t hi = grid_index(series, to_mm);
    double acc = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
        acc += 0.5 * (series.area_mm2[i] + series.area_mm2[i + 1]) *
               (series.arc_mm[i + 1] - series.arc_mm[i]);
    }
    return acc;
}

double percent_volume_change(double v_baseline, double v_followup) {
    return 100.0 * (v_followup - v_baseline) / v_baseline;
}

VolumeReport volume_report(const AlignedPair& pair, int t_mm) {
    if (pair.n < 3) throw InputError("volume: pair too short to split");
    const double distal = pair.baseline.arc_mm.back();
    if (!(t_mm > 0 && static_cast<double>(t_mm) < distal))
        throw InputError("volume: t must lie strictly inside the airway");

    const double t = t_mm;
    VolumeReport rep;
    rep.v_total_baseline = trapezium_volume(pair.baseline, 0.0, distal);
    rep.v_total_followup = trapezium_volume(pair.followup, 0.0, distal);
    rep.v_pre_baseline = trapezium_volume(pair.baseline, 0.0, t);
    rep.v_pre_followup = trapezium_volume(pair.followup, 0.0, t);
    rep.v_post_baseline = trapezium_volume(pair.baseline, t, distal);
    rep.v_post_followup = trapezium_volume(pair.followup, t, distal);
    rep.pvc_total = percent_volume_change(rep.v_total_baseline, rep.v_total_followup);
    rep.pvc_pre = percent_volume_change(rep.v_pre_baseline, rep.v_pre_followup);
    rep.pvc_post = percent_volume_change(rep.v_post_baseline, rep.v_post_followup);
    return rep;
}

}  // namespace airway
