#pragma once

#include "airway/area_series.hpp"

namespace airway {

// Region volumes for one baseline/follow-up pair split at the dilatation
// point t: whole airway (carina to distal), carina to t, and t to distal,
// with the percentage volume change of each region.
struct VolumeReport {
    double v_total_baseline = 0.0;
    double v_total_followup = 0.0;
    double v_pre_baseline = 0.0;   // carina -> t
    double v_pre_followup = 0.0;
    double v_post_baseline = 0.0;  // t -> distal
    double v_post_followup = 0.0;
    double pvc_total = 0.0;
    double pvc_pre = 0.0;
    double pvc_post = 0.0;
};

// Composite trapezoid integral of area over arc length on [from_mm, to_mm].
// Both bounds must coincide with grid points.
double trapezium_volume(const AreaSeries& series, double from_mm, double to_mm);

double percent_volume_change(double v_baseline, double v_followup);

// t_mm must be strictly between the carina and the distal endpoint.
VolumeReport volume_report(const AlignedPair& pair, int t_mm);

}  // namespace airway
