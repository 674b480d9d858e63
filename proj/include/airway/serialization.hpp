#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "airway/area_series.hpp"
#include "airway/baseline_detectors.hpp"
#include "airway/dilatation_sim.hpp"
#include "airway/posterior.hpp"
#include "airway/rjmh_sampler.hpp"
#include "airway/volume_metrics.hpp"

namespace airway {

using ordered_json = nlohmann::ordered_json;

// CSV with header `arc_length_mm,area_mm2`; parse failures name the line.
AreaSeries read_area_csv(const std::filesystem::path& path);

// Aligned-pair record. Carries both area profiles alongside the
// log-difference signal so volume commands can run from the same file.
struct AlignedRecord {
    AlignedPair pair;
    LogDiffSeries y;
};

ordered_json aligned_to_json(const AlignedPair& pair);
AlignedRecord aligned_from_json(const ordered_json& j);
AlignedRecord read_aligned_record(const std::filesystem::path& path);

// Airway record for sweep inputs: {"y": [...]}.
ordered_json airway_to_json(const LogDiffSeries& y);
LogDiffSeries read_airway_json(const std::filesystem::path& path);

ordered_json detection_to_json(const std::optional<DilatationCall>& call,
                               const PosteriorHistogram& hist, const ChainTrace& trace);
ordered_json threshold_to_json(const std::optional<ThresholdCall>& call, std::size_t n);
ordered_json penalized_to_json(const PenalizedCostCall& call);
ordered_json volume_to_json(const VolumeReport& rep, int t_mm);

// One JSON Lines record per stored state: {iter, m, tau, segments}.
std::string trace_to_jsonl(const ChainTrace& trace);

// `alpha_mm,magnitude,detector,median_displacement_mm,n_calls,n_nocalls`.
std::string heatmap_to_csv(const SweepResult& result);

// Locale-independent shortest round-trip formatting.
std::string format_double(double v);

void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace airway
