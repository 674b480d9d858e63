#include "airway/serialization.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "airway/errors.hpp"

namespace airway {

namespace {

double parse_double_field(const std::string& field, const std::filesystem::path& path,
                          std::size_t line_no) {
    double value = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end)
        throw InputError(path.string() + ":" + std::to_string(line_no) +
                         ": cannot parse number '" + field + "'");
    return value;
}

std::string strip_cr(std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

}  // namespace

AreaSeries read_area_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path.string() + "'");

    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line))
        throw InputError(path.string() + ":1: empty file");
    ++line_no;
    if (strip_cr(line) != "arc_length_mm,area_mm2")
        throw InputError(path.string() + ":1: expected header 'arc_length_mm,area_mm2'");

    AreaSeries series;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw InputError(path.string() + ":" + std::to_string(line_no) +
                             ": expected two comma-separated fields");
        series.arc_mm.push_back(parse_double_field(line.substr(0, comma), path, line_no));
        series.area_mm2.push_back(parse_double_field(line.substr(comma + 1), path, line_no));
    }
    try {
        series.validate();
    } catch (const InputError& e) {
        throw InputError(path.string() + ": " + e.what());
    }
    return series;
}

ordered_json aligned_to_json(const AlignedPair& pair) {
    ordered_json j;
    j["shift_a"] = pair.shift_a;
    j["n"] = pair.n;
    j["y"] = log_difference(pair).y;
    j["baseline_area"] = pair.baseline.area_mm2;
    j["followup_area"] = pair.followup.area_mm2;
    return j;
}

AlignedRecord aligned_from_json(const ordered_json& j) {
    AlignedRecord rec;
    try {
        rec.pair.shift_a = j.at("shift_a").get<int>();
        rec.pair.n = j.at("n").get<std::size_t>();
        rec.y.y = j.at("y").get<std::vector<double>>();
        rec.pair.baseline.area_mm2 = j.at("baseline_area").get<std::vector<double>>();
        rec.pair.followup.area_mm2 = j.at("followup_area").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("aligned record: ") + e.what());
    }
    if (rec.pair.baseline.area_mm2.size() != rec.pair.n ||
        rec.pair.followup.area_mm2.size() != rec.pair.n || rec.y.size() != rec.pair.n)
        throw InputError("aligned record: list lengths do not match n");
    for (std::size_t i = 0; i < rec.pair.n; ++i) {
        rec.pair.baseline.arc_mm.push_back(static_cast<double>(i));
        rec.pair.followup.arc_mm.push_back(static_cast<double>(i));
    }
    rec.pair.baseline.validate();
    rec.pair.followup.validate();
    return rec;
}

AlignedRecord read_aligned_record(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path.string() + "'");
    ordered_json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(path.string() + ": " + e.what());
    }
    return aligned_from_json(j);
}

ordered_json airway_to_json(const LogDiffSeries& y) {
    ordered_json j;
    j["n"] = y.size();
    j["y"] = y.y;
    return j;
}

LogDiffSeries read_airway_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path.string() + "'");
    ordered_json j;
    try {
        in >> j;
        LogDiffSeries y;
        y.y = j.at("y").get<std::vector<double>>();
        return y;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(path.string() + ": " + e.what());
    }
}

namespace {

ordered_json peak_to_json(const Peak& p) {
    return ordered_json::array({p.location_mm, p.mass});
}

}  // namespace

ordered_json detection_to_json(const std::optional<DilatationCall>& call,
                               const PosteriorHistogram& hist, const ChainTrace& trace) {
    ordered_json j;
    j["method"] = "rjmh";
    j["no_call"] = !call.has_value();
    if (call) {
        j["point_mm"] = call->point_mm;
        ordered_json peaks = ordered_json::array();
        for (const Peak& p : call->peaks) peaks.push_back(peak_to_json(p));
        j["peaks"] = peaks;
        j["discarded"] = call->discarded_proximal_peak
                             ? peak_to_json(*call->discarded_proximal_peak)
                             : ordered_json(nullptr);
    } else {
        j["point_mm"] = nullptr;
        j["peaks"] = ordered_json::array();
        j["discarded"] = nullptr;
    }
    j["histogram"] = hist.mass;

    ordered_json moves;
    for (std::size_t k = 0; k < kMoveKinds; ++k) {
        const MoveStats& s = trace.moves[k];
        ordered_json m;
        m["dispatched"] = s.dispatched;
        m["accepted"] = s.accepted;
        m["rejected"] = s.rejected;
        m["auto_rejected"] = s.auto_rejected;
        m["acceptance_rate"] =
            s.dispatched == 0 ? 0.0
                              : static_cast<double>(s.accepted) /
                                    static_cast<double>(s.dispatched);
        moves[move_name(static_cast<MoveKind>(k))] = m;
    }
    ordered_json diag;
    diag["moves"] = moves;
    diag["stored_samples"] = trace.samples.size();
    diag["n"] = trace.n;
    diag["degenerate_init"] = trace.degenerate_init;
    j["diagnostics"] = diag;
    return j;
}

ordered_json threshold_to_json(const std::optional<ThresholdCall>& call, std::size_t n) {
    ordered_json j;
    j["method"] = "threshold";
    j["no_call"] = !call.has_value();
    if (call) {
        j["point_mm"] = call->point_mm;
        j["q3"] = call->q3;
        j["run_start_mm"] = call->run_start_mm;
        j["exceeds"] = call->exceeds;
        j["smoothed"] = call->smoothed;
    } else {
        j["point_mm"] = nullptr;
    }
    j["n"] = n;
    return j;
}

ordered_json penalized_to_json(const PenalizedCostCall& call) {
    ordered_json j;
    j["method"] = "lavielle";
    j["no_call"] = false;
    j["point_mm"] = call.point_mm;
    j["k1"] = call.k1;
    j["k2"] = call.k2;
    j["cost"] = call.cost;
    j["beta_max"] = call.beta_max;
    return j;
}

ordered_json volume_to_json(const VolumeReport& rep, int t_mm) {
    ordered_json j;
    j["t_mm"] = t_mm;
    j["v_total_baseline"] = rep.v_total_baseline;
    j["v_total_followup"] = rep.v_total_followup;
    j["v_pre_baseline"] = rep.v_pre_baseline;
    j["v_pre_followup"] = rep.v_pre_followup;
    j["v_post_baseline"] = rep.v_post_baseline;
    j["v_post_followup"] = rep.v_post_followup;
    j["pvc_total"] = rep.pvc_total;
    j["pvc_pre"] = rep.pvc_pre;
    j["pvc_post"] = rep.pvc_post;
    return j;
}

std::string trace_to_jsonl(const ChainTrace& trace) {
    std::string out;
    for (const StoredSample& sample : trace.samples) {
        ordered_json j;
        j["iter"] = sample.iter;
        j["m"] = sample.state.m;
        j["tau"] = sample.state.tau;
        ordered_json segs = ordered_json::array();
        for (const SegmentParams& s : sample.state.segments) {
            ordered_json seg;
            seg["mu"] = s.mu;
            seg["sigma2"] = s.sigma2;
            seg["nu"] = s.nu;
            segs.push_back(seg);
        }
        j["segments"] = segs;
        out += j.dump();
        out += '\n';
    }
    return out;
}

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) return "nan";
    return std::string(buf, ptr);
}

std::string heatmap_to_csv(const SweepResult& result) {
    std::string out = "alpha_mm,magnitude,detector,median_displacement_mm,n_calls,n_nocalls\n";
    for (const HeatmapCell& cell : result.cells) {
        out += format_double(cell.alpha_mm);
        out += ',';
        out += format_double(cell.magnitude);
        out += ',';
        out += detector_name(cell.detector);
        out += ',';
        out += format_double(cell.median_displacement);
        out += ',';
        out += std::to_string(cell.displacements.size());
        out += ',';
        out += std::to_string(cell.n_nocalls);
        out += '\n';
    }
    return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path.string() + "'");
    out << content;
}

}  // namespace airway
