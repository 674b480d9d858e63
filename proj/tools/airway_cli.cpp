#include <algorithm>
#include <chrono>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "airway/baseline_detectors.hpp"
#include "airway/dilatation_sim.hpp"
#include "airway/errors.hpp"
#include "airway/posterior.hpp"
#include "airway/random.hpp"
#include "airway/serialization.hpp"
#include "airway/version.hpp"
#include "airway/volume_metrics.hpp"

namespace {

namespace fs = std::filesystem;
using airway::ordered_json;

void emit(const std::string& content, const std::string& out_path) {
    if (out_path.empty())
        std::cout << content;
    else
        airway::write_text_file(out_path, content);
}

std::string iso8601_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

ordered_json config_json(const airway::SamplerConfig& config) {
    ordered_json j;
    j["iterations"] = config.iterations;
    j["burn_in_fraction"] = config.burn_in_fraction;
    j["thin_stride"] = config.thin_stride;
    j["k_max"] = config.k_max;
    j["epsilon"] = config.epsilon;
    j["lambda"] = config.lambda;
    j["seed"] = config.seed;
    return j;
}

void write_manifest(const std::string& manifest_path, const std::string& command,
                    const std::vector<std::string>& inputs,
                    const airway::SamplerConfig* config, const ordered_json& extra) {
    if (manifest_path.empty()) return;
    ordered_json j;
    j["command"] = command;
    j["inputs"] = inputs;
    if (config) {
        j["config"] = config_json(*config);
        j["seed"] = config->seed;
    }
    if (!extra.empty()) j["grid"] = extra;
    j["version"] = airway::kVersion;
    j["timestamp"] = iso8601_now();
    airway::write_text_file(manifest_path, j.dump(2) + "\n");
}

void add_sampler_flags(CLI::App* cmd, airway::SamplerConfig& config) {
    cmd->add_option("--iterations", config.iterations, "Chain length N");
    cmd->add_option("--burn-in", config.burn_in_fraction, "Burn-in fraction of N");
    cmd->add_option("--thin", config.thin_stride, "Keep every T-th post-burn-in state");
    cmd->add_option("--kmax", config.k_max, "Maximum number of changepoints");
    cmd->add_option("--epsilon", config.epsilon, "Gaussian proposal std");
    cmd->add_option("--lambda", config.lambda, "Poisson rate for changepoint shifts");
    cmd->add_option("--seed", config.seed, "RNG seed");
}

int run_cli(int argc, char** argv) {
    CLI::App app{"Bayesian changepoint detection on airway area profiles"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", airway::kVersion);

    std::string out_path;
    std::string manifest_path;
    app.add_option("--out", out_path, "Write primary output here instead of stdout");
    app.add_option("--manifest", manifest_path, "Write a run manifest to this path");

    // align
    auto* align = app.add_subcommand("align", "Resample two area CSVs to 1 mm and align them");
    std::string baseline_path;
    std::string followup_path;
    align->add_option("baseline", baseline_path, "Baseline scan CSV")->required();
    align->add_option("followup", followup_path, "Follow-up scan CSV")->required();

    // detect
    auto* detect = app.add_subcommand("detect", "Locate the dilatation point in an aligned pair");
    std::string aligned_path;
    std::string method = "rjmh";
    std::string trace_path;
    airway::SamplerConfig config;
    detect->add_option("aligned", aligned_path, "Aligned-pair JSON from `align`")->required();
    detect->add_option("--method", method, "rjmh, threshold, or lavielle")
        ->check(CLI::IsMember({"rjmh", "threshold", "lavielle"}));
    detect->add_option("--trace", trace_path, "Write the thinned chain as JSON Lines");
    add_sampler_flags(detect, config);

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Generate synthetic healthy airway series");
    std::string out_dir;
    std::size_t sim_count = 14;
    std::size_t sim_length = 120;
    double sim_sigma = 0.1;
    double sim_nu = 10.0;
    std::uint64_t sim_seed = 1;
    simulate->add_option("--out-dir", out_dir, "Directory for airway JSON files")->required();
    simulate->add_option("--count", sim_count, "Number of airways");
    simulate->add_option("--length", sim_length, "Samples per airway (mm)");
    simulate->add_option("--sigma", sim_sigma, "Noise scale");
    simulate->add_option("--nu", sim_nu, "Noise degrees of freedom");
    simulate->add_option("--seed", sim_seed, "RNG seed");

    // evaluate
    auto* evaluate = app.add_subcommand(
        "evaluate", "Sweep the (alpha, magnitude) grid over an airway directory");
    std::string airway_dir;
    std::vector<std::string> detector_names{"rjmh", "threshold", "lavielle"};
    airway::SweepGrid grid;
    unsigned threads = 0;
    airway::SamplerConfig eval_config;
    evaluate->add_option("--airways", airway_dir, "Directory of airway JSON files")->required();
    evaluate->add_option("--detectors", detector_names, "Comma-separated detector list")
        ->delimiter(',');
    evaluate->add_option("--alphas", grid.alphas, "Dilatation offsets from the distal end (mm)")
        ->delimiter(',');
    evaluate->add_option("--magnitudes", grid.magnitudes, "Dilatation magnitudes")
        ->delimiter(',');
    evaluate->add_option("--threads", threads, "Worker threads (0 = hardware)");
    add_sampler_flags(evaluate, eval_config);

    // volume
    auto* volume = app.add_subcommand("volume", "Region volumes and PVC for an aligned pair");
    std::string volume_aligned_path;
    int t_mm = 0;
    std::string volume_csv_path;
    volume->add_option("aligned", volume_aligned_path, "Aligned-pair JSON from `align`")
        ->required();
    volume->add_option("--t", t_mm, "Dilatation point (mm from carina)")->required();
    volume->add_option("--csv", volume_csv_path, "Also write a one-row report CSV here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (align->parsed()) {
        const airway::AreaSeries baseline =
            airway::resample_to_1mm(airway::read_area_csv(baseline_path));
        const airway::AreaSeries followup =
            airway::resample_to_1mm(airway::read_area_csv(followup_path));
        const airway::AlignedPair pair = airway::align_pair(baseline, followup);
        emit(airway::aligned_to_json(pair).dump(2) + "\n", out_path);
        write_manifest(manifest_path, "align", {baseline_path, followup_path}, nullptr, {});
        return 0;
    }

    if (detect->parsed()) {
        config.validate();
        const airway::AlignedRecord rec = airway::read_aligned_record(aligned_path);
        ordered_json result;
        if (method == "rjmh") {
            airway::RjmhSampler sampler(rec.y, airway::PriorSpec{}, config);
            const airway::ChainTrace trace = sampler.run();
            const auto hist = airway::pooled_histogram(trace, rec.y.size());
            const auto call = airway::call_dilatation_point(hist);
            result = airway::detection_to_json(call, hist, trace);
            if (!trace_path.empty())
                airway::write_text_file(trace_path, airway::trace_to_jsonl(trace));
        } else if (method == "threshold") {
            result = airway::threshold_to_json(airway::threshold_detect(rec.y), rec.y.size());
        } else {
            result = airway::penalized_to_json(airway::penalized_cost_detect(rec.y));
        }
        emit(result.dump(2) + "\n", out_path);
        write_manifest(manifest_path, "detect", {aligned_path}, &config, {});
        return 0;
    }

    if (simulate->parsed()) {
        fs::create_directories(out_dir);
        for (std::size_t i = 0; i < sim_count; ++i) {
            const airway::LogDiffSeries y = airway::synthetic_noise_series(
                sim_length, sim_sigma, sim_nu, airway::rng::mix(sim_seed + i));
            char name[32];
            std::snprintf(name, sizeof(name), "airway_%02zu.json", i);
            airway::write_text_file(fs::path(out_dir) / name,
                                    airway::airway_to_json(y).dump() + "\n");
        }
        write_manifest(manifest_path, "simulate", {out_dir}, nullptr, {});
        return 0;
    }

    if (evaluate->parsed()) {
        eval_config.validate();
        std::vector<fs::path> files;
        if (!fs::is_directory(airway_dir))
            throw airway::InputError("'" + airway_dir + "' is not a directory");
        for (const auto& entry : fs::directory_iterator(airway_dir)) {
            if (entry.path().extension() == ".json") files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        for (const auto& file : files) grid.airways.push_back(airway::read_airway_json(file));

        std::vector<airway::DetectorKind> detectors;
        for (const auto& name : detector_names)
            detectors.push_back(airway::detector_from_name(name));

        const airway::SweepResult result =
            airway::run_sweep(grid, detectors, eval_config, threads);
        emit(airway::heatmap_to_csv(result), out_path);
        ordered_json grid_json;
        grid_json["alphas"] = grid.alphas;
        grid_json["magnitudes"] = grid.magnitudes;
        grid_json["airways"] = files.size();
        write_manifest(manifest_path, "evaluate", {airway_dir}, &eval_config, grid_json);
        return 0;
    }

    if (volume->parsed()) {
        const airway::AlignedRecord rec = airway::read_aligned_record(volume_aligned_path);
        const airway::VolumeReport rep = airway::volume_report(rec.pair, t_mm);
        emit(airway::volume_to_json(rep, t_mm).dump(2) + "\n", out_path);
        if (!volume_csv_path.empty()) {
            char row[160];
            std::snprintf(row, sizeof(row), "airway,pvc_total,pvc_post,pvc_pre\n%s,%.1f,%.1f,%.1f\n",
                          fs::path(volume_aligned_path).stem().string().c_str(), rep.pvc_total,
                          rep.pvc_post, rep.pvc_pre);
            airway::write_text_file(volume_csv_path, row);
        }
        write_manifest(manifest_path, "volume", {volume_aligned_path}, nullptr, {});
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run_cli(argc, argv);
    } catch (const airway::InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}
