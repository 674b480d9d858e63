#include "airway/dilatation_sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "airway/baseline_detectors.hpp"
#include "airway/errors.hpp"
#include "airway/posterior.hpp"
#include "airway/random.hpp"

namespace airway {

const char* detector_name(DetectorKind kind) {
    switch (kind) {
        case DetectorKind::kRjmh: return "rjmh";
        case DetectorKind::kThreshold: return "threshold";
        case DetectorKind::kPenalizedCost: return "lavielle";
    }
    return "unknown";
}

DetectorKind detector_from_name(const std::string& name) {
    if (name == "rjmh") return DetectorKind::kRjmh;
    if (name == "threshold") return DetectorKind::kThreshold;
    if (name == "lavielle" || name == "penalized_cost") return DetectorKind::kPenalizedCost;
    throw InputError("unknown detector '" + name + "'");
}

LogDiffSeries apply_dilatation(const LogDiffSeries& y, const LogisticDilatation& d) {
    const auto n = static_cast<double>(y.size());
    if (y.size() < 2) throw InputError("dilatation: series too short");
    if (d.magnitude != 0.0 &&
        !(d.alpha_from_distal_mm > 0.0 && d.alpha_from_distal_mm < n - 1.0))
        throw InputError("dilatation: alpha outside the series extent");

    const double x_alpha = (n - 1.0) - d.alpha_from_distal_mm;
    LogDiffSeries out;
    out.y.reserve(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (d.magnitude == 0.0) {
            out.y.push_back(y.y[i]);
            continue;
        }
        const double x = static_cast<double>(i);
        out.y.push_back(y.y[i] +
                        d.magnitude / (1.0 + std::exp(-d.steepness * (x - x_alpha))));
    }
    return out;
}

double dilatation_truth_mm(const LogDiffSeries& y, const LogisticDilatation& d) {
    return static_cast<double>(y.size()) - 1.0 - d.alpha_from_distal_mm;
}

double displacement(double predicted_mm, double truth_mm) {
    return predicted_mm - truth_mm;
}

double median(std::vector<double> values) {
    if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(values.begin(), values.end());
    const std::size_t h = values.size() / 2;
    if (values.size() % 2 == 1) return values[h];
    return 0.5 * (values[h - 1] + values[h]);
}

LogDiffSeries synthetic_noise_series(std::size_t n, double sigma, double nu,
                                     std::uint64_t seed) {
    std::mt19937_64 g(seed);
    LogDiffSeries out;
    out.y.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.y.push_back(sigma * rng::student_t(g, nu));
    return out;
}

namespace {

// All detector displacements for one (alpha, magnitude, airway) triple.
// An entry of NaN means the detector made no call.
std::vector<double> detect_all(const LogDiffSeries& healthy, double alpha, double magnitude,
                               const std::vector<DetectorKind>& detectors,
                               const SamplerConfig& base_config, std::uint64_t cell_seed) {
    const LogisticDilatation dil{magnitude, alpha, 0.5};
    const LogDiffSeries dilated = apply_dilatation(healthy, dil);
    const double truth = dilatation_truth_mm(healthy, dil);

    std::vector<double> out;
    out.reserve(detectors.size());
    for (DetectorKind kind : detectors) {
        double point = std::numeric_limits<double>::quiet_NaN();
        switch (kind) {
            case DetectorKind::kRjmh: {
                SamplerConfig config = base_config;
                config.seed = cell_seed;
                RjmhSampler sampler(dilated, PriorSpec{}, config);
                const ChainTrace trace = sampler.run();
                const auto hist = pooled_histogram(trace, dilated.size());
                if (const auto call = call_dilatation_point(hist))
                    point = static_cast<double>(call->point_mm);
                break;
            }
            case DetectorKind::kThreshold: {
                if (const auto call = threshold_detect(dilated))
                    point = static_cast<double>(call->point_mm);
                break;
            }
            case DetectorKind::kPenalizedCost:
                point = static_cast<double>(penalized_cost_detect(dilated).point_mm);
                break;
        }
        out.push_back(std::isnan(point) ? point : displacement(point, truth));
    }
    return out;
}

}  // namespace

SweepResult run_sweep(const SweepGrid& grid, const std::vector<DetectorKind>& detectors,
                      const SamplerConfig& config, unsigned threads) {
    if (grid.airways.empty()) throw InputError("sweep: no airways supplied");
    if (detectors.empty()) throw InputError("sweep: no detectors selected");

    const std::size_t n_cells = grid.alphas.size() * grid.magnitudes.size();
    // displacements[cell][airway][detector]
    std::vector<std::vector<std::vector<double>>> raw(n_cells);

    const auto run_cell = [&](std::size_t cell) {
        const std::size_t ai = cell / grid.magnitudes.size();
        const std::size_t mi = cell % grid.magnitudes.size();
        raw[cell].reserve(grid.airways.size());
        for (std::size_t wi = 0; wi < grid.airways.size(); ++wi) {
            const std::uint64_t cell_seed =
                rng::mix(rng::mix(rng::mix(config.seed + ai + 1) + mi + 1) + wi + 1);
            raw[cell].push_back(detect_all(grid.airways[wi], grid.alphas[ai],
                                           grid.magnitudes[mi], detectors, config,
                                           cell_seed));
        }
    };

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    if (threads <= 1 || n_cells <= 1) {
        for (std::size_t cell = 0; cell < n_cells; ++cell) run_cell(cell);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t cell = next.fetch_add(1);
                    if (cell >= n_cells) return;
                    run_cell(cell);
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    SweepResult result;
    result.cells.reserve(n_cells * detectors.size());
    for (std::size_t cell = 0; cell < n_cells; ++cell) {
        const std::size_t ai = cell / grid.magnitudes.size();
        const std::size_t mi = cell % grid.magnitudes.size();
        for (std::size_t di = 0; di < detectors.size(); ++di) {
            HeatmapCell out;
            out.alpha_mm = grid.alphas[ai];
            out.magnitude = grid.magnitudes[mi];
            out.detector = detectors[di];
            for (std::size_t wi = 0; wi < grid.airways.size(); ++wi) {
                const double d = raw[cell][wi][di];
                if (std::isnan(d))
                    ++out.n_nocalls;
                else
                    out.displacements.push_back(d);
            }
            out.median_displacement = median(out.displacements);
            result.cells.push_back(std::move(out));
        }
    }
    return result;
}

}  // namespace airway
