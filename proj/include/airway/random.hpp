#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

// Small draw routines layered on std::mt19937_64. The standard distribution
// adaptors are implementation-defined, which would tie frozen test seeds to
// one standard library; these are fixed algorithms, so a seed means the same
// stream everywhere.
namespace airway::rng {

// Uniform on the open interval (0, 1).
inline double uniform01(std::mt19937_64& g) {
    return (static_cast<double>(g() >> 11) + 0.5) * 0x1.0p-53;
}

// Uniform over {0, 1, ..., bound-1}. Lemire multiply-shift; the bias is
// bounded by bound / 2^64.
inline std::uint64_t uniform_below(std::mt19937_64& g, std::uint64_t bound) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(g()) * bound) >> 64);
}

// Standard normal via Box-Muller, one value per call.
inline double normal(std::mt19937_64& g) {
    const double u1 = uniform01(g);
    const double u2 = uniform01(g);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

// N(0, sd^2); sd == 0 yields exactly 0 (identity-proposal test hook).
inline double normal_scaled(std::mt19937_64& g, double sd) {
    if (sd == 0.0) return 0.0;
    return sd * normal(g);
}

// Poisson by inversion of the product of uniforms; fine for small rates.
// rate == 0 yields exactly 0.
inline unsigned poisson(std::mt19937_64& g, double rate) {
    if (rate == 0.0) return 0;
    const double limit = std::exp(-rate);
    unsigned k = 0;
    double prod = uniform01(g);
    while (prod > limit) {
        ++k;
        prod *= uniform01(g);
    }
    return k;
}

// Gamma(shape, 1) by Marsaglia-Tsang squeeze, boosted for shape < 1.
inline double gamma(std::mt19937_64& g, double shape) {
    if (shape < 1.0) {
        const double boost = std::pow(uniform01(g), 1.0 / shape);
        return gamma(g, shape + 1.0) * boost;
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = normal(g);
        double v = 1.0 + c * x;
        if (v <= 0.0) continue;
        v = v * v * v;
        const double u = uniform01(g);
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

// Standard Student-t with nu degrees of freedom.
inline double student_t(std::mt19937_64& g, double nu) {
    const double z = normal(g);
    const double chi2 = 2.0 * gamma(g, 0.5 * nu);
    return z * std::sqrt(nu / chi2);
}

// splitmix64 step, used to derive independent per-task seeds from one seed.
inline std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace airway::rng
