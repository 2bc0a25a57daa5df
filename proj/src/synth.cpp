#include "geoscope/synth.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <string>

#include "geoscope/errors.hpp"

namespace geoscope {

namespace {

// Uniform in (0, 1]: 53 random bits, zero excluded so log() stays finite.
double uniform_open(std::mt19937_64& rng) {
    return static_cast<double>((rng() >> 11) + 1) * 0x1p-53;
}

// Uniform in [0, 1).
double uniform_halfopen(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1p-53;
}

std::size_t digits(std::size_t n) {
    std::size_t d = 1;
    while (n >= 10) {
        n /= 10;
        ++d;
    }
    return d;
}

}  // namespace

OccurrenceTable sample_cloud(const CloudSpec& spec) {
    if (spec.n < 1) throw SpecOutOfRangeError("cloud spec: n must be at least 1");
    if (!(spec.sigma_minor_km > 0.0)) {
        throw SpecOutOfRangeError("cloud spec: sigma_minor_km must be positive");
    }
    if (!(spec.sigma_major_km >= spec.sigma_minor_km)) {
        throw SpecOutOfRangeError("cloud spec: sigma_major_km must be >= sigma_minor_km");
    }
    if (!(spec.sigma_major_km < 500.0)) {
        throw SpecOutOfRangeError(
            "cloud spec: sigma_major_km must be below 500 km (tangent-plane regime)");
    }

    std::mt19937_64 rng(spec.seed);
    const double cos_psi = std::cos(spec.orientation_rad);
    const double sin_psi = std::sin(spec.orientation_rad);
    const std::size_t width = std::max<std::size_t>(4, digits(spec.n - 1));

    OccurrenceTable table;
    table.entries.reserve(spec.n);
    for (std::size_t i = 0; i < spec.n; ++i) {
        // Box-Muller pair: one draw along each principal axis.
        const double u1 = uniform_open(rng);
        const double u2 = uniform_halfopen(rng);
        const double magnitude = std::sqrt(-2.0 * std::log(u1));
        const double along = magnitude * std::cos(2.0 * kPi * u2) * spec.sigma_major_km;
        const double across = magnitude * std::sin(2.0 * kPi * u2) * spec.sigma_minor_km;

        // Tangent-plane coordinates in the rotated frame (x1 toward azimuth 0,
        // x2 toward azimuth +pi/2), then geodesic push-forward.
        const double x1 = along * cos_psi - across * sin_psi;
        const double x2 = along * sin_psi + across * cos_psi;
        const double planar_radius = std::hypot(x1, x2);
        const double azimuth = std::atan2(x2, x1);
        const double bearing = kPi - azimuth;

        char name[32];
        std::snprintf(name, sizeof(name), "p%0*zu", static_cast<int>(width), i);
        table.entries.push_back(
            {name, 1.0, destination_point(spec.center, bearing, planar_radius)});
    }
    return table;
}

}  // namespace geoscope
