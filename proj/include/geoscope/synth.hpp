#pragma once

#include <cstdint>

#include "geoscope/geo.hpp"
#include "geoscope/perception.hpp"

namespace geoscope {

// Pseudo-random generator identity, recorded in synth output metadata so
// golden outputs stay reproducible across platforms: the standard-specified
// mt19937_64 stream plus an explicit Box-Muller transform (the C++ library
// normal_distribution is implementation-defined and therefore not used).
inline constexpr const char* kGeneratorId = "mt19937_64/box-muller/v1";

/**
 * Specification of a synthetic bivariate-normal point cloud, sampled in the
 * local tangent plane at `center` and pushed onto the sphere by geodesic
 * displacement. `orientation_rad` is the major-axis angle in the same
 * rotated-frame convention the ellipse of perception reports (0 = N-S
 * meridian, +pi/2 = E-W), so analysis of an anisotropic cloud recovers it
 * directly.
 */
struct CloudSpec {
    GeoCoord center;
    double sigma_major_km = 0.0;
    double sigma_minor_km = 0.0;
    double orientation_rad = 0.0;
    std::size_t n = 0;
    std::uint64_t seed = 0;
};

/**
 * Draws the cloud deterministically: identical spec and seed give bitwise
 * identical tables. Each point gets count 1 and a generated unique name.
 * Requires sigma_major >= sigma_minor > 0, n >= 1, and sigma_major < 500 km
 * (tangent-plane regime); otherwise SpecOutOfRangeError.
 */
OccurrenceTable sample_cloud(const CloudSpec& spec);

}  // namespace geoscope
