#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "geoscope/geo.hpp"
#include "geoscope/perception.hpp"

namespace geoscope {

/**
 * A non-pointlike geographic object, represented by a user-supplied centroid
 * (or any significant place standing in for it) and a characteristic extent.
 */
struct ExtendedRegion {
    std::string name;
    double count = 0.0;
    GeoCoord centroid;
    double mean_radius_km = 0.0;
};

struct RegionalReport {
    PerceptionCenter center;
    bool center_is_empirical = false;
    double radius_km = 0.0;
    // Statistical error from the finite region extents:
    // mean(mean_radius_km) / sqrt(n_regions).
    double error_km = 0.0;
    std::size_t n_regions = 0;
};

// mean of the region extents divided by sqrt(number of regions).
// Throws EmptyInputError.
double region_error(const std::vector<ExtendedRegion>& regions);

/**
 * Runs the perception pipeline over regions treated as points at their
 * centroids with weight proportional to count, independently of any
 * pointlike analysis. Attaches the extent-driven error estimate.
 */
RegionalReport regional_analysis(const std::vector<ExtendedRegion>& regions,
                                 std::optional<GeoCoord> center_override = {});

struct ConsistencyDiagnostic {
    double difference_km = 0.0;
    double threshold_km = 0.0;
    bool consistent = false;
};

/**
 * Compares a pointwise and a regional radius for the same text:
 * |R_point - R_region| against sigma_factor * error_km plus a configurable
 * pointwise tolerance (default: 1 sigma, no extra tolerance).
 */
ConsistencyDiagnostic consistency_check(const PerceptionReport& pointwise,
                                        const RegionalReport& regional,
                                        double sigma_factor = 1.0,
                                        double pointwise_tolerance_km = 0.0);

}  // namespace geoscope
