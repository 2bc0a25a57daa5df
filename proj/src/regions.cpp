#include "geoscope/regions.hpp"

#include <cmath>
#include <stdexcept>

#include "geoscope/errors.hpp"

namespace geoscope {

double region_error(const std::vector<ExtendedRegion>& regions) {
    if (regions.empty()) throw EmptyInputError("region_error: no regions");
    double mean_radius = 0.0;
    for (const auto& r : regions) {
        if (!(r.mean_radius_km > 0.0)) {
            throw std::invalid_argument("region \"" + r.name + "\" has nonpositive mean radius");
        }
        mean_radius += r.mean_radius_km;
    }
    mean_radius /= static_cast<double>(regions.size());
    return mean_radius / std::sqrt(static_cast<double>(regions.size()));
}

RegionalReport regional_analysis(const std::vector<ExtendedRegion>& regions,
                                 std::optional<GeoCoord> center_override) {
    if (regions.empty()) throw EmptyInputError("regional_analysis: no regions");

    OccurrenceTable table;
    table.entries.reserve(regions.size());
    for (const auto& r : regions) {
        if (!(r.count > 0.0)) {
            throw std::invalid_argument("region \"" + r.name + "\" has nonpositive count");
        }
        table.entries.push_back({r.name, r.count, r.centroid});
    }
    const WeightTable weights = weights_from_counts(table);

    RegionalReport report;
    if (center_override) {
        report.center = PerceptionCenter{*center_override, 1.0};
        report.center_is_empirical = true;
    } else {
        std::vector<WeightedPoint> points;
        points.reserve(weights.entries.size());
        for (const auto& e : weights.entries) points.push_back({e.coord, e.weight});
        report.center = weighted_centroid(points);
    }
    report.radius_km = radius_of_perception(weights, report.center.coord);
    report.error_km = region_error(regions);
    report.n_regions = regions.size();
    return report;
}

ConsistencyDiagnostic consistency_check(const PerceptionReport& pointwise,
                                        const RegionalReport& regional, double sigma_factor,
                                        double pointwise_tolerance_km) {
    ConsistencyDiagnostic diag;
    diag.difference_km = std::abs(pointwise.radius_km - regional.radius_km);
    diag.threshold_km = sigma_factor * regional.error_km + pointwise_tolerance_km;
    diag.consistent = diag.difference_km <= diag.threshold_km;
    return diag;
}

}  // namespace geoscope
