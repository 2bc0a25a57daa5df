#include "geoscope/perception.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "geoscope/errors.hpp"

namespace geoscope {

namespace {

constexpr double kIsotropyThreshold = 1e-9;

std::vector<WeightedPoint> as_weighted_points(const WeightTable& weights) {
    std::vector<WeightedPoint> points;
    points.reserve(weights.entries.size());
    for (const auto& e : weights.entries) points.push_back({e.coord, e.weight});
    return points;
}

struct TensorComponents {
    double i_plus = 0.0;
    double i_minus = 0.0;
    double i_12 = 0.0;
};

TensorComponents accumulate_tensor(const WeightTable& weights, const GeoCoord& center) {
    TensorComponents t;
    for (const auto& e : weights.entries) {
        const double d = great_circle_distance_km(center, e.coord);
        const double colat = d / kEarthRadiusKm;
        if (colat < kPoleTolerance) continue;  // at the center: d^2 term vanishes
        const double phi = azimuth_in_center_frame(center, e.coord);
        const double half_wd2 = 0.5 * e.weight * d * d;
        t.i_plus += half_wd2;
        t.i_minus += half_wd2 * std::cos(2.0 * phi);
        t.i_12 += half_wd2 * std::sin(2.0 * phi);
    }
    return t;
}

PerceptionEllipse ellipse_from_tensor(const TensorComponents& t) {
    PerceptionEllipse e;
    e.i_plus = t.i_plus;
    e.i_minus = t.i_minus;
    e.i_12 = t.i_12;

    const double anisotropy = std::hypot(t.i_minus, t.i_12);
    const double a2 = t.i_plus + anisotropy;
    double b2 = t.i_plus - anisotropy;
    if (b2 < 0.0) b2 = 0.0;  // rounding floor; mathematically b2 >= 0
    e.a = std::sqrt(a2);
    e.b = std::sqrt(b2);
    e.isotropic = anisotropy < kIsotropyThreshold * t.i_plus;
    if (!e.isotropic) {
        // Major-axis angle, folded into (-pi/2, pi/2] (atan2 can return
        // exactly -pi for i_12 == -0).
        double phi = 0.5 * std::atan2(t.i_12, t.i_minus);
        if (phi <= -0.5 * kPi) phi += kPi;
        e.phi_prime = phi;
    }
    return e;
}

double relative_deviation(double reference, double value, double floor) {
    return std::abs(value - reference) / std::max(std::abs(reference), floor);
}

}  // namespace

double OccurrenceTable::total_count() const {
    double total = 0.0;
    for (const auto& e : entries) total += e.count;
    return total;
}

WeightTable weights_from_counts(const OccurrenceTable& table) {
    if (table.entries.empty()) throw EmptyInputError("weights_from_counts: empty table");
    double total = 0.0;
    for (const auto& e : table.entries) {
        if (!(e.count > 0.0)) {
            throw std::invalid_argument("weights_from_counts: nonpositive count for \"" + e.name +
                                        "\"");
        }
        total += e.count;
    }
    WeightTable weights;
    weights.entries.reserve(table.entries.size());
    for (const auto& e : table.entries) {
        weights.entries.push_back({e.name, e.count / total, e.coord});
    }
    return weights;
}

double radius_of_perception(const WeightTable& weights, const GeoCoord& center) {
    double radius = 0.0;
    for (const auto& e : weights.entries) {
        radius += e.weight * great_circle_distance_km(center, e.coord);
    }
    return radius;
}

double contained_fraction(const WeightTable& weights, const GeoCoord& center, double radius_km) {
    if (!(radius_km >= 0.0)) throw std::invalid_argument("contained_fraction: negative radius");
    double fraction = 0.0;
    for (const auto& e : weights.entries) {
        if (great_circle_distance_km(center, e.coord) <= radius_km) fraction += e.weight;
    }
    return fraction;
}

PerceptionEllipse perception_ellipse(const WeightTable& weights, const GeoCoord& center) {
    if (weights.entries.size() < 2) {
        throw DegenerateDistributionError(
            "ellipse of perception requires at least two items");
    }
    const TensorComponents t = accumulate_tensor(weights, center);
    if (t.i_plus == 0.0) {
        throw DegenerateDistributionError(
            "ellipse of perception undefined: all items coincide with the center");
    }
    return ellipse_from_tensor(t);
}

InvariantDiagnostics invariant_check(const PerceptionEllipse& ellipse, const WeightTable& weights,
                                     const GeoCoord& center, double rotation_rad) {
    WeightTable rotated = weights;
    for (auto& e : rotated.entries) e.coord.lon = normalize_lon(e.coord.lon + rotation_rad);
    const GeoCoord rotated_center{center.lat, normalize_lon(center.lon + rotation_rad)};

    const TensorComponents t = accumulate_tensor(rotated, rotated_center);

    const double base_aniso2 = ellipse.i_minus * ellipse.i_minus + ellipse.i_12 * ellipse.i_12;
    const double aniso2 = t.i_minus * t.i_minus + t.i_12 * t.i_12;
    // Near-isotropic tensors have aniso2 ~ 0 both ways; measure against a
    // floor tied to I+^2 so the ratio stays meaningful.
    const double aniso_floor = 1e-18 * ellipse.i_plus * ellipse.i_plus;

    InvariantDiagnostics diag;
    diag.rotation_rad = rotation_rad;
    diag.i_plus_rel_dev = relative_deviation(ellipse.i_plus, t.i_plus, 1e-300);
    diag.anisotropy_rel_dev = relative_deviation(base_aniso2, aniso2, aniso_floor);
    diag.max_rel_dev = std::max(diag.i_plus_rel_dev, diag.anisotropy_rel_dev);
    return diag;
}

PerceptionReport analyze(const OccurrenceTable& table, const AnalysisOptions& options) {
    if (table.entries.empty()) throw EmptyInputError("analyze: empty occurrence table");

    PerceptionReport report;

    OccurrenceTable working = table;
    if (!options.exclude.empty()) {
        const std::set<std::string> requested(options.exclude.begin(), options.exclude.end());
        std::set<std::string> present;
        for (const auto& e : table.entries) {
            if (requested.count(e.name)) present.insert(e.name);
        }
        for (const auto& name : requested) {
            if (!present.count(name)) {
                report.warnings.push_back("exclusion list names unknown item \"" + name + "\"");
            }
        }
        working.entries.clear();
        for (const auto& e : table.entries) {
            if (!present.count(e.name)) working.entries.push_back(e);
        }
        if (working.entries.empty()) throw AllExcludedError();
        report.excluded_names.assign(present.begin(), present.end());
    }

    const WeightTable weights = weights_from_counts(working);

    if (options.empirical_center) {
        report.center = PerceptionCenter{*options.empirical_center, 1.0};
        report.center_is_empirical = true;
    } else {
        report.center = weighted_centroid(as_weighted_points(weights));
    }
    const GeoCoord& center = report.center.coord;

    report.radius_km = radius_of_perception(weights, center);
    report.contained_fraction = contained_fraction(weights, center, report.radius_km);
    report.n_items = working.entries.size();
    report.total_count = working.total_count();

    if (weights.entries.size() < 2) {
        report.warnings.push_back("ellipse of perception undefined: single item");
    } else {
        try {
            report.ellipse = perception_ellipse(weights, center);
        } catch (const DegenerateDistributionError& err) {
            report.warnings.push_back(std::string("ellipse of perception undefined: ") +
                                      err.what());
        }
    }

    report.items.reserve(weights.entries.size());
    for (std::size_t i = 0; i < weights.entries.size(); ++i) {
        const auto& w = weights.entries[i];
        ItemStat stat;
        stat.name = w.name;
        stat.count = working.entries[i].count;
        stat.weight = w.weight;
        stat.coord = w.coord;
        stat.distance_km = great_circle_distance_km(center, w.coord);
        const double colat = stat.distance_km / kEarthRadiusKm;
        if (colat >= kPoleTolerance && kPi - colat >= kPoleTolerance) {
            stat.azimuth_rad = azimuth_in_center_frame(center, w.coord);
        }
        report.items.push_back(std::move(stat));
    }

    return report;
}

PerceptionReport biased_analysis(const OccurrenceTable& table,
                                 const std::vector<std::string>& exclude) {
    AnalysisOptions options;
    options.exclude = exclude;
    return analyze(table, options);
}

}  // namespace geoscope
