#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "geoscope/geo.hpp"

namespace geoscope {

// Named point items with occurrence counts. Names are unique and every
// count is positive (enforced at ingestion).
struct OccurrenceEntry {
    std::string name;
    double count = 0.0;
    GeoCoord coord;
};

struct OccurrenceTable {
    std::vector<OccurrenceEntry> entries;

    double total_count() const;
};

struct WeightEntry {
    std::string name;
    double weight = 0.0;
    GeoCoord coord;
};

// Normalized occurrence weights; they sum to 1 within 1e-9.
struct WeightTable {
    std::vector<WeightEntry> entries;
};

/**
 * Second-moment ellipse of the distance/azimuth distribution about a center.
 *
 * i_plus / i_minus / i_12 are the tensor components in km^2; the semiaxes
 * satisfy a^2 = i_plus + sqrt(i_minus^2 + i_12^2) and
 * b^2 = i_plus - sqrt(i_minus^2 + i_12^2) (floored at 0 against rounding).
 * phi_prime is the major-axis angle in the rotated frame, in (-pi/2, pi/2];
 * it is absent exactly when the distribution is isotropic
 * (sqrt(i_minus^2 + i_12^2) < 1e-9 * i_plus).
 */
struct PerceptionEllipse {
    double i_plus = 0.0;
    double i_minus = 0.0;
    double i_12 = 0.0;
    double a = 0.0;
    double b = 0.0;
    std::optional<double> phi_prime;
    bool isotropic = false;
};

// Per-item diagnostics as used in reports. azimuth_rad is absent for items
// at either pole of the rotated frame (in particular items at the center).
struct ItemStat {
    std::string name;
    double count = 0.0;
    double weight = 0.0;
    GeoCoord coord;
    double distance_km = 0.0;
    std::optional<double> azimuth_rad;
};

struct PerceptionReport {
    PerceptionCenter center;
    bool center_is_empirical = false;
    double radius_km = 0.0;
    std::optional<PerceptionEllipse> ellipse;
    std::size_t n_items = 0;
    double total_count = 0.0;
    double contained_fraction = 0.0;
    std::vector<std::string> excluded_names;
    std::vector<ItemStat> items;
    std::vector<std::string> warnings;
};

// w_n = o_n / sum(o). Order preserved. Throws EmptyInputError.
WeightTable weights_from_counts(const OccurrenceTable& table);

/**
 * Radius of perception: the weight-averaged great-circle distance of the
 * items from `center`. The center may be the mathematical centroid or any
 * empirical point.
 */
double radius_of_perception(const WeightTable& weights, const GeoCoord& center);

// Weight fraction of items within the closed ball of radius `radius_km`
// (ties at exactly d = r count as inside).
double contained_fraction(const WeightTable& weights, const GeoCoord& center, double radius_km);

/**
 * Ellipse of perception about `center`.
 *
 * Builds I+ = 1/2 sum w d^2, I- = 1/2 sum w d^2 cos 2phi',
 * I12 = 1/2 sum w d^2 sin 2phi' from the rotated-frame azimuths, then the
 * closed-form eigenvalues. Items at the center contribute nothing (d = 0);
 * an item antipodal to the center has no azimuth and raises
 * UndefinedAzimuthError. Requires at least two items, not all coincident
 * with the center; otherwise DegenerateDistributionError.
 */
PerceptionEllipse perception_ellipse(const WeightTable& weights, const GeoCoord& center);

struct InvariantDiagnostics {
    double rotation_rad = 0.0;
    // Relative deviation of I+ after rotating all longitudes.
    double i_plus_rel_dev = 0.0;
    // Relative deviation of I-^2 + I12^2.
    double anisotropy_rel_dev = 0.0;
    double max_rel_dev = 0.0;
};

/**
 * Rotation-invariance diagnostic: rotates every input longitude (and the
 * center) by `rotation_rad`, recomputes the tensor, and reports the relative
 * deviations of the two rotation invariants I+ and I-^2 + I12^2 against the
 * given ellipse. Exact mathematical invariance; deviations are rounding.
 */
InvariantDiagnostics invariant_check(const PerceptionEllipse& ellipse, const WeightTable& weights,
                                     const GeoCoord& center, double rotation_rad);

struct AnalysisOptions {
    // Empirical center override; when set, distances, azimuths, radius,
    // fraction and ellipse are all computed about this point.
    std::optional<GeoCoord> empirical_center;
    std::vector<std::string> exclude;
};

/**
 * Full pipeline: weights -> centroid -> radius -> contained fraction ->
 * ellipse, honoring the empirical-center override and the exclusion list.
 *
 * Exclusions remove the named items and renormalize weights over the
 * remainder; names not present in the table produce a warning, not an error.
 * A table left empty by exclusion raises AllExcludedError. The ellipse is
 * absent (with a warning) for single-item tables and for distributions with
 * I+ = 0.
 */
PerceptionReport analyze(const OccurrenceTable& table, const AnalysisOptions& options = {});

// Exclusion-biased re-analysis: equivalent to analyze() with the given
// exclusion list; biased_analysis(t, {}) reproduces analyze(t) field for
// field.
PerceptionReport biased_analysis(const OccurrenceTable& table,
                                 const std::vector<std::string>& exclude);

}  // namespace geoscope
