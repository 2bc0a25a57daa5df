#pragma once

#include <vector>

namespace geoscope {

// IUGG mean Earth radius. All distances in this library are spherical
// great-circle distances in kilometers on this sphere.
inline constexpr double kEarthRadiusKm = 6371.0088;

inline constexpr double kPi = 3.14159265358979323846;

// Silent clamp window for inverse-trig arguments; |arg| - 1 beyond this is
// treated as a defect (InternalError), not rounding.
inline constexpr double kClampTolerance = 1e-12;

// Angular threshold below which a point sits at a pole of the rotated frame
// and its azimuth is undefined.
inline constexpr double kPoleTolerance = 1e-9;

// Resultant norms below this make the centroid direction numerically
// meaningless (relative to unit total weight).
inline constexpr double kDegenerateResultant = 1e-9;

constexpr double deg2rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad2deg(double rad) { return rad * 180.0 / kPi; }

// Wraps a longitude into (-pi, pi]. Values already in range pass through
// unchanged (bit-exact).
double normalize_lon(double lon);

/**
 * A point on the sphere, stored in radians.
 * lat in [-pi/2, pi/2]; lon normalized into (-pi, pi].
 * External I/O is always decimal degrees; use from_degrees / *_deg().
 */
struct GeoCoord {
    double lat = 0.0;
    double lon = 0.0;

    static GeoCoord from_degrees(double lat_deg, double lon_deg);

    double lat_deg() const { return rad2deg(lat); }
    double lon_deg() const { return rad2deg(lon); }

    bool operator==(const GeoCoord&) const = default;
};

struct CartesianVec {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double norm() const;
};

struct WeightedPoint {
    GeoCoord coord;
    double weight = 0.0;
};

/**
 * The weighted spherical centroid. resultant_norm is the length of the
 * weighted Cartesian sum, in (0, 1]; it is never constructed degenerate.
 */
struct PerceptionCenter {
    GeoCoord coord;
    double resultant_norm = 0.0;
};

// Unit-sphere Cartesian components of a coordinate:
// (cos lat cos lon, cos lat sin lon, sin lat).
CartesianVec to_cartesian(const GeoCoord& c);

/**
 * Weighted spherical centroid of the given points.
 *
 * Weights must be nonnegative and sum to 1 within 1e-9. The centroid is the
 * direction of the weighted Cartesian sum; its latitude comes from
 * atan2(Z, hypot(X, Y)) and its longitude from atan2(Y, X).
 *
 * Throws EmptyInputError on an empty list and DegenerateCentroidError when
 * the resultant norm falls below kDegenerateResultant (balanced antipodal
 * mass).
 */
PerceptionCenter weighted_centroid(const std::vector<WeightedPoint>& items);

/**
 * Great-circle distance in km via the spherical law of cosines:
 *   R_E * acos(cos lat_a cos lat_b cos(lon_a - lon_b) + sin lat_a sin lat_b)
 * The acos argument is clamped within kClampTolerance; identical inputs
 * return exactly 0.
 */
double great_circle_distance_km(const GeoCoord& a, const GeoCoord& b);

/**
 * Azimuth of p in the coordinate frame whose north pole is `center`:
 *   atan2(cos lat sin dlon,  cos lat sin lat_c cos dlon - sin lat cos lat_c)
 * with dlon = lon - lon_c. Convention (see README): 0 = due south of the
 * center, +pi/2 = due east, +/-pi = due north.
 *
 * Together with colatitude = distance / R_E this gives the rotated spherical
 * coordinates of p. Throws UndefinedAzimuthError when p lies within
 * kPoleTolerance (radians of colatitude) of either pole of the rotated frame.
 */
double azimuth_in_center_frame(const GeoCoord& center, const GeoCoord& p);

// Point reached from `start` travelling `distance_km` along the great circle
// with initial compass bearing `bearing_rad` (0 = north, pi/2 = east).
GeoCoord destination_point(const GeoCoord& start, double bearing_rad, double distance_km);

namespace detail {

// Clamps x into [-1, 1] when within kClampTolerance of the interval; larger
// excursions throw InternalError.
double clamp_unit(double x);

}  // namespace detail

}  // namespace geoscope
