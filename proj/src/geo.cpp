#include "geoscope/geo.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "geoscope/errors.hpp"

namespace geoscope {

double normalize_lon(double lon) {
    if (lon > -kPi && lon <= kPi) return lon;
    double wrapped = std::remainder(lon, 2.0 * kPi);
    if (wrapped <= -kPi) wrapped += 2.0 * kPi;
    return wrapped;
}

GeoCoord GeoCoord::from_degrees(double lat_deg, double lon_deg) {
    double lat = deg2rad(lat_deg);
    if (std::abs(lat) > kPi / 2.0) {
        if (std::abs(lat) - kPi / 2.0 > kClampTolerance) {
            throw std::invalid_argument("latitude out of range: " + std::to_string(lat_deg));
        }
        lat = std::copysign(kPi / 2.0, lat);
    }
    return GeoCoord{lat, normalize_lon(deg2rad(lon_deg))};
}

double CartesianVec::norm() const { return std::sqrt(x * x + y * y + z * z); }

CartesianVec to_cartesian(const GeoCoord& c) {
    const double cos_lat = std::cos(c.lat);
    return CartesianVec{cos_lat * std::cos(c.lon), cos_lat * std::sin(c.lon), std::sin(c.lat)};
}

namespace detail {

double clamp_unit(double x) {
    if (x > 1.0) {
        if (x - 1.0 > kClampTolerance) {
            throw InternalError("inverse-trig argument out of domain: " + std::to_string(x));
        }
        return 1.0;
    }
    if (x < -1.0) {
        if (-1.0 - x > kClampTolerance) {
            throw InternalError("inverse-trig argument out of domain: " + std::to_string(x));
        }
        return -1.0;
    }
    return x;
}

}  // namespace detail

PerceptionCenter weighted_centroid(const std::vector<WeightedPoint>& items) {
    if (items.empty()) throw EmptyInputError("weighted_centroid: no items");

    double weight_sum = 0.0;
    double x = 0.0, y = 0.0, z = 0.0;
    for (const auto& item : items) {
        if (!(item.weight >= 0.0)) {
            throw std::invalid_argument("weighted_centroid: negative weight");
        }
        weight_sum += item.weight;
        const CartesianVec v = to_cartesian(item.coord);
        x += item.weight * v.x;
        y += item.weight * v.y;
        z += item.weight * v.z;
    }
    if (std::abs(weight_sum - 1.0) > 1e-9) {
        throw std::invalid_argument("weighted_centroid: weights must sum to 1, got " +
                                    std::to_string(weight_sum));
    }

    const double norm = std::sqrt(x * x + y * y + z * z);
    if (norm < kDegenerateResultant) throw DegenerateCentroidError();

    const double lat = std::atan2(z, std::hypot(x, y));
    const double lon = std::atan2(y, x);
    return PerceptionCenter{GeoCoord{lat, normalize_lon(lon)}, norm};
}

double great_circle_distance_km(const GeoCoord& a, const GeoCoord& b) {
    if (a == b) return 0.0;
    const double arg = std::cos(a.lat) * std::cos(b.lat) * std::cos(a.lon - b.lon) +
                       std::sin(a.lat) * std::sin(b.lat);
    return kEarthRadiusKm * std::acos(detail::clamp_unit(arg));
}

double azimuth_in_center_frame(const GeoCoord& center, const GeoCoord& p) {
    const double colat = great_circle_distance_km(center, p) / kEarthRadiusKm;
    if (colat < kPoleTolerance || kPi - colat < kPoleTolerance) {
        throw UndefinedAzimuthError();
    }
    const double dlon = p.lon - center.lon;
    const double num = std::cos(p.lat) * std::sin(dlon);
    const double den =
        std::cos(p.lat) * std::sin(center.lat) * std::cos(dlon) - std::sin(p.lat) * std::cos(center.lat);
    return std::atan2(num, den);
}

GeoCoord destination_point(const GeoCoord& start, double bearing_rad, double distance_km) {
    const double delta = distance_km / kEarthRadiusKm;
    const double sin_lat = std::sin(start.lat);
    const double cos_lat = std::cos(start.lat);
    const double sin_delta = std::sin(delta);
    const double cos_delta = std::cos(delta);

    const double lat2 =
        std::asin(detail::clamp_unit(sin_lat * cos_delta + cos_lat * sin_delta * std::cos(bearing_rad)));
    const double lon2 = start.lon + std::atan2(std::sin(bearing_rad) * sin_delta * cos_lat,
                                               cos_delta - sin_lat * std::sin(lat2));
    return GeoCoord{lat2, normalize_lon(lon2)};
}

}  // namespace geoscope
