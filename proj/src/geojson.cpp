#include "geoscope/geojson.hpp"

#include <cmath>
#include <string>

#include "geoscope/errors.hpp"
#include "geoscope/geo.hpp"

namespace geoscope {

namespace {

using json = nlohmann::json;

json position(const GeoCoord& c) { return json::array({c.lon_deg(), c.lat_deg()}); }

GeoCoord coord_from(const json& j) {
    return GeoCoord::from_degrees(j.at("lat_deg").get<double>(), j.at("lon_deg").get<double>());
}

json point_feature(const GeoCoord& c, json properties) {
    return json{{"type", "Feature"},
                {"geometry", json{{"type", "Point"}, {"coordinates", position(c)}}},
                {"properties", std::move(properties)}};
}

json circle_feature(const GeoCoord& center, double radius_km, const std::string& scope) {
    json ring = json::array();
    for (int k = 0; k < kCircleSegments; ++k) {
        const double bearing = 2.0 * kPi * k / kCircleSegments;
        ring.push_back(position(destination_point(center, bearing, radius_km)));
    }
    ring.push_back(ring.front());  // close the ring
    return json{{"type", "Feature"},
                {"geometry", json{{"type", "Polygon"}, {"coordinates", json::array({ring})}}},
                {"properties",
                 json{{"kind", "radius"}, {"scope", scope}, {"radius_km", radius_km}}}};
}

json axis_feature(const GeoCoord& center, double phi_prime, double semiaxis_km,
                  const std::string& which) {
    // Rotated-frame azimuth phi' corresponds to compass bearing pi - phi'.
    const double bearing = kPi - phi_prime;
    const GeoCoord end_a = destination_point(center, bearing, semiaxis_km);
    const GeoCoord end_b = destination_point(center, bearing + kPi, semiaxis_km);
    return json{{"type", "Feature"},
                {"geometry", json{{"type", "LineString"},
                                  {"coordinates", json::array({position(end_a), position(end_b)})}}},
                {"properties", json{{"kind", "axis"},
                                    {"axis", which},
                                    {"length_km", 2.0 * semiaxis_km},
                                    {"phi_prime_deg", rad2deg(phi_prime)}}}};
}

}  // namespace

json analysis_to_geojson(const json& document) {
    if (!document.is_object() || !document.contains("report")) {
        throw ValidationError("not an analysis document: missing \"report\"");
    }
    const json& report = document.at("report");
    const bool has_biased = document.contains("biased_report");
    const json& axis_report = has_biased ? document.at("biased_report") : report;
    const std::string axis_scope = has_biased ? "biased" : "unbiased";

    json features = json::array();

    for (const auto& item : report.at("items")) {
        features.push_back(point_feature(
            coord_from(item), json{{"kind", "item"},
                                   {"name", item.at("name")},
                                   {"count", item.at("count")},
                                   {"weight", item.at("weight")},
                                   {"distance_km", item.at("distance_km")}}));
    }

    const GeoCoord center = coord_from(report.at("center"));
    features.push_back(point_feature(center, json{{"kind", "center"},
                                                  {"scope", "unbiased"},
                                                  {"source", report.at("center").at("source")}}));
    features.push_back(circle_feature(center, report.at("radius_km").get<double>(), "unbiased"));

    GeoCoord axis_center = center;
    if (has_biased) {
        const json& biased = document.at("biased_report");
        axis_center = coord_from(biased.at("center"));
        features.push_back(point_feature(axis_center,
                                         json{{"kind", "center"},
                                              {"scope", "biased"},
                                              {"source", biased.at("center").at("source")}}));
        features.push_back(
            circle_feature(axis_center, biased.at("radius_km").get<double>(), "biased"));
    }

    const json& ellipse = axis_report.at("ellipse");
    if (ellipse.is_null()) {
        // Sub-millimeter radii are zero for cartographic purposes: the
        // circles collapse to the center point and axes are omitted. A real
        // radius without an ellipse cannot be drawn as requested.
        if (axis_report.at("radius_km").get<double>() > 1e-6) {
            throw DegenerateDocumentError("analysis document has no ellipse for the " + axis_scope +
                                          " report; axis segments undefined");
        }
    } else {
        // An isotropic ellipse has no preferred direction; draw the segments
        // along the meridian and the parallel.
        const double phi_prime = ellipse.at("phi_prime_deg").is_null()
                                     ? 0.0
                                     : deg2rad(ellipse.at("phi_prime_deg").get<double>());
        features.push_back(
            axis_feature(axis_center, phi_prime, ellipse.at("a_km").get<double>(), "major"));
        features.push_back(axis_feature(axis_center, phi_prime + kPi / 2.0,
                                        ellipse.at("b_km").get<double>(), "minor"));
    }

    return json{{"type", "FeatureCollection"}, {"features", std::move(features)}};
}

}  // namespace geoscope
