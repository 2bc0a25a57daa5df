#pragma once

#include <json.hpp>

namespace geoscope {

// Circle polygons are geodesic rings with this many segments.
inline constexpr int kCircleSegments = 64;

/**
 * Renders an analysis document as a GeoJSON FeatureCollection: one point per
 * item (with weight and distance attributes), the center point(s), the
 * unbiased (and, when present, biased) radius circles as 64-segment geodesic
 * polygons, and the principal-axis segments of length 2a and 2b through the
 * center. Axis segments come from the biased report when present (the
 * re-oriented ellipse), otherwise from the unbiased one; an isotropic
 * ellipse draws equal-length segments along the meridian and parallel.
 *
 * Throws ValidationError if the JSON is not an analysis document, and
 * DegenerateDocumentError when the axis-source report has no ellipse but a
 * radius above cartographic zero (1e-6 km). A report with no ellipse and
 * zero radius degenerates cleanly: circles collapse to the center point and
 * axis segments are omitted.
 */
nlohmann::json analysis_to_geojson(const nlohmann::json& document);

}  // namespace geoscope
