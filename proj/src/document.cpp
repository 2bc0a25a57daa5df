#include "geoscope/document.hpp"

#include <openssl/evp.h>

#include <fstream>

#include "geoscope/errors.hpp"
#include "geoscope/version.hpp"

namespace geoscope {

namespace {

json coord_to_json(const GeoCoord& c) {
    return json{{"lat_deg", c.lat_deg()}, {"lon_deg", c.lon_deg()}};
}

json ellipse_to_json(const PerceptionEllipse& e) {
    json j{{"i_plus_km2", e.i_plus}, {"i_minus_km2", e.i_minus}, {"i_12_km2", e.i_12},
           {"a_km", e.a},           {"b_km", e.b},               {"isotropic", e.isotropic}};
    if (e.phi_prime) {
        j["phi_prime_deg"] = rad2deg(*e.phi_prime);
    } else {
        j["phi_prime_deg"] = nullptr;
    }
    return j;
}

}  // namespace

std::string sha256_hex_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot read file: " + path);

    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (!ctx) throw InternalError("EVP_MD_CTX_new failed");
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);

    char buffer[1 << 16];
    while (in.read(buffer, sizeof(buffer)) || in.gcount() > 0) {
        EVP_DigestUpdate(ctx, buffer, static_cast<std::size_t>(in.gcount()));
    }

    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    EVP_DigestFinal_ex(ctx, digest, &length);
    EVP_MD_CTX_free(ctx);

    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * length);
    for (unsigned int i = 0; i < length; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xF]);
    }
    return out;
}

json report_to_json(const PerceptionReport& report) {
    json j;
    j["center"] = coord_to_json(report.center.coord);
    j["center"]["resultant_norm"] = report.center.resultant_norm;
    j["center"]["source"] = report.center_is_empirical ? "empirical" : "mathematical";
    j["radius_km"] = report.radius_km;
    j["contained_fraction"] = report.contained_fraction;
    j["n_items"] = report.n_items;
    j["total_count"] = report.total_count;
    j["ellipse"] = report.ellipse ? ellipse_to_json(*report.ellipse) : json(nullptr);
    j["excluded"] = report.excluded_names;
    j["warnings"] = report.warnings;

    json items = json::array();
    for (const auto& item : report.items) {
        json entry{{"name", item.name},
                   {"count", item.count},
                   {"weight", item.weight},
                   {"lat_deg", item.coord.lat_deg()},
                   {"lon_deg", item.coord.lon_deg()},
                   {"distance_km", item.distance_km}};
        entry["azimuth_deg"] = item.azimuth_rad ? json(rad2deg(*item.azimuth_rad)) : json(nullptr);
        items.push_back(std::move(entry));
    }
    j["items"] = std::move(items);
    return j;
}

json make_analysis_document(const PerceptionReport& unbiased,
                            const std::optional<PerceptionReport>& biased,
                            const DocumentInputs& inputs, const DocumentParameters& parameters,
                            const std::vector<RawOccurrence>& unresolved,
                            const std::vector<std::string>& ingest_warnings) {
    json doc;
    doc["schema_version"] = kDocumentSchemaVersion;
    doc["generator"] = json{{"name", kToolName}, {"version", kToolVersion}};

    doc["inputs"]["occurrences"] =
        json{{"path", inputs.occurrences.path}, {"sha256", inputs.occurrences.sha256}};
    if (inputs.gazetteer) {
        doc["inputs"]["gazetteer"] =
            json{{"path", inputs.gazetteer->path}, {"sha256", inputs.gazetteer->sha256}};
    }

    doc["parameters"]["center"] =
        parameters.center_override ? coord_to_json(*parameters.center_override) : json(nullptr);
    doc["parameters"]["exclude"] = parameters.exclude;
    doc["parameters"]["strict"] = parameters.strict;

    // Stated in-band so downstream consumers never have to guess the
    // rotated-frame conventions.
    doc["conventions"] = json{
        {"angles", "decimal degrees"},
        {"distances", "kilometers (sphere, R = 6371.0088 km)"},
        {"azimuth", "rotated frame about the center: 0 = due south, +90 = due east, 180 = north"},
        {"axis_angle",
         "major axis in (-90, 90]: 0 = north-south meridian, +45 = NW-SE diagonal, 90 = east-west"},
    };

    doc["report"] = report_to_json(unbiased);
    if (biased) doc["biased_report"] = report_to_json(*biased);

    json unresolved_json = json::array();
    for (const auto& r : unresolved) {
        unresolved_json.push_back(json{{"name", r.name}, {"count", r.count}});
    }
    doc["ingest"] = json{{"unresolved", std::move(unresolved_json)}, {"warnings", ingest_warnings}};
    return doc;
}

}  // namespace geoscope
