#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "geoscope/ingest.hpp"
#include "geoscope/perception.hpp"

namespace geoscope {

using json = nlohmann::json;

struct InputDigest {
    std::string path;
    std::string sha256;
};

struct DocumentInputs {
    InputDigest occurrences;
    std::optional<InputDigest> gazetteer;
};

struct DocumentParameters {
    std::optional<GeoCoord> center_override;
    std::vector<std::string> exclude;
    bool strict = false;
};

// SHA-256 of a file's raw bytes, lowercase hex. ValidationError when the
// file cannot be read.
std::string sha256_hex_file(const std::string& path);

// JSON form of a perception report; all angles in decimal degrees, all
// distances in kilometers.
json report_to_json(const PerceptionReport& report);

/**
 * Self-describing machine document for one analysis run: schema and tool
 * versions, input digests, parameters, angle conventions, the unbiased
 * report and (when exclusions were requested) the biased one, plus ingestion
 * diagnostics. Contains no timestamps; identical inputs and parameters give
 * a byte-identical serialization.
 */
json make_analysis_document(const PerceptionReport& unbiased,
                            const std::optional<PerceptionReport>& biased,
                            const DocumentInputs& inputs, const DocumentParameters& parameters,
                            const std::vector<RawOccurrence>& unresolved,
                            const std::vector<std::string>& ingest_warnings);

}  // namespace geoscope
