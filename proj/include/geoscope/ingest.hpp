#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "geoscope/correlation.hpp"
#include "geoscope/perception.hpp"
#include "geoscope/regions.hpp"

namespace geoscope {

struct RawOccurrence {
    std::string name;
    double count = 0.0;
};

struct GazetteerEntry {
    std::string name;
    double lat_deg = 0.0;
    double lon_deg = 0.0;
};

struct ParsedOccurrences {
    std::vector<RawOccurrence> records;
    std::vector<std::string> warnings;
};

/**
 * Canonical form of a name: Unicode NFC normalization, ASCII trim, internal
 * whitespace runs collapsed to a single space. All parsers and joins match
 * on this form. Invalid UTF-8 raises ValidationError.
 */
std::string normalize_name(std::string_view raw);

/**
 * Occurrence CSV: header `name,count`, one record per row, counts positive
 * reals. Fields may be double-quoted with embedded commas/quotes per
 * standard CSV quoting. Duplicate names (after normalization) are merged by
 * summing counts, with a warning. Errors: MissingHeaderError,
 * MalformedRowError(line), NonPositiveCountError(line).
 */
ParsedOccurrences parse_occurrences(std::istream& in);

/**
 * Gazetteer TSV: header `name<TAB>lat<TAB>lon`, decimal degrees, no quoting
 * (embedded tabs are malformed). Duplicate names are an error. Errors:
 * MissingHeaderError, MalformedRowError(line), CoordinateRangeError(line),
 * DuplicateNameError(line).
 */
std::vector<GazetteerEntry> parse_gazetteer(std::istream& in);

// Combined single-file CSV `name,count,lat,lon`, bypassing the gazetteer
// join. Duplicate names are an error here.
OccurrenceTable parse_combined(std::istream& in);

// Region CSV `name,count,lat,lon,mean_radius_km`.
std::vector<ExtendedRegion> parse_regions(std::istream& in);

enum class JoinPolicy {
    kFail,            // unresolved names abort with UnresolvedNamesError
    kSkipWithReport,  // unresolved names are dropped and reported
};

struct JoinResult {
    OccurrenceTable table;            // sorted by name
    std::vector<RawOccurrence> unresolved;  // sorted by name
};

/**
 * Joins occurrences to gazetteer coordinates by exact normalized-name match.
 * Deterministic and independent of input row order; the total count is
 * conserved between table and unresolved list under the skip policy.
 */
JoinResult join_occurrences(const std::vector<RawOccurrence>& occurrences,
                            const std::vector<GazetteerEntry>& gazetteer,
                            JoinPolicy policy = JoinPolicy::kSkipWithReport);

// Writes the combined `name,count,lat,lon` format with full double
// precision; parse_combined() on the output reproduces the table exactly.
void write_combined(std::ostream& out, const OccurrenceTable& table);

// Occurrence records as a term vector for correlation analysis.
TermVector term_vector(const std::vector<RawOccurrence>& records);

// Gazetteer entries as a lookup map (normalized name -> coordinate).
Gazetteer gazetteer_map(const std::vector<GazetteerEntry>& entries);

}  // namespace geoscope
