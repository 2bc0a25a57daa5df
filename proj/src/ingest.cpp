#include "geoscope/ingest.hpp"

#include <unicode/unorm2.h>
#include <unicode/ustring.h>
#include <unicode/utypes.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <ostream>

#include "geoscope/errors.hpp"

namespace geoscope {

namespace {

bool is_ascii_space(char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v';
}

std::string trim_and_collapse(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    bool pending_space = false;
    for (char c : s) {
        if (is_ascii_space(c)) {
            if (!out.empty()) pending_space = true;
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back(c);
    }
    return out;
}

std::u16string to_utf16(std::string_view s) {
    std::u16string out(s.size() + 1, u'\0');
    UErrorCode status = U_ZERO_ERROR;
    int32_t length = 0;
    u_strFromUTF8(out.data(), static_cast<int32_t>(out.size()), &length, s.data(),
                  static_cast<int32_t>(s.size()), &status);
    if (U_FAILURE(status)) throw ValidationError("invalid UTF-8 in name");
    out.resize(static_cast<std::size_t>(length));
    return out;
}

std::string to_utf8(const std::u16string& s) {
    std::string out(s.size() * 4 + 1, '\0');
    UErrorCode status = U_ZERO_ERROR;
    int32_t length = 0;
    u_strToUTF8(out.data(), static_cast<int32_t>(out.size()), &length, s.data(),
                static_cast<int32_t>(s.size()), &status);
    if (U_FAILURE(status)) throw ValidationError("unicode normalization failed");
    out.resize(static_cast<std::size_t>(length));
    return out;
}

std::string nfc(std::string_view s) {
    // Fast path: NFC is the identity on pure ASCII.
    if (std::all_of(s.begin(), s.end(), [](char c) { return static_cast<unsigned char>(c) < 0x80; })) {
        return std::string(s);
    }
    UErrorCode status = U_ZERO_ERROR;
    const UNormalizer2* normalizer = unorm2_getNFCInstance(&status);
    if (U_FAILURE(status)) throw InternalError("ICU NFC normalizer unavailable");

    const std::u16string input = to_utf16(s);
    std::u16string output(input.size() * 2 + 16, u'\0');
    const int32_t length =
        unorm2_normalize(normalizer, input.data(), static_cast<int32_t>(input.size()),
                         output.data(), static_cast<int32_t>(output.size()), &status);
    if (U_FAILURE(status)) throw ValidationError("unicode normalization failed");
    output.resize(static_cast<std::size_t>(length));
    return to_utf8(output);
}

/**
 * Record-oriented CSV reader with standard quoting: fields may be wrapped in
 * double quotes, quotes escape as "", and quoted fields may contain commas
 * and newlines. CRLF line ends are accepted. Returns false at end of input;
 * `record_line` is the 1-based line the record started on.
 */
class CsvReader {
public:
    explicit CsvReader(std::istream& in) : in_(in) { strip_bom(); }

    bool next(std::vector<std::string>& fields, std::size_t& record_line) {
        fields.clear();
        int c = in_.get();
        if (c == EOF) return false;
        record_line = line_;

        std::string field;
        bool quoted = false;
        bool quote_seen = false;  // just closed a quoted section
        while (true) {
            if (c == EOF) {
                fields.push_back(std::move(field));
                if (quoted) {
                    throw MalformedRowError(record_line, "unterminated quoted field");
                }
                return true;
            }
            const char ch = static_cast<char>(c);
            if (quoted) {
                if (ch == '"') {
                    const int peek = in_.peek();
                    if (peek == '"') {
                        in_.get();
                        field.push_back('"');
                    } else {
                        quoted = false;
                        quote_seen = true;
                    }
                } else {
                    if (ch == '\n') ++line_;
                    field.push_back(ch);
                }
            } else if (ch == '"') {
                if (!field.empty() || quote_seen) {
                    throw MalformedRowError(line_, "unexpected quote inside field");
                }
                quoted = true;
            } else if (ch == ',') {
                fields.push_back(std::move(field));
                field.clear();
                quote_seen = false;
            } else if (ch == '\n') {
                ++line_;
                fields.push_back(std::move(field));
                return true;
            } else if (ch == '\r' && in_.peek() == '\n') {
                // swallow; the '\n' branch finishes the record
            } else {
                if (quote_seen) {
                    throw MalformedRowError(line_, "data after closing quote");
                }
                field.push_back(ch);
            }
            c = in_.get();
        }
    }

private:
    void strip_bom() {
        if (in_.peek() == 0xEF) {
            char bom[3] = {};
            in_.read(bom, 3);
            if (!(in_.gcount() == 3 && bom[0] == '\xEF' && bom[1] == '\xBB' && bom[2] == '\xBF')) {
                for (std::streamsize i = in_.gcount(); i > 0; --i) in_.unget();
            }
        }
    }

    std::istream& in_;
    std::size_t line_ = 1;
};

double parse_double(std::string_view text, std::size_t line, const std::string& what) {
    const std::string trimmed = trim_and_collapse(text);
    double value = 0.0;
    const char* begin = trimmed.data();
    const char* end = begin + trimmed.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end || !std::isfinite(value)) {
        throw MalformedRowError(line, what + " is not a number: \"" + trimmed + "\"");
    }
    return value;
}

void expect_header(const std::vector<std::string>& fields, std::size_t line,
                   const std::vector<std::string>& expected, const std::string& description) {
    if (line != 1) throw MissingHeaderError(description);
    if (fields.size() != expected.size()) throw MissingHeaderError(description);
    for (std::size_t i = 0; i < expected.size(); ++i) {
        if (trim_and_collapse(fields[i]) != expected[i]) throw MissingHeaderError(description);
    }
}

std::string parse_name_field(const std::string& raw, std::size_t line) {
    std::string name;
    try {
        name = normalize_name(raw);
    } catch (const ValidationError& e) {
        throw MalformedRowError(line, e.what());
    }
    if (name.empty()) throw MalformedRowError(line, "empty name");
    return name;
}

void check_coordinate_range(double lat_deg, double lon_deg, std::size_t line) {
    if (!(lat_deg >= -90.0 && lat_deg <= 90.0)) {
        throw CoordinateRangeError(line, "latitude out of [-90, 90]: " + std::to_string(lat_deg));
    }
    if (!(lon_deg >= -180.0 && lon_deg <= 180.0)) {
        throw CoordinateRangeError(line,
                                   "longitude out of [-180, 180]: " + std::to_string(lon_deg));
    }
}

bool needs_csv_quoting(std::string_view s) {
    return s.find_first_of(",\"\n\r") != std::string_view::npos;
}

std::string csv_quote(std::string_view s) {
    if (!needs_csv_quoting(s)) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += "\"";
    return out;
}

// Shortest decimal representation that parses back to exactly v.
std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

// Degree value whose conversion back to radians reproduces r bit-exactly.
// For coordinates that entered through a parser such a value exists within a
// few ulps of the direct conversion; otherwise the direct conversion is used.
double degrees_for_radians(double r) {
    double d = rad2deg(r);
    if (deg2rad(d) == r) return d;
    double lo = d, hi = d;
    for (int step = 0; step < 4; ++step) {
        lo = std::nextafter(lo, -std::numeric_limits<double>::infinity());
        hi = std::nextafter(hi, std::numeric_limits<double>::infinity());
        if (deg2rad(lo) == r) return lo;
        if (deg2rad(hi) == r) return hi;
    }
    return d;
}

}  // namespace

std::string normalize_name(std::string_view raw) { return trim_and_collapse(nfc(raw)); }

ParsedOccurrences parse_occurrences(std::istream& in) {
    CsvReader reader(in);
    std::vector<std::string> fields;
    std::size_t line = 0;

    if (!reader.next(fields, line)) throw MissingHeaderError("name,count");
    expect_header(fields, line, {"name", "count"}, "name,count");

    ParsedOccurrences result;
    std::map<std::string, std::size_t> index;
    while (reader.next(fields, line)) {
        if (fields.size() != 2) {
            throw MalformedRowError(line, "expected 2 fields, got " + std::to_string(fields.size()));
        }
        const std::string name = parse_name_field(fields[0], line);
        const double count = parse_double(fields[1], line, "count");
        if (!(count > 0.0)) throw NonPositiveCountError(line, name);

        auto [it, inserted] = index.try_emplace(name, result.records.size());
        if (inserted) {
            result.records.push_back({name, count});
        } else {
            result.records[it->second].count += count;
            result.warnings.push_back("line " + std::to_string(line) + ": duplicate name \"" +
                                      name + "\" merged by summing counts");
        }
    }
    return result;
}

std::vector<GazetteerEntry> parse_gazetteer(std::istream& in) {
    std::vector<GazetteerEntry> entries;
    std::map<std::string, std::size_t> seen;

    std::string raw_line;
    std::size_t line = 0;
    bool header_checked = false;
    while (std::getline(in, raw_line)) {
        ++line;
        if (!raw_line.empty() && raw_line.back() == '\r') raw_line.pop_back();
        if (line == 1 && raw_line.size() >= 3 && raw_line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
            raw_line.erase(0, 3);
        }

        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            const std::size_t tab = raw_line.find('\t', start);
            if (tab == std::string::npos) {
                fields.push_back(raw_line.substr(start));
                break;
            }
            fields.push_back(raw_line.substr(start, tab - start));
            start = tab + 1;
        }

        if (!header_checked) {
            if (fields.size() != 3 || trim_and_collapse(fields[0]) != "name" ||
                trim_and_collapse(fields[1]) != "lat" || trim_and_collapse(fields[2]) != "lon") {
                throw MissingHeaderError("name<TAB>lat<TAB>lon");
            }
            header_checked = true;
            continue;
        }
        if (fields.size() != 3) {
            throw MalformedRowError(line, "expected 3 tab-separated fields, got " +
                                              std::to_string(fields.size()));
        }
        const std::string name = parse_name_field(fields[0], line);
        const double lat = parse_double(fields[1], line, "lat");
        const double lon = parse_double(fields[2], line, "lon");
        check_coordinate_range(lat, lon, line);

        auto [it, inserted] = seen.try_emplace(name, line);
        if (!inserted) throw DuplicateNameError(line, name);
        entries.push_back({name, lat, lon});
    }
    if (!header_checked) throw MissingHeaderError("name<TAB>lat<TAB>lon");
    return entries;
}

OccurrenceTable parse_combined(std::istream& in) {
    CsvReader reader(in);
    std::vector<std::string> fields;
    std::size_t line = 0;

    if (!reader.next(fields, line)) throw MissingHeaderError("name,count,lat,lon");
    expect_header(fields, line, {"name", "count", "lat", "lon"}, "name,count,lat,lon");

    OccurrenceTable table;
    std::map<std::string, std::size_t> seen;
    while (reader.next(fields, line)) {
        if (fields.size() != 4) {
            throw MalformedRowError(line, "expected 4 fields, got " + std::to_string(fields.size()));
        }
        const std::string name = parse_name_field(fields[0], line);
        const double count = parse_double(fields[1], line, "count");
        if (!(count > 0.0)) throw NonPositiveCountError(line, name);
        const double lat = parse_double(fields[2], line, "lat");
        const double lon = parse_double(fields[3], line, "lon");
        check_coordinate_range(lat, lon, line);

        auto [it, inserted] = seen.try_emplace(name, line);
        if (!inserted) throw DuplicateNameError(line, name);
        table.entries.push_back({name, count, GeoCoord::from_degrees(lat, lon)});
    }
    return table;
}

std::vector<ExtendedRegion> parse_regions(std::istream& in) {
    CsvReader reader(in);
    std::vector<std::string> fields;
    std::size_t line = 0;

    const std::string description = "name,count,lat,lon,mean_radius_km";
    if (!reader.next(fields, line)) throw MissingHeaderError(description);
    expect_header(fields, line, {"name", "count", "lat", "lon", "mean_radius_km"}, description);

    std::vector<ExtendedRegion> regions;
    std::map<std::string, std::size_t> seen;
    while (reader.next(fields, line)) {
        if (fields.size() != 5) {
            throw MalformedRowError(line, "expected 5 fields, got " + std::to_string(fields.size()));
        }
        const std::string name = parse_name_field(fields[0], line);
        const double count = parse_double(fields[1], line, "count");
        if (!(count > 0.0)) throw NonPositiveCountError(line, name);
        const double lat = parse_double(fields[2], line, "lat");
        const double lon = parse_double(fields[3], line, "lon");
        check_coordinate_range(lat, lon, line);
        const double mean_radius = parse_double(fields[4], line, "mean_radius_km");
        if (!(mean_radius > 0.0)) {
            throw MalformedRowError(line, "mean_radius_km must be positive");
        }

        auto [it, inserted] = seen.try_emplace(name, line);
        if (!inserted) throw DuplicateNameError(line, name);
        regions.push_back({name, count, GeoCoord::from_degrees(lat, lon), mean_radius});
    }
    return regions;
}

JoinResult join_occurrences(const std::vector<RawOccurrence>& occurrences,
                            const std::vector<GazetteerEntry>& gazetteer, JoinPolicy policy) {
    const Gazetteer lookup = gazetteer_map(gazetteer);

    JoinResult result;
    std::vector<std::string> unresolved_names;
    for (const auto& occ : occurrences) {
        const std::string name = normalize_name(occ.name);
        auto it = lookup.find(name);
        if (it == lookup.end()) {
            result.unresolved.push_back({name, occ.count});
            unresolved_names.push_back(name);
        } else {
            result.table.entries.push_back({name, occ.count, it->second});
        }
    }
    if (policy == JoinPolicy::kFail && !unresolved_names.empty()) {
        std::sort(unresolved_names.begin(), unresolved_names.end());
        throw UnresolvedNamesError(std::move(unresolved_names));
    }

    auto by_name = [](const auto& a, const auto& b) { return a.name < b.name; };
    std::sort(result.table.entries.begin(), result.table.entries.end(), by_name);
    std::sort(result.unresolved.begin(), result.unresolved.end(), by_name);
    return result;
}

void write_combined(std::ostream& out, const OccurrenceTable& table) {
    out << "name,count,lat,lon\n";
    for (const auto& e : table.entries) {
        out << csv_quote(e.name) << ',' << format_double(e.count) << ','
            << format_double(degrees_for_radians(e.coord.lat)) << ','
            << format_double(degrees_for_radians(e.coord.lon)) << '\n';
    }
}

TermVector term_vector(const std::vector<RawOccurrence>& records) {
    TermVector v;
    for (const auto& r : records) v.entries[normalize_name(r.name)] += r.count;
    return v;
}

Gazetteer gazetteer_map(const std::vector<GazetteerEntry>& entries) {
    Gazetteer map;
    for (const auto& e : entries) {
        map.emplace(normalize_name(e.name), GeoCoord::from_degrees(e.lat_deg, e.lon_deg));
    }
    return map;
}

}  // namespace geoscope
