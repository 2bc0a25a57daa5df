// geoscope: geographic scope analysis of texts from place-name occurrence
// tables. Subcommands: analyze, correlate, residual, regional, synth, map.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "geoscope/correlation.hpp"
#include "geoscope/document.hpp"
#include "geoscope/errors.hpp"
#include "geoscope/geojson.hpp"
#include "geoscope/ingest.hpp"
#include "geoscope/perception.hpp"
#include "geoscope/regions.hpp"
#include "geoscope/synth.hpp"
#include "geoscope/version.hpp"

using namespace geoscope;

namespace {

// Runs a parser over a file, prefixing any validation diagnostic with the
// file path so every error names its input.
template <typename Fn>
auto with_file(const std::string& path, Fn&& fn) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError(path + ": cannot open file");
    try {
        return fn(in);
    } catch (const ValidationError& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

GeoCoord parse_center(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) {
        throw ValidationError("--center expects LAT,LON in decimal degrees: " + text);
    }
    try {
        const double lat = std::stod(text.substr(0, comma));
        const double lon = std::stod(text.substr(comma + 1));
        if (lat < -90.0 || lat > 90.0) {
            throw ValidationError("--center latitude out of [-90, 90]: " + text);
        }
        return GeoCoord::from_degrees(lat, lon);
    } catch (const std::invalid_argument&) {
        throw ValidationError("--center expects LAT,LON in decimal degrees: " + text);
    }
}

void write_json_file(const std::string& path, const json& doc) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError(path + ": cannot open for writing");
    out << doc.dump(2) << '\n';
}

std::string format_coord(const GeoCoord& c) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(6) << std::abs(c.lat_deg())
       << (c.lat < 0 ? " S, " : " N, ") << std::abs(c.lon_deg()) << (c.lon < 0 ? " W" : " E");
    return os.str();
}

void print_report(std::ostream& os, const PerceptionReport& r, const std::string& label) {
    os << label << '\n';
    os << "  center of perception:  " << format_coord(r.center.coord) << "  ("
       << (r.center_is_empirical ? "empirical" : "mathematical") << ", resultant "
       << std::fixed << std::setprecision(6) << r.center.resultant_norm << ")\n";
    os << "  radius of perception:  " << std::setprecision(3) << r.radius_km
       << " km  (fraction within radius: " << std::setprecision(3) << r.contained_fraction
       << ")\n";
    if (r.ellipse) {
        os << "  ellipse of perception: a = " << std::setprecision(3) << r.ellipse->a
           << " km, b = " << r.ellipse->b << " km";
        if (r.ellipse->phi_prime) {
            os << ", axis angle = " << std::setprecision(2) << rad2deg(*r.ellipse->phi_prime)
               << " deg";
        } else {
            os << "  (isotropic)";
        }
        os << '\n';
    } else {
        os << "  ellipse of perception: undefined\n";
    }
    os << "  items: " << r.n_items << "   total count: " << std::setprecision(6)
       << r.total_count << '\n';
    for (const auto& w : r.warnings) os << "  warning: " << w << '\n';
}

// Occurrence input for `analyze`: either the combined name,count,lat,lon
// format or name,count joined against a gazetteer.
struct LoadedOccurrences {
    OccurrenceTable table;
    std::vector<RawOccurrence> unresolved;
    std::vector<std::string> warnings;
    std::optional<std::string> gazetteer_path;
};

bool looks_combined(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError(path + ": cannot open file");
    std::string header;
    std::getline(in, header);
    if (!header.empty() && header.back() == '\r') header.pop_back();
    if (header.size() >= 3 && header.compare(0, 3, "\xEF\xBB\xBF") == 0) header.erase(0, 3);
    return header == "name,count,lat,lon";
}

LoadedOccurrences load_occurrences(const std::string& occ_path,
                                   const std::string& gazetteer_path, bool strict) {
    LoadedOccurrences loaded;
    if (looks_combined(occ_path)) {
        loaded.table = with_file(occ_path, [](std::istream& in) { return parse_combined(in); });
        return loaded;
    }
    if (gazetteer_path.empty()) {
        throw ValidationError(occ_path +
                              ": two-column occurrence file requires --gazetteer for coordinates");
    }
    const ParsedOccurrences occ =
        with_file(occ_path, [](std::istream& in) { return parse_occurrences(in); });
    const auto gaz =
        with_file(gazetteer_path, [](std::istream& in) { return parse_gazetteer(in); });
    JoinResult joined =
        join_occurrences(occ.records, gaz, strict ? JoinPolicy::kFail : JoinPolicy::kSkipWithReport);
    loaded.table = std::move(joined.table);
    loaded.unresolved = std::move(joined.unresolved);
    loaded.warnings = occ.warnings;
    loaded.gazetteer_path = gazetteer_path;
    return loaded;
}

TermVector load_vector(const std::string& path) {
    const ParsedOccurrences occ =
        with_file(path, [](std::istream& in) { return parse_occurrences(in); });
    TermVector v = term_vector(occ.records);
    double norm2 = 0.0;
    for (const auto& [name, value] : v.entries) norm2 += value * value;
    if (norm2 == 0.0) throw ZeroVectorError(path + ": vector has no mass");
    return v;
}

int cmd_analyze(const std::string& occ_path, const std::string& gazetteer_path,
                const std::string& center_text, const std::vector<std::string>& exclude,
                bool strict, const std::string& out_path) {
    LoadedOccurrences loaded = load_occurrences(occ_path, gazetteer_path, strict);
    if (loaded.table.entries.empty()) {
        throw ValidationError(occ_path + ": no resolvable items to analyze");
    }

    AnalysisOptions options;
    if (!center_text.empty()) options.empirical_center = parse_center(center_text);

    const PerceptionReport unbiased = analyze(loaded.table, options);

    std::optional<PerceptionReport> biased;
    if (!exclude.empty()) {
        AnalysisOptions biased_options = options;
        biased_options.exclude = exclude;
        biased = analyze(loaded.table, biased_options);
    }

    std::cout << kToolName << " analyze: " << occ_path << " (" << unbiased.n_items << " items, "
              << unbiased.total_count << " occurrences)\n\n";
    print_report(std::cout, unbiased, "unbiased report");
    if (biased) {
        std::cout << '\n';
        std::string label = "biased report (excluding";
        for (const auto& name : biased->excluded_names) label += " " + name;
        print_report(std::cout, *biased, label + ")");
    }
    if (!loaded.unresolved.empty()) {
        std::cout << "\nunresolved names (skipped):";
        for (const auto& u : loaded.unresolved) std::cout << ' ' << u.name;
        std::cout << '\n';
    }
    for (const auto& w : loaded.warnings) std::cout << "ingest warning: " << w << '\n';

    if (!out_path.empty()) {
        DocumentInputs inputs;
        inputs.occurrences = {occ_path, sha256_hex_file(occ_path)};
        if (loaded.gazetteer_path) {
            inputs.gazetteer =
                InputDigest{*loaded.gazetteer_path, sha256_hex_file(*loaded.gazetteer_path)};
        }
        DocumentParameters params;
        params.center_override = options.empirical_center;
        params.exclude = exclude;
        params.strict = strict;
        write_json_file(out_path, make_analysis_document(unbiased, biased, inputs, params,
                                                         loaded.unresolved, loaded.warnings));
        std::cout << "\nmachine document written to " << out_path << '\n';
    }
    return 0;
}

int cmd_correlate(const std::vector<std::string>& paths, bool matrix_mode,
                  const std::string& out_path) {
    std::vector<TermVector> vectors;
    vectors.reserve(paths.size());
    for (const auto& p : paths) vectors.push_back(load_vector(p));

    const auto matrix = pairwise_decorrelation(vectors);
    std::cout << std::fixed << std::setprecision(6);
    for (std::size_t i = 0; i < paths.size(); ++i) {
        for (std::size_t j = i + 1; j < paths.size(); ++j) {
            std::cout << paths[i] << " ~ " << paths[j] << ":  C = " << 1.0 - matrix[i][j]
                      << "  D = " << matrix[i][j] << '\n';
        }
    }
    if (matrix_mode) {
        std::cout << "\ndecorrelation matrix:\n";
        for (std::size_t i = 0; i < paths.size(); ++i) {
            for (std::size_t j = 0; j < paths.size(); ++j) {
                std::cout << std::setw(10) << matrix[i][j] << (j + 1 < paths.size() ? ' ' : '\n');
            }
        }
    }

    if (!out_path.empty()) {
        json doc;
        doc["schema_version"] = kDocumentSchemaVersion;
        doc["generator"] = json{{"name", kToolName}, {"version", kToolVersion}};
        doc["files"] = paths;
        json corr = json::array(), decorr = json::array();
        for (std::size_t i = 0; i < paths.size(); ++i) {
            json crow = json::array(), drow = json::array();
            for (std::size_t j = 0; j < paths.size(); ++j) {
                crow.push_back(1.0 - matrix[i][j]);
                drow.push_back(matrix[i][j]);
            }
            corr.push_back(std::move(crow));
            decorr.push_back(std::move(drow));
        }
        doc["correlation"] = std::move(corr);
        doc["decorrelation"] = std::move(decorr);
        write_json_file(out_path, doc);
    }
    return 0;
}

int cmd_residual(const std::string& p_path, const std::string& q_path,
                 const std::string& gazetteer_path, double link_km, double threshold,
                 const std::string& out_path) {
    const TermVector p = load_vector(p_path);
    const TermVector q = load_vector(q_path);
    const TermVector residual = project_out(p, q);

    const auto gaz_entries =
        with_file(gazetteer_path, [](std::istream& in) { return parse_gazetteer(in); });
    const Gazetteer gaz = gazetteer_map(gaz_entries);
    const auto clusters = residual_clusters(residual, gaz, link_km, threshold);

    std::cout << kToolName << " residual: " << p_path << " minus projection of " << q_path
              << "\n\nsigned residual components:\n"
              << std::fixed << std::setprecision(4);
    for (const auto& [name, value] : residual.entries) {
        std::cout << "  " << std::setw(24) << std::left << name << std::right << std::setw(12)
                  << value << '\n';
    }
    std::cout << "\npositive-part clusters (threshold " << threshold << ", link " << link_km
              << " km): " << clusters.size() << '\n';
    for (std::size_t i = 0; i < clusters.size(); ++i) {
        std::cout << "  cluster " << i + 1 << ": mass " << clusters[i].total_mass << " at "
                  << format_coord(clusters[i].centroid) << " -";
        for (const auto& n : clusters[i].names) std::cout << ' ' << n;
        std::cout << '\n';
    }

    if (!out_path.empty()) {
        json doc;
        doc["schema_version"] = kDocumentSchemaVersion;
        doc["generator"] = json{{"name", kToolName}, {"version", kToolVersion}};
        doc["inputs"] = json{{"p", p_path}, {"q", q_path}, {"gazetteer", gazetteer_path}};
        doc["parameters"] = json{{"link_km", link_km}, {"threshold", threshold}};
        doc["residual"] = residual.entries;
        json cluster_array = json::array();
        for (const auto& c : clusters) {
            cluster_array.push_back(json{{"names", c.names},
                                         {"total_mass", c.total_mass},
                                         {"centroid_lat_deg", c.centroid.lat_deg()},
                                         {"centroid_lon_deg", c.centroid.lon_deg()}});
        }
        doc["clusters"] = std::move(cluster_array);
        write_json_file(out_path, doc);
    }
    return 0;
}

int cmd_regional(const std::string& regions_path, const std::string& center_text,
                 double pointwise_radius, double sigma, double tolerance_km,
                 const std::string& out_path) {
    const auto regions =
        with_file(regions_path, [](std::istream& in) { return parse_regions(in); });
    std::optional<GeoCoord> center;
    if (!center_text.empty()) center = parse_center(center_text);
    const RegionalReport report = regional_analysis(regions, center);

    std::cout << kToolName << " regional: " << regions_path << " (" << report.n_regions
              << " regions)\n\n"
              << std::fixed;
    std::cout << "  center:    " << format_coord(report.center.coord) << "  ("
              << (report.center_is_empirical ? "empirical" : "mathematical") << ")\n";
    std::cout << "  radius:    " << std::setprecision(3) << report.radius_km << " km\n";
    std::cout << "  est.error: " << report.error_km << " km\n";

    std::optional<ConsistencyDiagnostic> verdict;
    if (pointwise_radius >= 0.0) {
        PerceptionReport pointwise;
        pointwise.radius_km = pointwise_radius;
        verdict = consistency_check(pointwise, report, sigma, tolerance_km);
        std::cout << "  vs pointwise " << pointwise_radius << " km: |difference| = "
                  << verdict->difference_km << " km, threshold " << verdict->threshold_km
                  << " km -> " << (verdict->consistent ? "consistent" : "INCONSISTENT") << '\n';
    }

    if (!out_path.empty()) {
        json doc;
        doc["schema_version"] = kDocumentSchemaVersion;
        doc["generator"] = json{{"name", kToolName}, {"version", kToolVersion}};
        doc["inputs"] = json{{"regions", regions_path}};
        doc["report"] = json{{"center",
                              json{{"lat_deg", report.center.coord.lat_deg()},
                                   {"lon_deg", report.center.coord.lon_deg()},
                                   {"source", report.center_is_empirical ? "empirical"
                                                                         : "mathematical"}}},
                             {"radius_km", report.radius_km},
                             {"error_km", report.error_km},
                             {"n_regions", report.n_regions}};
        if (verdict) {
            doc["consistency"] = json{{"pointwise_radius_km", pointwise_radius},
                                      {"difference_km", verdict->difference_km},
                                      {"threshold_km", verdict->threshold_km},
                                      {"consistent", verdict->consistent}};
        }
        write_json_file(out_path, doc);
    }
    return 0;
}

int cmd_synth(double lat, double lon, double sigma_major, double sigma_minor,
              double orientation_deg, std::size_t n, std::uint64_t seed,
              const std::string& out_path, const std::string& meta_path) {
    CloudSpec spec;
    spec.center = GeoCoord::from_degrees(lat, lon);
    spec.sigma_major_km = sigma_major;
    spec.sigma_minor_km = sigma_minor > 0.0 ? sigma_minor : sigma_major;
    spec.orientation_rad = deg2rad(orientation_deg);
    spec.n = n;
    spec.seed = seed;

    const OccurrenceTable cloud = sample_cloud(spec);
    {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw ValidationError(out_path + ": cannot open for writing");
        write_combined(out, cloud);
    }

    json meta;
    meta["generator"] = json{{"name", kToolName},
                             {"version", kToolVersion},
                             {"rng", kGeneratorId}};
    meta["spec"] = json{{"center_lat_deg", lat},
                        {"center_lon_deg", lon},
                        {"sigma_major_km", spec.sigma_major_km},
                        {"sigma_minor_km", spec.sigma_minor_km},
                        {"orientation_deg", orientation_deg},
                        {"n", n},
                        {"seed", seed}};
    meta["output"] = json{{"path", out_path}, {"sha256", sha256_hex_file(out_path)}};
    if (!meta_path.empty()) write_json_file(meta_path, meta);

    std::cout << kToolName << " synth: wrote " << n << " points to " << out_path << " (rng "
              << kGeneratorId << ", seed " << seed << ")\n";
    return 0;
}

int cmd_map(const std::string& document_path, const std::string& out_path) {
    std::ifstream in(document_path, std::ios::binary);
    if (!in) throw ValidationError(document_path + ": cannot open file");
    json document;
    try {
        document = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError(document_path + ": not valid JSON: " + std::string(e.what()));
    }
    const json geo = analysis_to_geojson(document);
    write_json_file(out_path, geo);
    std::cout << kToolName << " map: wrote " << geo.at("features").size() << " features to "
              << out_path << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"geographic scope analysis of texts from place-name occurrence tables"};
    app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
    app.require_subcommand(1);

    // analyze
    std::string occ_path, gazetteer_path, center_text, out_path;
    std::vector<std::string> exclude;
    bool strict = false;
    auto* analyze_cmd = app.add_subcommand(
        "analyze", "center, radius and ellipse of perception for one occurrence table");
    analyze_cmd->add_option("occurrences", occ_path,
                            "occurrence CSV (name,count or combined name,count,lat,lon)")
        ->required();
    analyze_cmd->add_option("--gazetteer", gazetteer_path, "gazetteer TSV (name, lat, lon)");
    analyze_cmd->add_option("--center", center_text,
                            "empirical center override as LAT,LON decimal degrees");
    analyze_cmd->add_option("--exclude", exclude,
                            "names to drop for the biased re-analysis (repeatable)");
    analyze_cmd->add_flag("--strict", strict, "fail on unresolved names instead of skipping");
    analyze_cmd->add_option("--out", out_path, "write the machine JSON document here");

    // correlate
    std::vector<std::string> vector_paths;
    bool matrix_mode = false;
    std::string correlate_out;
    auto* correlate_cmd =
        app.add_subcommand("correlate", "pairwise text correlation between occurrence vectors");
    correlate_cmd->add_option("vectors", vector_paths, "two or more name,count files")
        ->required()
        ->expected(2, -1);
    correlate_cmd->add_flag("--matrix", matrix_mode, "print the full decorrelation matrix");
    correlate_cmd->add_option("--out", correlate_out, "write matrices as JSON here");

    // residual
    std::string p_path, q_path, residual_gazetteer, residual_out;
    double link_km = 100.0, threshold = 0.5;
    auto* residual_cmd = app.add_subcommand(
        "residual", "subtract the projection of one text from another and cluster the excess");
    residual_cmd->add_option("p", p_path, "occurrence vector to keep (name,count)")->required();
    residual_cmd->add_option("q", q_path, "occurrence vector to project out")->required();
    residual_cmd->add_option("--gazetteer", residual_gazetteer, "gazetteer TSV for clustering")
        ->required();
    residual_cmd->add_option("--link-km", link_km, "single-linkage distance (default 100)");
    residual_cmd->add_option("--threshold", threshold,
                             "minimum positive residual component (default 0.5)");
    residual_cmd->add_option("--out", residual_out, "write residual and clusters as JSON here");

    // regional
    std::string regions_path, regional_center, regional_out;
    double pointwise_radius = -1.0, sigma = 1.0, tolerance_km = 0.0;
    auto* regional_cmd =
        app.add_subcommand("regional", "radius of perception over extended regions");
    regional_cmd->add_option("regions", regions_path,
                             "region CSV (name,count,lat,lon,mean_radius_km)")
        ->required();
    regional_cmd->add_option("--center", regional_center, "empirical center as LAT,LON");
    regional_cmd->add_option("--pointwise-radius", pointwise_radius,
                             "pointwise radius in km to check consistency against");
    regional_cmd->add_option("--sigma", sigma, "sigma multiple for the verdict (default 1)");
    regional_cmd->add_option("--tolerance", tolerance_km,
                             "extra pointwise tolerance in km (default 0)");
    regional_cmd->add_option("--out", regional_out, "write the regional report as JSON here");

    // synth
    double synth_lat = 0.0, synth_lon = 0.0, sigma_major = 0.0, sigma_minor = -1.0,
           orientation_deg = 0.0;
    std::size_t synth_n = 0;
    std::uint64_t synth_seed = 0;
    std::string synth_out, synth_meta;
    auto* synth_cmd = app.add_subcommand(
        "synth", "deterministic synthetic point cloud in the combined CSV format");
    synth_cmd->add_option("--lat", synth_lat, "center latitude, degrees")->required();
    synth_cmd->add_option("--lon", synth_lon, "center longitude, degrees")->required();
    synth_cmd->add_option("--sigma-major", sigma_major, "major-axis sigma, km")->required();
    synth_cmd->add_option("--sigma-minor", sigma_minor,
                          "minor-axis sigma, km (default: isotropic)");
    synth_cmd->add_option("--orientation", orientation_deg,
                          "major-axis angle, degrees (axis convention of the reports)");
    synth_cmd->add_option("--n", synth_n, "number of points")->required();
    synth_cmd->add_option("--seed", synth_seed, "random seed")->required();
    synth_cmd->add_option("--out", synth_out, "output CSV path")->required();
    synth_cmd->add_option("--meta", synth_meta, "write generator metadata JSON here");

    // map
    std::string map_document, map_out;
    auto* map_cmd = app.add_subcommand("map", "GeoJSON map export of an analysis document");
    map_cmd->add_option("document", map_document, "machine document from analyze --out")
        ->required();
    map_cmd->add_option("--out", map_out, "output GeoJSON path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(analyze_cmd)) {
            return cmd_analyze(occ_path, gazetteer_path, center_text, exclude, strict, out_path);
        }
        if (app.got_subcommand(correlate_cmd)) {
            return cmd_correlate(vector_paths, matrix_mode, correlate_out);
        }
        if (app.got_subcommand(residual_cmd)) {
            return cmd_residual(p_path, q_path, residual_gazetteer, link_km, threshold,
                                residual_out);
        }
        if (app.got_subcommand(regional_cmd)) {
            return cmd_regional(regions_path, regional_center, pointwise_radius, sigma,
                                tolerance_km, regional_out);
        }
        if (app.got_subcommand(synth_cmd)) {
            return cmd_synth(synth_lat, synth_lon, sigma_major, sigma_minor, orientation_deg,
                             synth_n, synth_seed, synth_out, synth_meta);
        }
        if (app.got_subcommand(map_cmd)) {
            return cmd_map(map_document, map_out);
        }
    } catch (const DegeneracyError& e) {
        std::cerr << kToolName << ": degeneracy: " << e.what() << '\n';
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << kToolName << ": error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << kToolName << ": error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
