#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <fstream>
#include <random>
#include <vector>

#include <json.hpp>

#include "geoscope/errors.hpp"
#include "geoscope/ingest.hpp"
#include "geoscope/perception.hpp"
#include "test_helpers.hpp"

using namespace geoscope;

namespace {

const GeoCoord kCenter = GeoCoord::from_degrees(49.0, 4.0);

OccurrenceTable table_from(std::initializer_list<OccurrenceEntry> entries) {
    OccurrenceTable t;
    t.entries = entries;
    return t;
}

// Random occurrence table scattered around kCenter.
OccurrenceTable random_table(std::mt19937& rng, int n, double max_range_km = 800.0) {
    std::uniform_real_distribution<double> bearing(0.0, 2.0 * kPi);
    std::uniform_real_distribution<double> range(5.0, max_range_km);
    std::uniform_real_distribution<double> count(1.0, 40.0);
    OccurrenceTable t;
    for (int i = 0; i < n; ++i) {
        t.entries.push_back({"site" + std::to_string(i), count(rng),
                             destination_point(kCenter, bearing(rng), range(rng))});
    }
    return t;
}

// Planar second-moment tensor by the rotation-matrix route; completely
// independent of the library's azimuth formula.
Eigen::Matrix2d brute_force_tensor(const WeightTable& weights, const GeoCoord& center) {
    Eigen::Matrix2d tensor = Eigen::Matrix2d::Zero();
    for (const auto& e : weights.entries) {
        const double colat = testutil::oracle_colatitude(center, e.coord);
        const double d = colat * kEarthRadiusKm;
        const double azimuth = testutil::oracle_azimuth(center, e.coord);
        const double x = d * std::cos(azimuth);
        const double y = d * std::sin(azimuth);
        tensor(0, 0) += e.weight * x * x;
        tensor(0, 1) += e.weight * x * y;
        tensor(1, 1) += e.weight * y * y;
    }
    tensor(1, 0) = tensor(0, 1);
    return tensor;
}

bool items_equal(const std::vector<ItemStat>& a, const std::vector<ItemStat>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].name != b[i].name || a[i].count != b[i].count || a[i].weight != b[i].weight ||
            a[i].distance_km != b[i].distance_km || !(a[i].coord == b[i].coord) ||
            a[i].azimuth_rad != b[i].azimuth_rad) {
            return false;
        }
    }
    return true;
}

bool reports_equal(const PerceptionReport& a, const PerceptionReport& b) {
    const bool scalars = a.center.coord == b.center.coord &&
                         a.center.resultant_norm == b.center.resultant_norm &&
                         a.center_is_empirical == b.center_is_empirical &&
                         a.radius_km == b.radius_km && a.n_items == b.n_items &&
                         a.total_count == b.total_count &&
                         a.contained_fraction == b.contained_fraction &&
                         a.excluded_names == b.excluded_names && a.warnings == b.warnings;
    if (!scalars) return false;
    if (a.ellipse.has_value() != b.ellipse.has_value()) return false;
    if (a.ellipse) {
        const auto& ea = *a.ellipse;
        const auto& eb = *b.ellipse;
        if (!(ea.i_plus == eb.i_plus && ea.i_minus == eb.i_minus && ea.i_12 == eb.i_12 &&
              ea.a == eb.a && ea.b == eb.b && ea.phi_prime == eb.phi_prime &&
              ea.isotropic == eb.isotropic)) {
            return false;
        }
    }
    return items_equal(a.items, b.items);
}

}  // namespace

TEST_CASE("weights_from_counts: normalization and order") {
    const WeightTable single = weights_from_counts(table_from({{"a", 4.0, kCenter}}));
    CHECK(single.entries.size() == 1);
    CHECK(single.entries[0].weight == 1.0);

    const WeightTable pair = weights_from_counts(
        table_from({{"a", 1.0, kCenter}, {"b", 3.0, kCenter}}));
    CHECK(pair.entries[0].name == "a");
    CHECK(pair.entries[0].weight == 0.25);
    CHECK(pair.entries[1].weight == 0.75);

    const WeightTable uniform = weights_from_counts(table_from(
        {{"a", 2.0, kCenter}, {"b", 2.0, kCenter}, {"c", 2.0, kCenter}, {"d", 2.0, kCenter}}));
    for (const auto& e : uniform.entries) CHECK(e.weight == 0.25);

    CHECK_THROWS_AS(weights_from_counts(OccurrenceTable{}), EmptyInputError);
}

TEST_CASE("weights_from_counts: sums stay normalized for large tables") {
    std::mt19937 rng(3);
    const OccurrenceTable t = random_table(rng, 1000);
    const WeightTable w = weights_from_counts(t);
    double sum = 0.0;
    for (const auto& e : w.entries) sum += e.weight;
    CHECK(std::abs(sum - 1.0) < 1e-12);
}

TEST_CASE("radius_of_perception: frozen arcs") {
    WeightTable all_at_center;
    all_at_center.entries = {{"a", 0.5, kCenter}, {"b", 0.5, kCenter}};
    CHECK(radius_of_perception(all_at_center, kCenter) == 0.0);

    WeightTable split;
    split.entries = {{"a", 0.5, GeoCoord::from_degrees(0.0, 0.0)},
                     {"b", 0.5, GeoCoord::from_degrees(0.0, 10.0)}};
    CHECK(radius_of_perception(split, GeoCoord::from_degrees(0.0, 5.0)) ==
          doctest::Approx(555.9754011676646).epsilon(1e-12));

    WeightTable one;
    one.entries = {{"a", 1.0, GeoCoord::from_degrees(0.0, 10.0)}};
    CHECK(radius_of_perception(one, GeoCoord::from_degrees(0.0, 0.0)) ==
          doctest::Approx(1111.9508023353291).epsilon(1e-12));
}

TEST_CASE("contained_fraction: boundaries and ties") {
    WeightTable w;
    w.entries = {{"near", 0.3, destination_point(kCenter, 0.0, 100.0)},
                 {"far", 0.7, destination_point(kCenter, 1.0, 400.0)}};
    CHECK(contained_fraction(w, kCenter, 0.0) == 0.0);
    CHECK(contained_fraction(w, kCenter, 1000.0) == 1.0);
    // an item exactly at the boundary counts as inside
    const double d_near = great_circle_distance_km(kCenter, w.entries[0].coord);
    CHECK(contained_fraction(w, kCenter, d_near) == 0.3);
    CHECK_THROWS_AS(contained_fraction(w, kCenter, -1.0), std::invalid_argument);
}

TEST_CASE("perception_ellipse: four-point cross is isotropic") {
    const double d = 200.0;
    WeightTable w;
    for (int k = 0; k < 4; ++k) {
        w.entries.push_back(
            {"p" + std::to_string(k), 0.25, destination_point(kCenter, k * kPi / 2.0, d)});
    }
    const PerceptionEllipse e = perception_ellipse(w, kCenter);
    CHECK(e.isotropic);
    CHECK_FALSE(e.phi_prime.has_value());
    CHECK(e.i_plus == doctest::Approx(d * d / 2.0).epsilon(1e-9));
    CHECK(e.a == doctest::Approx(d / std::sqrt(2.0)).epsilon(1e-9));
    CHECK(e.b == doctest::Approx(d / std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("perception_ellipse: east-west pair collapses to its axis") {
    const double d = 300.0;
    WeightTable w;
    w.entries = {{"east", 0.5, destination_point(kCenter, kPi / 2.0, d)},
                 {"west", 0.5, destination_point(kCenter, 3.0 * kPi / 2.0, d)}};
    const PerceptionEllipse e = perception_ellipse(w, kCenter);
    CHECK_FALSE(e.isotropic);
    CHECK(e.a == doctest::Approx(d).epsilon(1e-9));
    CHECK(e.b < 1e-3);
    REQUIRE(e.phi_prime.has_value());
    CHECK(testutil::axis_difference(*e.phi_prime, kPi / 2.0) < 1e-9);
}

TEST_CASE("perception_ellipse: degenerate inputs") {
    WeightTable single;
    single.entries = {{"a", 1.0, kCenter}};
    CHECK_THROWS_AS(perception_ellipse(single, kCenter), DegenerateDistributionError);

    WeightTable coincident;
    coincident.entries = {{"a", 0.5, kCenter}, {"b", 0.5, kCenter}};
    CHECK_THROWS_AS(perception_ellipse(coincident, kCenter), DegenerateDistributionError);
}

TEST_CASE("perception_ellipse: matches the rotation-matrix tensor oracle") {
    std::mt19937 rng(11);
    const OccurrenceTable t = random_table(rng, 5);
    const WeightTable w = weights_from_counts(t);
    const PerceptionCenter center = weighted_centroid(
        [&] {
            std::vector<WeightedPoint> pts;
            for (const auto& e : w.entries) pts.push_back({e.coord, e.weight});
            return pts;
        }());

    const PerceptionEllipse e = perception_ellipse(w, center.coord);
    const Eigen::Matrix2d tensor = brute_force_tensor(w, center.coord);

    CHECK(e.i_plus == doctest::Approx(0.5 * (tensor(0, 0) + tensor(1, 1))).epsilon(1e-9));
    CHECK(e.i_minus == doctest::Approx(0.5 * (tensor(0, 0) - tensor(1, 1))).epsilon(1e-9));
    CHECK(e.i_12 == doctest::Approx(tensor(0, 1)).epsilon(1e-9));

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver(tensor);
    CHECK(e.a * e.a == doctest::Approx(solver.eigenvalues()(1)).epsilon(1e-9));
    CHECK(e.b * e.b == doctest::Approx(solver.eigenvalues()(0)).epsilon(1e-9));
}

TEST_CASE("perception_ellipse: closed-form eigenvalues match a generic eigensolver") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> coord(-300.0, 300.0);
    std::uniform_real_distribution<double> weight(0.05, 1.0);
    for (int trial = 0; trial < 1000; ++trial) {
        // Gram-style random tensor from a small planar point set.
        Eigen::Matrix2d tensor = Eigen::Matrix2d::Zero();
        for (int i = 0; i < 6; ++i) {
            const double x = coord(rng), y = coord(rng), w = weight(rng);
            tensor(0, 0) += w * x * x;
            tensor(0, 1) += w * x * y;
            tensor(1, 1) += w * y * y;
        }
        tensor(1, 0) = tensor(0, 1);

        const double i_plus = 0.5 * (tensor(0, 0) + tensor(1, 1));
        const double i_minus = 0.5 * (tensor(0, 0) - tensor(1, 1));
        const double anisotropy = std::hypot(i_minus, tensor(0, 1));
        const double a2 = i_plus + anisotropy;
        const double b2 = i_plus - anisotropy;

        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver(tensor);
        const double scale = std::max(solver.eigenvalues()(1), 1e-300);
        CHECK(std::abs(a2 - solver.eigenvalues()(1)) / scale < 1e-10);
        CHECK(std::abs(b2 - solver.eigenvalues()(0)) / scale < 1e-10);
    }
}

TEST_CASE("perception_ellipse: a^2 + b^2 identity") {
    std::mt19937 rng(29);
    for (int trial = 0; trial < 50; ++trial) {
        const OccurrenceTable t = random_table(rng, 15);
        const PerceptionReport report = analyze(t);
        REQUIRE(report.ellipse.has_value());
        const auto& e = *report.ellipse;
        CHECK(e.a * e.a + e.b * e.b ==
              doctest::Approx(2.0 * e.i_plus).epsilon(1e-12));
    }
}

TEST_CASE("invariant_check: rotations leave the invariants unchanged") {
    std::mt19937 rng(37);
    const OccurrenceTable t = random_table(rng, 20);
    const PerceptionReport report = analyze(t);
    REQUIRE(report.ellipse.has_value());
    const WeightTable w = weights_from_counts(t);

    const InvariantDiagnostics at_30 =
        invariant_check(*report.ellipse, w, report.center.coord, deg2rad(30.0));
    CHECK(at_30.max_rel_dev < 1e-9);

    const InvariantDiagnostics at_0 =
        invariant_check(*report.ellipse, w, report.center.coord, 0.0);
    CHECK(at_0.max_rel_dev == 0.0);
}

TEST_CASE("biased_analysis: empty exclusion reproduces analyze field for field") {
    std::mt19937 rng(43);
    const OccurrenceTable t = random_table(rng, 12);
    CHECK(reports_equal(biased_analysis(t, {}), analyze(t)));
}

TEST_CASE("biased_analysis: removing a centroid-coincident item rescales the radius") {
    // Two equal masses east/west put the centroid exactly on the equator
    // midpoint; a third item sits exactly there.
    const GeoCoord mid = GeoCoord::from_degrees(0.0, 0.0);
    OccurrenceTable t = table_from({{"west", 2.0, GeoCoord::from_degrees(0.0, -5.0)},
                                    {"east", 2.0, GeoCoord::from_degrees(0.0, 5.0)},
                                    {"mid", 1.0, mid}});
    const PerceptionReport base = analyze(t);
    CHECK(base.center.coord.lat == 0.0);
    CHECK(base.center.coord.lon == 0.0);

    const PerceptionReport biased = biased_analysis(t, {"mid"});
    const double w_mid = 1.0 / 5.0;
    CHECK(biased.radius_km == doctest::Approx(base.radius_km / (1.0 - w_mid)).epsilon(1e-12));

    // In the vanishing-weight limit the radius is unchanged.
    t.entries[2].count = 5e-12;
    const double tiny_w = 5e-12 / (4.0 + 5e-12);
    const PerceptionReport base_tiny = analyze(t);
    const PerceptionReport biased_tiny = biased_analysis(t, {"mid"});
    CHECK(std::abs(biased_tiny.radius_km - base_tiny.radius_km) < 1e-9);
    CHECK(biased_tiny.radius_km ==
          doctest::Approx(base_tiny.radius_km / (1.0 - tiny_w)).epsilon(1e-12));
}

TEST_CASE("biased_analysis: dropping a far outlier shrinks the radius") {
    OccurrenceTable t = table_from({
        {"core1", 30.0, destination_point(kCenter, 0.2, 60.0)},
        {"core2", 25.0, destination_point(kCenter, 2.1, 90.0)},
        {"core3", 20.0, destination_point(kCenter, 4.0, 40.0)},
        {"core4", 15.0, destination_point(kCenter, 5.3, 120.0)},
        {"outlier", 10.0, destination_point(kCenter, 2.6, 1200.0)},  // 10% of mass
    });
    const PerceptionReport unbiased = analyze(t);
    const PerceptionReport biased = biased_analysis(t, {"outlier"});
    CHECK(biased.radius_km < unbiased.radius_km);
    CHECK(biased.excluded_names == std::vector<std::string>{"outlier"});

    // Brute-force both radii with the independent haversine route.
    auto brute_radius = [](const OccurrenceTable& table) {
        double total = 0.0;
        for (const auto& e : table.entries) total += e.count;
        double x = 0, y = 0, z = 0;
        for (const auto& e : table.entries) {
            x += e.count / total * std::cos(e.coord.lat) * std::cos(e.coord.lon);
            y += e.count / total * std::cos(e.coord.lat) * std::sin(e.coord.lon);
            z += e.count / total * std::sin(e.coord.lat);
        }
        const GeoCoord center{std::atan2(z, std::hypot(x, y)), std::atan2(y, x)};
        double radius = 0.0;
        for (const auto& e : table.entries) {
            radius += e.count / total * testutil::haversine_km(center, e.coord);
        }
        return radius;
    };
    CHECK(unbiased.radius_km == doctest::Approx(brute_radius(t)).epsilon(1e-9));
    OccurrenceTable without = t;
    without.entries.pop_back();
    CHECK(biased.radius_km == doctest::Approx(brute_radius(without)).epsilon(1e-9));
}

TEST_CASE("biased_analysis: unknown names warn, excluding everything throws") {
    const OccurrenceTable t = table_from({{"a", 1.0, GeoCoord::from_degrees(0.0, 0.0)},
                                          {"b", 1.0, GeoCoord::from_degrees(0.0, 1.0)}});
    const PerceptionReport r = biased_analysis(t, {"nowhere"});
    REQUIRE(r.warnings.size() == 1);
    CHECK(r.warnings[0].find("nowhere") != std::string::npos);
    CHECK(r.excluded_names.empty());

    CHECK_THROWS_AS(biased_analysis(t, {"a", "b"}), AllExcludedError);
}

TEST_CASE("analyze: single item degenerates cleanly") {
    const PerceptionReport r = analyze(table_from({{"only", 3.0, kCenter}}));
    CHECK(std::abs(r.center.coord.lat - kCenter.lat) < 1e-12);
    CHECK(r.radius_km < 1e-9);
    CHECK(r.contained_fraction == 1.0);
    CHECK_FALSE(r.ellipse.has_value());
    REQUIRE(r.warnings.size() == 1);
    CHECK(r.items.size() == 1);
    CHECK_FALSE(r.items[0].azimuth_rad.has_value());
}

TEST_CASE("analyze: empirical center override recenters everything") {
    std::mt19937 rng(51);
    const OccurrenceTable t = random_table(rng, 10);
    AnalysisOptions opt;
    opt.empirical_center = GeoCoord::from_degrees(49.2583, 4.0317);
    const PerceptionReport r = analyze(t, opt);
    CHECK(r.center_is_empirical);
    CHECK(r.center.coord == *opt.empirical_center);
    CHECK(r.center.resultant_norm == 1.0);

    const WeightTable w = weights_from_counts(t);
    CHECK(r.radius_km == radius_of_perception(w, *opt.empirical_center));
    REQUIRE(r.ellipse.has_value());
    const PerceptionEllipse direct = perception_ellipse(w, *opt.empirical_center);
    CHECK(r.ellipse->i_plus == direct.i_plus);
    CHECK(r.ellipse->phi_prime == direct.phi_prime);
}

TEST_CASE("analyze: radius scale equivariance in the near-flat regime") {
    std::mt19937 rng(59);
    std::uniform_real_distribution<double> bearing(0.0, 2.0 * kPi);
    std::uniform_real_distribution<double> range(10.0, 450.0);
    std::uniform_real_distribution<double> count(1.0, 10.0);

    std::vector<double> bearings, ranges, counts;
    for (int i = 0; i < 40; ++i) {
        bearings.push_back(bearing(rng));
        ranges.push_back(range(rng));
        counts.push_back(count(rng));
    }
    auto build = [&](double k) {
        OccurrenceTable t;
        for (int i = 0; i < 40; ++i) {
            t.entries.push_back({"site" + std::to_string(i), counts[i],
                                 destination_point(kCenter, bearings[i], k * ranges[i])});
        }
        return analyze(t).radius_km;
    };
    const double full = build(1.0);
    const double half = build(0.5);
    CHECK(std::abs(half - 0.5 * full) / (0.5 * full) < 1e-3);
}

TEST_CASE("analyze: matches the committed golden report") {
    const std::string dir = GEOSCOPE_FIXTURE_DIR;
    std::ifstream occ_stream(dir + "/occurrences.csv");
    std::ifstream gaz_stream(dir + "/gazetteer.tsv");
    REQUIRE(occ_stream);
    REQUIRE(gaz_stream);
    const ParsedOccurrences occ = parse_occurrences(occ_stream);
    const auto gaz = parse_gazetteer(gaz_stream);
    const JoinResult joined = join_occurrences(occ.records, gaz, JoinPolicy::kFail);

    std::ifstream golden_stream(dir + "/golden_report.json");
    REQUIRE(golden_stream);
    const nlohmann::json golden = nlohmann::json::parse(golden_stream);

    auto check_section = [&](const PerceptionReport& r, const nlohmann::json& g) {
        CHECK(r.center.coord.lat_deg() ==
              doctest::Approx(g["center_lat_deg"].get<double>()).epsilon(1e-9));
        CHECK(r.center.coord.lon_deg() ==
              doctest::Approx(g["center_lon_deg"].get<double>()).epsilon(1e-9));
        CHECK(r.center.resultant_norm ==
              doctest::Approx(g["resultant_norm"].get<double>()).epsilon(1e-12));
        CHECK(r.radius_km == doctest::Approx(g["radius_km"].get<double>()).epsilon(1e-9));
        CHECK(r.contained_fraction ==
              doctest::Approx(g["contained_fraction"].get<double>()).epsilon(1e-12));
        REQUIRE(r.ellipse.has_value());
        CHECK(r.ellipse->i_plus == doctest::Approx(g["i_plus_km2"].get<double>()).epsilon(1e-8));
        CHECK(r.ellipse->i_minus == doctest::Approx(g["i_minus_km2"].get<double>()).epsilon(1e-8));
        CHECK(r.ellipse->i_12 == doctest::Approx(g["i_12_km2"].get<double>()).epsilon(1e-8));
        CHECK(r.ellipse->a == doctest::Approx(g["a_km"].get<double>()).epsilon(1e-9));
        CHECK(r.ellipse->b == doctest::Approx(g["b_km"].get<double>()).epsilon(1e-9));
        REQUIRE(r.ellipse->phi_prime.has_value());
        CHECK(rad2deg(*r.ellipse->phi_prime) ==
              doctest::Approx(g["phi_prime_deg"].get<double>()).epsilon(1e-9));
        CHECK(r.n_items == g["n_items"].get<std::size_t>());
        CHECK(r.total_count == g["total_count"].get<double>());
    };

    check_section(analyze(joined.table), golden["unbiased"]);
    check_section(biased_analysis(joined.table, {"Rome"}), golden["biased"]);
}
