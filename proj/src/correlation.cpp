#include "geoscope/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "geoscope/errors.hpp"

namespace geoscope {

namespace {

double squared_norm(const TermVector& v) {
    double s = 0.0;
    for (const auto& [name, value] : v.entries) s += value * value;
    return s;
}

double dot(const TermVector& p, const TermVector& q) {
    // Only the key intersection contributes; missing entries are zero.
    double s = 0.0;
    for (const auto& [name, value] : p.entries) {
        auto it = q.entries.find(name);
        if (it != q.entries.end()) s += value * it->second;
    }
    return s;
}

// Disjoint-set forest for single-linkage grouping.
class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n) {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }
    std::size_t find(std::size_t i) {
        while (parent_[i] != i) {
            parent_[i] = parent_[parent_[i]];
            i = parent_[i];
        }
        return i;
    }
    void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

private:
    std::vector<std::size_t> parent_;
};

}  // namespace

double correlation(const TermVector& p, const TermVector& q) {
    if (p.residual || q.residual) {
        throw std::invalid_argument("correlation is defined on non-residual vectors");
    }
    const double np2 = squared_norm(p);
    const double nq2 = squared_norm(q);
    if (np2 == 0.0 || nq2 == 0.0) throw ZeroVectorError();

    // sqrt of the product (not product of sqrts) so that C(p, p) == 1 exactly.
    double c = dot(p, q) / std::sqrt(np2 * nq2);
    // Cauchy-Schwarz bounds hold mathematically; excursions beyond rounding
    // scale indicate a defect.
    if (c > 1.0) {
        if (c - 1.0 > 1e-12) throw InternalError("correlation exceeds 1 beyond rounding");
        c = 1.0;
    }
    if (c < 0.0) {
        if (-c > 1e-12) throw InternalError("correlation below 0 beyond rounding");
        c = 0.0;
    }
    return c;
}

double decorrelation(const TermVector& p, const TermVector& q) {
    return 1.0 - correlation(p, q);
}

TermVector project_out(const TermVector& p, const TermVector& q) {
    const double nq2 = squared_norm(q);
    if (nq2 == 0.0) throw ZeroVectorError();
    const double coefficient = dot(p, q) / nq2;

    TermVector r;
    r.residual = true;
    r.entries = p.entries;
    for (const auto& [name, value] : q.entries) {
        r.entries[name] -= coefficient * value;  // inserts 0 first for keys absent from p
    }
    return r;
}

std::vector<ResidualCluster> residual_clusters(const TermVector& residual,
                                               const Gazetteer& gazetteer, double link_km,
                                               double threshold) {
    struct Member {
        std::string name;
        double mass;
        GeoCoord coord;
    };
    std::vector<Member> members;
    std::vector<std::string> unresolved;
    for (const auto& [name, value] : residual.entries) {
        if (value <= threshold) continue;
        auto it = gazetteer.find(name);
        if (it == gazetteer.end()) {
            unresolved.push_back(name);
            continue;
        }
        members.push_back({name, value, it->second});
    }
    if (!unresolved.empty()) throw UnresolvedNamesError(std::move(unresolved));
    if (members.empty()) return {};

    UnionFind groups(members.size());
    if (link_km > 0.0) {
        for (std::size_t i = 0; i < members.size(); ++i) {
            for (std::size_t j = i + 1; j < members.size(); ++j) {
                if (great_circle_distance_km(members[i].coord, members[j].coord) <= link_km) {
                    groups.unite(i, j);
                }
            }
        }
    }

    std::map<std::size_t, std::vector<std::size_t>> by_root;
    for (std::size_t i = 0; i < members.size(); ++i) by_root[groups.find(i)].push_back(i);

    std::vector<ResidualCluster> clusters;
    clusters.reserve(by_root.size());
    for (const auto& [root, indices] : by_root) {
        ResidualCluster cluster;
        double mass = 0.0;
        for (std::size_t i : indices) mass += members[i].mass;
        std::vector<WeightedPoint> points;
        points.reserve(indices.size());
        for (std::size_t i : indices) {
            cluster.names.push_back(members[i].name);
            points.push_back({members[i].coord, members[i].mass / mass});
        }
        std::sort(cluster.names.begin(), cluster.names.end());
        cluster.total_mass = mass;
        cluster.centroid = weighted_centroid(points).coord;
        clusters.push_back(std::move(cluster));
    }

    std::sort(clusters.begin(), clusters.end(), [](const auto& a, const auto& b) {
        if (a.total_mass != b.total_mass) return a.total_mass > b.total_mass;
        return a.names.front() < b.names.front();
    });
    return clusters;
}

std::vector<std::vector<double>> pairwise_decorrelation(const std::vector<TermVector>& vectors) {
    if (vectors.size() < 2) {
        throw EmptyInputError("pairwise_decorrelation: at least two vectors required");
    }
    const std::size_t n = vectors.size();
    std::vector<std::vector<double>> matrix(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = decorrelation(vectors[i], vectors[j]);
            matrix[i][j] = d;
            matrix[j][i] = d;
        }
    }
    return matrix;
}

}  // namespace geoscope
