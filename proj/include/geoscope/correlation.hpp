#pragma once

#include <map>
#include <string>
#include <vector>

#include "geoscope/geo.hpp"

namespace geoscope {

/**
 * Sparse name -> magnitude vector over geographic (or arbitrary) terms.
 *
 * Non-residual vectors carry nonnegative magnitudes (raw counts or weights;
 * correlation is scale invariant, so either works). Residual vectors come out
 * of project_out() and may carry negative components.
 */
struct TermVector {
    std::map<std::string, double> entries;
    bool residual = false;
};

/**
 * Text correlation: cosine similarity over the union of keys, with missing
 * entries treated as zero. Result in [0, 1]; 1 for identical relative
 * frequencies, 0 for disjoint term sets. Throws ZeroVectorError if either
 * vector has zero norm; residual vectors are not accepted.
 */
double correlation(const TermVector& p, const TermVector& q);

// D = 1 - C.
double decorrelation(const TermVector& p, const TermVector& q);

/**
 * Subtracts from p its component along q:
 *   r = p - (sum p q / sum q^2) q
 * over the key union (explicit zeros are kept). The result is flagged
 * residual and is orthogonal to q. q must be nonzero; p may itself be a
 * residual, making the operation idempotent.
 */
TermVector project_out(const TermVector& p, const TermVector& q);

using Gazetteer = std::map<std::string, GeoCoord>;

struct ResidualCluster {
    std::vector<std::string> names;  // sorted
    double total_mass = 0.0;
    GeoCoord centroid;
};

/**
 * Positive-part clusters of a residual vector.
 *
 * Keeps components with magnitude above `threshold` (below that a residual
 * of count data is projection noise), resolves them through the gazetteer,
 * and single-linkage groups them at great-circle distance <= link_km.
 * link_km <= 0 disables merging entirely (one cluster per name). Clusters
 * are ordered by descending total mass, then by first member name; each
 * carries its mass-weighted spherical centroid. Unresolvable names raise
 * UnresolvedNamesError.
 */
std::vector<ResidualCluster> residual_clusters(const TermVector& residual,
                                               const Gazetteer& gazetteer, double link_km,
                                               double threshold = 0.5);

/**
 * Symmetric decorrelation matrix over a list of vectors: D[i][i] = 0,
 * D[i][j] = decorrelation(v_i, v_j). Requires at least two vectors; any
 * zero-norm member raises ZeroVectorError.
 */
std::vector<std::vector<double>> pairwise_decorrelation(const std::vector<TermVector>& vectors);

}  // namespace geoscope
