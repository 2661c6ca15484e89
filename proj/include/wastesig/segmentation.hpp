// segmentation.hpp — K-Means with k-means++ seeding and elbow K selection,
// DBSCAN, and the two-pass outlier-isolating segmentation that produces the
// four-tier market hierarchy.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wastesig/features.hpp"
#include "wastesig/types.hpp"

namespace wastesig {

using Matrix = std::vector<std::vector<double>>;

struct KMeansParams {
    int k = 1;
    int n_restarts = 10;
    int max_iter = 300;
    double tol = 1e-6;  // centroid-shift threshold
    std::uint64_t seed = 42;
};

struct KMeansResult {
    std::vector<int> assignments;  // point index -> cluster id in [0, k)
    Matrix centroids;
    double wcss = 0.0;
    int iterations = 0;
    std::vector<double> wcss_trace;  // per assignment pass; non-increasing
};

// Best-of-n_restarts Lloyd's algorithm by lowest wcss; restart r is seeded
// with seed + r. Nearest-centroid ties break to the lowest cluster id; empty
// clusters are repaired by reseeding with the point farthest from its
// centroid. k > n or non-finite input -> fatal.
KMeansResult kmeans(const Matrix& points, const KMeansParams& params);

double compute_wcss(const Matrix& points, const Matrix& centroids,
                    const std::vector<int>& assignments);

struct ElbowResult {
    int chosen_k = 0;
    std::vector<std::pair<int, double>> wcss_curve;  // k = 1..k_max
    bool non_monotone = false;  // wcss increased somewhere along the curve
};

// wcss for k = 1..k_max; chosen_k = argmax over k in [2, k_max-1] of the
// second difference wcss(k-1) - 2 wcss(k) + wcss(k+1), ties to the smallest
// k. Requires k_max >= 3 and n >= k_max.
ElbowResult elbow_select(const Matrix& points, int k_max, KMeansParams base);

struct DbscanParams {
    double eps = 0.5;  // neighborhood radius, inclusive
    int min_pts = 5;   // a point counts as its own neighbor
};

// Classic density-reachability clustering. Cluster ids are assigned in
// first-discovery order scanning points by ascending index; noise is -1.
std::vector<int> dbscan(const Matrix& points, const DbscanParams& params);

// Sorts every point's distance to its k-th nearest neighbor descending and
// returns the value at the maximum second difference of that curve.
// n <= k -> fatal; an all-zero curve -> "degenerate distances" error.
double kdist_eps(const Matrix& points, int k);

struct SegmentAssignment {
    std::string hs_code;
    int kmeans_cluster = -1;  // cluster id within the pass that labeled it
    int dbscan_label = -1;
    bool dual_confirmed_outlier = false;
    Tier tier = Tier::Core;
    SegmentPass pass = SegmentPass::core_pass2;
};

struct SegmentationConfig {
    int k_max = 10;
    std::optional<int> k_override;  // replaces the pass-1 elbow choice
    std::optional<double> eps;      // default: kdist_eps at k = min_pts
    int min_pts = 5;
    int n_restarts = 10;
    int max_iter = 300;
    double tol = 1e-6;
    std::uint64_t seed = 42;
};

struct SegmentationResult {
    std::vector<SegmentAssignment> assignments;  // aligned with input rows
    ElbowResult pass1_elbow;
    ElbowResult pass2_elbow;  // empty when pass 2 was skipped
    double eps_used = 0.0;
    std::size_t outlier_cluster_size_threshold = 0;
    std::vector<std::string> warnings;
};

// The two-pass "peel the onion" segmentation over standardized features:
//   1. elbow_select + kmeans on all points; clusters of size
//      <= max(2, ceil(0.01 n)) are isolated as Outliers.
//   2. DBSCAN on all points; dual confirmation = isolated AND noise.
//   3. elbow_select + kmeans on the remainder with k forced >= 3; largest
//      cluster -> SuperCore, highest mean standardized avg_price among the
//      rest -> HighValueNiche, all others -> Core.
// Requires n >= 8. features supplies avg_price when it is not a matrix
// column.
SegmentationResult iterative_segment(const StandardizedMatrix& matrix,
                                     const std::vector<FeatureVector>& features,
                                     const SegmentationConfig& cfg);

}  // namespace wastesig
