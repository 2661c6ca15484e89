#include "wastesig/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

#include "wastesig/rng.hpp"
#include "wastesig/stats.hpp"

namespace wastesig {

namespace {

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double d = a[j] - b[j];
        s += d * d;
    }
    return s;
}

void check_finite(const Matrix& points) {
    for (const auto& row : points)
        for (const double v : row)
            if (!std::isfinite(v)) throw std::invalid_argument("non-finite input point");
}

// k-means++ seeding: first center uniform, the rest proportional to the
// squared distance to the nearest chosen center.
Matrix seed_centroids(const Matrix& points, int k, Rng& rng) {
    const std::size_t n = points.size();
    Matrix centroids;
    centroids.reserve(static_cast<std::size_t>(k));
    centroids.push_back(points[rng.below(n)]);

    std::vector<double> d2(n);
    while (centroids.size() < static_cast<std::size_t>(k)) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& c : centroids) best = std::min(best, sq_dist(points[i], c));
            d2[i] = best;
            total += best;
        }
        if (total <= 0.0) {
            centroids.push_back(points[rng.below(n)]);
            continue;
        }
        const double target = rng.uniform01() * total;
        double acc = 0.0;
        std::size_t pick = n - 1;
        for (std::size_t i = 0; i < n; ++i) {
            acc += d2[i];
            if (acc >= target) {
                pick = i;
                break;
            }
        }
        centroids.push_back(points[pick]);
    }
    return centroids;
}

void assign_points(const Matrix& points, const Matrix& centroids, std::vector<int>& assignments) {
    for (std::size_t i = 0; i < points.size(); ++i) {
        int best = 0;
        double best_d = sq_dist(points[i], centroids[0]);
        for (std::size_t c = 1; c < centroids.size(); ++c) {
            const double d = sq_dist(points[i], centroids[c]);
            if (d < best_d) {  // ties keep the lowest cluster id
                best_d = d;
                best = static_cast<int>(c);
            }
        }
        assignments[i] = best;
    }
}

// Returns the max centroid shift of the update step.
double update_centroids(const Matrix& points, const std::vector<int>& assignments,
                        Matrix& centroids) {
    const std::size_t d = points[0].size();
    const std::size_t k = centroids.size();
    Matrix sums(k, std::vector<double>(d, 0.0));
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
        const int c = assignments[i];
        ++counts[static_cast<std::size_t>(c)];
        for (std::size_t j = 0; j < d; ++j) sums[static_cast<std::size_t>(c)][j] += points[i][j];
    }
    double max_shift = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
        if (counts[c] == 0) continue;  // repaired by the caller
        std::vector<double> next(d);
        for (std::size_t j = 0; j < d; ++j) next[j] = sums[c][j] / static_cast<double>(counts[c]);
        max_shift = std::max(max_shift, std::sqrt(sq_dist(next, centroids[c])));
        centroids[c] = std::move(next);
    }
    return max_shift;
}

// Moves the point farthest from its assigned centroid into each empty
// cluster (lowest point index wins ties).
bool repair_empty_clusters(const Matrix& points, std::vector<int>& assignments,
                           Matrix& centroids) {
    const std::size_t k = centroids.size();
    std::vector<std::size_t> counts(k, 0);
    for (const int a : assignments) ++counts[static_cast<std::size_t>(a)];

    bool repaired = false;
    for (std::size_t c = 0; c < k; ++c) {
        if (counts[c] > 0) continue;
        std::size_t farthest = 0;
        double best = -1.0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            const std::size_t home = static_cast<std::size_t>(assignments[i]);
            if (counts[home] <= 1) continue;  // never empty another cluster
            const double d = sq_dist(points[i], centroids[home]);
            if (d > best) {
                best = d;
                farthest = i;
            }
        }
        if (best < 0.0) continue;
        --counts[static_cast<std::size_t>(assignments[farthest])];
        assignments[farthest] = static_cast<int>(c);
        counts[c] = 1;
        centroids[c] = points[farthest];
        repaired = true;
    }
    return repaired;
}

void lloyd_iterate(const Matrix& points, const KMeansParams& params, KMeansResult& res) {
    const std::size_t n = points.size();
    std::vector<int> prev(n, -1);
    bool shift_converged = false;

    for (int iter = 0; iter < params.max_iter; ++iter) {
        assign_points(points, res.centroids, res.assignments);
        while (repair_empty_clusters(points, res.assignments, res.centroids)) {
        }
        res.iterations += 1;
        res.wcss_trace.push_back(compute_wcss(points, res.centroids, res.assignments));
        // Stable assignments are a true fixed point (centroids are already
        // the exact means of these assignments). The shift criterion stops
        // one confirming assignment pass after the centroids settle.
        if (res.assignments == prev || shift_converged) break;
        prev = res.assignments;
        const double shift = update_centroids(points, res.assignments, res.centroids);
        shift_converged = shift <= params.tol;
    }
}

// Hartigan-style polish: move a point to another cluster whenever doing so
// lowers the wcss, accounting for the centroid shift the move causes. This
// escapes Lloyd-stable configurations that a single-point move improves;
// any accepted move strictly lowers the objective, and every Hartigan-
// stable state is also Lloyd-stable, so the result invariants survive.
bool hartigan_sweep(const Matrix& points, std::vector<int>& assignments, Matrix& centroids) {
    const std::size_t n = points.size();
    const std::size_t k = centroids.size();
    const std::size_t d = points[0].size();
    std::vector<std::size_t> counts(k, 0);
    for (const int a : assignments) ++counts[static_cast<std::size_t>(a)];

    bool moved = false;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t from = static_cast<std::size_t>(assignments[i]);
        if (counts[from] <= 1) continue;
        const double removal = static_cast<double>(counts[from]) /
                               static_cast<double>(counts[from] - 1) *
                               sq_dist(points[i], centroids[from]);
        std::size_t best = from;
        double best_gain = 1e-12;
        for (std::size_t c = 0; c < k; ++c) {
            if (c == from) continue;
            const double addition = static_cast<double>(counts[c]) /
                                    static_cast<double>(counts[c] + 1) *
                                    sq_dist(points[i], centroids[c]);
            const double gain = removal - addition;
            if (gain > best_gain) {
                best_gain = gain;
                best = c;
            }
        }
        if (best == from) continue;
        for (std::size_t j = 0; j < d; ++j) {
            centroids[from][j] = (centroids[from][j] * static_cast<double>(counts[from]) -
                                  points[i][j]) /
                                 static_cast<double>(counts[from] - 1);
            centroids[best][j] = (centroids[best][j] * static_cast<double>(counts[best]) +
                                  points[i][j]) /
                                 static_cast<double>(counts[best] + 1);
        }
        --counts[from];
        ++counts[best];
        assignments[i] = static_cast<int>(best);
        moved = true;
    }
    return moved;
}

KMeansResult lloyd_once(const Matrix& points, const KMeansParams& params, std::uint64_t seed) {
    Rng rng(seed);

    KMeansResult res;
    res.centroids = seed_centroids(points, params.k, rng);
    res.assignments.assign(points.size(), 0);

    lloyd_iterate(points, params, res);
    for (int round = 0; round < params.max_iter; ++round) {
        if (!hartigan_sweep(points, res.assignments, res.centroids)) break;
        lloyd_iterate(points, params, res);
    }
    res.wcss = compute_wcss(points, res.centroids, res.assignments);
    return res;
}

}  // namespace

double compute_wcss(const Matrix& points, const Matrix& centroids,
                    const std::vector<int>& assignments) {
    double s = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i)
        s += sq_dist(points[i], centroids[static_cast<std::size_t>(assignments[i])]);
    return s;
}

KMeansResult kmeans(const Matrix& points, const KMeansParams& params) {
    if (points.empty()) throw std::invalid_argument("kmeans on empty input");
    if (params.k < 1) throw std::invalid_argument("kmeans requires k >= 1");
    if (static_cast<std::size_t>(params.k) > points.size())
        throw std::invalid_argument("kmeans requires k <= number of points");
    if (params.tol < 0.0) throw std::invalid_argument("kmeans requires tol >= 0");
    if (params.n_restarts < 1) throw std::invalid_argument("kmeans requires n_restarts >= 1");
    check_finite(points);

    KMeansResult best;
    bool have = false;
    for (int r = 0; r < params.n_restarts; ++r) {
        KMeansResult res = lloyd_once(points, params, params.seed + static_cast<std::uint64_t>(r));
        if (!have || res.wcss < best.wcss) {
            best = std::move(res);
            have = true;
        }
    }
    return best;
}

ElbowResult elbow_select(const Matrix& points, int k_max, KMeansParams base) {
    if (k_max < 3) throw std::invalid_argument("elbow_select requires k_max >= 3");
    if (points.size() < static_cast<std::size_t>(k_max))
        throw std::invalid_argument("elbow_select requires n >= k_max");

    ElbowResult res;
    std::vector<double> wcss(static_cast<std::size_t>(k_max) + 1, 0.0);
    for (int k = 1; k <= k_max; ++k) {
        base.k = k;
        wcss[static_cast<std::size_t>(k)] = kmeans(points, base).wcss;
        res.wcss_curve.emplace_back(k, wcss[static_cast<std::size_t>(k)]);
        if (k > 1 && wcss[static_cast<std::size_t>(k)] > wcss[static_cast<std::size_t>(k - 1)])
            res.non_monotone = true;
    }

    int best_k = 2;
    double best_dd = -std::numeric_limits<double>::infinity();
    for (int k = 2; k <= k_max - 1; ++k) {
        const double dd = wcss[static_cast<std::size_t>(k - 1)] -
                          2.0 * wcss[static_cast<std::size_t>(k)] +
                          wcss[static_cast<std::size_t>(k + 1)];
        if (dd > best_dd) {  // ties keep the smallest k
            best_dd = dd;
            best_k = k;
        }
    }
    res.chosen_k = best_k;
    return res;
}

std::vector<int> dbscan(const Matrix& points, const DbscanParams& params) {
    if (params.eps <= 0.0) throw std::invalid_argument("dbscan requires eps > 0");
    if (params.min_pts < 1) throw std::invalid_argument("dbscan requires min_pts >= 1");
    check_finite(points);

    const std::size_t n = points.size();
    const double eps2 = params.eps * params.eps;

    auto region = [&](std::size_t i) {
        std::vector<std::size_t> out;
        for (std::size_t j = 0; j < n; ++j)
            if (sq_dist(points[i], points[j]) <= eps2) out.push_back(j);
        return out;  // includes i itself
    };

    constexpr int kUnvisited = -2;
    std::vector<int> labels(n, kUnvisited);
    int next_cluster = 0;

    for (std::size_t i = 0; i < n; ++i) {
        if (labels[i] != kUnvisited) continue;
        auto neighbors = region(i);
        if (neighbors.size() < static_cast<std::size_t>(params.min_pts)) {
            labels[i] = -1;
            continue;
        }
        const int cluster = next_cluster++;
        labels[i] = cluster;
        std::deque<std::size_t> queue(neighbors.begin(), neighbors.end());
        while (!queue.empty()) {
            const std::size_t q = queue.front();
            queue.pop_front();
            if (labels[q] == -1) labels[q] = cluster;  // noise becomes a border point
            if (labels[q] != kUnvisited) continue;
            labels[q] = cluster;
            const auto qn = region(q);
            if (qn.size() >= static_cast<std::size_t>(params.min_pts))
                queue.insert(queue.end(), qn.begin(), qn.end());
        }
    }
    return labels;
}

double kdist_eps(const Matrix& points, int k) {
    const std::size_t n = points.size();
    if (k < 1) throw std::invalid_argument("kdist_eps requires k >= 1");
    if (n <= static_cast<std::size_t>(k))
        throw std::invalid_argument("kdist_eps requires n > k");
    check_finite(points);

    std::vector<double> kdist(n);
    std::vector<double> d(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t m = 0;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) d[m++] = std::sqrt(sq_dist(points[i], points[j]));
        std::nth_element(d.begin(), d.begin() + (k - 1), d.end());
        kdist[i] = d[static_cast<std::size_t>(k - 1)];
    }
    std::sort(kdist.begin(), kdist.end(), std::greater<>());

    std::size_t best_i = 1;
    double best_dd = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < kdist.size(); ++i) {
        const double dd = kdist[i - 1] - 2.0 * kdist[i] + kdist[i + 1];
        if (dd > best_dd) {
            best_dd = dd;
            best_i = i;
        }
    }
    const double eps = kdist.size() >= 3 ? kdist[best_i] : kdist.front();
    if (eps <= 0.0) throw std::runtime_error("degenerate distances");
    return eps;
}

SegmentationResult iterative_segment(const StandardizedMatrix& matrix,
                                     const std::vector<FeatureVector>& features,
                                     const SegmentationConfig& cfg) {
    const Matrix& points = matrix.values;
    const std::size_t n = points.size();
    if (n < 8) throw std::invalid_argument("iterative_segment requires at least 8 products");
    if (features.size() != n)
        throw std::invalid_argument("iterative_segment: features/matrix size mismatch");

    SegmentationResult res;
    res.assignments.resize(n);
    for (std::size_t i = 0; i < n; ++i) res.assignments[i].hs_code = matrix.rows[i];

    KMeansParams base;
    base.n_restarts = cfg.n_restarts;
    base.max_iter = cfg.max_iter;
    base.tol = cfg.tol;
    base.seed = cfg.seed;

    const int k_max1 = std::min<int>(cfg.k_max, static_cast<int>(n));

    // Pass 1: cluster everything, then peel off the tiny clusters.
    int k1;
    if (cfg.k_override) {
        k1 = *cfg.k_override;
        if (k1 < 1 || static_cast<std::size_t>(k1) > n)
            throw std::invalid_argument("k override outside [1, n]");
    } else {
        res.pass1_elbow = elbow_select(points, k_max1, base);
        if (res.pass1_elbow.non_monotone)
            res.warnings.push_back("pass 1: wcss curve is not monotone decreasing");
        k1 = res.pass1_elbow.chosen_k;
    }
    base.k = k1;
    const KMeansResult pass1 = kmeans(points, base);

    res.outlier_cluster_size_threshold = std::max<std::size_t>(
        2, static_cast<std::size_t>(std::ceil(0.01 * static_cast<double>(n))));
    std::vector<std::size_t> cluster_sizes(static_cast<std::size_t>(k1), 0);
    for (const int a : pass1.assignments) ++cluster_sizes[static_cast<std::size_t>(a)];

    std::vector<bool> isolated(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t c = static_cast<std::size_t>(pass1.assignments[i]);
        if (cluster_sizes[c] <= res.outlier_cluster_size_threshold) isolated[i] = true;
    }

    // Stage 2: DBSCAN over all points for dual confirmation.
    DbscanParams dbp;
    dbp.min_pts = cfg.min_pts;
    if (cfg.eps) {
        dbp.eps = *cfg.eps;
    } else {
        dbp.eps = kdist_eps(points, cfg.min_pts);
    }
    res.eps_used = dbp.eps;
    const std::vector<int> noise_labels = dbscan(points, dbp);

    for (std::size_t i = 0; i < n; ++i) {
        auto& a = res.assignments[i];
        a.dbscan_label = noise_labels[i];
        if (isolated[i]) {
            a.pass = SegmentPass::isolated_pass1;
            a.tier = Tier::Outlier;
            a.kmeans_cluster = pass1.assignments[i];
            a.dual_confirmed_outlier = noise_labels[i] == -1;
        }
    }

    // Pass 2: re-cluster the core and rank the clusters into tiers.
    std::vector<std::size_t> remaining;
    for (std::size_t i = 0; i < n; ++i)
        if (!isolated[i]) remaining.push_back(i);

    auto label_all_core = [&](const std::string& why) {
        res.warnings.push_back(why);
        for (const std::size_t i : remaining) {
            auto& a = res.assignments[i];
            a.pass = SegmentPass::core_pass2;
            a.tier = Tier::Core;
            a.kmeans_cluster = 0;
        }
    };

    if (remaining.size() < 3) {
        if (!remaining.empty())
            label_all_core("pass 2: fewer than 3 products remain; all labeled Core");
        return res;
    }

    Matrix rest(remaining.size());
    for (std::size_t r = 0; r < remaining.size(); ++r) rest[r] = points[remaining[r]];

    int k2 = 3;
    const int k_max2 = std::min<int>(cfg.k_max, static_cast<int>(rest.size()));
    if (k_max2 >= 3 && rest.size() >= static_cast<std::size_t>(k_max2)) {
        res.pass2_elbow = elbow_select(rest, k_max2, base);
        k2 = std::max(3, res.pass2_elbow.chosen_k);
    }
    k2 = std::min<int>(k2, static_cast<int>(rest.size()));
    if (k2 < 3) {
        label_all_core("pass 2: could not form 3 clusters; all labeled Core");
        return res;
    }
    base.k = k2;
    const KMeansResult pass2 = kmeans(rest, base);

    std::vector<std::size_t> sizes2(static_cast<std::size_t>(k2), 0);
    for (const int a : pass2.assignments) ++sizes2[static_cast<std::size_t>(a)];
    const std::size_t filled =
        static_cast<std::size_t>(std::count_if(sizes2.begin(), sizes2.end(),
                                               [](std::size_t s) { return s > 0; }));
    if (filled < 3) {
        label_all_core("pass 2: fewer than 3 non-empty clusters; all labeled Core");
        return res;
    }

    // Standardized avg_price per remaining point: matrix column when the
    // modeling set contains it, otherwise z-scored from the raw features.
    std::vector<double> price_z(remaining.size());
    const std::size_t price_col = matrix.column_index("avg_price");
    if (price_col != static_cast<std::size_t>(-1)) {
        for (std::size_t r = 0; r < remaining.size(); ++r)
            price_z[r] = points[remaining[r]][price_col];
    } else {
        std::vector<double> raw(features.size());
        for (std::size_t i = 0; i < features.size(); ++i) raw[i] = features[i].avg_price;
        const double m = stats::mean(raw);
        const double sd = stats::population_stddev(raw);
        for (std::size_t r = 0; r < remaining.size(); ++r)
            price_z[r] = sd > 0.0 ? (raw[remaining[r]] - m) / sd : 0.0;
    }

    std::size_t largest = 0;
    for (std::size_t c = 1; c < sizes2.size(); ++c)
        if (sizes2[c] > sizes2[largest]) largest = c;  // ties keep the lowest id

    std::size_t niche = sizes2.size();  // sentinel: no niche cluster
    double best_price = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < sizes2.size(); ++c) {
        if (c == largest || sizes2[c] == 0) continue;
        double sum = 0.0;
        for (std::size_t r = 0; r < remaining.size(); ++r)
            if (static_cast<std::size_t>(pass2.assignments[r]) == c) sum += price_z[r];
        const double mean_price = sum / static_cast<double>(sizes2[c]);
        if (mean_price > best_price) {
            best_price = mean_price;
            niche = c;
        }
    }

    for (std::size_t r = 0; r < remaining.size(); ++r) {
        auto& a = res.assignments[remaining[r]];
        const std::size_t c = static_cast<std::size_t>(pass2.assignments[r]);
        a.pass = SegmentPass::core_pass2;
        a.kmeans_cluster = pass2.assignments[r];
        if (c == largest)
            a.tier = Tier::SuperCore;
        else if (c == niche)
            a.tier = Tier::HighValueNiche;
        else
            a.tier = Tier::Core;
    }
    return res;
}

}  // namespace wastesig
