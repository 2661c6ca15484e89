// test_util.hpp — independent reference implementations used as oracles:
// exhaustive-partition K-Means optimum, a naive DBSCAN written from the
// textbook definition, and the Adjusted Rand Index. These deliberately do
// not share code with the library paths they check.
#pragma once

#include <algorithm>
#include <cstdint>
#include <cmath>
#include <limits>
#include <map>
#include <vector>

#include "wastesig/rng.hpp"

namespace testutil {

using Matrix = std::vector<std::vector<double>>;

inline double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return s;
}

// Optimal 2-partition wcss by enumerating every nonempty proper subset.
inline double brute_force_wcss_k2(const Matrix& points) {
    const std::size_t n = points.size();
    const std::size_t d = points[0].size();
    double best = std::numeric_limits<double>::infinity();
    for (std::uint32_t mask = 1; mask + 1 < (1u << n); ++mask) {
        std::vector<double> mean_a(d, 0.0), mean_b(d, 0.0);
        std::size_t na = 0, nb = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const bool in_a = (mask >> i) & 1u;
            auto& m = in_a ? mean_a : mean_b;
            (in_a ? na : nb) += 1;
            for (std::size_t j = 0; j < d; ++j) m[j] += points[i][j];
        }
        for (std::size_t j = 0; j < d; ++j) {
            mean_a[j] /= static_cast<double>(na);
            mean_b[j] /= static_cast<double>(nb);
        }
        double wcss = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            wcss += sq_dist(points[i], ((mask >> i) & 1u) ? mean_a : mean_b);
        best = std::min(best, wcss);
    }
    return best;
}

// Textbook DBSCAN over a precomputed adjacency structure: core mask first,
// then cluster growth from core points in index order.
inline std::vector<int> naive_dbscan(const Matrix& points, double eps, int min_pts) {
    const std::size_t n = points.size();
    const double eps2 = eps * eps;
    std::vector<std::vector<std::size_t>> adj(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (sq_dist(points[i], points[j]) <= eps2) adj[i].push_back(j);

    std::vector<bool> core(n);
    for (std::size_t i = 0; i < n; ++i)
        core[i] = adj[i].size() >= static_cast<std::size_t>(min_pts);

    std::vector<int> labels(n, -1);
    std::vector<bool> visited(n, false);
    int cluster = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (visited[i] || !core[i]) continue;
        // grow this cluster from i
        std::vector<std::size_t> stack{i};
        visited[i] = true;
        labels[i] = cluster;
        while (!stack.empty()) {
            const std::size_t p = stack.back();
            stack.pop_back();
            for (const std::size_t q : adj[p]) {
                if (labels[q] == -1) labels[q] = cluster;
                if (core[q] && !visited[q]) {
                    visited[q] = true;
                    labels[q] = cluster;
                    stack.push_back(q);
                }
            }
        }
        ++cluster;
    }
    return labels;
}

// Same partition up to a relabeling, with noise (-1) matched exactly.
inline bool labels_match_up_to_permutation(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size()) return false;
    std::map<int, int> fwd, rev;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if ((a[i] == -1) != (b[i] == -1)) return false;
        if (a[i] == -1) continue;
        if (const auto it = fwd.find(a[i]); it != fwd.end()) {
            if (it->second != b[i]) return false;
        } else {
            fwd[a[i]] = b[i];
        }
        if (const auto it = rev.find(b[i]); it != rev.end()) {
            if (it->second != a[i]) return false;
        } else {
            rev[b[i]] = a[i];
        }
    }
    return true;
}

// Adjusted Rand Index between two labelings.
template <typename A, typename B>
double adjusted_rand_index(const std::vector<A>& x, const std::vector<B>& y) {
    const std::size_t n = x.size();
    std::map<A, int> xi;
    std::map<B, int> yi;
    for (const auto& v : x) xi.emplace(v, static_cast<int>(xi.size()));
    for (const auto& v : y) yi.emplace(v, static_cast<int>(yi.size()));
    std::vector<std::vector<long long>> table(xi.size(), std::vector<long long>(yi.size(), 0));
    for (std::size_t i = 0; i < n; ++i) ++table[xi[x[i]]][yi[y[i]]];

    auto choose2 = [](long long m) { return m * (m - 1) / 2; };
    long long sum_cells = 0, sum_rows = 0, sum_cols = 0;
    for (std::size_t r = 0; r < table.size(); ++r) {
        long long row = 0;
        for (std::size_t c = 0; c < table[r].size(); ++c) {
            sum_cells += choose2(table[r][c]);
            row += table[r][c];
        }
        sum_rows += choose2(row);
    }
    for (std::size_t c = 0; c < yi.size(); ++c) {
        long long col = 0;
        for (std::size_t r = 0; r < table.size(); ++r) col += table[r][c];
        sum_cols += choose2(col);
    }
    const double expected =
        static_cast<double>(sum_rows) * static_cast<double>(sum_cols) / choose2(static_cast<long long>(n));
    const double max_index = 0.5 * (sum_rows + sum_cols);
    if (max_index == expected) return 1.0;
    return (static_cast<double>(sum_cells) - expected) / (max_index - expected);
}

inline Matrix random_points(std::size_t n, std::size_t d, wastesig::Rng& rng, double scale = 10.0) {
    Matrix m(n, std::vector<double>(d));
    for (auto& row : m)
        for (auto& v : row) v = scale * rng.uniform01();
    return m;
}

// A random two-blob instance in 2-D: the regime K-Means is built for, with
// separations down to barely-distinguishable.
inline Matrix random_two_blob_instance(std::size_t n, wastesig::Rng& rng) {
    Matrix m;
    const double cx[2] = {10.0 * rng.uniform01(), 10.0 * rng.uniform01()};
    const double cy[2] = {10.0 * rng.uniform01(), 10.0 * rng.uniform01()};
    const double sd[2] = {0.3 + 1.2 * rng.uniform01(), 0.3 + 1.2 * rng.uniform01()};
    const std::size_t n_a = 1 + rng.below(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        const int b = i < n_a ? 0 : 1;
        m.push_back({rng.normal(cx[b], sd[b]), rng.normal(cy[b], sd[b])});
    }
    return m;
}

}  // namespace testutil
