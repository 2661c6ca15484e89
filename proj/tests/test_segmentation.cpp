#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <set>

#include "test_util.hpp"
#include "wastesig/rng.hpp"
#include "wastesig/segmentation.hpp"

using namespace wastesig;

TEST_CASE("kmeans closed forms and invariants") {
    SUBCASE("k=1: centroid is the global mean, wcss the total deviation") {
        Matrix pts{{0, 0}, {2, 0}, {4, 6}};
        KMeansParams params;
        params.k = 1;
        const auto res = kmeans(pts, params);
        CHECK(res.centroids[0][0] == doctest::Approx(2.0));
        CHECK(res.centroids[0][1] == doctest::Approx(2.0));
        double expected = 0;
        for (const auto& p : pts) expected += testutil::sq_dist(p, {2.0, 2.0});
        CHECK(res.wcss == doctest::Approx(expected));
    }

    SUBCASE("two well-separated pairs split cleanly at k=2") {
        Matrix pts{{0, 0}, {0, 1}, {10, 10}, {10, 11}};
        KMeansParams params;
        params.k = 2;
        const auto res = kmeans(pts, params);
        CHECK(res.assignments[0] == res.assignments[1]);
        CHECK(res.assignments[2] == res.assignments[3]);
        CHECK(res.assignments[0] != res.assignments[2]);
        std::set<std::pair<double, double>> centroids;
        for (const auto& c : res.centroids) centroids.insert({c[0], c[1]});
        CHECK(centroids.count({0.0, 0.5}) == 1);
        CHECK(centroids.count({10.0, 10.5}) == 1);
    }

    SUBCASE("result invariants: nearest centroid, exact means, consistent wcss") {
        Rng rng(99);
        const auto pts = testutil::random_points(40, 3, rng);
        KMeansParams params;
        params.k = 5;
        const auto res = kmeans(pts, params);
        // no empty clusters, centroids are means
        std::vector<std::vector<double>> sums(5, std::vector<double>(3, 0.0));
        std::vector<int> counts(5, 0);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const int c = res.assignments[i];
            ++counts[c];
            for (int j = 0; j < 3; ++j) sums[c][j] += pts[i][j];
        }
        for (int c = 0; c < 5; ++c) {
            REQUIRE(counts[c] > 0);
            for (int j = 0; j < 3; ++j)
                CHECK(res.centroids[c][j] == doctest::Approx(sums[c][j] / counts[c]).epsilon(1e-9));
        }
        // nearest-centroid assignment with ties to the lowest id
        for (std::size_t i = 0; i < pts.size(); ++i) {
            int best = 0;
            double best_d = testutil::sq_dist(pts[i], res.centroids[0]);
            for (int c = 1; c < 5; ++c) {
                const double d = testutil::sq_dist(pts[i], res.centroids[c]);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            CHECK(res.assignments[i] == best);
        }
        CHECK(res.wcss ==
              doctest::Approx(compute_wcss(pts, res.centroids, res.assignments)).epsilon(1e-9));
    }

    SUBCASE("deterministic given identical inputs") {
        Rng rng(123);
        const auto pts = testutil::random_points(30, 2, rng);
        KMeansParams params;
        params.k = 3;
        const auto a = kmeans(pts, params);
        const auto b = kmeans(pts, params);
        CHECK(a.assignments == b.assignments);
        CHECK(a.wcss == b.wcss);
        CHECK(a.centroids == b.centroids);
    }

    SUBCASE("k > n is fatal, non-finite input is fatal") {
        Matrix pts{{0, 0}, {1, 1}};
        KMeansParams params;
        params.k = 3;
        CHECK_THROWS_AS((void)kmeans(pts, params), std::invalid_argument);
        params.k = 1;
        Matrix bad{{0, 0}, {std::nan(""), 1}};
        CHECK_THROWS_AS((void)kmeans(bad, params), std::invalid_argument);
    }
}

TEST_CASE("kmeans matches the exhaustive-partition optimum on small instances") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(1000 + seed);
        const std::size_t n = 5 + rng.below(6);  // 5..10
        const auto pts = testutil::random_two_blob_instance(n, rng);
        KMeansParams params;
        params.k = 2;
        const auto res = kmeans(pts, params);
        const double best = testutil::brute_force_wcss_k2(pts);
        CHECK(res.wcss == doctest::Approx(best).epsilon(1e-9));
    }
}

TEST_CASE("lloyd wcss is non-increasing along the restart curve within slack") {
    Rng rng(77);
    const auto pts = testutil::random_points(60, 2, rng);
    KMeansParams params;
    const auto curve = elbow_select(pts, 8, params).wcss_curve;
    for (std::size_t i = 1; i < curve.size(); ++i)
        CHECK(curve[i].second <= curve[i - 1].second * 1.01);
}

TEST_CASE("lloyd wcss is non-increasing across iterations within a restart") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        Rng rng(400 + seed);
        const auto pts = testutil::random_points(80, 3, rng);
        KMeansParams params;
        params.k = 4;
        params.n_restarts = 1;
        params.seed = seed;
        const auto res = kmeans(pts, params);
        REQUIRE(res.wcss_trace.size() >= 1);
        for (std::size_t i = 1; i < res.wcss_trace.size(); ++i)
            CHECK(res.wcss_trace[i] <= res.wcss_trace[i - 1] * (1.0 + 1e-12));
        CHECK(res.wcss == doctest::Approx(res.wcss_trace.back()).epsilon(1e-9));
    }
}

TEST_CASE("iterative_segment when every pass-1 cluster is small") {
    // four far-apart pairs with k forced to 4: every cluster is at the
    // isolation threshold, so everything becomes an Outlier and pass 2 has
    // nothing to do
    std::vector<FeatureVector> fvs;
    const double centers[4][2] = {{0, 0}, {100, 0}, {0, 100}, {100, 100}};
    for (int b = 0; b < 4; ++b)
        for (int i = 0; i < 2; ++i) {
            FeatureVector fv;
            fv.hs_code = "p" + std::to_string(fvs.size());
            fv.avg_kg = centers[b][0] + i;
            fv.avg_price = centers[b][1] + i;
            fvs.push_back(fv);
        }
    const auto matrix = standardize(fvs, {"avg_kg", "avg_price"});
    SegmentationConfig cfg;
    cfg.k_override = 4;
    cfg.min_pts = 2;
    const auto res = iterative_segment(matrix, fvs, cfg);
    for (const auto& a : res.assignments) {
        CHECK(a.tier == Tier::Outlier);
        CHECK(a.pass == SegmentPass::isolated_pass1);
    }
}

TEST_CASE("elbow_select") {
    SUBCASE("three tight far-apart blobs pick k=3") {
        Rng rng(5);
        Matrix pts;
        const double centers[3][2] = {{0, 0}, {100, 0}, {0, 100}};
        for (int b = 0; b < 3; ++b)
            for (int i = 0; i < 12; ++i)
                pts.push_back({centers[b][0] + rng.normal(0, 0.5),
                               centers[b][1] + rng.normal(0, 0.5)});
        KMeansParams params;
        const auto res = elbow_select(pts, 8, params);
        CHECK(res.chosen_k == 3);
    }

    SUBCASE("hand curve arithmetic: argmax of the second difference") {
        // wcss {k1:100, k2:20, k3:15, k4:12}: second differences at k2 = 75,
        // k3 = 2 -> chosen_k = 2. Reproduced with synthetic data is fragile,
        // so check the arithmetic on the published rule directly.
        const std::vector<double> wcss{100, 20, 15, 12};
        int best_k = 2;
        double best = -1e300;
        for (int k = 2; k <= 3; ++k) {
            const double dd = wcss[k - 2] - 2 * wcss[k - 1] + wcss[k];
            if (dd > best) {
                best = dd;
                best_k = k;
            }
        }
        CHECK(best_k == 2);
        CHECK(best == doctest::Approx(75));
    }

    SUBCASE("identical points tie-break to the smallest k") {
        Matrix pts(12, {3.0, 3.0});
        KMeansParams params;
        const auto res = elbow_select(pts, 6, params);
        CHECK(res.chosen_k == 2);
        for (const auto& [k, w] : res.wcss_curve) CHECK(w == doctest::Approx(0.0));
    }
}

TEST_CASE("dbscan") {
    SUBCASE("min_pts=1 makes every point core; clusters are eps-components") {
        Matrix pts{{0, 0}, {0.5, 0}, {10, 0}, {10.5, 0}};
        const auto labels = dbscan(pts, {1.0, 1});
        CHECK(labels[0] == labels[1]);
        CHECK(labels[2] == labels[3]);
        CHECK(labels[0] != labels[2]);
        for (const int l : labels) CHECK(l >= 0);
    }

    SUBCASE("an isolated point is noise") {
        Matrix pts;
        Rng rng(3);
        for (int i = 0; i < 10; ++i) pts.push_back({rng.normal(0, 0.1), rng.normal(0, 0.1)});
        pts.push_back({100.0, 100.0});
        const auto labels = dbscan(pts, {1.0, 3});
        CHECK(labels.back() == -1);
        for (std::size_t i = 0; i + 1 < labels.size(); ++i) CHECK(labels[i] == 0);
    }

    SUBCASE("matches the naive oracle on random instances") {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            Rng rng(2000 + seed);
            const std::size_t n = 10 + rng.below(21);  // 10..30
            const auto pts = testutil::random_points(n, 2, rng, 4.0);
            const double eps = 0.5 + rng.uniform01();
            const int min_pts = 2 + static_cast<int>(rng.below(4));
            const auto got = dbscan(pts, {eps, min_pts});
            const auto expected = testutil::naive_dbscan(pts, eps, min_pts);
            CHECK(testutil::labels_match_up_to_permutation(got, expected));
        }
    }

    SUBCASE("cluster ids appear in first-discovery order") {
        Matrix pts{{0, 0}, {0.1, 0}, {5, 0}, {5.1, 0}};
        const auto labels = dbscan(pts, {0.5, 2});
        CHECK(labels[0] == 0);
        CHECK(labels[2] == 1);
    }
}

TEST_CASE("kdist_eps") {
    SUBCASE("uniform grid with k=1 suggests roughly the spacing") {
        Matrix pts;
        for (int x = 0; x < 5; ++x)
            for (int y = 0; y < 5; ++y) pts.push_back({2.0 * x, 2.0 * y});
        const double eps = kdist_eps(pts, 1);
        CHECK(eps >= 2.0);
        CHECK(eps <= 2.0 * std::sqrt(2.0) + 1e-12);
    }

    SUBCASE("identical points surface a degenerate-distances error") {
        Matrix pts(6, {1.0, 1.0});
        CHECK_THROWS_WITH_AS((void)kdist_eps(pts, 2), "degenerate distances", std::runtime_error);
    }

    SUBCASE("n <= k is fatal") {
        Matrix pts{{0, 0}, {1, 1}};
        CHECK_THROWS_AS((void)kdist_eps(pts, 2), std::invalid_argument);
    }

    SUBCASE("two-scale data: eps lands between the plateaus") {
        Rng rng(17);
        Matrix pts;
        for (int i = 0; i < 30; ++i) pts.push_back({rng.normal(0, 0.05), rng.normal(0, 0.05)});
        // sparse halo, far apart from each other and the blob
        const double halo[6][2] = {{40, 0}, {-40, 5}, {0, 40}, {5, -40}, {40, 40}, {-40, -40}};
        for (const auto& h : halo) pts.push_back({h[0], h[1]});
        const int k = 3;
        const double eps = kdist_eps(pts, k);
        // oracle bounds: max blob k-dist <= eps < min halo k-dist
        std::vector<double> kdist;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            std::vector<double> d;
            for (std::size_t j = 0; j < pts.size(); ++j)
                if (i != j) d.push_back(std::sqrt(testutil::sq_dist(pts[i], pts[j])));
            std::sort(d.begin(), d.end());
            kdist.push_back(d[k - 1]);
        }
        std::sort(kdist.begin(), kdist.end());
        CHECK(eps >= kdist[29]);          // top of the blob plateau
        CHECK(eps < kdist[30]);           // bottom of the halo plateau
    }
}

TEST_CASE("iterative_segment tiers a constructed 4-blob corpus") {
    // 50 points: 2 extreme outliers, a 6-point high-price blob, a 12-point
    // mid blob, a 30-point dense blob, in (avg_kg, avg_price) space.
    Rng rng(21);
    std::vector<FeatureVector> fvs;
    auto add = [&](double kg, double price) {
        FeatureVector fv;
        fv.hs_code = "p" + std::to_string(fvs.size());
        fv.avg_kg = kg;
        fv.avg_price = price;
        fvs.push_back(fv);
    };
    for (int i = 0; i < 30; ++i) add(rng.normal(1000, 20), rng.normal(10, 0.4));
    for (int i = 0; i < 12; ++i) add(rng.normal(1600, 25), rng.normal(25, 0.5));
    for (int i = 0; i < 6; ++i) add(rng.normal(400, 15), rng.normal(60, 1.0));
    add(9000, 15);    // hyper-volume
    add(8000, 280);   // hyper-both

    const auto matrix = standardize(fvs, {"avg_kg", "avg_price"});
    SegmentationConfig cfg;
    cfg.min_pts = 4;
    const auto res = iterative_segment(matrix, fvs, cfg);

    std::map<Tier, int> counts;
    for (const auto& a : res.assignments) ++counts[a.tier];
    CHECK(counts[Tier::Outlier] == 2);
    CHECK(counts[Tier::HighValueNiche] == 6);
    CHECK(counts[Tier::Core] == 12);
    CHECK(counts[Tier::SuperCore] == 30);

    // the two extremes are dbscan noise too: dual confirmation
    for (std::size_t i = 48; i < 50; ++i) {
        CHECK(res.assignments[i].tier == Tier::Outlier);
        CHECK(res.assignments[i].pass == SegmentPass::isolated_pass1);
        CHECK(res.assignments[i].dual_confirmed_outlier);
    }

    // tier partition: everything got exactly one tier, outliers only in pass 1
    for (const auto& a : res.assignments) {
        const bool outlier = a.tier == Tier::Outlier;
        CHECK(outlier == (a.pass == SegmentPass::isolated_pass1));
    }

    // ground truth recovery
    std::vector<int> truth(50);
    for (int i = 0; i < 50; ++i) truth[i] = i < 30 ? 0 : i < 42 ? 1 : i < 48 ? 2 : 3;
    std::vector<std::string> got;
    for (const auto& a : res.assignments) got.push_back(to_string(a.tier));
    CHECK(testutil::adjusted_rand_index(truth, got) >= 0.9);
}

TEST_CASE("iterative_segment with no small pass-1 clusters yields zero outliers") {
    Rng rng(31);
    std::vector<FeatureVector> fvs;
    for (int i = 0; i < 40; ++i) {
        FeatureVector fv;
        fv.hs_code = "p" + std::to_string(i);
        fv.avg_kg = rng.normal(i < 20 ? 100 : 500, 5);
        fv.avg_price = rng.normal(i < 20 ? 10 : 30, 0.5);
        fvs.push_back(fv);
    }
    const auto matrix = standardize(fvs, {"avg_kg", "avg_price"});
    SegmentationConfig cfg;
    const auto res = iterative_segment(matrix, fvs, cfg);
    for (const auto& a : res.assignments) CHECK(a.tier != Tier::Outlier);
}
