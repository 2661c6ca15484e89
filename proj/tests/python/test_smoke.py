"""Smoke tests for the python bindings: the module loads and the main
operations behave on small inputs."""

import math

import pytest

core = pytest.importorskip("wastesig._core")


def test_kmeans_separates_two_pairs():
    params = core.KMeansParams()
    params.k = 2
    res = core.kmeans([[0, 0], [0, 1], [10, 10], [10, 11]], params)
    assert res.assignments[0] == res.assignments[1]
    assert res.assignments[2] == res.assignments[3]
    assert res.assignments[0] != res.assignments[2]
    assert res.wcss == pytest.approx(1.0)


def test_elbow_on_three_blobs():
    pts = []
    for cx, cy in [(0, 0), (50, 0), (0, 50)]:
        for i in range(10):
            pts.append([cx + 0.01 * i, cy - 0.01 * i])
    chosen_k, curve = core.elbow_select(pts, 8)
    assert chosen_k == 3
    assert len(curve) == 8


def test_dbscan_marks_isolated_noise():
    pts = [[0.1 * i, 0] for i in range(10)] + [[100, 100]]
    labels = core.dbscan(pts, eps=0.5, min_pts=3)
    assert labels[-1] == -1
    assert all(l == 0 for l in labels[:-1])


def test_logistic_fit_and_shap_efficiency():
    x = [[-2.0], [-1.5], [-1.0], [1.0], [1.5], [2.0]]
    y = [0, 0, 0, 1, 1, 1]
    model = core.fit_logistic(x, y, l2_lambda=1e-3)
    assert model["converged"]
    assert model["weights"][0] > 0

    w, b = model["weights"], model["intercept"]
    baseline = [0.0]
    z = [0.7]
    shap = core.linear_shap(w, b, baseline, z)
    logit_x = b + w[0] * z[0]
    logit_base = b + w[0] * baseline[0]
    assert sum(shap) == pytest.approx(logit_x - logit_base, abs=1e-12)

    score = core.waste_score(w, b, z)
    assert score == pytest.approx(1.0 / (1.0 + math.exp(-logit_x)))


def test_scrutiny_score():
    assert core.scrutiny_score(0.8, 0.0) == pytest.approx(0.4)
    assert core.scrutiny_score(0.0, -3.0) == 0.0


def test_full_pipeline_on_the_synthetic_corpus():
    corpus = core.synthetic_corpus(seed=42)
    assert len(corpus["products"]) == 200

    summary = core.run_pipeline(corpus["csv"], corpus["config_json"])
    products = summary["products"]
    assert len(products) == 200
    assert summary["dropped_sparse"] == 2

    tiers = {}
    for p in products:
        tiers[p["tier"]] = tiers.get(p["tier"], 0) + 1
    assert tiers == {"Outlier": 3, "HighValueNiche": 15, "Core": 40, "SuperCore": 142}

    dual = [p for p in products if p["dual_confirmed_outlier"]]
    assert len(dual) == 3

    scores = {p["hs_code"]: p["waste_score"] for p in products}
    scrap = [s for hs, s in scores.items() if hs.startswith("7204")]
    finished = [s for hs, s in scores.items() if hs.startswith("8542")]
    disguised = scores["850213"]
    assert disguised > sum(finished) / len(finished)
    assert abs(disguised - sum(scrap) / len(scrap)) <= 0.15

    assert summary["oob_accuracy"] >= 0.99
