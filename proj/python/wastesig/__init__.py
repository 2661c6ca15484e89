"""Python interface to the wastesig trade-analytics engine."""

from wastesig._core import (
    KMeansParams,
    KMeansResult,
    dbscan,
    elbow_select,
    fit_logistic,
    kdist_eps,
    kmeans,
    linear_shap,
    run_pipeline,
    scrutiny_score,
    synthetic_corpus,
    waste_score,
)

__all__ = [
    "KMeansParams",
    "KMeansResult",
    "dbscan",
    "elbow_select",
    "fit_logistic",
    "kdist_eps",
    "kmeans",
    "linear_shap",
    "run_pipeline",
    "scrutiny_score",
    "synthetic_corpus",
    "waste_score",
]
