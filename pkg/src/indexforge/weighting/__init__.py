"""Objective indicator weighting methods."""

from __future__ import annotations

from .core import Method, RankEntry, WeightVector, composite_index, rank_systems
from .dea import DEA_EPSILON, DeaResult, dea_efficiency, dea_weights
from .dea import PIVOT_RULE as DEA_PIVOT_RULE
from .pca import LOADING_CONVENTION, PcaDecomposition, first_pc_index, pca_decompose, pca_weights
from .statistical import (
    ENTROPY_EPSILON,
    CriticStats,
    EntropyStats,
    critic_weights,
    entropy_weights,
    inverse_variance_weights,
)


def compute_weights(m, method, *, pca_components=None, entropy_epsilon=ENTROPY_EPSILON,
                    dea_epsilon=DEA_EPSILON):
    """Run one method and return ``(WeightVector, diagnostics)``.

    ``diagnostics`` is a JSON-ready dict of the method's intermediate values.
    PCA keeps every component unless ``pca_components`` says otherwise.
    """
    method = Method.parse(method)
    if method is Method.VAR:
        w = inverse_variance_weights(m)
        return w, {"variances": [float(v) for v in m.values.var(axis=0, ddof=1)]}
    if method is Method.ENT:
        w, stats = entropy_weights(m, entropy_epsilon)
        return w, {"entropies": stats.entropies.tolist(), "epsilon": entropy_epsilon}
    if method is Method.PCA:
        d = pca_decompose(m)
        k = d.n_components if pca_components is None else int(pca_components)
        w = pca_weights(d, k)
        return w, {
            "eigenvalues": d.eigenvalues.tolist(),
            "loadings": d.loadings.tolist(),
            "components": k,
            "pca_loading_convention": LOADING_CONVENTION,
        }
    if method is Method.CRITIC:
        w, stats = critic_weights(m)
        return w, {
            "stddevs": stats.stddevs.tolist(),
            "conflict": stats.conflict.tolist(),
            "information": stats.information.tolist(),
        }
    result = dea_weights(m, dea_epsilon)
    return result.averaged_weights, {
        "efficiencies": result.efficiencies.tolist(),
        "per_dmu_weights": result.per_dmu_weights.tolist(),
        "epsilon": dea_epsilon,
        "pivot_rule": DEA_PIVOT_RULE,
        "note": "averaged DEA weights depend on which optimal vertex each LP returns",
    }


__all__ = [
    "CriticStats",
    "DEA_EPSILON",
    "DeaResult",
    "ENTROPY_EPSILON",
    "EntropyStats",
    "LOADING_CONVENTION",
    "Method",
    "PcaDecomposition",
    "RankEntry",
    "WeightVector",
    "composite_index",
    "compute_weights",
    "critic_weights",
    "dea_efficiency",
    "dea_weights",
    "entropy_weights",
    "first_pc_index",
    "inverse_variance_weights",
    "pca_decompose",
    "pca_weights",
    "rank_systems",
]
