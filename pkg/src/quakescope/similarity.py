"""Whole-record similarity and the ordering of the similarity matrix.

Each record's topic mixtures are summarized by a Gaussian over the
K-dimensional weight rows (population covariance plus a ridge, so the
simplex rank deficiency and the T = 1 case stay well conditioned).  Pairs
are compared with the Bhattacharyya coefficient exp(-D_B); the matrix is
reordered by complete-linkage clustering on distance 1 - similarity.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ValidationError
from .topics import TopicTimeSeries

DEFAULT_RIDGE = 1e-6


@dataclass
class GaussianSummary:
    mean: np.ndarray          # (K,)
    covariance: np.ndarray    # (K, K), symmetric, eigenvalues >= ridge
    sample_count: int


@dataclass
class SimilarityMatrix:
    ids: list[str]
    values: np.ndarray                      # (N, N) in (0, 1], symmetric
    display_order: list[int]                # dendrogram leaf order
    dendrogram: list[tuple[int, int, float]]  # merges (i, j, height), i < j

    @property
    def n(self) -> int:
        return len(self.ids)


def fit_gaussian(series: TopicTimeSeries, ridge: float = DEFAULT_RIDGE) -> GaussianSummary:
    """Sample mean and (population) covariance of the weight rows, plus ridge*I."""
    if ridge <= 0:
        raise ValidationError("ridge must be > 0")
    w = series.weights
    mean = w.mean(axis=0)
    centered = w - mean
    cov = centered.T @ centered / w.shape[0] + ridge * np.eye(w.shape[1])
    return GaussianSummary(mean=mean, covariance=cov, sample_count=w.shape[0])


def bhattacharyya(g1: GaussianSummary, g2: GaussianSummary) -> float:
    """Overlap coefficient exp(-D_B) in (0, 1]; 1 for identical summaries.

    D_B = (mu1-mu2)' Sbar^-1 (mu1-mu2) / 8 + log-det term with
    Sbar = (S1+S2)/2.  Written so that swapping the arguments produces the
    bit-identical result.
    """
    if g1.mean.shape != g2.mean.shape:
        raise ValidationError(
            f"dimension mismatch: {g1.mean.shape[0]} vs {g2.mean.shape[0]}"
        )
    pooled = (g1.covariance + g2.covariance) / 2.0
    delta = g1.mean - g2.mean
    quad = float(delta @ np.linalg.solve(pooled, delta)) / 8.0
    _, ld_pooled = np.linalg.slogdet(pooled)
    _, ld1 = np.linalg.slogdet(g1.covariance)
    _, ld2 = np.linalg.slogdet(g2.covariance)
    log_det_term = 0.5 * (ld_pooled - 0.5 * (ld1 + ld2))
    return float(np.exp(-(quad + log_det_term)))


def similarity_matrix(collection: Sequence[TopicTimeSeries],
                      ridge: float = DEFAULT_RIDGE) -> SimilarityMatrix:
    """Pairwise Bhattacharyya coefficients plus a clustering display order."""
    if len(collection) < 2:
        raise ValidationError("need at least two records for a similarity matrix")
    ids = [s.record_id for s in collection]
    if len(set(ids)) != len(ids):
        raise ValidationError("duplicate record ids in collection")
    summaries = [fit_gaussian(s, ridge) for s in collection]
    n = len(summaries)
    values = np.ones((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            values[i, j] = values[j, i] = bhattacharyya(summaries[i], summaries[j])
    order, merges = complete_linkage_order(values)
    return SimilarityMatrix(ids=ids, values=values, display_order=order,
                            dendrogram=merges)


def complete_linkage_order(values: np.ndarray) -> tuple[list[int], list[tuple[int, int, float]]]:
    """Agglomerate on distance 1 - similarity with complete linkage.

    Cluster ids follow the usual convention: leaves are 0..N-1 and the
    cluster born at merge step s gets id N + s.  Ties pick the
    lexicographically smallest (i, j) pair, which makes the whole ordering
    deterministic.  The returned permutation is the recursive
    left-before-right leaf order of the final tree.
    """
    values = np.asarray(values, dtype=float)
    n = values.shape[0]
    if values.shape != (n, n) or n < 1:
        raise ValidationError("values must be a square similarity matrix")
    if n == 1:
        return [0], []

    dist = {}
    for i in range(n):
        for j in range(i + 1, n):
            dist[(i, j)] = 1.0 - values[i, j]
    active = list(range(n))
    members: dict[int, tuple[int, ...]] = {i: (i,) for i in range(n)}
    children: dict[int, tuple[int, int]] = {}
    merges: list[tuple[int, int, float]] = []

    next_id = n
    while len(active) > 1:
        best = None
        for a_pos, i in enumerate(active):
            for j in active[a_pos + 1:]:
                key = (i, j) if i < j else (j, i)
                d = dist[key]
                if best is None or d < best[0]:
                    best = (d, key[0], key[1])
        d, i, j = best
        merges.append((i, j, float(d)))
        children[next_id] = (i, j)
        members[next_id] = members[i] + members[j]
        active = [a for a in active if a not in (i, j)]
        # Complete linkage: distance to the merged cluster is the max of the
        # distances to its parts, so the update never re-touches leaf pairs.
        for a in active:
            d_i = dist[(min(a, i), max(a, i))]
            d_j = dist[(min(a, j), max(a, j))]
            dist[(min(a, next_id), max(a, next_id))] = max(d_i, d_j)
        active.append(next_id)
        next_id += 1

    def leaves(node: int) -> list[int]:
        if node < n:
            return [node]
        left, right = children[node]
        return leaves(left) + leaves(right)

    return leaves(next_id - 1), merges
