"""Reference-based test-time scoring.

A test record T is never scored alone: each repetition pairs it with two
random labelled anomalies (tuple A, A, ..., T) and with two random unlabelled
rows (tuple T, U, ..., U), sums the two tuple scores, and the mean over the
repetitions is T's anomaly score. For an ideally fitted triplet model an
anomalous T lands near 12+4=16 and a normal T near 8+0=8, so the default
threshold sits at the midpoint of those two ideals.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .augmentation import OrdinalLabelScheme
from .model import ScoringModel

COMBINE_SUM = "sum"


@dataclass(frozen=True)
class InferenceConfig:
    repetitions: int = 30
    threshold: float | None = None  # None resolves to the scheme midpoint
    combine: str = COMBINE_SUM
    seed: int = 0

    def __post_init__(self):
        if self.repetitions < 1:
            raise ValueError("repetitions must be at least 1")
        if self.combine != COMBINE_SUM:
            raise ValueError(f"unknown combine rule {self.combine!r}")

    def resolve_threshold(self, scheme: OrdinalLabelScheme) -> float:
        if self.threshold is not None:
            return self.threshold
        return midpoint_threshold(scheme)


def midpoint_threshold(scheme: OrdinalLabelScheme) -> float:
    """Midpoint between the ideal anomalous and ideal normal combined scores.

    For the default triplet scheme that is ((12+4) + (8+0)) / 2 = 12, which
    coincides with half the sum of all four ordinal targets.
    """
    labels = scheme.labels
    ideal_anomaly = labels[0] + labels[scheme.k - 1]
    ideal_normal = labels[1] + labels[scheme.k]
    return 0.5 * (ideal_anomaly + ideal_normal)


def _distinct_pairs(rng: np.random.Generator, pool_size: int, count: int) -> np.ndarray:
    """(count, 2) indices, uniform over ordered pairs of distinct elements."""
    first = rng.integers(0, pool_size, size=count)
    offset = rng.integers(1, pool_size, size=count)
    return np.stack([first, (first + offset) % pool_size], axis=1)


def _score_with_references(
    model: ScoringModel,
    record: np.ndarray,
    a_rows: np.ndarray,
    u_rows: np.ndarray,
    repetitions: int,
    rng: np.random.Generator,
) -> float:
    k = model.k
    a_pairs = _distinct_pairs(rng, len(a_rows), repetitions)
    u_pairs = _distinct_pairs(rng, len(u_rows), repetitions)

    # Labelled references fill the leading slots, T takes the last one.
    anchored = np.empty((repetitions, k, model.n_features))
    anchored[:, : k - 1, :] = a_rows[a_pairs[:, : k - 1]]
    anchored[:, k - 1, :] = record
    # T leads, unlabelled references fill the rest.
    trailed = np.empty((repetitions, k, model.n_features))
    trailed[:, 0, :] = record
    trailed[:, 1:, :] = u_rows[u_pairs[:, : k - 1]]

    s1 = model.score_tuples(anchored)
    s2 = model.score_tuples(trailed)
    return float(np.mean(s1 + s2))


def score_sample(
    model: ScoringModel,
    record: np.ndarray,
    a_rows: np.ndarray,
    u_rows: np.ndarray,
    config: InferenceConfig,
) -> float:
    """Mean combined reference score for one record."""
    record = np.asarray(record, dtype=np.float64)
    a_rows = np.asarray(a_rows, dtype=np.float64)
    u_rows = np.asarray(u_rows, dtype=np.float64)
    if len(a_rows) < 2 or len(u_rows) < 2:
        raise ValueError("reference pools need at least two rows each")
    rng = np.random.default_rng(config.seed)
    return _score_with_references(model, record, a_rows, u_rows, config.repetitions, rng)


def classify(score: float, threshold: float) -> int:
    """1 iff the score reaches the threshold (boundary counts as anomaly)."""
    return int(score >= threshold)


def score_dataset(
    model: ScoringModel,
    data: np.ndarray,
    row_ids: np.ndarray,
    a_rows: np.ndarray,
    u_rows: np.ndarray,
    config: InferenceConfig,
) -> np.ndarray:
    """Scores for ``data[row_ids]``, one independent stream per row.

    Each row's stream derives from (seed, row id), so scores depend on the
    row's identity only and permuting the row order permutes the output.
    """
    row_ids = np.asarray(row_ids, dtype=np.int64)
    a_rows = np.asarray(a_rows, dtype=np.float64)
    u_rows = np.asarray(u_rows, dtype=np.float64)
    if len(a_rows) < 2 or len(u_rows) < 2:
        raise ValueError("reference pools need at least two rows each")
    scores = np.empty(len(row_ids))
    for i, row_id in enumerate(row_ids):
        rng = np.random.default_rng([config.seed, int(row_id)])
        scores[i] = _score_with_references(
            model, data[row_id], a_rows, u_rows, config.repetitions, rng
        )
    return scores
