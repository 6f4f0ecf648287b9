"""Detection metrics: AUROC, confusion counts, rates and cross-run aggregates.

AUROC is computed from fractional ranks (Mann-Whitney form): the probability
that a random anomaly outscores a random normal, with tied pairs counted at
half credit. This equals the trapezoidal area under the ROC curve and is
exact, not an approximation over thresholds.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np


@dataclass(frozen=True)
class EvaluationReport:
    auroc: float | None
    tp: int
    tn: int
    fp: int
    fn: int
    tpr: float
    fpr: float
    threshold: float
    tpr_defined: bool = True
    fpr_defined: bool = True

    def to_json(self, path: str | Path | None = None) -> str:
        text = json.dumps(asdict(self), indent=1)
        if path is not None:
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(text + "\n")
        return text

    @classmethod
    def from_json(cls, path: str | Path) -> "EvaluationReport":
        with open(path, "r", encoding="utf-8") as fh:
            return cls(**json.load(fh))


def _fractional_ranks(values: np.ndarray) -> np.ndarray:
    """1-based ranks, ties averaged. Exact for the half-credit pair count."""
    order = np.argsort(values, kind="mergesort")
    ranks = np.empty(len(values))
    sorted_values = values[order]
    i = 0
    while i < len(values):
        j = i
        while j + 1 < len(values) and sorted_values[j + 1] == sorted_values[i]:
            j += 1
        # Mean of ranks i+1 .. j+1; a multiple of 0.5, exact in binary floats.
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def auroc(scores: np.ndarray, truth: np.ndarray) -> float:
    """Probability a random anomaly outscores a random normal (ties half)."""
    scores = np.asarray(scores, dtype=np.float64)
    truth = np.asarray(truth)
    n_anomaly = int(np.sum(truth == 1))
    n_normal = int(np.sum(truth == 0))
    if n_anomaly == 0 or n_normal == 0:
        raise ValueError("AUROC needs at least one anomaly and one normal")
    ranks = _fractional_ranks(scores)
    rank_sum = float(np.sum(ranks[truth == 1]))
    u_statistic = rank_sum - 0.5 * n_anomaly * (n_anomaly + 1)
    return u_statistic / (n_anomaly * n_normal)


def confusion(scores: np.ndarray, truth: np.ndarray, threshold: float) -> EvaluationReport:
    """Counts and rates under the inclusive decision rule (score >= threshold
    predicts anomaly). Undefined rates are reported as 0 with their flag
    cleared; AUROC is omitted when only one class is present."""
    scores = np.asarray(scores, dtype=np.float64)
    truth = np.asarray(truth)
    predicted = scores >= threshold
    actual = truth == 1
    tp = int(np.sum(predicted & actual))
    fn = int(np.sum(~predicted & actual))
    fp = int(np.sum(predicted & ~actual))
    tn = int(np.sum(~predicted & ~actual))
    tpr_defined = (tp + fn) > 0
    fpr_defined = (fp + tn) > 0
    return EvaluationReport(
        auroc=auroc(scores, truth) if (tpr_defined and fpr_defined) else None,
        tp=tp,
        tn=tn,
        fp=fp,
        fn=fn,
        tpr=tp / (tp + fn) if tpr_defined else 0.0,
        fpr=fp / (fp + tn) if fpr_defined else 0.0,
        threshold=float(threshold),
        tpr_defined=tpr_defined,
        fpr_defined=fpr_defined,
    )


AGGREGATE_METRICS = ("auroc", "tpr", "fpr", "tp", "tn", "fp", "fn")


def aggregate(reports: list[EvaluationReport]) -> dict[str, tuple[float, float]]:
    """Mean and sample standard deviation (n-1, zero for singletons) of each
    metric across reports."""
    if not reports:
        raise ValueError("no reports to aggregate")
    out: dict[str, tuple[float, float]] = {}
    for metric in AGGREGATE_METRICS:
        raw = [getattr(r, metric) for r in reports]
        if any(v is None for v in raw):
            raise ValueError(f"metric {metric!r} missing from some report")
        values = np.asarray(raw, dtype=np.float64)
        mean = float(values.mean())
        std = float(values.std(ddof=1)) if len(values) > 1 else 0.0
        out[metric] = (mean, std)
    return out
