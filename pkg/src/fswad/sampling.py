"""Construction of experimental sample sets.

Each sample set is one self-contained experimental unit drawn from an encoded
dataset: a small reserve of labelled anomalies, an unlabelled training pool
whose hidden anomalies provide roughly 10% contamination, and a stratified
held-out test split. Multiple sample sets built in one call are pairwise
disjoint so their results can be averaged as independent repetitions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .ingest import EncodedDataset
from .seeds import derive_seed

# Reserve cap relative to the normal pool; "few-shot" means the labelled
# anomalies stay a small fraction of the data.
MAX_LABELLED_FRACTION = 0.10


@dataclass(frozen=True)
class SampleSetSpec:
    """Sizes and target contamination for one sample set."""

    normal_count: int
    anomaly_total: int
    labelled_anomaly_count: int
    anomaly_percent: float
    test_fraction: float = 2.0 / 9.0
    seed: int = 0

    def __post_init__(self):
        if min(self.normal_count, self.anomaly_total, self.labelled_anomaly_count) <= 0:
            raise ValueError("all sample-set counts must be positive")
        if self.labelled_anomaly_count > self.anomaly_total:
            raise ValueError("labelled anomalies cannot exceed the anomaly total")
        if self.labelled_anomaly_count > MAX_LABELLED_FRACTION * self.normal_count:
            raise ValueError(
                f"labelled anomaly count {self.labelled_anomaly_count} is not small "
                f"relative to {self.normal_count} normals "
                f"(cap {MAX_LABELLED_FRACTION:.0%})"
            )
        if not 0.0 < self.test_fraction < 1.0:
            raise ValueError("test_fraction must lie in (0, 1)")
        actual = 100.0 * self.contamination / self.available_size
        if abs(actual - self.anomaly_percent) > 0.5:
            raise ValueError(
                f"available set holds {actual:.2f}% anomalies, "
                f"target is {self.anomaly_percent:.2f}% (tolerance 0.5)"
            )

    @property
    def contamination(self) -> int:
        """Anomalies hidden in the available set."""
        return self.anomaly_total - self.labelled_anomaly_count

    @property
    def available_size(self) -> int:
        return self.normal_count + self.contamination

    @property
    def rows_needed(self) -> tuple[int, int]:
        """(normal, anomaly) rows consumed per sample set."""
        return self.normal_count, self.anomaly_total


@dataclass(frozen=True)
class SampleSet:
    """Row-index view into an encoded dataset.

    ``labelled_anomalies`` is the supervision reserve, ``available`` the
    contaminated pool before splitting, ``train_unlabelled`` / ``test_rows``
    the filled partition. Ground truth of unlabelled rows is never looked at
    by training code; the test labels are read only by evaluation.
    """

    labelled_anomalies: np.ndarray
    available: np.ndarray
    train_unlabelled: np.ndarray | None = None
    test_rows: np.ndarray | None = None
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "labelled_anomalies", _as_index(self.labelled_anomalies))
        object.__setattr__(self, "available", _as_index(self.available))
        for name in ("train_unlabelled", "test_rows"):
            value = getattr(self, name)
            if value is not None:
                object.__setattr__(self, name, _as_index(value))

    @property
    def is_split(self) -> bool:
        return self.train_unlabelled is not None and self.test_rows is not None

    def with_labelled_count(self, count: int) -> "SampleSet":
        """Restrict the supervision pool to the first ``count`` reserved rows."""
        if count > len(self.labelled_anomalies):
            raise ValueError(
                f"requested {count} labelled anomalies, reserve holds "
                f"{len(self.labelled_anomalies)}"
            )
        return replace(self, labelled_anomalies=self.labelled_anomalies[:count])

    def to_manifest(self) -> dict:
        doc = {
            "seed": self.seed,
            "labelled_anomalies": self.labelled_anomalies.tolist(),
            "available": self.available.tolist(),
        }
        if self.is_split:
            doc["train_unlabelled"] = self.train_unlabelled.tolist()
            doc["test_rows"] = self.test_rows.tolist()
        return doc

    def save_manifest(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_manifest(), fh, indent=1)
            fh.write("\n")

    @classmethod
    def from_manifest(cls, doc: dict) -> "SampleSet":
        return cls(
            labelled_anomalies=np.asarray(doc["labelled_anomalies"], dtype=np.int64),
            available=np.asarray(doc["available"], dtype=np.int64),
            train_unlabelled=(
                np.asarray(doc["train_unlabelled"], dtype=np.int64)
                if "train_unlabelled" in doc
                else None
            ),
            test_rows=(
                np.asarray(doc["test_rows"], dtype=np.int64) if "test_rows" in doc else None
            ),
            seed=int(doc.get("seed", 0)),
        )

    @classmethod
    def load_manifest(cls, path: str | Path) -> "SampleSet":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_manifest(json.load(fh))


def _as_index(values) -> np.ndarray:
    arr = np.asarray(values, dtype=np.int64)
    if arr.ndim != 1:
        raise ValueError("index lists must be 1-dimensional")
    return arr


def build_sample_sets(
    dataset: EncodedDataset,
    spec: SampleSetSpec,
    count: int,
    split: bool = True,
) -> list[SampleSet]:
    """Draw ``count`` pairwise-disjoint sample sets.

    Normals and anomalies are shuffled once and carved into consecutive
    chunks, which guarantees disjointness. Within each chunk the first
    ``labelled_anomaly_count`` anomalies form the supervision reserve and the
    rest contaminate the available pool. With ``split=True`` the available
    pool is immediately partitioned via :func:`split_train_test`.
    """
    if count <= 0:
        raise ValueError("count must be positive")
    normal_idx = np.flatnonzero(dataset.labels == 0)
    anomaly_idx = np.flatnonzero(dataset.labels == 1)
    need_normal, need_anomaly = spec.rows_needed
    if len(normal_idx) < count * need_normal:
        raise ValueError(
            f"dataset holds {len(normal_idx)} normal rows, "
            f"{count} sample sets need {count * need_normal}"
        )
    if len(anomaly_idx) < count * need_anomaly:
        raise ValueError(
            f"dataset holds {len(anomaly_idx)} anomaly rows, "
            f"{count} sample sets need {count * need_anomaly}"
        )

    rng = np.random.default_rng(spec.seed)
    normal_perm = rng.permutation(normal_idx)
    anomaly_perm = rng.permutation(anomaly_idx)

    sets: list[SampleSet] = []
    for i in range(count):
        normals = normal_perm[i * need_normal : (i + 1) * need_normal]
        anomalies = anomaly_perm[i * need_anomaly : (i + 1) * need_anomaly]
        labelled = anomalies[: spec.labelled_anomaly_count]
        contamination = anomalies[spec.labelled_anomaly_count :]
        available = np.concatenate([normals, contamination])
        set_seed = derive_seed(spec.seed, "sampleset", i)
        sample_set = SampleSet(
            labelled_anomalies=labelled, available=available, seed=set_seed
        )
        if split:
            sample_set = split_train_test(sample_set, dataset, spec.test_fraction, set_seed)
        sets.append(sample_set)
    return sets


def split_train_test(
    sample_set: SampleSet,
    dataset: EncodedDataset,
    test_fraction: float,
    seed: int,
) -> SampleSet:
    """Stratified partition of the available pool into train and test.

    The test side receives floor(test_fraction * |available|) rows with the
    anomaly count rounded half-up from the pool's anomaly ratio. The labelled
    reserve is outside the available pool and can never reach the test side.
    """
    if not 0.0 < test_fraction < 1.0:
        raise ValueError("test_fraction must lie in (0, 1)")
    available = sample_set.available
    test_size = int(test_fraction * len(available))
    if test_size == 0 or test_size == len(available):
        raise ValueError(
            f"test_fraction {test_fraction} leaves an empty partition "
            f"for {len(available)} available rows"
        )

    truth = dataset.labels[available]
    anomalies = available[truth == 1]
    normals = available[truth == 0]
    # Half-up rounding, independent of the platform's round-half-even.
    test_anomalies = min(int(np.floor(test_fraction * len(anomalies) + 0.5)), test_size)
    test_normals = test_size - test_anomalies
    if test_normals > len(normals):
        raise ValueError("stratification infeasible: not enough normal rows for the test side")

    rng = np.random.default_rng(derive_seed(seed, "split"))
    anomaly_perm = rng.permutation(anomalies)
    normal_perm = rng.permutation(normals)
    test_rows = np.concatenate([anomaly_perm[:test_anomalies], normal_perm[:test_normals]])
    train_rows = np.concatenate([anomaly_perm[test_anomalies:], normal_perm[test_normals:]])
    # Re-shuffle so row order carries no class information.
    test_rows = test_rows[rng.permutation(len(test_rows))]
    train_rows = train_rows[rng.permutation(len(train_rows))]
    return replace(sample_set, train_unlabelled=train_rows, test_rows=test_rows, seed=seed)
