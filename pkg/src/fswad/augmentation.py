"""Training-data augmentation by composing record tuples.

Instead of fabricating feature vectors, augmentation builds ordered k-tuples
of existing rows, mixing the labelled anomaly pool A with the unlabelled pool
U. A tuple's ordinal regression target depends only on how many of its
members come from A: with gap m the targets are k*m, (k-1)*m, ..., 0, so a
triplet scheme with m=4 yields 12/8/4/0 and the pair scheme 8/4/0.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

TAG_LABELLED = "A"
TAG_UNLABELLED = "U"

COMPOSITION_BALANCED = "balanced"
COMPOSITION_UNIFORM = "uniform"


@dataclass(frozen=True)
class OrdinalLabelScheme:
    """Equally spaced regression targets for tuples of size k (2 or 3)."""

    k: int = 3
    gap: float = 4.0

    def __post_init__(self):
        if self.k not in (2, 3):
            raise ValueError("tuple size must be 2 or 3")
        if self.gap <= 0:
            raise ValueError("gap must be positive")

    @property
    def num_classes(self) -> int:
        return self.k + 1

    @property
    def labels(self) -> tuple[float, ...]:
        """Descending targets; index c holds the label of a tuple with k-c
        labelled members."""
        return tuple((self.k - c) * self.gap for c in range(self.k + 1))

    def label_for_count(self, labelled_members: int) -> float:
        if not 0 <= labelled_members <= self.k:
            raise ValueError(f"labelled member count {labelled_members} out of range")
        return labelled_members * self.gap


def label_of_combination(tags: tuple[str, ...], scheme: OrdinalLabelScheme) -> float:
    """Ordinal target of a tag tuple; positions never matter, only the count
    of labelled members."""
    if len(tags) != scheme.k:
        raise ValueError(f"expected {scheme.k} tags, got {len(tags)}")
    bad = [t for t in tags if t not in (TAG_LABELLED, TAG_UNLABELLED)]
    if bad:
        raise ValueError(f"unknown source tags: {bad}")
    return scheme.label_for_count(sum(t == TAG_LABELLED for t in tags))


def enumerate_combinations(scheme: OrdinalLabelScheme) -> list[tuple[tuple[str, ...], float]]:
    """All 2^k tag tuples with their labels, in lexicographic order."""
    out = []
    for tags in itertools.product((TAG_LABELLED, TAG_UNLABELLED), repeat=scheme.k):
        out.append((tags, label_of_combination(tags, scheme)))
    return out


@dataclass(frozen=True)
class AugmentedInstance:
    member_indices: tuple[int, ...]
    source_tags: tuple[str, ...]
    ordinal_label: float


@dataclass
class AugmentedBatch:
    instances: list[AugmentedInstance]
    member_matrix: np.ndarray = field(init=False)
    labels: np.ndarray = field(init=False)

    def __post_init__(self):
        self.member_matrix = np.asarray(
            [inst.member_indices for inst in self.instances], dtype=np.int64
        )
        self.labels = np.asarray([inst.ordinal_label for inst in self.instances], dtype=np.float64)

    def __len__(self) -> int:
        return len(self.instances)


def sample_batch(
    a_pool: np.ndarray,
    u_pool: np.ndarray,
    scheme: OrdinalLabelScheme,
    batch_size: int,
    rng: np.random.Generator,
    composition: str = COMPOSITION_BALANCED,
) -> AugmentedBatch:
    """Draw one training batch of augmented instances.

    Members are drawn uniformly with replacement (the labelled pool is tiny,
    a replacement-free epoch would exhaust it immediately) and tag positions
    are placed uniformly among the permutations of each class. ``balanced``
    composition forces equal counts per ordinal class, ``uniform`` draws each
    tag tuple independently so class frequencies follow the binomial pattern.
    """
    a_pool = np.asarray(a_pool, dtype=np.int64)
    u_pool = np.asarray(u_pool, dtype=np.int64)
    if len(a_pool) == 0:
        raise ValueError("labelled anomaly pool is empty")
    if len(u_pool) < scheme.k:
        raise ValueError(f"unlabelled pool needs at least {scheme.k} rows")
    if batch_size <= 0:
        raise ValueError("batch size must be positive")

    if composition == COMPOSITION_BALANCED:
        if batch_size % scheme.num_classes:
            raise ValueError(
                f"batch size {batch_size} not divisible by {scheme.num_classes} ordinal classes"
            )
        per_class = batch_size // scheme.num_classes
        counts = np.repeat(np.arange(scheme.k, -1, -1), per_class)
    elif composition == COMPOSITION_UNIFORM:
        counts = rng.integers(0, 2, size=(batch_size, scheme.k)).sum(axis=1)
    else:
        raise ValueError(f"unknown batch composition {composition!r}")

    # Uniform tag placement: the first counts[i] slots of a random per-row
    # permutation are the labelled positions.
    priority = rng.random((batch_size, scheme.k)).argsort(axis=1)
    labelled_mask = priority < counts[:, None]
    a_draw = a_pool[rng.integers(len(a_pool), size=(batch_size, scheme.k))]
    u_draw = u_pool[rng.integers(len(u_pool), size=(batch_size, scheme.k))]
    members = np.where(labelled_mask, a_draw, u_draw)

    instances = []
    for i in range(batch_size):
        tags = tuple(
            TAG_LABELLED if labelled_mask[i, p] else TAG_UNLABELLED for p in range(scheme.k)
        )
        instances.append(
            AugmentedInstance(
                member_indices=tuple(int(m) for m in members[i]),
                source_tags=tags,
                ordinal_label=scheme.label_for_count(int(counts[i])),
            )
        )
    return AugmentedBatch(instances)
