"""Mini-batch training loop for the tuple scoring network.

Every step draws a fresh augmented batch from the labelled and unlabelled
pools (the combinatorial augmentation space is far too large to materialize)
and applies one SGD or RMSProp update. The loop is fully deterministic given
the config seed: model init, per-step batch streams and updates all derive
from it.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .augmentation import (
    COMPOSITION_BALANCED,
    OrdinalLabelScheme,
    sample_batch,
)
from .ingest import EncodedDataset
from .model import ScoringModel, backward, objective
from .sampling import SampleSet
from .seeds import derive_seed

OPTIMIZER_SGD = "sgd"
OPTIMIZER_RMSPROP = "rmsprop"


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 50
    steps_per_epoch: int = 20
    batch_size: int = 64
    learning_rate: float = 1e-3
    optimizer: str = OPTIMIZER_RMSPROP
    rms_decay: float = 0.9
    rms_epsilon: float = 1e-8
    regularization: float = 0.01
    hidden_sizes: tuple[int, ...] = (20,)
    composition: str = COMPOSITION_BALANCED
    seed: int = 0

    def __post_init__(self):
        if min(self.epochs, self.steps_per_epoch, self.batch_size) <= 0:
            raise ValueError("epochs, steps_per_epoch and batch_size must be positive")
        if self.learning_rate < 0:
            raise ValueError("learning_rate must be non-negative")
        if self.optimizer not in (OPTIMIZER_SGD, OPTIMIZER_RMSPROP):
            raise ValueError(f"unknown optimizer {self.optimizer!r}")
        if not 0 < self.rms_decay < 1:
            raise ValueError("rms_decay must lie in (0, 1)")

    def effective_batch_size(self, scheme: OrdinalLabelScheme) -> int:
        """Batch size rounded down to a multiple of the ordinal class count."""
        size = (self.batch_size // scheme.num_classes) * scheme.num_classes
        if size == 0:
            raise ValueError(
                f"batch size {self.batch_size} smaller than the "
                f"{scheme.num_classes} ordinal classes"
            )
        return size


@dataclass
class TrainLog:
    epochs: list[int] = field(default_factory=list)
    mean_objectives: list[float] = field(default_factory=list)

    def append(self, epoch: int, mean_objective: float) -> None:
        self.epochs.append(epoch)
        self.mean_objectives.append(mean_objective)

    def save_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["epoch", "mean_objective"])
            for epoch, value in zip(self.epochs, self.mean_objectives):
                writer.writerow([epoch, repr(value)])


def update_step(
    model: ScoringModel,
    gradients: list[np.ndarray],
    state: list[np.ndarray] | None,
    config: TrainConfig,
) -> tuple[ScoringModel, list[np.ndarray] | None]:
    """Apply one optimizer update in place and return (model, state).

    SGD: p -= lr * g. RMSProp: v = decay*v + (1-decay)*g^2 followed by
    p -= lr * g / (sqrt(v) + eps).
    """
    params = model.parameters()
    if len(gradients) != len(params):
        raise ValueError("gradient list does not match the parameter list")
    if config.optimizer == OPTIMIZER_SGD:
        for p, g in zip(params, gradients):
            p -= config.learning_rate * g
        return model, state
    if state is None:
        state = [np.zeros_like(p) for p in params]
    for p, g, v in zip(params, gradients, state):
        v *= config.rms_decay
        v += (1.0 - config.rms_decay) * g * g
        p -= config.learning_rate * g / (np.sqrt(v) + config.rms_epsilon)
    return model, state


def train(
    sample_set: SampleSet,
    dataset: EncodedDataset,
    scheme: OrdinalLabelScheme,
    config: TrainConfig,
) -> tuple[ScoringModel, TrainLog]:
    """Train a fresh scoring model on one sample set.

    The unlabelled pool keeps its hidden contamination; no ground truth of
    pool rows is consulted anywhere in this loop.
    """
    if not sample_set.is_split:
        raise ValueError("sample set must be split before training")
    a_pool = sample_set.labelled_anomalies
    u_pool = sample_set.train_unlabelled
    if len(a_pool) == 0 or len(u_pool) == 0:
        raise ValueError("training pools must be non-empty")

    data = dataset.matrix
    batch_size = config.effective_batch_size(scheme)
    model = ScoringModel.initialize(
        n_features=dataset.n_features,
        k=scheme.k,
        hidden_sizes=config.hidden_sizes,
        regularization=config.regularization,
        seed=derive_seed(config.seed, "init"),
    )

    state: list[np.ndarray] | None = None
    log = TrainLog()
    step = 0
    for epoch in range(config.epochs):
        epoch_values = np.empty(config.steps_per_epoch)
        for s in range(config.steps_per_epoch):
            rng = np.random.default_rng(derive_seed(config.seed, "batch", step))
            batch = sample_batch(a_pool, u_pool, scheme, batch_size, rng, config.composition)
            value = objective(model, batch, data)
            if not np.isfinite(value):
                raise RuntimeError(
                    f"training diverged: objective {value} at epoch {epoch}, step {s} "
                    f"(lr={config.learning_rate}, optimizer={config.optimizer})"
                )
            grads = backward(model, batch, data)
            model, state = update_step(model, grads, state, config)
            epoch_values[s] = value
            step += 1
        log.append(epoch, float(epoch_values.mean()))
    return model, log

