"""Anomaly scoring network over record tuples.

One multi-layer perceptron (ReLU hidden layers) is applied with shared
parameters to every member of a k-tuple; the per-member representations are
concatenated and a linear head maps them to a single unbounded anomaly
score. Training minimizes the mean absolute deviation between scores and
the ordinal targets plus an L2 penalty on the weight matrices; gradients
are computed in closed form so the whole model stays plain numpy.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .augmentation import AugmentedBatch

SERIALIZATION_VERSION = 1

# Subgradient conventions at the kinks, fixed for determinism:
# d|u|/du = sign(u) with sign(0) = 0, and dReLU(u)/du = 0 at u = 0.


@dataclass
class TupleScore:
    """Forward-pass detail for a single tuple."""

    score: float
    member_representations: list[np.ndarray]
    combined: np.ndarray


class ScoringModel:
    """Shared-weight tuple scorer.

    ``weights[i]`` / ``biases[i]`` are the hidden layers of the shared
    sub-network (first matrix is n x h1), ``head_weight`` has length
    k * h_last and ``head_bias`` is a length-1 array. The same hidden
    parameters are applied to all k tuple positions.
    """

    def __init__(
        self,
        weights: list[np.ndarray],
        biases: list[np.ndarray],
        head_weight: np.ndarray,
        head_bias: np.ndarray,
        k: int,
        regularization: float = 0.01,
    ):
        self.weights = [np.asarray(w, dtype=np.float64) for w in weights]
        self.biases = [np.asarray(b, dtype=np.float64) for b in biases]
        self.head_weight = np.asarray(head_weight, dtype=np.float64)
        self.head_bias = np.asarray(head_bias, dtype=np.float64).reshape(1)
        self.k = int(k)
        self.regularization = float(regularization)
        self._validate()

    def _validate(self) -> None:
        if self.k < 2:
            raise ValueError("tuple size must be at least 2")
        if len(self.weights) != len(self.biases) or not self.weights:
            raise ValueError("need one bias vector per hidden weight matrix")
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            if w.ndim != 2 or b.ndim != 1 or w.shape[1] != b.shape[0]:
                raise ValueError(f"hidden layer {i}: weight {w.shape} / bias {b.shape} mismatch")
            if i > 0 and self.weights[i - 1].shape[1] != w.shape[0]:
                raise ValueError(f"hidden layer {i}: input dim does not chain")
        if self.head_weight.shape != (self.k * self.hidden_sizes[-1],):
            raise ValueError(
                f"head expects {self.k * self.hidden_sizes[-1]} inputs, "
                f"got {self.head_weight.shape}"
            )
        for arr in self.parameters():
            if not np.all(np.isfinite(arr)):
                raise ValueError("model parameters must be finite")

    @classmethod
    def initialize(
        cls,
        n_features: int,
        k: int,
        hidden_sizes: tuple[int, ...] = (20,),
        regularization: float = 0.01,
        seed: int = 0,
    ) -> "ScoringModel":
        """Glorot-uniform weights, zero biases."""
        if n_features <= 0 or any(h <= 0 for h in hidden_sizes) or not hidden_sizes:
            raise ValueError("feature and hidden dimensions must be positive")
        rng = np.random.default_rng(seed)
        weights, biases = [], []
        fan_in = n_features
        for h in hidden_sizes:
            a = np.sqrt(6.0 / (fan_in + h))
            weights.append(rng.uniform(-a, a, size=(fan_in, h)))
            biases.append(np.zeros(h))
            fan_in = h
        head_in = k * hidden_sizes[-1]
        a = np.sqrt(6.0 / (head_in + 1))
        head_weight = rng.uniform(-a, a, size=head_in)
        return cls(weights, biases, head_weight, np.zeros(1), k, regularization)

    @property
    def n_features(self) -> int:
        return self.weights[0].shape[0]

    @property
    def hidden_sizes(self) -> tuple[int, ...]:
        return tuple(w.shape[1] for w in self.weights)

    def parameters(self) -> list[np.ndarray]:
        """All parameter arrays in a fixed order (shared layers, then head)."""
        out: list[np.ndarray] = []
        for w, b in zip(self.weights, self.biases):
            out.extend((w, b))
        out.extend((self.head_weight, self.head_bias))
        return out

    def copy(self) -> "ScoringModel":
        return ScoringModel(
            [w.copy() for w in self.weights],
            [b.copy() for b in self.biases],
            self.head_weight.copy(),
            self.head_bias.copy(),
            self.k,
            self.regularization,
        )

    # ------------------------------------------------------------------ #
    # forward / loss / gradients
    # ------------------------------------------------------------------ #

    def member_representation(self, record: np.ndarray) -> np.ndarray:
        """Shared sub-network output for one record."""
        h = np.asarray(record, dtype=np.float64)
        for w, b in zip(self.weights, self.biases):
            h = np.maximum(h @ w + b, 0.0)
        return h

    def forward(self, members: np.ndarray) -> TupleScore:
        """Score one tuple given as a (k, n) array."""
        members = np.asarray(members, dtype=np.float64)
        if members.shape != (self.k, self.n_features):
            raise ValueError(
                f"expected tuple shape {(self.k, self.n_features)}, got {members.shape}"
            )
        if not np.all(np.isfinite(members)):
            raise ValueError("tuple members must be finite")
        reps = [self.member_representation(members[p]) for p in range(self.k)]
        combined = np.concatenate(reps)
        score = float(combined @ self.head_weight + self.head_bias[0])
        return TupleScore(score=score, member_representations=reps, combined=combined)

    def score_tuples(self, members: np.ndarray) -> np.ndarray:
        """Vectorised scores for a (B, k, n) stack of tuples."""
        members = np.asarray(members, dtype=np.float64)
        if members.ndim != 3 or members.shape[1:] != (self.k, self.n_features):
            raise ValueError(
                f"expected shape (B, {self.k}, {self.n_features}), got {members.shape}"
            )
        h = members.reshape(-1, self.n_features)
        for w, b in zip(self.weights, self.biases):
            h = np.maximum(h @ w + b, 0.0)
        combined = h.reshape(members.shape[0], self.k * self.hidden_sizes[-1])
        return combined @ self.head_weight + self.head_bias[0]


def loss(score: float, ordinal_label: float) -> float:
    """Absolute deviation between a tuple score and its ordinal target."""
    return abs(ordinal_label - score)


def regularization_term(model: ScoringModel) -> float:
    """Squared L2 norm of the weight matrices (biases excluded)."""
    total = sum(float(np.sum(w * w)) for w in model.weights)
    total += float(np.sum(model.head_weight * model.head_weight))
    return model.regularization * total


def objective(model: ScoringModel, batch: AugmentedBatch, data: np.ndarray) -> float:
    """Mean absolute deviation over the batch plus the weight penalty."""
    if len(batch) == 0:
        raise ValueError("batch is empty")
    members = data[batch.member_matrix]
    scores = model.score_tuples(members)
    return float(np.mean(np.abs(batch.labels - scores))) + regularization_term(model)


def backward(model: ScoringModel, batch: AugmentedBatch, data: np.ndarray) -> list[np.ndarray]:
    """Exact objective gradient, ordered like :meth:`ScoringModel.parameters`.

    Shared-layer gradients accumulate over all k tuple positions because the
    positions are rows of one flattened activation stack.
    """
    if len(batch) == 0:
        raise ValueError("batch is empty")
    members = data[batch.member_matrix]
    b_size = members.shape[0]
    h_last = model.hidden_sizes[-1]

    activations = [members.reshape(-1, model.n_features)]
    for w, b in zip(model.weights, model.biases):
        activations.append(np.maximum(activations[-1] @ w + b, 0.0))
    combined = activations[-1].reshape(b_size, model.k * h_last)
    scores = combined @ model.head_weight + model.head_bias[0]

    # d mean|y - s| / ds, with sign(0) = 0.
    d_scores = -np.sign(batch.labels - scores) / b_size
    grad_head_w = combined.T @ d_scores + 2.0 * model.regularization * model.head_weight
    grad_head_b = np.array([d_scores.sum()])

    d_hidden = np.outer(d_scores, model.head_weight).reshape(b_size * model.k, h_last)
    grads_w: list[np.ndarray] = []
    grads_b: list[np.ndarray] = []
    for layer in range(len(model.weights) - 1, -1, -1):
        # dReLU = 0 where the activation is exactly 0.
        d_pre = d_hidden * (activations[layer + 1] > 0.0)
        grads_w.append(activations[layer].T @ d_pre + 2.0 * model.regularization * model.weights[layer])
        grads_b.append(d_pre.sum(axis=0))
        if layer > 0:
            d_hidden = d_pre @ model.weights[layer].T

    out: list[np.ndarray] = []
    for w, b in zip(reversed(grads_w), reversed(grads_b)):
        out.extend((w, b))
    out.extend((grad_head_w, grad_head_b))
    return out


# ---------------------------------------------------------------------- #
# serialization (exact float round-trip via JSON repr)
# ---------------------------------------------------------------------- #


def save_model(model: ScoringModel, path: str | Path) -> None:
    doc = {
        "version": SERIALIZATION_VERSION,
        "k": model.k,
        "n_features": model.n_features,
        "hidden_sizes": list(model.hidden_sizes),
        "regularization": model.regularization,
        "weights": [w.tolist() for w in model.weights],
        "biases": [b.tolist() for b in model.biases],
        "head_weight": model.head_weight.tolist(),
        "head_bias": model.head_bias.tolist(),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)
        fh.write("\n")


def load_model(path: str | Path) -> ScoringModel:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    version = doc.get("version")
    if version != SERIALIZATION_VERSION:
        raise ValueError(f"unsupported model file version {version!r}")
    model = ScoringModel(
        weights=[np.asarray(w, dtype=np.float64) for w in doc["weights"]],
        biases=[np.asarray(b, dtype=np.float64) for b in doc["biases"]],
        head_weight=np.asarray(doc["head_weight"], dtype=np.float64),
        head_bias=np.asarray(doc["head_bias"], dtype=np.float64),
        k=int(doc["k"]),
        regularization=float(doc["regularization"]),
    )
    if model.n_features != int(doc["n_features"]):
        raise ValueError("model file is inconsistent: n_features mismatch")
    return model
