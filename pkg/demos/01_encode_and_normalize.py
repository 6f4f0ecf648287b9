#!/usr/bin/env python3
"""Schema-driven encoding walkthrough.

Builds a small mixed-type table, declares column roles, and shows how the
encoder expands categoricals, maps the label, and squashes every feature
into [0,1] with reusable min/max statistics.
"""

import tempfile
from pathlib import Path

import numpy as np

from fswad import (
    ColumnSpec,
    EncodedDataset,
    FeatureSchema,
    NormalizationStats,
    apply_normalize,
    encode,
    fit_normalize,
    load_table,
)

# A toy flow table: one numeric column, one unordered categorical, one ranked
# categorical, a timestamp we do not want, and the ground-truth label.
csv_text = """\
bytes,proto,severity,ts,label
120,tcp,low,1001,normal
48000,udp,high,1002,attack
310,tcp,med,1003,normal
9,icmp,low,1004,normal
52000,udp,high,1005,attack
"""

schema = FeatureSchema(
    columns=(
        ColumnSpec("bytes", "numeric"),
        ColumnSpec("proto", "onehot_categorical", ("tcp", "udp", "icmp")),
        ColumnSpec("severity", "ordinal_categorical", ("low", "med", "high")),
        ColumnSpec("ts", "drop"),
        ColumnSpec("label", "label"),
    ),
    label_negative_values=frozenset({"normal"}),
)

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "flows.csv"
    path.write_text(csv_text)
    table = load_table(path, schema)

dataset = encode(table, schema)
print("feature names:", dataset.feature_names)
print("raw encoded matrix:")
print(dataset.matrix)
print("labels:", dataset.labels, "(1 = anomaly)")

# Fit min-max statistics and scale. Every non-constant feature now spans
# exactly [0, 1] on the fitting set.
normalized, stats = fit_normalize(dataset)
print("\nnormalized matrix:")
print(np.round(normalized.matrix, 3))
print("per-feature min:", stats.mins)
print("per-feature max:", stats.maxs)

# Held-out rows reuse the fitted statistics and clamp instead of refitting,
# so a 100 kB flow cannot stretch the training scale.
held_out = EncodedDataset(
    np.array([[100000.0, 1, 0, 0, 2.0]]),
    np.array([1]),
    dataset.feature_names,
    {},
)
clamped = apply_normalize(held_out, stats)
print("\nout-of-range flow after clamping:", np.round(clamped.matrix, 3))
