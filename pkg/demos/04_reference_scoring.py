#!/usr/bin/env python3
"""Why the reference-based test protocol separates classes.

A test record is scored inside two tuples per repetition: anchored between
two random labelled anomalies, and leading two random unlabelled rows. With
a perfectly fitted scorer the tuple scores equal their ordinal targets, so
the combined score lands at 16 for anomalies and 8 for normals. This demo
builds such an ideal scorer by hand and walks the arithmetic.
"""

import numpy as np

from fswad import InferenceConfig, OrdinalLabelScheme, ScoringModel, midpoint_threshold, score_sample

# One indicator feature: anomalies carry 1.0, normals 0.0. With a unit
# hidden weight and a head of three 4s the network computes
# 4 * (number of anomalous members), i.e. exactly the ordinal target.
ideal = ScoringModel(
    weights=[np.array([[1.0]])],
    biases=[np.zeros(1)],
    head_weight=np.array([4.0, 4.0, 4.0]),
    head_bias=np.zeros(1),
    k=3,
)

anomaly_refs = np.ones((5, 1))
normal_refs = np.zeros((30, 1))
config = InferenceConfig(repetitions=30, seed=1)

for name, record in (("anomalous", np.array([1.0])), ("normal", np.array([0.0]))):
    anchored = ideal.forward(np.vstack([anomaly_refs[:2], record[None]])).score
    trailed = ideal.forward(np.vstack([record[None], normal_refs[:2]])).score
    combined = score_sample(ideal, record, anomaly_refs, normal_refs, config)
    print(f"{name} record:")
    print(f"  (A, A, T) tuple scores {anchored:g}  (target of an all/mostly-anomaly tuple)")
    print(f"  (T, U, U) tuple scores {trailed:g}")
    print(f"  mean combined score over 30 repetitions: {combined:g}\n")

scheme = OrdinalLabelScheme(k=3, gap=4.0)
print(f"decision threshold = midpoint of the two ideals = {midpoint_threshold(scheme):g}")
print("scores at or above the threshold classify as anomaly")
