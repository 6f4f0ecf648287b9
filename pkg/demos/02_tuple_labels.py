#!/usr/bin/env python3
"""Ordinal targets for augmented record tuples.

Augmentation never invents feature vectors: a training instance is an
ordered triplet of existing rows, and its regression target counts how many
members come from the labelled anomaly pool A. This script enumerates the
whole target table and then samples a class-balanced batch.
"""

import numpy as np

from fswad import OrdinalLabelScheme, enumerate_combinations, sample_batch

scheme = OrdinalLabelScheme(k=3, gap=4.0)
print(f"tuple size k={scheme.k}, gap m={scheme.gap}")
print("descending targets:", scheme.labels, "\n")

print("tags      target")
for tags, label in enumerate_combinations(scheme):
    print(f"{''.join(tags)}       {label:>4g}")

# The target depends only on how many A-members a tuple has, never on where
# they sit, so AAU / AUA / UAA all collapse onto the same class.

# Sampling a batch: the labelled pool is tiny (here 4 rows standing in for
# 30-120 labelled anomalies), the unlabelled pool is large and contaminated.
a_pool = np.arange(4)
u_pool = np.arange(100, 400)
batch = sample_batch(a_pool, u_pool, scheme, batch_size=8, rng=np.random.default_rng(5))

print("\nbalanced batch of 8 (two instances per class):")
for inst in batch.instances:
    print(f"  members={inst.member_indices}  tags={''.join(inst.source_tags)}  "
          f"target={inst.ordinal_label:g}")

# The pair variant drops one slot and keeps the same arithmetic.
pair = OrdinalLabelScheme(k=2, gap=4.0)
print("\npair scheme targets:", pair.labels)
