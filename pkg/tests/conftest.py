import numpy as np
import pytest

from fswad import EncodedDataset, fit_normalize


def make_cluster_dataset(
    n_rows=2000,
    anomaly_fraction=0.10,
    dim=2,
    sigma=0.1,
    seed=7,
    normalize=True,
):
    """Two unit-separated Gaussian clusters: normals at 0, anomalies at 1."""
    rng = np.random.default_rng(seed)
    n_anomaly = int(n_rows * anomaly_fraction)
    normals = rng.normal(0.0, sigma, size=(n_rows - n_anomaly, dim))
    anomalies = rng.normal(1.0, sigma, size=(n_anomaly, dim))
    matrix = np.vstack([normals, anomalies])
    labels = np.concatenate(
        [np.zeros(n_rows - n_anomaly, dtype=int), np.ones(n_anomaly, dtype=int)]
    )
    perm = rng.permutation(n_rows)
    dataset = EncodedDataset(
        matrix[perm],
        labels[perm],
        tuple(f"f{i}" for i in range(dim)),
        {"source": "synthetic-clusters", "schema_hash": "none"},
    )
    if normalize:
        dataset, _ = fit_normalize(dataset)
    return dataset


def make_noisy_dataset(n_normal, n_anomaly, dim=12, seed=3, separation=0.4):
    """Overlapping clusters, closer to benchmark difficulty than the clean
    two-cluster task."""
    rng = np.random.default_rng(seed)
    matrix = np.vstack(
        [
            rng.normal(0.3, 0.15, size=(n_normal, dim)),
            rng.normal(0.3 + separation, 0.2, size=(n_anomaly, dim)),
        ]
    )
    labels = np.concatenate([np.zeros(n_normal, dtype=int), np.ones(n_anomaly, dtype=int)])
    perm = rng.permutation(len(labels))
    dataset = EncodedDataset(
        matrix[perm],
        labels[perm],
        tuple(f"f{i}" for i in range(dim)),
        {"source": "synthetic-noisy", "schema_hash": "none"},
    )
    dataset, _ = fit_normalize(dataset)
    return dataset


@pytest.fixture
def cluster_dataset():
    return make_cluster_dataset()


@pytest.fixture
def toy_csv(tmp_path):
    """Small mixed-type CSV plus its schema file."""
    rng = np.random.default_rng(1)
    lines = ["f1,f2,proto,severity,label"]
    severities = ["low", "med", "high"]
    for i in range(90):
        x = rng.normal(0, 0.1, 2)
        lines.append(f"{x[0]:.5f},{x[1]:.5f},tcp,{severities[i % 3]},normal")
    for i in range(10):
        x = rng.normal(1, 0.1, 2)
        proto = "udp" if i % 2 else "tcp"
        lines.append(f"{x[0]:.5f},{x[1]:.5f},{proto},high,attack")
    csv_path = tmp_path / "toy.csv"
    csv_path.write_text("\n".join(lines) + "\n")

    schema_path = tmp_path / "toy_schema.yaml"
    schema_path.write_text(
        """columns:
  - {name: f1, role: numeric}
  - {name: f2, role: numeric}
  - name: proto
    role: onehot_categorical
    values: [tcp, udp, icmp]
  - name: severity
    role: ordinal_categorical
    values: [low, med, high]
  - {name: label, role: label}
label_negative_values: [normal]
"""
    )
    return csv_path, schema_path
