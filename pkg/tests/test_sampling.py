import numpy as np
import pytest

from fswad import (
    EncodedDataset,
    SampleSet,
    SampleSetSpec,
    build_sample_sets,
    split_train_test,
)


def flat_dataset(n_normal, n_anomaly, seed=0):
    rng = np.random.default_rng(seed)
    total = n_normal + n_anomaly
    labels = np.zeros(total, dtype=int)
    labels[rng.permutation(total)[:n_anomaly]] = 1
    matrix = rng.random((total, 3))
    return EncodedDataset(matrix, labels, ("a", "b", "c"), {})


NSLKDD_SPEC = dict(
    normal_count=13460, anomaly_total=1620, labelled_anomaly_count=120, anomaly_percent=10.0
)
CICIDS_SPEC = dict(
    normal_count=20000, anomaly_total=2350, labelled_anomaly_count=120, anomaly_percent=10.0
)
TONIOT_SPEC = dict(
    normal_count=1948, anomaly_total=337, labelled_anomaly_count=120, anomaly_percent=10.0
)


class TestSpec:
    def test_benchmark_pool_sizes(self):
        spec = SampleSetSpec(**NSLKDD_SPEC)
        assert spec.available_size == 14960
        assert round(100 * spec.contamination / spec.available_size, 2) == 10.03
        spec = SampleSetSpec(**TONIOT_SPEC)
        assert spec.available_size == 2165
        assert round(100 * spec.contamination / spec.available_size, 2) == 10.02
        spec = SampleSetSpec(**CICIDS_SPEC)
        assert spec.available_size == 22230

    def test_labelled_must_stay_small(self):
        with pytest.raises(ValueError, match="not small"):
            SampleSetSpec(
                normal_count=100,
                anomaly_total=60,
                labelled_anomaly_count=40,
                anomaly_percent=16.7,
            )

    def test_labelled_cannot_exceed_total(self):
        with pytest.raises(ValueError, match="exceed"):
            SampleSetSpec(
                normal_count=5000,
                anomaly_total=30,
                labelled_anomaly_count=60,
                anomaly_percent=1.0,
            )

    def test_contamination_must_match_target(self):
        with pytest.raises(ValueError, match="target"):
            SampleSetSpec(
                normal_count=10000,
                anomaly_total=160,
                labelled_anomaly_count=60,
                anomaly_percent=10.0,
            )


class TestBuild:
    def test_sizes_and_disjointness(self):
        dataset = flat_dataset(n_normal=1200, n_anomaly=240)
        spec = SampleSetSpec(
            normal_count=500, anomaly_total=100, labelled_anomaly_count=25,
            anomaly_percent=13.0, seed=11,
        )
        sets = build_sample_sets(dataset, spec, 2)
        all_indices = []
        for s in sets:
            assert len(s.labelled_anomalies) == 25
            assert len(s.train_unlabelled) + len(s.test_rows) == spec.available_size
            assert np.all(dataset.labels[s.labelled_anomalies] == 1)
            combined = np.concatenate([s.labelled_anomalies, s.train_unlabelled, s.test_rows])
            assert len(np.unique(combined)) == len(combined)
            all_indices.append(combined)
        overlap = np.intersect1d(all_indices[0], all_indices[1])
        assert overlap.size == 0

    def test_exhausts_exactly_sized_dataset(self):
        spec = SampleSetSpec(
            normal_count=300, anomaly_total=60, labelled_anomaly_count=15,
            anomaly_percent=13.05, seed=5,
        )
        dataset = flat_dataset(n_normal=600, n_anomaly=120)
        sets = build_sample_sets(dataset, spec, 2)
        used = np.concatenate(
            [np.concatenate([s.labelled_anomalies, s.train_unlabelled, s.test_rows]) for s in sets]
        )
        assert len(np.unique(used)) == dataset.n_rows

    def test_insufficient_rows(self):
        dataset = flat_dataset(n_normal=400, n_anomaly=50)
        spec = SampleSetSpec(
            normal_count=300, anomaly_total=40, labelled_anomaly_count=10,
            anomaly_percent=9.1, seed=5,
        )
        with pytest.raises(ValueError, match="normal rows"):
            build_sample_sets(dataset, spec, 2)

    def test_determinism_and_seed_sensitivity(self):
        dataset = flat_dataset(n_normal=2000, n_anomaly=400)
        base = dict(
            normal_count=900, anomaly_total=100, labelled_anomaly_count=10,
            anomaly_percent=9.1,
        )
        first = build_sample_sets(dataset, SampleSetSpec(seed=3, **base), 2)
        again = build_sample_sets(dataset, SampleSetSpec(seed=3, **base), 2)
        other = build_sample_sets(dataset, SampleSetSpec(seed=4, **base), 2)
        for a, b in zip(first, again):
            assert np.array_equal(a.labelled_anomalies, b.labelled_anomalies)
            assert np.array_equal(a.train_unlabelled, b.train_unlabelled)
            assert np.array_equal(a.test_rows, b.test_rows)
        assert not np.array_equal(first[0].test_rows, other[0].test_rows)
        for a, b in zip(first, other):
            assert len(a.test_rows) == len(b.test_rows)
            assert len(a.train_unlabelled) == len(b.train_unlabelled)

    def test_hidden_contamination_preserved(self):
        dataset = flat_dataset(n_normal=2000, n_anomaly=400)
        spec = SampleSetSpec(
            normal_count=900, anomaly_total=100, labelled_anomaly_count=10,
            anomaly_percent=9.1, seed=3,
        )
        sample_set = build_sample_sets(dataset, spec, 1)[0]
        pool_truth = dataset.labels[sample_set.train_unlabelled]
        assert pool_truth.sum() > 0  # anomalies stay inside, unlabelled


class TestSplit:
    def test_benchmark_test_sizes(self):
        """Test-side sizes derived from the benchmark pool dimensions."""
        cases = [
            (NSLKDD_SPEC, 67300 + 8100, 3324, 333),
            (CICIDS_SPEC, 0, 4940, 496),
            (TONIOT_SPEC, 0, 481, 48),
        ]
        for spec_args, _, expected_test, expected_anomalies in cases:
            spec = SampleSetSpec(**spec_args)
            assert int(spec.test_fraction * spec.available_size) == expected_test
            rounded = int(np.floor(spec.test_fraction * spec.contamination + 0.5))
            assert rounded == expected_anomalies

    def test_nslkdd_scale_split(self):
        dataset = flat_dataset(n_normal=13460, n_anomaly=1620, seed=2)
        spec = SampleSetSpec(seed=9, **NSLKDD_SPEC)
        sample_set = build_sample_sets(dataset, spec, 1)[0]
        truth = dataset.labels[sample_set.test_rows]
        assert len(sample_set.test_rows) == 3324
        assert truth.sum() == 333
        assert (truth == 0).sum() == 2991

    def test_stratification_small_case(self):
        dataset = flat_dataset(n_normal=9, n_anomaly=1, seed=1)
        sample_set = SampleSet(
            labelled_anomalies=np.array([], dtype=int).reshape(0),
            available=np.arange(10),
        )
        split = split_train_test(sample_set, dataset, 0.5, seed=0)
        assert len(split.test_rows) == 5
        assert dataset.labels[split.test_rows].sum() in (0, 1)

    def test_labelled_reserve_never_in_test(self):
        dataset = flat_dataset(n_normal=2000, n_anomaly=400)
        spec = SampleSetSpec(
            normal_count=900, anomaly_total=100, labelled_anomaly_count=10,
            anomaly_percent=9.1, seed=3,
        )
        sample_set = build_sample_sets(dataset, spec, 1)[0]
        assert np.intersect1d(sample_set.labelled_anomalies, sample_set.test_rows).size == 0

    def test_degenerate_fraction(self):
        dataset = flat_dataset(n_normal=9, n_anomaly=1)
        sample_set = SampleSet(labelled_anomalies=np.array([0]), available=np.arange(1, 9))
        with pytest.raises(ValueError):
            split_train_test(sample_set, dataset, 0.01, seed=0)


class TestManifest:
    def test_round_trip(self, tmp_path):
        dataset = flat_dataset(n_normal=500, n_anomaly=100)
        spec = SampleSetSpec(
            normal_count=200, anomaly_total=40, labelled_anomaly_count=10,
            anomaly_percent=13.1, seed=8,
        )
        sample_set = build_sample_sets(dataset, spec, 1)[0]
        path = tmp_path / "manifest.json"
        sample_set.save_manifest(path)
        loaded = SampleSet.load_manifest(path)
        assert np.array_equal(loaded.labelled_anomalies, sample_set.labelled_anomalies)
        assert np.array_equal(loaded.train_unlabelled, sample_set.train_unlabelled)
        assert np.array_equal(loaded.test_rows, sample_set.test_rows)
        assert loaded.seed == sample_set.seed

    def test_with_labelled_count(self):
        dataset = flat_dataset(n_normal=500, n_anomaly=100)
        spec = SampleSetSpec(
            normal_count=200, anomaly_total=40, labelled_anomaly_count=10,
            anomaly_percent=13.1, seed=8,
        )
        sample_set = build_sample_sets(dataset, spec, 1)[0]
        trimmed = sample_set.with_labelled_count(4)
        assert np.array_equal(trimmed.labelled_anomalies, sample_set.labelled_anomalies[:4])
        assert np.array_equal(trimmed.test_rows, sample_set.test_rows)
        with pytest.raises(ValueError):
            sample_set.with_labelled_count(99)
