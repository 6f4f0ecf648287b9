"""End-to-end experiment harness.

Three studies over the intrusion datasets, each averaged over five disjoint
sample sets and run for both tuple sizes on byte-identical sample sets:

* experiment 1: fixed 60 labelled anomalies, ~10% contamination;
* experiment 2: labelled anomalies swept over [30, 60, 120];
* experiment 3: contamination swept over [2, 5, 10]% with 60 labelled.

Every stage seed derives from the base seed plus stage labels, so a rerun
reproduces every table cell exactly.
"""

from __future__ import annotations

import csv
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

from .augmentation import OrdinalLabelScheme
from .evaluation import EvaluationReport, aggregate, confusion
from .inference import InferenceConfig, score_dataset
from .ingest import EncodedDataset
from .sampling import SampleSet, SampleSetSpec, build_sample_sets
from .seeds import derive_seed
from .trainer import TrainConfig, train

METHOD_TRIPLET = "triplet"
METHOD_PAIR = "pair"
METHOD_TUPLE_SIZE = {METHOD_TRIPLET: 3, METHOD_PAIR: 2}

DEFAULT_GAP = 4.0
DEFAULT_LABELLED = 60
DEFAULT_LABELLED_SWEEP = (30, 60, 120)
DEFAULT_PERCENT_SWEEP = (2.0, 5.0, 10.0)

# Per-dataset sample-set sizes: normals, total anomalies, labelled reserve.
DATASET_SAMPLE_SPECS: dict[str, dict] = {
    "nslkdd": {"normal_count": 13460, "anomaly_total": 1620, "labelled_reserve": 120},
    "cicids2018": {"normal_count": 20000, "anomaly_total": 2350, "labelled_reserve": 120},
    "toniot": {"normal_count": 1948, "anomaly_total": 337, "labelled_reserve": 120},
    "synthetic": {"normal_count": 1800, "anomaly_total": 260, "labelled_reserve": 60},
}


@dataclass(frozen=True)
class ExperimentConfig:
    experiment_id: int
    dataset: str
    labelled_anomaly_counts: tuple[int, ...] = DEFAULT_LABELLED_SWEEP
    anomaly_percents: tuple[float, ...] = DEFAULT_PERCENT_SWEEP
    sample_set_count: int = 5
    methods: tuple[str, ...] = (METHOD_TRIPLET, METHOD_PAIR)
    base_seed: int = 0
    gap: float = DEFAULT_GAP
    train: TrainConfig = field(default_factory=TrainConfig)
    inference: InferenceConfig = field(default_factory=InferenceConfig)
    jobs: int = 1

    def __post_init__(self):
        if self.experiment_id not in (1, 2, 3):
            raise ValueError("experiment_id must be 1, 2 or 3")
        if self.sample_set_count < 1:
            raise ValueError("sample_set_count must be positive")
        if not self.methods:
            raise ValueError("at least one method required")
        unknown = [m for m in self.methods if m not in METHOD_TUPLE_SIZE]
        if unknown:
            raise ValueError(f"unknown methods: {unknown}")
        if self.experiment_id == 2 and not self.labelled_anomaly_counts:
            raise ValueError("experiment 2 needs a labelled-anomaly sweep")
        if self.experiment_id == 3 and not self.anomaly_percents:
            raise ValueError("experiment 3 needs an anomaly-percent sweep")
        if any(c <= 0 for c in self.labelled_anomaly_counts):
            raise ValueError("labelled anomaly counts must be positive")
        if any(p <= 0 for p in self.anomaly_percents):
            raise ValueError("anomaly percents must be positive")


@dataclass(frozen=True)
class SweepPoint:
    """One cell of the study: the quantity varied and the sample-set spec."""

    label: str
    value: float
    spec: SampleSetSpec
    labelled_count: int


@dataclass
class RunResult:
    method: str
    sweep_label: str
    set_index: int
    report: EvaluationReport
    train_seed: int
    score_seed: int


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    points: list[SweepPoint]
    runs: list[RunResult]
    aggregates: dict[tuple[str, str], dict[str, tuple[float, float]]]

    def aggregate_for(self, sweep_label: str, method: str) -> dict[str, tuple[float, float]]:
        return self.aggregates[(sweep_label, method)]


def base_sample_spec(dataset: str, seed: int = 0) -> SampleSetSpec:
    """Reference sample-set sizes for a known dataset name."""
    try:
        dims = DATASET_SAMPLE_SPECS[dataset]
    except KeyError:
        known = sorted(DATASET_SAMPLE_SPECS)
        raise ValueError(f"unknown dataset {dataset!r}; known: {known}") from None
    spec = SampleSetSpec(
        normal_count=dims["normal_count"],
        anomaly_total=dims["anomaly_total"],
        labelled_anomaly_count=dims["labelled_reserve"],
        anomaly_percent=10.0,
        seed=seed,
    )
    return spec


def vary_anomaly_percent(
    spec: SampleSetSpec, percent: float, labelled_count: int | None = None
) -> SampleSetSpec:
    """Rescale the anomaly total so hidden contamination hits ``percent``.

    Normals and the labelled count stay fixed (``labelled_count`` overrides
    the latter); the contamination c solves c / (N + c) = percent/100,
    rounded half-up.
    """
    if not 0.0 < percent < 50.0:
        raise ValueError("percent must lie in (0, 50)")
    labelled = spec.labelled_anomaly_count if labelled_count is None else labelled_count
    fraction = percent / 100.0
    contamination = int(fraction * spec.normal_count / (1.0 - fraction) + 0.5)
    if contamination < 1:
        raise ValueError(
            f"{percent}% of {spec.normal_count} normals leaves no contamination"
        )
    return replace(
        spec,
        labelled_anomaly_count=labelled,
        anomaly_total=labelled + contamination,
        anomaly_percent=percent,
    )


def sweep_points(config: ExperimentConfig) -> list[SweepPoint]:
    """The sample-set specs and labelled counts this experiment visits."""
    base = base_sample_spec(config.dataset)
    reserve = base.labelled_anomaly_count
    points: list[SweepPoint] = []

    if config.experiment_id == 1:
        points.append(
            SweepPoint(
                label="labelled=60",
                value=DEFAULT_LABELLED,
                spec=base,
                labelled_count=min(DEFAULT_LABELLED, reserve),
            )
        )
    elif config.experiment_id == 2:
        for count in config.labelled_anomaly_counts:
            if count > reserve:
                raise ValueError(
                    f"labelled count {count} exceeds the reserve of {reserve} "
                    f"for dataset {config.dataset!r}"
                )
            points.append(
                SweepPoint(
                    label=f"labelled={count}", value=count, spec=base, labelled_count=count
                )
            )
    else:
        # Contamination sweep: the reserve shrinks to the labelled count in
        # use so the available-pool percentage is exact.
        labelled = min(DEFAULT_LABELLED, reserve)
        for percent in config.anomaly_percents:
            spec = vary_anomaly_percent(base, percent, labelled_count=labelled)
            points.append(
                SweepPoint(
                    label=f"percent={percent:g}", value=percent, spec=spec, labelled_count=labelled
                )
            )
    return points


def _execute_run(args: tuple) -> RunResult:
    (
        dataset,
        sample_set,
        method,
        sweep_label,
        set_index,
        gap,
        train_config,
        inference_config,
        train_seed,
        score_seed,
    ) = args
    scheme = OrdinalLabelScheme(k=METHOD_TUPLE_SIZE[method], gap=gap)
    model, _ = train(sample_set, dataset, scheme, replace(train_config, seed=train_seed))
    scores = score_dataset(
        model,
        dataset.matrix,
        sample_set.test_rows,
        dataset.matrix[sample_set.labelled_anomalies],
        dataset.matrix[sample_set.train_unlabelled],
        replace(inference_config, seed=score_seed),
    )
    truth = dataset.labels[sample_set.test_rows]
    threshold = inference_config.resolve_threshold(scheme)
    report = confusion(scores, truth, threshold)
    return RunResult(
        method=method,
        sweep_label=sweep_label,
        set_index=set_index,
        report=report,
        train_seed=train_seed,
        score_seed=score_seed,
    )


def run_experiment(
    config: ExperimentConfig,
    dataset: EncodedDataset,
    out_dir: str | Path | None = None,
) -> ExperimentResult:
    """Run one experiment: build sample sets per sweep point, train and score
    every (sample set, method) pair, aggregate over the sample sets.

    All methods at a sweep point consume the same sample sets. With
    ``config.jobs > 1`` the independent runs execute in parallel; outputs are
    identical either way because every run derives its own seeds.
    """
    points = sweep_points(config)
    out_path = Path(out_dir) if out_dir is not None else None
    if out_path is not None:
        out_path.mkdir(parents=True, exist_ok=True)

    jobs_args = []
    manifests: dict[str, list[SampleSet]] = {}
    for point in points:
        partition_seed = derive_seed(
            config.base_seed, config.dataset, config.experiment_id, point.label
        )
        spec = replace(point.spec, seed=partition_seed)
        sets = build_sample_sets(dataset, spec, config.sample_set_count)
        trimmed = [s.with_labelled_count(point.labelled_count) for s in sets]
        manifests[point.label] = trimmed
        for set_index, sample_set in enumerate(trimmed):
            for method in config.methods:
                train_seed = derive_seed(partition_seed, set_index, method, "train")
                score_seed = derive_seed(partition_seed, set_index, method, "score")
                jobs_args.append(
                    (
                        dataset,
                        sample_set,
                        method,
                        point.label,
                        set_index,
                        config.gap,
                        config.train,
                        config.inference,
                        train_seed,
                        score_seed,
                    )
                )

    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            runs = list(pool.map(_execute_run, jobs_args))
    else:
        runs = [_execute_run(a) for a in jobs_args]

    aggregates: dict[tuple[str, str], dict[str, tuple[float, float]]] = {}
    for point in points:
        for method in config.methods:
            reports = [
                r.report
                for r in runs
                if r.sweep_label == point.label and r.method == method
            ]
            aggregates[(point.label, method)] = aggregate(reports)

    result = ExperimentResult(config=config, points=points, runs=runs, aggregates=aggregates)
    if out_path is not None:
        _write_outputs(result, manifests, out_path)
    return result


def _write_outputs(
    result: ExperimentResult,
    manifests: dict[str, list[SampleSet]],
    out_dir: Path,
) -> None:
    config = result.config
    with open(out_dir / "config.json", "w", encoding="utf-8") as fh:
        json.dump(
            {
                "experiment_id": config.experiment_id,
                "dataset": config.dataset,
                "methods": list(config.methods),
                "sample_set_count": config.sample_set_count,
                "base_seed": config.base_seed,
                "gap": config.gap,
                "labelled_anomaly_counts": list(config.labelled_anomaly_counts),
                "anomaly_percents": list(config.anomaly_percents),
                "train": config.train.__dict__ | {"hidden_sizes": list(config.train.hidden_sizes)},
                "inference": config.inference.__dict__,
            },
            fh,
            indent=1,
        )
        fh.write("\n")

    for label, sets in manifests.items():
        point_dir = out_dir / label.replace("=", "_")
        point_dir.mkdir(exist_ok=True)
        for i, sample_set in enumerate(sets):
            sample_set.save_manifest(point_dir / f"sampleset_{i}.manifest.json")

    for run in result.runs:
        point_dir = out_dir / run.sweep_label.replace("=", "_")
        doc = {
            "method": run.method,
            "sweep": run.sweep_label,
            "set_index": run.set_index,
            "train_seed": run.train_seed,
            "score_seed": run.score_seed,
            "report": json.loads(run.report.to_json()),
        }
        with open(point_dir / f"{run.method}_set{run.set_index}.report.json", "w",
                  encoding="utf-8") as fh:
            json.dump(doc, fh, indent=1)
            fh.write("\n")

    write_aggregate_csv(result, out_dir / "aggregate.csv")


def write_aggregate_csv(result: ExperimentResult, path: str | Path) -> None:
    """One row per (sweep point, method) with mean and stddev per metric."""
    header = ["experiment", "dataset", "sweep", "method", "base_seed"]
    for metric in ("auroc", "tpr", "fpr"):
        header += [f"{metric}_mean", f"{metric}_std"]
    for metric in ("tp", "tn", "fp", "fn"):
        header += [f"{metric}_mean"]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for point in result.points:
            for method in result.config.methods:
                agg = result.aggregates[(point.label, method)]
                row = [
                    result.config.experiment_id,
                    result.config.dataset,
                    point.label,
                    method,
                    result.config.base_seed,
                ]
                for metric in ("auroc", "tpr", "fpr"):
                    mean, std = agg[metric]
                    row += [f"{mean:.6f}", f"{std:.6f}"]
                for metric in ("tp", "tn", "fp", "fn"):
                    mean, _ = agg[metric]
                    row += [f"{mean:.1f}"]
                writer.writerow(row)
