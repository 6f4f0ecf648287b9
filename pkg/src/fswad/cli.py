"""Command-line entry point.

One binary, one subcommand per pipeline stage: prepare / sample / augment /
train / score / eval / experiment, plus extract (carving a class-balanced
subset out of oversized raw corpora) and infer-schema (drafting a column-role
file from a CSV). Values resolve as defaults < config file < flags, and every
run prints the resolved configuration with the origin of each value.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .augmentation import OrdinalLabelScheme, sample_batch
from .evaluation import confusion
from .inference import InferenceConfig, classify, score_dataset
from .ingest import (
    EncodedDataset,
    FeatureSchema,
    bundled_schema_path,
    encode,
    fit_normalize,
    infer_schema,
    load_table,
)
from .model import load_model, save_model
from .sampling import SampleSet, SampleSetSpec, build_sample_sets
from .experiments import (
    METHOD_TUPLE_SIZE,
    ExperimentConfig,
    run_experiment,
)
from .trainer import TrainConfig, train

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


class CliError(Exception):
    """Pipeline-level failure: reported to stderr, exit code 1."""


# --------------------------------------------------------------------- #
# option resolution: defaults < config file < flags
# --------------------------------------------------------------------- #


@dataclass(frozen=True)
class Option:
    name: str
    kind: str  # int | float | str | ints | floats | optfloat
    default: object
    help: str


def _convert(option: Option, text: str) -> object:
    try:
        if option.kind == "int":
            return int(text)
        if option.kind == "float":
            return float(text)
        if option.kind == "optfloat":
            return None if text.lower() in ("none", "") else float(text)
        if option.kind == "ints":
            return tuple(int(p) for p in str(text).split(",") if p.strip())
        if option.kind == "floats":
            return tuple(float(p) for p in str(text).split(",") if p.strip())
        return str(text)
    except ValueError:
        raise CliError(f"option {option.name!r}: cannot parse {text!r} as {option.kind}") from None


def read_config_file(path: str | Path) -> dict[str, str]:
    """Flat key = value lines, # comments."""
    values: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            if "=" not in stripped:
                raise CliError(f"{path}:{lineno}: expected 'key = value', got {stripped!r}")
            key, _, value = stripped.partition("=")
            values[key.strip()] = value.strip()
    return values


def resolve_options(
    options: list[Option],
    args: argparse.Namespace,
    config_path: str | None,
) -> dict[str, object]:
    file_values: dict[str, str] = {}
    if config_path:
        if not Path(config_path).is_file():
            raise CliError(f"config file not found: {config_path}")
        file_values = read_config_file(config_path)
    known = {o.name for o in options}
    unknown = sorted(set(file_values) - known)
    if unknown:
        raise CliError(f"config file {config_path}: unknown keys {unknown}")

    resolved: dict[str, object] = {}
    print("resolved configuration:", file=sys.stderr)
    for option in options:
        flag_value = getattr(args, option.name, None)
        if flag_value is not None:
            value, origin = (
                _convert(option, flag_value) if isinstance(flag_value, str) else flag_value
            ), "flag"
        elif option.name in file_values:
            value, origin = _convert(option, file_values[option.name]), "file"
        else:
            value, origin = option.default, "default"
        resolved[option.name] = value
        print(f"  {option.name} = {value} ({origin})", file=sys.stderr)
    return resolved


def _add_option_flags(parser: argparse.ArgumentParser, options: list[Option]) -> None:
    for option in options:
        parser.add_argument(
            f"--{option.name.replace('_', '-')}",
            dest=option.name,
            default=None,
            help=f"{option.help} (default {option.default})",
        )


def print_invocation(args: argparse.Namespace, parser_defaults: dict[str, object]) -> None:
    """Resolved-config block for commands configured by flags alone."""
    print("resolved configuration:", file=sys.stderr)
    for key, default in parser_defaults.items():
        value = getattr(args, key)
        origin = "default" if value == default else "flag"
        print(f"  {key} = {value} ({origin})", file=sys.stderr)


TRAIN_OPTIONS = [
    Option("epochs", "int", 50, "training epochs"),
    Option("steps_per_epoch", "int", 20, "batches per epoch"),
    Option("batch_size", "int", 64, "instances per batch, rounded to the class count"),
    Option("learning_rate", "float", 1e-3, "optimizer step size"),
    Option("optimizer", "str", "rmsprop", "sgd or rmsprop"),
    Option("rms_decay", "float", 0.9, "rmsprop decay"),
    Option("rms_epsilon", "float", 1e-8, "rmsprop stabilizer"),
    Option("regularization", "float", 0.01, "L2 weight penalty"),
    Option("hidden_sizes", "ints", (20,), "comma-separated hidden layer widths"),
    Option("composition", "str", "balanced", "batch composition: balanced or uniform"),
]

INFER_OPTIONS = [
    Option("repetitions", "int", 30, "reference draws per test record"),
    Option("threshold", "optfloat", None, "decision threshold (default: scheme midpoint)"),
]

SAMPLE_OPTIONS = [
    Option("normal_count", "int", 0, "normal rows per sample set"),
    Option("anomaly_total", "int", 0, "anomaly rows per sample set"),
    Option("labelled_anomaly_count", "int", 0, "labelled anomaly reserve"),
    Option("anomaly_percent", "float", 10.0, "target contamination of the available pool"),
    Option("test_fraction", "float", 2.0 / 9.0, "held-out fraction of the available pool"),
]


def _train_config(resolved: dict[str, object], seed: int) -> TrainConfig:
    return TrainConfig(
        epochs=resolved["epochs"],
        steps_per_epoch=resolved["steps_per_epoch"],
        batch_size=resolved["batch_size"],
        learning_rate=resolved["learning_rate"],
        optimizer=resolved["optimizer"],
        rms_decay=resolved["rms_decay"],
        rms_epsilon=resolved["rms_epsilon"],
        regularization=resolved["regularization"],
        hidden_sizes=tuple(resolved["hidden_sizes"]),
        composition=resolved["composition"],
        seed=seed,
    )


# --------------------------------------------------------------------- #
# shared loading helpers
# --------------------------------------------------------------------- #


def _load_schema(ref: str) -> FeatureSchema:
    path = Path(ref)
    if path.is_file():
        return FeatureSchema.from_yaml(path)
    return FeatureSchema.from_yaml(bundled_schema_path(ref))


def _load_prepared(path: str) -> EncodedDataset:
    if not Path(path).is_file():
        raise CliError(
            f"prepared dataset not found: {path} (produce it with 'fswad prepare')"
        )
    dataset, _ = EncodedDataset.load(path)
    return dataset


def _load_sample_set(path: str) -> SampleSet:
    if not Path(path).is_file():
        raise CliError(f"sample-set manifest not found: {path}")
    sample_set = SampleSet.load_manifest(path)
    if not sample_set.is_split:
        raise CliError(f"manifest {path} has no train/test partition")
    return sample_set


def _scheme(method: str, gap: float) -> OrdinalLabelScheme:
    if method not in METHOD_TUPLE_SIZE:
        raise CliError(f"unknown method {method!r}; choose from {sorted(METHOD_TUPLE_SIZE)}")
    return OrdinalLabelScheme(k=METHOD_TUPLE_SIZE[method], gap=gap)


# --------------------------------------------------------------------- #
# subcommands
# --------------------------------------------------------------------- #


def cmd_prepare(args: argparse.Namespace) -> int:
    print_invocation(
        args,
        {"data": None, "schema": None, "headerless": False, "format": "npz", "out": None},
    )
    schema = _load_schema(args.schema)
    table = load_table(args.data, schema, headerless=args.headerless)
    dataset = encode(table, schema)
    dataset, stats = fit_normalize(dataset)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    if args.format == "npz":
        dataset.save(out, stats)
    else:
        with open(out, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(list(dataset.feature_names) + ["truth"])
            for row, label in zip(dataset.matrix, dataset.labels):
                writer.writerow([repr(v) for v in row] + [int(label)])
    anomalies = int(dataset.labels.sum())
    print(
        f"prepared {dataset.n_rows} rows x {dataset.n_features} features "
        f"({anomalies} anomalies, {dataset.n_rows - anomalies} normals) -> {out}"
    )
    return EXIT_OK


def cmd_sample(args: argparse.Namespace) -> int:
    resolved = resolve_options(SAMPLE_OPTIONS, args, args.spec)
    dataset = _load_prepared(args.prepared)
    if resolved["normal_count"] <= 0:
        raise CliError("normal_count must be set via --spec file or flags")
    spec = SampleSetSpec(
        normal_count=resolved["normal_count"],
        anomaly_total=resolved["anomaly_total"],
        labelled_anomaly_count=resolved["labelled_anomaly_count"],
        anomaly_percent=resolved["anomaly_percent"],
        test_fraction=resolved["test_fraction"],
        seed=args.seed,
    )
    sets = build_sample_sets(dataset, spec, args.count)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for i, sample_set in enumerate(sets):
        path = out / f"sampleset_{i}.manifest.json"
        sample_set.save_manifest(path)
        print(
            f"{path}: A={len(sample_set.labelled_anomalies)} "
            f"U={len(sample_set.train_unlabelled)} test={len(sample_set.test_rows)} "
            f"seed={args.seed}"
        )
    return EXIT_OK


def cmd_augment(args: argparse.Namespace) -> int:
    print_invocation(
        args,
        {"prepared": None, "sampleset": None, "method": "triplet", "gap": 4.0,
         "batch_size": 16, "seed": 0},
    )
    dataset = _load_prepared(args.prepared)
    sample_set = _load_sample_set(args.sampleset)
    highest = max(
        int(sample_set.labelled_anomalies.max()), int(sample_set.train_unlabelled.max())
    )
    if highest >= dataset.n_rows:
        raise CliError(
            f"manifest indexes row {highest}, prepared dataset has {dataset.n_rows} rows"
        )
    scheme = _scheme(args.method, args.gap)
    rng = np.random.default_rng(args.seed)
    batch = sample_batch(
        sample_set.labelled_anomalies,
        sample_set.train_unlabelled,
        scheme,
        args.batch_size,
        rng,
    )
    print(f"sample batch (seed={args.seed}, k={scheme.k}, gap={scheme.gap}):")
    print(f"{'members':<28} {'tags':<12} label")
    for inst in batch.instances:
        members = ",".join(str(m) for m in inst.member_indices)
        tags = "".join(inst.source_tags)
        print(f"{members:<28} {tags:<12} {inst.ordinal_label:g}")
    return EXIT_OK


def cmd_train(args: argparse.Namespace) -> int:
    resolved = resolve_options(TRAIN_OPTIONS, args, args.config)
    dataset = _load_prepared(args.prepared)
    sample_set = _load_sample_set(args.sampleset)
    scheme = _scheme(args.method, args.gap)
    config = _train_config(resolved, args.seed)
    model, log = train(sample_set, dataset, scheme, config)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    save_model(model, out)
    if args.log:
        log.save_csv(args.log)
    print(
        f"trained {args.method} model (seed={args.seed}): "
        f"objective {log.mean_objectives[0]:.4f} -> {log.mean_objectives[-1]:.4f}; saved {out}"
    )
    return EXIT_OK


def cmd_score(args: argparse.Namespace) -> int:
    resolved = resolve_options(INFER_OPTIONS, args, None)
    dataset = _load_prepared(args.prepared)
    sample_set = _load_sample_set(args.sampleset)
    if not Path(args.model).is_file():
        raise CliError(f"model file not found: {args.model}")
    model = load_model(args.model)
    scheme = OrdinalLabelScheme(k=model.k, gap=args.gap)
    config = InferenceConfig(
        repetitions=resolved["repetitions"],
        threshold=resolved["threshold"],
        seed=args.seed,
    )
    if args.test:
        with open(args.test, "r", encoding="utf-8") as fh:
            row_ids = np.asarray(json.load(fh), dtype=np.int64)
    else:
        row_ids = sample_set.test_rows
    scores = score_dataset(
        model,
        dataset.matrix,
        row_ids,
        dataset.matrix[sample_set.labelled_anomalies],
        dataset.matrix[sample_set.train_unlabelled],
        config,
    )
    threshold = config.resolve_threshold(scheme)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["row_id", "score", "predicted", "truth"])
        for row_id, score in zip(row_ids, scores):
            writer.writerow(
                [int(row_id), repr(float(score)), classify(score, threshold), int(dataset.labels[row_id])]
            )
    meta = {
        "seed": args.seed,
        "model": str(args.model),
        "sampleset": str(args.sampleset),
        "repetitions": config.repetitions,
        "threshold": threshold,
    }
    with open(out.with_suffix(out.suffix + ".meta.json"), "w", encoding="utf-8") as fh:
        json.dump(meta, fh, indent=1)
        fh.write("\n")
    print(f"scored {len(row_ids)} rows (threshold {threshold:g}, seed={args.seed}) -> {out}")
    return EXIT_OK


def cmd_eval(args: argparse.Namespace) -> int:
    print_invocation(args, {"scores": None, "threshold": 12.0})
    if not Path(args.scores).is_file():
        raise CliError(f"scores file not found: {args.scores}")
    scores, truth = [], []
    with open(args.scores, "r", encoding="utf-8") as fh:
        for record in csv.DictReader(fh):
            scores.append(float(record["score"]))
            truth.append(int(record["truth"]))
    if not scores:
        raise CliError(f"scores file {args.scores} is empty")
    report = confusion(np.asarray(scores), np.asarray(truth), args.threshold)
    print(report.to_json())
    return EXIT_OK


def cmd_experiment(args: argparse.Namespace) -> int:
    resolved = resolve_options(TRAIN_OPTIONS + INFER_OPTIONS, args, args.config)
    dataset = _resolve_experiment_dataset(args.dataset, Path(args.data_dir))
    methods = tuple(m.strip() for m in args.methods.split(",") if m.strip())
    config = ExperimentConfig(
        experiment_id=args.id,
        dataset=args.dataset,
        methods=methods,
        sample_set_count=args.sample_sets,
        base_seed=args.seed,
        gap=args.gap,
        labelled_anomaly_counts=tuple(
            int(v) for v in args.labelled_counts.split(",") if v.strip()
        ),
        anomaly_percents=tuple(float(v) for v in args.percents.split(",") if v.strip()),
        train=_train_config(resolved, seed=0),
        inference=InferenceConfig(
            repetitions=resolved["repetitions"], threshold=resolved["threshold"], seed=0
        ),
        jobs=args.jobs,
    )
    result = run_experiment(config, dataset, out_dir=args.out)
    for point in result.points:
        for method in methods:
            agg = result.aggregate_for(point.label, method)
            auroc_mean, auroc_std = agg["auroc"]
            tpr_mean, _ = agg["tpr"]
            fpr_mean, _ = agg["fpr"]
            print(
                f"experiment {args.id} {args.dataset} {point.label} {method}: "
                f"AUROC {auroc_mean:.3f}+-{auroc_std:.3f} "
                f"TPR {tpr_mean:.3f} FPR {fpr_mean:.3f}"
            )
    print(f"outputs written to {args.out} (base seed {args.seed})")
    return EXIT_OK


RAW_CANDIDATES = {
    "nslkdd": ("KDDTrain+.txt", "KDDTrain+.csv", "nslkdd.csv"),
    "cicids2018": ("cicids2018_subset.csv",),
    "toniot": ("Train_Test_Windows10.csv", "windows10.csv", "toniot.csv"),
}


def _resolve_experiment_dataset(name: str, data_dir: Path) -> EncodedDataset:
    """Prepared cache first, then raw files prepared in memory.

    Nothing is written here: the experiment command only touches its --out
    directory. Run 'fswad prepare' once to persist the encoding and skip the
    repeated preparation cost.
    """
    if name not in RAW_CANDIDATES:
        raise CliError(f"unknown dataset {name!r}; choose from {sorted(RAW_CANDIDATES)}")
    prepared = data_dir / "prepared" / f"{name}.npz"
    if prepared.is_file():
        dataset, _ = EncodedDataset.load(prepared)
        return dataset
    schema = FeatureSchema.from_yaml(bundled_schema_path(name))
    for candidate in RAW_CANDIDATES[name]:
        raw = data_dir / candidate
        if not raw.is_file():
            continue
        headerless = _sniff_headerless(raw, schema)
        table = load_table(raw, schema, headerless=headerless)
        dataset = encode(table, schema)
        dataset, _ = fit_normalize(dataset)
        flag = " --headerless" if headerless else ""
        print(
            f"prepared {raw} in memory; cache it with "
            f"'fswad prepare --data {raw} --schema {name}{flag} --out {prepared}'",
            file=sys.stderr,
        )
        return dataset
    expected = " or ".join(str(data_dir / c) for c in RAW_CANDIDATES[name])
    hint = " (build it with 'fswad extract')" if name == "cicids2018" else ""
    raise CliError(
        f"dataset {name!r} not found: expected {prepared} or a raw file at {expected}{hint}"
    )


def _sniff_headerless(path: Path, schema: FeatureSchema) -> bool:
    """A raw file is headerless when its first row shares no cell with the
    schema's column names."""
    with open(path, "r", encoding="utf-8", errors="replace") as fh:
        first = fh.readline()
    cells = {c.strip() for c in first.split(",")}
    declared = {c.name for c in schema.columns}
    return not (cells & declared)


def cmd_extract(args: argparse.Namespace) -> int:
    print_invocation(
        args,
        {"inputs": None, "schema": None, "normals": None, "anomalies": None,
         "seed": 0, "out": None},
    )
    schema = _load_schema(args.schema)
    label_column = schema.label_column.name
    rng = np.random.default_rng(args.seed)
    reservoirs: dict[int, list[list[str]]] = {0: [], 1: []}
    targets = {0: args.normals, 1: args.anomalies}
    seen = {0: 0, 1: 0}
    skipped = 0
    header: list[str] | None = None

    for input_path in args.inputs:
        if not Path(input_path).is_file():
            raise CliError(f"input file not found: {input_path}")
        with open(input_path, "r", encoding="utf-8", errors="replace", newline="") as fh:
            reader = csv.reader(fh)
            file_header = [c.strip() for c in next(reader, [])]
            if header is None:
                header = file_header
                if label_column not in header:
                    raise CliError(f"{input_path}: label column {label_column!r} not in header")
                label_pos = header.index(label_column)
                numeric_pos = [
                    i
                    for i, name in enumerate(header)
                    if name != label_column
                    and (name not in {c.name for c in schema.columns} or
                         schema.column(name).role == "numeric")
                ]
                drop_names = {c.name for c in schema.columns if c.role == "drop"}
                numeric_pos = [i for i in numeric_pos if header[i] not in drop_names]
            elif file_header != header:
                raise CliError(
                    f"{input_path}: header differs from {args.inputs[0]}; "
                    "extract compatible files together"
                )
            for row in reader:
                if len(row) != len(header):
                    skipped += 1
                    continue
                if not _row_is_clean(row, numeric_pos):
                    skipped += 1
                    continue
                cls = schema.label_value(row[label_pos].strip())
                seen[cls] += 1
                reservoir = reservoirs[cls]
                if len(reservoir) < targets[cls]:
                    reservoir.append(row)
                else:
                    # Reservoir sampling keeps a uniform subset per class.
                    j = int(rng.integers(seen[cls]))
                    if j < targets[cls]:
                        reservoir[j] = row
    if header is None:
        raise CliError("no input rows found")
    for cls, target in targets.items():
        if len(reservoirs[cls]) < target:
            raise CliError(
                f"class {cls}: only {len(reservoirs[cls])} usable rows, requested {target}"
            )
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(reservoirs[0])
        writer.writerows(reservoirs[1])
    print(
        f"extracted {targets[0]} normals + {targets[1]} anomalies "
        f"({skipped} unusable rows skipped) -> {out}"
    )
    return EXIT_OK


def _row_is_clean(row: list[str], numeric_pos: list[int]) -> bool:
    for i in numeric_pos:
        text = row[i].strip()
        if text == "":
            continue
        try:
            value = float(text)
        except ValueError:
            return False
        if not np.isfinite(value):
            return False
    return True


def cmd_infer_schema(args: argparse.Namespace) -> int:
    print_invocation(
        args,
        {"data": None, "label_column": None, "positive": None, "negative": None,
         "drop": None, "out": None},
    )
    positives = tuple(v for v in (args.positive or "").split(",") if v)
    negatives = tuple(v for v in (args.negative or "").split(",") if v)
    drops = tuple(v for v in (args.drop or "").split(",") if v)
    schema = infer_schema(
        args.data,
        label_column=args.label_column,
        label_positive_values=positives,
        label_negative_values=negatives,
        drop_columns=drops,
    )
    schema.to_yaml(args.out)
    print(f"schema draft written to {args.out}; review the roles before use")
    return EXIT_OK


# --------------------------------------------------------------------- #
# parser
# --------------------------------------------------------------------- #


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fswad",
        description="Few-shot weakly-supervised anomaly detection pipeline",
    )
    parser.add_argument("--version", action="version", version=f"fswad {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prepare", help="encode and normalize a raw CSV")
    p.add_argument("--data", required=True, help="input CSV")
    p.add_argument("--schema", required=True, help="schema YAML path or bundled name")
    p.add_argument("--headerless", action="store_true", help="file has no header row")
    p.add_argument("--format", choices=("npz", "csv"), default="npz")
    p.add_argument("--out", required=True, help="output file")
    p.set_defaults(func=cmd_prepare)

    p = sub.add_parser("sample", help="carve disjoint sample sets")
    p.add_argument("--prepared", required=True, help="prepared dataset (.npz)")
    p.add_argument("--spec", default=None, help="sample-set spec config file")
    _add_option_flags(p, SAMPLE_OPTIONS)
    p.add_argument("--count", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="manifest output directory")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("augment", help="print a labelled augmented batch")
    p.add_argument("--prepared", required=True)
    p.add_argument("--sampleset", required=True, help="sample-set manifest")
    p.add_argument("--method", default="triplet", help="triplet or pair")
    p.add_argument("--gap", type=float, default=4.0)
    p.add_argument("--batch-size", type=int, default=16)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dry-run", action="store_true", help="print only (always on)")
    p.set_defaults(func=cmd_augment)

    p = sub.add_parser("train", help="train a scoring model on one sample set")
    p.add_argument("--prepared", required=True)
    p.add_argument("--sampleset", required=True)
    p.add_argument("--method", default="triplet", help="triplet or pair")
    p.add_argument("--gap", type=float, default=4.0)
    p.add_argument("--config", default=None, help="training config file")
    _add_option_flags(p, TRAIN_OPTIONS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="model output (JSON)")
    p.add_argument("--log", default=None, help="training log CSV")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("score", help="score test rows with a trained model")
    p.add_argument("--prepared", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--sampleset", required=True, help="manifest providing pools and test rows")
    p.add_argument("--test", default=None, help="JSON list of row ids (default: manifest test rows)")
    p.add_argument("--gap", type=float, default=4.0)
    _add_option_flags(p, INFER_OPTIONS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="scores CSV")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("eval", help="metrics from a scores CSV")
    p.add_argument("--scores", required=True)
    p.add_argument("--threshold", type=float, default=12.0)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("experiment", help="run a benchmark study end to end")
    p.add_argument("--id", type=int, required=True, choices=(1, 2, 3))
    p.add_argument("--dataset", required=True, help="nslkdd, cicids2018 or toniot")
    p.add_argument("--methods", default="triplet,pair")
    p.add_argument("--sample-sets", type=int, default=5)
    p.add_argument("--labelled-counts", default="30,60,120", help="experiment 2 sweep")
    p.add_argument("--percents", default="2,5,10", help="experiment 3 sweep")
    p.add_argument("--gap", type=float, default=4.0)
    p.add_argument("--config", default=None, help="training/inference config file")
    _add_option_flags(p, TRAIN_OPTIONS + INFER_OPTIONS)
    p.add_argument("--data-dir", default="data", help="directory holding the dataset files")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("extract", help="sample a class-balanced subset from raw CSVs")
    p.add_argument("--inputs", nargs="+", required=True)
    p.add_argument("--schema", required=True, help="schema YAML path or bundled name")
    p.add_argument("--normals", type=int, required=True)
    p.add_argument("--anomalies", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("infer-schema", help="draft a schema YAML from a CSV")
    p.add_argument("--data", required=True)
    p.add_argument("--label-column", required=True)
    p.add_argument("--positive", default=None, help="comma-separated label values mapping to 1")
    p.add_argument("--negative", default=None, help="comma-separated label values mapping to 0")
    p.add_argument("--drop", default=None, help="comma-separated columns to drop")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_infer_schema)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    except (ValueError, OSError, RuntimeError, KeyError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
