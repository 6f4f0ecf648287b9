"""Dataset ingestion: schema-driven CSV loading, categorical encoding and
min-max normalization.

A :class:`FeatureSchema` assigns every raw column a role (numeric, ordinal or
one-hot categorical, label, drop). Loading keeps the raw cells typed, encoding
expands categoricals into a dense numeric matrix with the binary ground truth
held apart, and normalization maps every feature into [0,1] with reusable
per-feature statistics.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd
import yaml

ROLE_NUMERIC = "numeric"
ROLE_ORDINAL = "ordinal_categorical"
ROLE_ONEHOT = "onehot_categorical"
ROLE_LABEL = "label"
ROLE_DROP = "drop"

_ROLES = (ROLE_NUMERIC, ROLE_ORDINAL, ROLE_ONEHOT, ROLE_LABEL, ROLE_DROP)

# Policies for CSV columns that the schema does not mention.
OTHER_ERROR = "error"
OTHER_NUMERIC = "numeric"
OTHER_DROP = "drop"


class SchemaError(ValueError):
    """Schema file is inconsistent or does not match the data."""


class DataError(ValueError):
    """A cell value cannot be interpreted under the schema."""


@dataclass(frozen=True)
class ColumnSpec:
    name: str
    role: str
    values: tuple[str, ...] = ()

    def __post_init__(self):
        if self.role not in _ROLES:
            raise SchemaError(f"column {self.name!r}: unknown role {self.role!r}")
        if self.role in (ROLE_ORDINAL, ROLE_ONEHOT) and len(self.values) < 2:
            raise SchemaError(
                f"column {self.name!r}: role {self.role} needs at least two declared values"
            )
        if len(set(self.values)) != len(self.values):
            raise SchemaError(f"column {self.name!r}: duplicate declared values")


@dataclass(frozen=True)
class FeatureSchema:
    """Ordered column roles plus the mapping from label text to anomaly=1.

    Either ``label_positive_values`` (these map to 1, the rest to 0) or
    ``label_negative_values`` (these map to 0, the rest to 1) must be given.
    ``other_columns`` controls CSV columns the schema does not list:
    ``error`` rejects them, ``numeric`` appends them as numeric features,
    ``drop`` discards them.
    """

    columns: tuple[ColumnSpec, ...]
    label_positive_values: frozenset[str] = frozenset()
    label_negative_values: frozenset[str] = frozenset()
    other_columns: str = OTHER_ERROR

    def __post_init__(self):
        names = [c.name for c in self.columns]
        if len(set(names)) != len(names):
            dupes = sorted({n for n in names if names.count(n) > 1})
            raise SchemaError(f"duplicated column names: {dupes}")
        labels = [c for c in self.columns if c.role == ROLE_LABEL]
        if len(labels) != 1:
            raise SchemaError(f"schema must declare exactly one label column, got {len(labels)}")
        if bool(self.label_positive_values) == bool(self.label_negative_values):
            raise SchemaError(
                "exactly one of label_positive_values / label_negative_values must be set"
            )
        if self.other_columns not in (OTHER_ERROR, OTHER_NUMERIC, OTHER_DROP):
            raise SchemaError(f"unknown other_columns policy {self.other_columns!r}")

    @property
    def label_column(self) -> ColumnSpec:
        return next(c for c in self.columns if c.role == ROLE_LABEL)

    def column(self, name: str) -> ColumnSpec:
        for c in self.columns:
            if c.name == name:
                return c
        raise KeyError(name)

    def label_value(self, text: str) -> int:
        if self.label_positive_values:
            return 1 if text in self.label_positive_values else 0
        if text in self.label_negative_values:
            return 0
        return 1

    def fingerprint(self) -> str:
        """Stable hash of the schema content, recorded in provenance."""
        payload = {
            "columns": [(c.name, c.role, list(c.values)) for c in self.columns],
            "positive": sorted(self.label_positive_values),
            "negative": sorted(self.label_negative_values),
            "other": self.other_columns,
        }
        blob = json.dumps(payload, sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]

    @classmethod
    def from_yaml(cls, path: str | Path) -> "FeatureSchema":
        with open(path, "r", encoding="utf-8") as fh:
            raw = yaml.safe_load(fh)
        if not isinstance(raw, dict) or "columns" not in raw:
            raise SchemaError(f"{path}: expected a mapping with a 'columns' list")
        cols = []
        for entry in raw["columns"]:
            values = tuple(str(v) for v in entry.get("values", ()))
            cols.append(ColumnSpec(str(entry["name"]), str(entry["role"]), values))
        return cls(
            columns=tuple(cols),
            label_positive_values=frozenset(str(v) for v in raw.get("label_positive_values", ())),
            label_negative_values=frozenset(str(v) for v in raw.get("label_negative_values", ())),
            other_columns=str(raw.get("other_columns", OTHER_ERROR)),
        )

    def to_yaml(self, path: str | Path) -> None:
        doc: dict = {
            "columns": [
                {"name": c.name, "role": c.role, **({"values": list(c.values)} if c.values else {})}
                for c in self.columns
            ]
        }
        if self.label_positive_values:
            doc["label_positive_values"] = sorted(self.label_positive_values)
        if self.label_negative_values:
            doc["label_negative_values"] = sorted(self.label_negative_values)
        if self.other_columns != OTHER_ERROR:
            doc["other_columns"] = self.other_columns
        with open(path, "w", encoding="utf-8") as fh:
            yaml.safe_dump(doc, fh, sort_keys=False)


@dataclass
class RawTable:
    """Typed cells after loading: numeric columns as float arrays, categorical
    and label columns as string arrays. Dropped columns are already gone."""

    specs: list[ColumnSpec]
    cells: dict[str, np.ndarray]
    source: str
    schema_hash: str

    @property
    def n_rows(self) -> int:
        if not self.specs:
            return 0
        return len(self.cells[self.specs[0].name])


@dataclass
class EncodedDataset:
    """Dense feature matrix with the binary ground truth held apart."""

    matrix: np.ndarray
    labels: np.ndarray
    feature_names: tuple[str, ...]
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=np.float64)
        self.labels = np.asarray(self.labels, dtype=np.int8)
        if self.matrix.ndim != 2:
            raise ValueError("matrix must be 2-dimensional")
        if len(self.labels) != self.matrix.shape[0]:
            raise ValueError(
                f"labels length {len(self.labels)} != row count {self.matrix.shape[0]}"
            )
        if self.matrix.shape[1] != len(self.feature_names):
            raise ValueError("feature_names length does not match matrix width")

    @property
    def n_rows(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_features(self) -> int:
        return self.matrix.shape[1]

    def save(self, path: str | Path, stats: "NormalizationStats | None" = None) -> None:
        arrays = {
            "matrix": self.matrix,
            "labels": self.labels,
            "feature_names": np.asarray(self.feature_names, dtype=np.str_),
            "provenance": np.asarray(json.dumps(self.provenance)),
        }
        if stats is not None:
            arrays["norm_min"] = stats.mins
            arrays["norm_max"] = stats.maxs
        np.savez_compressed(path, **arrays)

    @classmethod
    def load(cls, path: str | Path) -> tuple["EncodedDataset", "NormalizationStats | None"]:
        with np.load(path, allow_pickle=False) as data:
            ds = cls(
                matrix=data["matrix"],
                labels=data["labels"],
                feature_names=tuple(str(n) for n in data["feature_names"]),
                provenance=json.loads(str(data["provenance"])),
            )
            stats = None
            if "norm_min" in data:
                stats = NormalizationStats(mins=data["norm_min"], maxs=data["norm_max"])
        return ds, stats


@dataclass
class NormalizationStats:
    """Per-feature min/max fitted on one dataset, reusable on held-out rows."""

    mins: np.ndarray
    maxs: np.ndarray

    def __post_init__(self):
        self.mins = np.asarray(self.mins, dtype=np.float64)
        self.maxs = np.asarray(self.maxs, dtype=np.float64)
        if self.mins.shape != self.maxs.shape or self.mins.ndim != 1:
            raise ValueError("mins/maxs must be 1-d arrays of equal length")
        if np.any(self.mins > self.maxs):
            raise ValueError("MIN(j) > MAX(j) for some feature")

    @property
    def n_features(self) -> int:
        return len(self.mins)


def load_table(path: str | Path, schema: FeatureSchema, headerless: bool = False) -> RawTable:
    """Read a CSV into typed columns under the schema.

    The header must contain every schema column (order-insensitive); with
    ``headerless=True`` the schema's declared order stands in for the header.
    Dropped-role columns are removed, missing numeric cells impute to 0, and
    unknown columns follow the schema's ``other_columns`` policy.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"dataset file not found: {path}")

    read_kwargs = dict(dtype=str, keep_default_na=False, skipinitialspace=True)
    if headerless:
        frame = pd.read_csv(path, header=None, **read_kwargs)
        if frame.shape[1] != len(schema.columns):
            raise SchemaError(
                f"{path}: headerless file has {frame.shape[1]} columns, "
                f"schema declares {len(schema.columns)}"
            )
        frame.columns = [c.name for c in schema.columns]
    else:
        frame = pd.read_csv(path, **read_kwargs)
        frame.columns = [str(c).strip() for c in frame.columns]

    declared = {c.name for c in schema.columns}
    present = set(frame.columns)
    # Dropping a column that is not there is a no-op; anything else must exist.
    missing = sorted(c.name for c in schema.columns if c.role != ROLE_DROP and c.name not in present)
    if missing:
        raise SchemaError(f"{path}: columns declared in schema but absent from header: {missing}")
    extra = [c for c in frame.columns if c not in declared]
    if extra and schema.other_columns == OTHER_ERROR:
        raise SchemaError(f"{path}: columns not declared in schema: {extra}")

    # Schema order first, then surviving extras in file order.
    specs = [c for c in schema.columns if c.role != ROLE_DROP]
    if schema.other_columns == OTHER_NUMERIC:
        specs += [ColumnSpec(name, ROLE_NUMERIC) for name in extra]

    cells: dict[str, np.ndarray] = {}
    for spec in specs:
        raw = frame[spec.name].to_numpy(dtype=object)
        if spec.role == ROLE_NUMERIC:
            cells[spec.name] = _parse_numeric(raw, spec.name)
        else:
            cells[spec.name] = np.asarray([str(v).strip() for v in raw], dtype=object)
    return RawTable(specs=specs, cells=cells, source=str(path), schema_hash=schema.fingerprint())


def _parse_numeric(raw: np.ndarray, name: str) -> np.ndarray:
    out = np.empty(len(raw), dtype=np.float64)
    for i, value in enumerate(raw):
        text = str(value).strip()
        if text == "":
            out[i] = 0.0  # missing cells impute to the post-normalization floor
            continue
        try:
            out[i] = float(text)
        except ValueError:
            raise DataError(f"column {name!r}, row {i}: unparseable numeric cell {text!r}") from None
    return out


def encode(table: RawTable, schema: FeatureSchema) -> EncodedDataset:
    """Expand categoricals and split off the binary label.

    One-hot columns expand to one binary feature per declared value, ordinal
    columns map a value to its 0-based rank, numeric columns pass through.
    Values are not yet normalized.
    """
    n_rows = table.n_rows
    blocks: list[np.ndarray] = []
    names: list[str] = []
    labels: np.ndarray | None = None

    for spec in table.specs:
        column = table.cells[spec.name]
        if spec.role == ROLE_NUMERIC:
            blocks.append(column.reshape(-1, 1))
            names.append(spec.name)
        elif spec.role == ROLE_ORDINAL:
            rank = {v: float(r) for r, v in enumerate(spec.values)}
            encoded = np.empty((n_rows, 1), dtype=np.float64)
            for i, v in enumerate(column):
                if v not in rank:
                    raise DataError(
                        f"column {spec.name!r}, row {i}: undeclared categorical value {v!r}"
                    )
                encoded[i, 0] = rank[v]
            blocks.append(encoded)
            names.append(spec.name)
        elif spec.role == ROLE_ONEHOT:
            index = {v: j for j, v in enumerate(spec.values)}
            encoded = np.zeros((n_rows, len(spec.values)), dtype=np.float64)
            for i, v in enumerate(column):
                if v not in index:
                    raise DataError(
                        f"column {spec.name!r}, row {i}: undeclared categorical value {v!r}"
                    )
                encoded[i, index[v]] = 1.0
            blocks.append(encoded)
            names.extend(f"{spec.name}={v}" for v in spec.values)
        elif spec.role == ROLE_LABEL:
            labels = np.fromiter(
                (schema.label_value(str(v)) for v in column), dtype=np.int8, count=n_rows
            )

    if labels is None:
        raise SchemaError("label column missing from table")
    matrix = np.hstack(blocks) if blocks else np.empty((n_rows, 0), dtype=np.float64)
    return EncodedDataset(
        matrix=matrix,
        labels=labels,
        feature_names=tuple(names),
        provenance={"source": table.source, "schema_hash": table.schema_hash},
    )


def fit_normalize(dataset: EncodedDataset) -> tuple[EncodedDataset, NormalizationStats]:
    """Min-max scale every feature into [0,1] and return the fitted stats.

    Constant features (MAX == MIN) map to 0 so dimensionality stays stable.
    """
    if dataset.n_rows == 0:
        raise ValueError("cannot fit normalization on an empty matrix")
    if not np.all(np.isfinite(dataset.matrix)):
        bad = np.argwhere(~np.isfinite(dataset.matrix))[0]
        raise DataError(
            f"non-finite input cell at row {bad[0]}, feature {dataset.feature_names[bad[1]]!r}"
        )
    mins = dataset.matrix.min(axis=0)
    maxs = dataset.matrix.max(axis=0)
    stats = NormalizationStats(mins=mins, maxs=maxs)
    return _transform(dataset, stats, clamp=False), stats


def apply_normalize(dataset: EncodedDataset, stats: NormalizationStats) -> EncodedDataset:
    """Normalize with previously fitted stats, clamping out-of-range values."""
    if dataset.n_features != stats.n_features:
        raise ValueError(
            f"stats cover {stats.n_features} features, dataset has {dataset.n_features}"
        )
    return _transform(dataset, stats, clamp=True)


def _transform(dataset: EncodedDataset, stats: NormalizationStats, clamp: bool) -> EncodedDataset:
    span = stats.maxs - stats.mins
    constant = span == 0
    safe_span = np.where(constant, 1.0, span)
    scaled = (dataset.matrix - stats.mins) / safe_span
    scaled[:, constant] = 0.0
    if clamp:
        np.clip(scaled, 0.0, 1.0, out=scaled)
    return EncodedDataset(
        matrix=scaled,
        labels=dataset.labels.copy(),
        feature_names=dataset.feature_names,
        provenance=dict(dataset.provenance),
    )


def infer_schema(
    path: str | Path,
    label_column: str,
    label_positive_values: tuple[str, ...] = (),
    label_negative_values: tuple[str, ...] = (),
    drop_columns: tuple[str, ...] = (),
    onehot_threshold: int = 64,
) -> FeatureSchema:
    """Draft a schema from a CSV: columns that fully parse as numbers become
    numeric, the rest one-hot with their observed values. The draft is meant
    to be reviewed and committed as a config file."""
    frame = pd.read_csv(path, dtype=str, keep_default_na=False, skipinitialspace=True)
    frame.columns = [str(c).strip() for c in frame.columns]
    if label_column not in frame.columns:
        raise SchemaError(f"{path}: label column {label_column!r} not found")
    cols: list[ColumnSpec] = []
    for name in frame.columns:
        if name == label_column:
            cols.append(ColumnSpec(name, ROLE_LABEL))
            continue
        if name in drop_columns:
            cols.append(ColumnSpec(name, ROLE_DROP))
            continue
        values = frame[name].to_numpy(dtype=object)
        if _all_numeric(values):
            cols.append(ColumnSpec(name, ROLE_NUMERIC))
        else:
            distinct = sorted({str(v).strip() for v in values})
            if len(distinct) > onehot_threshold:
                raise SchemaError(
                    f"column {name!r}: {len(distinct)} distinct non-numeric values; "
                    "declare its role explicitly"
                )
            cols.append(ColumnSpec(name, ROLE_ONEHOT, tuple(distinct)))
    return FeatureSchema(
        columns=tuple(cols),
        label_positive_values=frozenset(label_positive_values),
        label_negative_values=frozenset(label_negative_values),
    )


def _all_numeric(values: np.ndarray) -> bool:
    for v in values:
        text = str(v).strip()
        if text == "":
            continue
        try:
            float(text)
        except ValueError:
            return False
    return True


def bundled_schema_path(dataset: str) -> Path:
    """Path of a schema shipped with the package (nslkdd, cicids2018, toniot)."""
    here = Path(__file__).parent / "schemas"
    candidate = here / f"{dataset}.yaml"
    if not candidate.is_file():
        known = sorted(p.stem for p in here.glob("*.yaml"))
        raise FileNotFoundError(f"no bundled schema {dataset!r}; known: {known}")
    return candidate
