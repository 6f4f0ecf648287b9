"""Few-shot weakly-supervised anomaly detection over tabular flow and
telemetry records.

The pipeline: encode and min-max normalize a labelled CSV (``ingest``),
carve disjoint contaminated sample sets (``sampling``), compose ordinal
tuple batches from the tiny labelled anomaly pool (``augmentation``), train
a shared-weight scoring network by absolute-error ordinal regression
(``model``, ``trainer``), score test records against random references
(``inference``), and report AUROC/TPR/FPR (``evaluation``). ``experiments``
orchestrates the benchmark studies and ``cli`` exposes everything as the
``fswad`` command.
"""

from .augmentation import (
    AugmentedBatch,
    AugmentedInstance,
    OrdinalLabelScheme,
    enumerate_combinations,
    label_of_combination,
    sample_batch,
)
from .evaluation import EvaluationReport, aggregate, auroc, confusion
from .inference import InferenceConfig, classify, midpoint_threshold, score_dataset, score_sample
from .ingest import (
    ColumnSpec,
    EncodedDataset,
    FeatureSchema,
    NormalizationStats,
    apply_normalize,
    encode,
    fit_normalize,
    infer_schema,
    load_table,
)
from .model import ScoringModel, TupleScore, backward, load_model, loss, objective, save_model
from .sampling import SampleSet, SampleSetSpec, build_sample_sets, split_train_test
from .seeds import derive_seed
from .trainer import TrainConfig, TrainLog, train, update_step
from .experiments import (
    ExperimentConfig,
    ExperimentResult,
    base_sample_spec,
    run_experiment,
    vary_anomaly_percent,
)

__version__ = "0.1.0"

__all__ = [
    "AugmentedBatch",
    "AugmentedInstance",
    "ColumnSpec",
    "EncodedDataset",
    "EvaluationReport",
    "ExperimentConfig",
    "ExperimentResult",
    "FeatureSchema",
    "InferenceConfig",
    "NormalizationStats",
    "OrdinalLabelScheme",
    "SampleSet",
    "SampleSetSpec",
    "ScoringModel",
    "TrainConfig",
    "TrainLog",
    "TupleScore",
    "aggregate",
    "apply_normalize",
    "auroc",
    "backward",
    "base_sample_spec",
    "build_sample_sets",
    "classify",
    "confusion",
    "derive_seed",
    "encode",
    "enumerate_combinations",
    "fit_normalize",
    "infer_schema",
    "label_of_combination",
    "load_model",
    "load_table",
    "loss",
    "midpoint_threshold",
    "objective",
    "run_experiment",
    "sample_batch",
    "save_model",
    "score_dataset",
    "score_sample",
    "split_train_test",
    "train",
    "update_step",
    "vary_anomaly_percent",
]
