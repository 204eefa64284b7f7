"""
Evaluation service - splits, metrics, repeated-run protocols and ROC curves
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from pathlib import Path
from typing import FrozenSet, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel, Field

from classifiers.base import Family
from classifiers.training import make_config, train_model

from ..exceptions import DatasetError, EvaluationError, ValidationError
from ..logging import logger
from ..models.features import FeatureTable, Representation
from ..models.skeleton import Dataset, Label
from ..storage import atomic_write_text
from .features import featurize


@dataclass(frozen=True)
class SubjectHoldout:
    train_subjects: FrozenSet[int]
    test_subjects: FrozenSet[int]

    def __post_init__(self):
        object.__setattr__(self, "train_subjects", frozenset(self.train_subjects))
        object.__setattr__(self, "test_subjects", frozenset(self.test_subjects))

    @property
    def label(self) -> str:
        return "holdout:{}/{}".format(
            ",".join(str(s) for s in sorted(self.train_subjects)),
            ",".join(str(s) for s in sorted(self.test_subjects)),
        )


@dataclass(frozen=True)
class RandomSplit:
    n_train: int
    seed: int = 0

    @property
    def label(self) -> str:
        return f"random:{self.n_train}"


SplitSpec = Union[SubjectHoldout, RandomSplit]


def split_indices(subject_ids: Sequence[int], spec: SplitSpec) -> Tuple[np.ndarray, np.ndarray]:
    """Train and test row indices, each in ascending order"""
    subject_ids = np.asarray(subject_ids, dtype=np.int64)
    n = subject_ids.shape[0]

    if isinstance(spec, SubjectHoldout):
        if not spec.train_subjects or not spec.test_subjects:
            raise EvaluationError("holdout needs non-empty train and test subject sets")
        overlap = spec.train_subjects & spec.test_subjects
        if overlap:
            raise EvaluationError(f"holdout train and test subjects overlap: {sorted(overlap)}")
        present = set(subject_ids.tolist())
        unknown = sorted((spec.train_subjects | spec.test_subjects) - present)
        if unknown:
            raise EvaluationError(f"unknown subject id(s) {unknown}; dataset has {sorted(present)}")
        unassigned = sorted(present - spec.train_subjects - spec.test_subjects)
        if unassigned:
            raise EvaluationError(f"subject(s) {unassigned} are in neither the train nor the test set")
        in_train = np.isin(subject_ids, list(spec.train_subjects))
        return np.flatnonzero(in_train), np.flatnonzero(~in_train)

    if isinstance(spec, RandomSplit):
        if not 1 <= spec.n_train < n:
            raise EvaluationError(f"n_train must be in [1, {n - 1}] for {n} samples, got {spec.n_train}")
        rng = np.random.default_rng(spec.seed)
        train = np.sort(rng.choice(n, size=spec.n_train, replace=False))
        mask = np.zeros(n, dtype=bool)
        mask[train] = True
        return train, np.flatnonzero(~mask)

    raise EvaluationError(f"unknown split spec {spec!r}")


def split(dataset: Dataset, spec: SplitSpec) -> Tuple[Dataset, Dataset]:
    train, test = split_indices([s.subject_id for s in dataset], spec)
    return dataset.subset(train), dataset.subset(test)


class Metrics(BaseModel):
    accuracy: float
    tpr: Optional[float] = None
    fpr: Optional[float] = None
    tp: int
    fp: int
    tn: int
    fn: int


class RunResult(BaseModel):
    run_index: int
    seed: int
    metrics: Metrics
    scores: List[float]
    labels: List[int]


class EvalReport(BaseModel):
    protocol: str
    family: str
    representation: str
    base_seed: int
    n_runs: int
    runs: List[RunResult]
    mean_accuracy: float
    mean_tpr: Optional[float] = None
    mean_fpr: Optional[float] = None
    synthetic: bool = Field(default=False, description="data came from the motion generator")


@dataclass(frozen=True)
class RocPoint:
    threshold: float
    fpr: float
    tpr: float


@dataclass(frozen=True)
class RocCurve:
    run_index: int
    points: Tuple[RocPoint, ...]


def _as_signs(values) -> np.ndarray:
    arr = np.array([int(v) for v in values], dtype=np.int64)
    if not np.isin(arr, (int(Label.GOOD), int(Label.BAD))).all():
        raise EvaluationError("labels and predictions must be good (+1) or bad (-1)")
    return arr


def compute_metrics(predictions, labels) -> Metrics:
    """Confusion counts with Good as the positive class; undefined rates stay None"""
    pred = _as_signs(predictions)
    true = _as_signs(labels)
    if pred.shape != true.shape:
        raise EvaluationError(f"{pred.shape[0]} predictions but {true.shape[0]} labels")
    if pred.shape[0] == 0:
        raise EvaluationError("no predictions to score")

    tp = int(np.sum((pred > 0) & (true > 0)))
    fp = int(np.sum((pred > 0) & (true < 0)))
    tn = int(np.sum((pred < 0) & (true < 0)))
    fn = int(np.sum((pred < 0) & (true > 0)))
    return Metrics(
        accuracy=(tp + tn) / (tp + fp + tn + fn),
        tpr=tp / (tp + fn) if tp + fn else None,
        fpr=fp / (fp + tn) if fp + tn else None,
        tp=tp, fp=fp, tn=tn, fn=fn,
    )


def _mean_present(values: List[Optional[float]]) -> Optional[float]:
    present = [v for v in values if v is not None]
    return float(np.mean(present)) if present else None


def aggregate(runs: List[RunResult]) -> Tuple[float, Optional[float], Optional[float]]:
    """Arithmetic means over runs (tpr/fpr over the runs where they are defined)"""
    return (
        float(np.mean([r.metrics.accuracy for r in runs])),
        _mean_present([r.metrics.tpr for r in runs]),
        _mean_present([r.metrics.fpr for r in runs]),
    )


def _check_protocol(spec: SplitSpec, n_runs: int) -> None:
    if n_runs < 1:
        raise ValidationError(f"runs must be positive, got {n_runs}")
    if isinstance(spec, SubjectHoldout) and n_runs != 1:
        raise ValidationError(f"subject holdout is deterministic; runs must be 1, got {n_runs}")


def evaluate_run(table: FeatureTable, family, spec: SplitSpec, run_index: int, base_seed: int = 0,
                 config_overrides: Optional[dict] = None) -> RunResult:
    """One train/test run; the split and the model both use seed base_seed + run_index"""
    family = Family(family)
    seed = base_seed + run_index
    run_spec = RandomSplit(spec.n_train, seed) if isinstance(spec, RandomSplit) else spec
    train_idx, test_idx = split_indices(table.subject_ids, run_spec)
    train, test = table.take(train_idx), table.take(test_idx)

    model = train_model(family, train, make_config(family, config_overrides, seed=seed))
    predictions, scores = model.predict_table(test)
    return RunResult(
        run_index=run_index,
        seed=seed,
        metrics=compute_metrics(predictions, test.labels),
        scores=[float(s) for s in scores],
        labels=[int(v) for v in test.labels],
    )


def build_report(spec: SplitSpec, family, rep: Representation, base_seed: int, runs: List[RunResult],
                 synthetic: bool = False, duration_seconds: float = 0.0) -> EvalReport:
    family = Family(family)
    mean_accuracy, mean_tpr, mean_fpr = aggregate(runs)
    logger.log_protocol_complete(spec.label, family.value, rep.value, len(runs), mean_accuracy, duration_seconds)
    return EvalReport(
        protocol=spec.label,
        family=family.value,
        representation=rep.value,
        base_seed=base_seed,
        n_runs=len(runs),
        runs=runs,
        mean_accuracy=mean_accuracy,
        mean_tpr=mean_tpr,
        mean_fpr=mean_fpr,
        synthetic=synthetic,
    )


def run_protocol(data: Union[Dataset, FeatureTable], rep: Representation, family, spec: SplitSpec,
                 n_runs: int = 1, base_seed: int = 0, config_overrides: Optional[dict] = None,
                 synthetic: bool = False) -> EvalReport:
    """
    Train and test ``n_runs`` times; run i uses seed base_seed + i for both the split and the model.
    """
    family = Family(family)
    _check_protocol(spec, n_runs)

    if isinstance(data, Dataset):
        table = featurize(data, rep)
    else:
        table = data
        if table.rep is not rep:
            raise EvaluationError(f"feature table is {table.rep.value}, expected {rep.value}")

    start = time.time()
    runs = [evaluate_run(table, family, spec, i, base_seed, config_overrides) for i in range(n_runs)]
    return build_report(spec, family, rep, base_seed, runs, synthetic, time.time() - start)


def median_run(results: List[RunResult]) -> RunResult:
    """Lower median by accuracy (stable for equal accuracies)"""
    if not results:
        raise EvaluationError("no runs to choose from")
    ordered = sorted(results, key=lambda r: r.metrics.accuracy)
    return ordered[(len(ordered) - 1) // 2]


def roc_points(scores, labels) -> Tuple[RocPoint, ...]:
    """
    One point per threshold in [+inf, distinct scores descending]; a sample counts as Good
    at threshold t when its score >= t.
    """
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels)
    n_pos = int(np.sum(labels > 0))
    n_neg = int(np.sum(labels < 0))
    if n_pos == 0 or n_neg == 0:
        raise EvaluationError("ROC needs both good and bad samples in the test set")

    order = np.argsort(-scores, kind="stable")
    sorted_scores = scores[order]
    tp = np.cumsum(labels[order] > 0)
    fp = np.cumsum(labels[order] < 0)
    # last index of every run of equal scores
    ends = np.flatnonzero(np.r_[sorted_scores[1:] != sorted_scores[:-1], True])

    points = [RocPoint(threshold=float("inf"), fpr=0.0, tpr=0.0)]
    for end in ends:
        points.append(RocPoint(
            threshold=float(sorted_scores[end]),
            fpr=float(fp[end]) / n_neg,
            tpr=float(tp[end]) / n_pos,
        ))
    return tuple(points)


def roc_curve(results: List[RunResult]) -> RocCurve:
    run = median_run(results)
    return RocCurve(run_index=run.run_index, points=roc_points(run.scores, run.labels))


def roc_to_csv(curve: RocCurve) -> str:
    df = pd.DataFrame(
        [(p.threshold, p.fpr, p.tpr) for p in curve.points],
        columns=["threshold", "fpr", "tpr"],
    )
    return df.to_csv(index=False, lineterminator="\n")


def save_roc(curve: RocCurve, path) -> Path:
    return atomic_write_text(path, roc_to_csv(curve))


def report_to_json(report: EvalReport) -> str:
    return report.model_dump_json(indent=2) + "\n"


def save_report(report: EvalReport, path) -> Path:
    return atomic_write_text(path, report_to_json(report))


def load_report(path) -> EvalReport:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except FileNotFoundError:
        raise DatasetError(f"report file not found: {path}")
    except OSError as e:
        raise DatasetError(f"cannot read report file {path}: {e}")
    try:
        return EvalReport.model_validate_json(text)
    except ValueError as e:
        raise DatasetError(f"malformed report {path}: {e}")
