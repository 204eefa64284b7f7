"""
Experiment service - the full reproduction grid on synthetic Blast-Off data
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, model_validator

from classifiers.adaboost import HOLDOUT_ROUNDS, RANDOM_SPLIT_ROUNDS
from classifiers.base import Family
from syndata.generator import DEFAULT_NEGATIVE_COUNTS, DEFAULT_POSITIVE_COUNTS, generate_dataset
from syndata.templates import builtin_template

from ..exceptions import EvaluationError, ExerciseQualityError
from ..logging import logger
from ..models.features import FeatureTable, Representation
from ..storage import staged_directory
from .dataset_io import count_by_subject
from .evaluation import (
    EvalReport,
    RandomSplit,
    RunResult,
    SplitSpec,
    SubjectHoldout,
    build_report,
    evaluate_run,
    report_to_json,
    roc_curve,
    roc_to_csv,
)
from .features import featurize
from .preprocess import PreprocessConfig, preprocess_dataset

SYNTHETIC_HEADER = "# synthetic data - not a recorded patient dataset"
TABLE_ROWS = (Family.SVM, Family.NN, Family.MNN, Family.ADABOOST, Family.DTW)
SUPPLEMENTARY_ROWS = (Family.SVDD,)
REPRESENTATIONS = (
    Representation.JOINT_TIME,
    Representation.ANGLE_TIME,
    Representation.JOINT_FREQ,
    Representation.ANGLE_FREQ,
)
EMPTY_CELL = "-"


class ReproduceConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    seed: int = 42
    exercise: str = "Blast-Off"
    random_train: int = Field(default=80, ge=1)
    random_runs: int = Field(default=51, ge=1)
    random_rounds: int = Field(default=RANDOM_SPLIT_ROUNDS, ge=1)
    holdout_train: Tuple[int, ...] = (3, 4, 5)
    holdout_test: Tuple[int, ...] = (1, 2)
    holdout_rounds: int = Field(default=HOLDOUT_ROUNDS, ge=1)
    pos_per_subject: Tuple[int, ...] = DEFAULT_POSITIVE_COUNTS
    neg_per_subject: Tuple[int, ...] = DEFAULT_NEGATIVE_COUNTS
    include_svdd: bool = True
    workers: int = Field(default=1, ge=1)

    @model_validator(mode="after")
    def _check_subjects(self):
        if len(self.pos_per_subject) != len(self.neg_per_subject):
            raise ValueError("positive and negative counts must list the same subjects")
        if set(self.holdout_train) & set(self.holdout_test):
            raise ValueError("holdout train and test subjects overlap")
        return self


@dataclass(frozen=True)
class Protocol:
    name: str                 # "random" / "holdout"
    spec: SplitSpec
    runs: int
    adaboost_rounds: int


@contextmanager
def _stage(name: str):
    start = time.time()
    logger.log_stage_start(name)
    try:
        yield
    except ExerciseQualityError as e:
        e.details.setdefault("stage", name)
        logger.log_stage_error(name, e)
        raise
    except Exception as e:
        logger.log_stage_error(name, e)
        raise EvaluationError(f"stage {name} failed: {e}", details={"stage": name})
    logger.log_stage_complete(name, time.time() - start)


# feature tables of the current reproduction, installed once per worker process
_TABLES: Dict[Representation, FeatureTable] = {}


def _install_tables(tables: Dict[Representation, FeatureTable]) -> None:
    _TABLES.clear()
    _TABLES.update(tables)


def _overrides(protocol: Protocol, family: Family) -> Optional[dict]:
    return {"rounds": protocol.adaboost_rounds} if family is Family.ADABOOST else None


def _run_one(job: Tuple[Protocol, Family, Representation, int, int]) -> Tuple[RunResult, float]:
    protocol, family, rep, run_index, seed = job
    start = time.time()
    run = evaluate_run(_TABLES[rep], family, protocol.spec, run_index, seed, _overrides(protocol, family))
    return run, time.time() - start


def cell_name(protocol: str, family: Family, rep: Representation) -> str:
    return f"{protocol}_{family.value}_{rep.value}"


def format_accuracy(report: Optional[EvalReport]) -> str:
    return EMPTY_CELL if report is None else f"{100.0 * report.mean_accuracy:.2f}"


def accuracy_table(protocol: Protocol, reports: Dict[Tuple[Family, Representation], EvalReport],
                   families, seed: int) -> str:
    """Percent accuracy, classifiers as rows and representations as columns"""
    rows = [
        [family.value] + [format_accuracy(reports.get((family, rep))) for rep in REPRESENTATIONS]
        for family in families
    ]
    df = pd.DataFrame(rows, columns=["classifier"] + [rep.value for rep in REPRESENTATIONS])
    header = (
        f"{SYNTHETIC_HEADER}\n"
        f"# protocol: {protocol.spec.label}, runs: {protocol.runs}, adaboost rounds: {protocol.adaboost_rounds}, "
        f"seed: {seed}\n"
    )
    return header + df.to_csv(index=False, lineterminator="\n")


class ExperimentService:
    """Runs the classifier x representation grid under both evaluation protocols"""

    def __init__(self):
        self.logger = logger

    def protocols(self, cfg: ReproduceConfig) -> List[Protocol]:
        return [
            Protocol(name="random", spec=RandomSplit(cfg.random_train, cfg.seed),
                     runs=cfg.random_runs, adaboost_rounds=cfg.random_rounds),
            Protocol(name="holdout", spec=SubjectHoldout(frozenset(cfg.holdout_train), frozenset(cfg.holdout_test)),
                     runs=1, adaboost_rounds=cfg.holdout_rounds),
        ]

    def grid(self, cfg: ReproduceConfig) -> List[Tuple[Family, Representation]]:
        families = TABLE_ROWS + (SUPPLEMENTARY_ROWS if cfg.include_svdd else ())
        return [
            (family, rep)
            for family in families
            for rep in REPRESENTATIONS
            if not (family is Family.DTW and rep.is_frequency)
        ]

    def reproduce(self, out_dir, cfg: Optional[ReproduceConfig] = None,
                  record: bool = False, db_url: Optional[str] = None) -> Dict[str, EvalReport]:
        """
        Generate, preprocess and featurize the synthetic dataset, evaluate every grid cell
        under both protocols and publish tables, reports and ROC curves into ``out_dir``.

        Returns the reports keyed by cell name.
        """
        cfg = cfg or ReproduceConfig()
        start = time.time()
        self.logger.log_system_event("reproduce_start", seed=cfg.seed, workers=cfg.workers, out_dir=str(out_dir))

        with staged_directory(out_dir) as staging:
            with _stage("generate"):
                raw = generate_dataset(
                    builtin_template(cfg.exercise),
                    n_subjects=len(cfg.pos_per_subject),
                    pos_per_subject=cfg.pos_per_subject,
                    neg_per_subject=cfg.neg_per_subject,
                    base_seed=cfg.seed,
                )
            with _stage("preprocess"):
                prepared = preprocess_dataset(raw, PreprocessConfig())
            with _stage("featurize"):
                tables = {rep: featurize(prepared, rep) for rep in REPRESENTATIONS}

            protocols = self.protocols(cfg)
            cells = [(protocol, family, rep) for protocol in protocols for family, rep in self.grid(cfg)]
            # one job per run so the heaviest cells spread over every worker
            jobs = [
                (protocol, family, rep, run_index, cfg.seed)
                for protocol, family, rep in cells
                for run_index in range(protocol.runs)
            ]
            with _stage("evaluate"):
                if cfg.workers > 1:
                    with ProcessPoolExecutor(max_workers=cfg.workers, initializer=_install_tables,
                                             initargs=(tables,)) as pool:
                        outcomes = list(pool.map(_run_one, jobs))
                else:
                    _install_tables(tables)
                    try:
                        outcomes = [_run_one(job) for job in jobs]
                    finally:
                        _TABLES.clear()

                finished = iter(outcomes)
                cell_reports = []
                for protocol, family, rep in cells:
                    timed = [next(finished) for _ in range(protocol.runs)]
                    cell_reports.append(build_report(
                        protocol.spec, family, rep, cfg.seed, [run for run, _ in timed],
                        synthetic=True, duration_seconds=sum(seconds for _, seconds in timed),
                    ))

            reports: Dict[str, EvalReport] = {}
            with _stage("write"):
                (staging / "reports").mkdir()
                (staging / "roc").mkdir()
                counts = count_by_subject(raw)
                (staging / "dataset_counts.csv").write_text(
                    f"{SYNTHETIC_HEADER}\n" + counts.to_csv(lineterminator="\n"), encoding="utf-8"
                )

                for protocol in protocols:
                    by_cell = {}
                    for (p, family, rep), report in zip(cells, cell_reports):
                        if p.name != protocol.name:
                            continue
                        name = cell_name(protocol.name, family, rep)
                        by_cell[(family, rep)] = report
                        reports[name] = report
                        (staging / "reports" / f"{name}.json").write_text(report_to_json(report), encoding="utf-8")
                        (staging / "roc" / f"{name}.csv").write_text(roc_to_csv(roc_curve(report.runs)), encoding="utf-8")

                    (staging / f"table_{protocol.name}.csv").write_text(
                        accuracy_table(protocol, by_cell, TABLE_ROWS, cfg.seed), encoding="utf-8"
                    )
                    if cfg.include_svdd:
                        (staging / f"table_{protocol.name}_one_class.csv").write_text(
                            accuracy_table(protocol, by_cell, SUPPLEMENTARY_ROWS, cfg.seed), encoding="utf-8"
                        )

                summary = {
                    "seed": cfg.seed,
                    "exercise": cfg.exercise,
                    "synthetic": True,
                    "samples": len(raw),
                    "cells": {name: report.mean_accuracy for name, report in reports.items()},
                }
                (staging / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n",
                                                      encoding="utf-8")

        if record:
            with _stage("record"):
                from db.repo import save_protocol_result

                for report in reports.values():
                    save_protocol_result(report, db_url)

        self.logger.log_stage_complete("reproduce", time.time() - start, cells=len(reports))
        return reports


# Global service instance
experiment_service = ExperimentService()
