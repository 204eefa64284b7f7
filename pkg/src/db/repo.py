from typing import Optional

import pandas as pd
from sqlalchemy import delete, desc, func, select
from sqlalchemy.exc import SQLAlchemyError

from core.exceptions import DatabaseError, ValidationError
from core.logging import logger
from core.services.evaluation import EvalReport

from .db import get_db
from .models import Experiment, RunRecord

HISTORY_COLUMNS = [
    "id", "created_at", "protocol", "family", "representation",
    "base_seed", "n_runs", "mean_accuracy", "mean_tpr", "mean_fpr", "synthetic",
]


def save_protocol_result(report: EvalReport, url: Optional[str] = None) -> int:
    """Persist one protocol report with all its runs; returns the experiment id"""
    if not isinstance(report, EvalReport):
        raise ValidationError("report must be an EvalReport")
    try:
        with get_db(url) as s:
            experiment = Experiment(
                protocol=report.protocol,
                family=report.family,
                representation=report.representation,
                base_seed=report.base_seed,
                n_runs=report.n_runs,
                mean_accuracy=report.mean_accuracy,
                mean_tpr=report.mean_tpr,
                mean_fpr=report.mean_fpr,
                synthetic=report.synthetic,
            )
            for run in report.runs:
                m = run.metrics
                experiment.runs.append(RunRecord(
                    run_index=run.run_index, seed=run.seed, accuracy=m.accuracy,
                    tpr=m.tpr, fpr=m.fpr, tp=m.tp, fp=m.fp, tn=m.tn, fn=m.fn,
                ))
            s.add(experiment)
            s.flush()
            experiment_id = experiment.id
        logger.log_database_operation("save_protocol_result", "experiments", True)
        return experiment_id
    except SQLAlchemyError as e:
        logger.log_database_operation("save_protocol_result", "experiments", False, e)
        raise DatabaseError(f"Failed to save protocol result: {e}")


def get_recent_experiments(limit: int = 20, url: Optional[str] = None) -> pd.DataFrame:
    """Most recent experiments first"""
    try:
        with get_db(url) as s:
            rows = s.scalars(
                select(Experiment).order_by(desc(Experiment.created_at), desc(Experiment.id)).limit(limit)
            ).all()
            data = [{col: getattr(row, col) for col in HISTORY_COLUMNS} for row in rows]
        logger.log_database_operation("get_recent_experiments", "experiments", True)
        return pd.DataFrame(data, columns=HISTORY_COLUMNS)
    except SQLAlchemyError as e:
        logger.log_database_operation("get_recent_experiments", "experiments", False, e)
        raise DatabaseError(f"Failed to read run history: {e}")


def get_runs(experiment_id: int, url: Optional[str] = None) -> pd.DataFrame:
    try:
        with get_db(url) as s:
            rows = s.scalars(
                select(RunRecord).where(RunRecord.experiment_id == experiment_id).order_by(RunRecord.run_index)
            ).all()
            data = [
                {"run_index": r.run_index, "seed": r.seed, "accuracy": r.accuracy, "tpr": r.tpr, "fpr": r.fpr,
                 "tp": r.tp, "fp": r.fp, "tn": r.tn, "fn": r.fn}
                for r in rows
            ]
        return pd.DataFrame(data, columns=["run_index", "seed", "accuracy", "tpr", "fpr", "tp", "fp", "tn", "fn"])
    except SQLAlchemyError as e:
        logger.log_database_operation("get_runs", "runs", False, e)
        raise DatabaseError(f"Failed to read runs of experiment {experiment_id}: {e}")


def count_experiments(url: Optional[str] = None) -> int:
    with get_db(url) as s:
        return int(s.scalar(select(func.count()).select_from(Experiment)))


def clear_history(url: Optional[str] = None) -> None:
    """Delete every stored experiment and run"""
    try:
        with get_db(url) as s:
            s.execute(delete(RunRecord))
            s.execute(delete(Experiment))
        logger.log_database_operation("clear_history", "experiments", True)
    except SQLAlchemyError as e:
        logger.log_database_operation("clear_history", "experiments", False, e)
        raise DatabaseError(f"Failed to clear run history: {e}")
