"""
Subcommand implementations. Each validates its flags first, then runs, then writes outputs atomically.
"""

from __future__ import annotations

import argparse
from pathlib import Path
from typing import Any, Dict, Optional

import pandas as pd

from classifiers.adaboost import HOLDOUT_ROUNDS, RANDOM_SPLIT_ROUNDS
from classifiers.base import Family
from classifiers.serialization import load_model, save_model
from classifiers.training import make_config, train_model
from config.factory import settings
from core.exceptions import ValidationError
from core.models.features import Representation
from core.services.dataset_io import count_by_subject, load_dataset, save_dataset
from core.services.evaluation import (
    RandomSplit,
    SubjectHoldout,
    load_report,
    roc_curve,
    run_protocol,
    save_report,
    save_roc,
)
from core.services.experiment_service import ReproduceConfig, experiment_service
from core.services.features import featurize, load_feature_table, save_feature_table
from core.services.preprocess import PreprocessConfig, preprocess_dataset
from core.storage import atomic_write_text
from core.validators import ConfigValidator, InputValidator
from syndata.generator import generate_dataset
from syndata.templates import builtin_template


def _rep(value: str) -> Representation:
    try:
        return Representation.parse(value)
    except ValueError as e:
        raise ValidationError(str(e))


def _family(value: str) -> Family:
    try:
        return Family.parse(value)
    except ValueError as e:
        raise ValidationError(str(e))


def _output_path(value: str, flag: str) -> Path:
    if not value:
        raise ValidationError(f"{flag} is required")
    path = Path(value)
    if path.exists() and path.is_dir():
        raise ValidationError(f"{flag} {value} is a directory")
    return path


def _distinct_paths(src: str, dst: Path) -> None:
    if Path(src).resolve() == dst.resolve():
        raise ValidationError("output path must differ from the input path")


def cmd_generate(args: argparse.Namespace) -> Dict[str, Any]:
    exercise = InputValidator.validate_exercise_name(args.exercise)
    n_subjects = InputValidator.validate_positive_int(args.subjects, "--subjects")
    pos = InputValidator.validate_subject_counts(InputValidator.parse_int_list(args.pos, "--pos"), n_subjects, "--pos")
    neg = InputValidator.validate_subject_counts(InputValidator.parse_int_list(args.neg, "--neg"), n_subjects, "--neg")
    out = _output_path(args.out, "--out")

    dataset = generate_dataset(builtin_template(exercise), n_subjects, pos, neg, base_seed=args.seed)
    save_dataset(dataset, out)
    counts = count_by_subject(dataset)
    return {
        "command": "generate",
        "out": str(out),
        "samples": len(dataset),
        "good": int(counts.loc["good"].sum()),
        "bad": int(counts.loc["bad"].sum()),
    }


def cmd_preprocess(args: argparse.Namespace) -> Dict[str, Any]:
    frames = InputValidator.validate_positive_int(args.frames, "--frames")
    lo, hi = InputValidator.validate_scale_range(args.scale_lo, args.scale_hi)
    cfg = ConfigValidator.build_config(PreprocessConfig, target_frames=frames, scale_lo=lo, scale_hi=hi,
                                       per_axis=bool(args.per_axis_scaling))
    out = _output_path(args.out, "--out")
    _distinct_paths(args.input, out)

    prepared = preprocess_dataset(load_dataset(args.input), cfg)
    save_dataset(prepared, out)
    return {"command": "preprocess", "out": str(out), "samples": len(prepared), "frames": frames}


def cmd_featurize(args: argparse.Namespace) -> Dict[str, Any]:
    rep = _rep(args.rep)
    out = _output_path(args.out, "--out")
    _distinct_paths(args.input, out)

    table = featurize(load_dataset(args.input), rep)
    save_feature_table(table, out)
    return {"command": "featurize", "out": str(out), "samples": len(table), "dimension": table.dimension,
            "representation": rep.value}


def _training_overrides(args: argparse.Namespace) -> Dict[str, Any]:
    """Only flags that were given; make_config rejects options the family does not take"""
    overrides: Dict[str, Any] = {
        "rounds": args.rounds,
        "nu": args.nu,
        "lam": args.lam,
        "epochs": args.epochs,
        "learning_rate": args.learning_rate,
    }
    if args.hidden is not None:
        overrides["hidden_sizes"] = tuple(InputValidator.parse_int_list(args.hidden, "--hidden"))
    return {k: v for k, v in overrides.items() if v is not None}


def cmd_train(args: argparse.Namespace) -> Dict[str, Any]:
    rep = _rep(args.rep)
    family = _family(args.model)
    frames = InputValidator.validate_positive_int(args.frames, "--frames")
    if family is Family.DTW and rep.is_frequency:
        raise ValidationError(f"dtw needs a time-domain representation, got {rep.value}")
    config = make_config(family, _training_overrides(args), seed=args.seed)
    out = _output_path(args.out, "--out")
    _distinct_paths(args.features, out)

    table = load_feature_table(args.features, rep, n_frames=frames)
    model = train_model(family, table, config)
    save_model(model, out)
    return {"command": "train", "out": str(out), "family": family.value, "representation": rep.value,
            "samples": len(table), "dimension": model.dimension}


def cmd_predict(args: argparse.Namespace) -> Dict[str, Any]:
    out = _output_path(args.out, "--out")
    _distinct_paths(args.features, out)

    model = load_model(args.model)
    table = load_feature_table(args.features, model.rep)
    predictions, scores = model.predict_table(table)
    df = pd.DataFrame({
        "subject_id": table.subject_ids,
        "label": ["good" if y > 0 else "bad" for y in table.labels],
        "score": scores,
        "prediction": ["good" if p > 0 else "bad" for p in predictions],
    })
    atomic_write_text(out, df.to_csv(index=False, lineterminator="\n"))
    return {"command": "predict", "out": str(out), "samples": len(table),
            "accuracy": float((predictions == table.labels).mean())}


def _split_spec(protocol: str, seed: int):
    kind, value = InputValidator.parse_protocol(protocol)
    if kind == "holdout":
        train, test = value
        return SubjectHoldout(frozenset(train), frozenset(test))
    return RandomSplit(value, seed)


def cmd_eval(args: argparse.Namespace) -> Dict[str, Any]:
    rep = _rep(args.rep)
    family = _family(args.model)
    spec = _split_spec(args.protocol, args.seed)
    holdout = isinstance(spec, SubjectHoldout)
    if args.runs is None:
        runs = 1 if holdout else 51
    else:
        runs = InputValidator.validate_positive_int(args.runs, "--runs")
    if holdout and runs != 1:
        raise ValidationError(f"holdout protocol is deterministic and forces --runs 1, got --runs {runs}")
    if family is Family.DTW and rep.is_frequency:
        raise ValidationError(f"dtw needs a time-domain representation, got {rep.value}")

    overrides: Optional[Dict[str, Any]] = None
    if family is Family.ADABOOST:
        rounds = args.rounds if args.rounds is not None else (HOLDOUT_ROUNDS if holdout else RANDOM_SPLIT_ROUNDS)
        overrides = {"rounds": InputValidator.validate_positive_int(rounds, "--rounds")}
    elif args.rounds is not None:
        raise ValidationError("--rounds only applies to adaboost")
    out = _output_path(args.out, "--out")
    roc_out = _output_path(args.roc, "--roc") if args.roc else None
    _distinct_paths(args.data, out)

    dataset = load_dataset(args.data)
    report = run_protocol(dataset, rep, family, spec, n_runs=runs, base_seed=args.seed,
                          config_overrides=overrides)
    save_report(report, out)
    if roc_out is not None:
        save_roc(roc_curve(report.runs), roc_out)
    if args.record or settings.FEATURES.get("run_history", False):
        from db.repo import save_protocol_result

        save_protocol_result(report)
    return {
        "command": "eval",
        "out": str(out),
        "protocol": report.protocol,
        "family": report.family,
        "representation": report.representation,
        "runs": report.n_runs,
        "mean_accuracy": report.mean_accuracy,
        "mean_tpr": report.mean_tpr,
        "mean_fpr": report.mean_fpr,
    }


def cmd_roc(args: argparse.Namespace) -> Dict[str, Any]:
    out = _output_path(args.out, "--out")
    _distinct_paths(args.report, out)
    report = load_report(args.report)
    curve = roc_curve(report.runs)
    save_roc(curve, out)
    return {"command": "roc", "out": str(out), "run_index": curve.run_index, "points": len(curve.points)}


def cmd_reproduce(args: argparse.Namespace) -> Dict[str, Any]:
    values: Dict[str, Any] = {"seed": args.seed, "include_svdd": not args.no_one_class}
    values["workers"] = (InputValidator.validate_positive_int(args.workers, "--workers")
                         if args.workers is not None else settings.workers_for_reproduce())
    if args.runs is not None:
        values["random_runs"] = InputValidator.validate_positive_int(args.runs, "--runs")
    if args.rounds is not None:
        values["random_rounds"] = InputValidator.validate_positive_int(args.rounds, "--rounds")
    cfg = ConfigValidator.build_config(ReproduceConfig, **values)
    if not args.out:
        raise ValidationError("--out is required")

    reports = experiment_service.reproduce(
        args.out, cfg, record=args.record or settings.FEATURES.get("run_history", False)
    )
    return {
        "command": "reproduce",
        "out": str(args.out),
        "seed": cfg.seed,
        "cells": len(reports),
    }


def cmd_history(args: argparse.Namespace) -> Any:
    from db.repo import clear_history, get_recent_experiments

    limit = InputValidator.validate_positive_int(args.limit, "--limit")
    if args.clear:
        clear_history()
        return {"command": "history", "cleared": True}
    return get_recent_experiments(limit)
