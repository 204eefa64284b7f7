"""
Feature extraction: joint positions and joint angles, in the time domain and as orthonormal DCT-II spectra.
"""

from __future__ import annotations

import time
from pathlib import Path
from typing import Optional

import numpy as np
import pandas as pd
from scipy.fft import dct, idct

from ..exceptions import DatasetError, FeatureError
from ..logging import logger
from ..models.features import (
    ANGLE_CHANNELS,
    ANGLE_SET,
    FeatureTable,
    FeatureVector,
    Representation,
)
from ..models.skeleton import N_JOINTS, Dataset, SkeletonSample
from ..storage import atomic_write_text

RAY_EPS = 1e-9


def angle_between(a, b, c, triple: Optional[str] = None) -> float:
    """Angle at vertex ``b`` between rays b->a and b->c, in radians"""
    u = np.asarray(a, dtype=np.float64) - np.asarray(b, dtype=np.float64)
    v = np.asarray(c, dtype=np.float64) - np.asarray(b, dtype=np.float64)
    nu, nv = float(np.linalg.norm(u)), float(np.linalg.norm(v))
    if nu <= RAY_EPS or nv <= RAY_EPS:
        raise FeatureError(f"degenerate ray: coincident points in angle triple {triple or (tuple(a), tuple(b), tuple(c))}")
    cos = float(np.dot(u, v)) / (nu * nv)
    return float(np.arccos(min(1.0, max(-1.0, cos))))


def _frame_angles(frames: np.ndarray) -> np.ndarray:
    """(T, 20, 3) -> (T, 10) angles, vectorized over frames"""
    out = np.empty((frames.shape[0], ANGLE_CHANNELS), dtype=np.float64)
    for i, angle in enumerate(ANGLE_SET):
        vertex = frames[:, int(angle.vertex), :]
        u = frames[:, int(angle.a), :] - vertex
        v = frames[:, int(angle.c), :] - vertex
        nu = np.linalg.norm(u, axis=1)
        nv = np.linalg.norm(v, axis=1)
        bad = (nu <= RAY_EPS) | (nv <= RAY_EPS)
        if bad.any():
            frame = int(np.flatnonzero(bad)[0])
            raise FeatureError(
                f"degenerate ray in {angle.name} ({angle.a.name}, {angle.vertex.name}, {angle.c.name}) "
                f"at frame {frame}",
                details={"angle": angle.name, "frame": frame},
            )
        cos = np.sum(u * v, axis=1) / (nu * nv)
        out[:, i] = np.arccos(np.clip(cos, -1.0, 1.0))
    return out


def _check_frames(sample: SkeletonSample, expected_frames: Optional[int]) -> None:
    frames = sample.frames
    if frames.ndim != 3 or frames.shape[1:] != (N_JOINTS, 3):
        raise FeatureError(f"sample frames have shape {frames.shape}, expected (T, {N_JOINTS}, 3)")
    if expected_frames is not None and frames.shape[0] != expected_frames:
        raise FeatureError(
            f"sample has {frames.shape[0]} frames, expected {expected_frames}",
            details={"n_frames": int(frames.shape[0]), "expected": expected_frames},
        )


def flatten_joints(sample: SkeletonSample, expected_frames: Optional[int] = None) -> FeatureVector:
    """Frame-major layout: frame k, joint j, then (x, y, z)"""
    _check_frames(sample, expected_frames)
    return FeatureVector(sample.frames.reshape(-1), Representation.JOINT_TIME)


def compute_angles(sample: SkeletonSample, expected_frames: Optional[int] = None) -> FeatureVector:
    _check_frames(sample, expected_frames)
    return FeatureVector(_frame_angles(sample.frames).reshape(-1), Representation.ANGLE_TIME)


def dct_transform(fv: FeatureVector) -> FeatureVector:
    """Per-channel orthonormal DCT-II over time; output is channel-major"""
    if fv.rep.is_frequency:
        raise FeatureError(f"{fv.rep.value} is already a frequency representation")
    if len(fv) % fv.rep.channels:
        raise FeatureError(f"vector length {len(fv)} is not a multiple of {fv.rep.channels} channels")
    series = fv.as_sequence()
    coeffs = dct(series, type=2, norm="ortho", axis=0)
    return FeatureVector(coeffs.T.reshape(-1), fv.rep.frequency_counterpart(), fv.source)


def inverse_dct_transform(fv: FeatureVector) -> FeatureVector:
    """Inverse of ``dct_transform`` (orthonormal DCT-III), back to the frame-major time layout"""
    if not fv.rep.is_frequency:
        raise FeatureError(f"{fv.rep.value} is not a frequency representation")
    channels = fv.rep.channels
    if len(fv) % channels:
        raise FeatureError(f"vector length {len(fv)} is not a multiple of {channels} channels")
    coeffs = fv.values.reshape(channels, -1)
    series = idct(coeffs, type=2, norm="ortho", axis=1)
    return FeatureVector(series.T.reshape(-1), fv.rep.time_counterpart(), fv.source)


def extract_features(sample: SkeletonSample, rep: Representation,
                     expected_frames: Optional[int] = None) -> FeatureVector:
    if not sample.preprocessed:
        raise FeatureError("features are extracted from preprocessed samples only")
    time_fv = compute_angles(sample, expected_frames) if rep.uses_angles else flatten_joints(sample, expected_frames)
    fv = dct_transform(time_fv) if rep.is_frequency else time_fv
    if len(fv) != rep.dimension(sample.n_frames) or not np.isfinite(fv.values).all():
        raise FeatureError(f"{rep.value} vector has length {len(fv)}, expected {rep.dimension(sample.n_frames)}")
    return fv


def featurize(dataset: Dataset, rep: Representation) -> FeatureTable:
    """Feature matrix for every sample of a preprocessed dataset"""
    if not dataset.preprocessed:
        raise FeatureError(f"dataset {dataset.provenance} is not preprocessed")
    if not len(dataset):
        raise FeatureError("dataset has no samples")

    start = time.time()
    lengths = {s.n_frames for s in dataset}
    if len(lengths) != 1:
        raise FeatureError(f"samples have differing frame counts {sorted(lengths)}")
    n_frames = lengths.pop()

    rows = np.empty((len(dataset), rep.dimension(n_frames)), dtype=np.float64)
    for index, sample in enumerate(dataset):
        try:
            rows[index] = extract_features(sample, rep, n_frames).values
        except FeatureError as e:
            e.details.setdefault("sample_index", index)
            raise
    table = FeatureTable(
        values=rows,
        labels=dataset.labels,
        subject_ids=np.array([s.subject_id for s in dataset], dtype=np.int64),
        rep=rep,
    )
    logger.log_stage_complete("featurize", time.time() - start, representation=rep.value,
                              samples=len(table), dimension=table.dimension)
    return table


def feature_table_to_csv(table: FeatureTable) -> str:
    df = pd.DataFrame(table.values, columns=[f"v{i}" for i in range(table.dimension)])
    df.insert(0, "label", ["good" if y > 0 else "bad" for y in table.labels])
    df.insert(0, "subject_id", table.subject_ids)
    return df.to_csv(index=False, lineterminator="\n")


def save_feature_table(table: FeatureTable, path) -> Path:
    return atomic_write_text(path, feature_table_to_csv(table))


def load_feature_table(path, rep: Representation, n_frames: Optional[int] = None) -> FeatureTable:
    """Read a features CSV; the value count must match ``rep`` (at ``n_frames`` frames when given)"""
    try:
        df = pd.read_csv(path, float_precision="round_trip")
    except FileNotFoundError:
        raise DatasetError(f"features file not found: {path}")
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise DatasetError(f"cannot read features file {path}: {e}")

    value_cols = [c for c in df.columns if c.startswith("v") and c[1:].isdigit()]
    if "subject_id" not in df.columns or "label" not in df.columns or not value_cols:
        raise DatasetError(f"{path}: expected columns subject_id, label, v0, v1, ...")
    if df.empty:
        raise DatasetError(f"{path}: no samples")

    dimension = len(value_cols)
    if n_frames is not None and dimension != rep.dimension(n_frames):
        raise FeatureError(
            f"feature dimension {dimension} does not match {rep.value} at {n_frames} frames "
            f"(expected dimension {rep.dimension(n_frames)})",
            details={"dimension": dimension, "expected": rep.dimension(n_frames)},
        )
    if dimension % rep.channels:
        raise FeatureError(
            f"feature dimension {dimension} does not fit representation {rep.value} "
            f"({rep.channels} channels per frame)",
            details={"dimension": dimension, "channels": rep.channels},
        )

    labels = df["label"].astype(str).str.strip().str.lower()
    unknown = sorted(set(labels) - {"good", "bad"})
    if unknown:
        raise DatasetError(f"{path}: unknown label {unknown[0]!r}")

    values = df[value_cols].to_numpy(dtype=np.float64)
    if not np.isfinite(values).all():
        raise DatasetError(f"{path}: non-finite feature value")
    return FeatureTable(
        values=values,
        labels=np.where(labels == "good", 1, -1).astype(np.int64),
        subject_ids=df["subject_id"].to_numpy(dtype=np.int64),
        rep=rep,
    )
