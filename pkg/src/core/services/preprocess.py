"""
Preprocessing: fixed-length resampling, height normalization and hip-center-relative coordinates.
"""

from __future__ import annotations

import time

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..exceptions import PreprocessError
from ..logging import logger
from ..models.skeleton import Dataset, JointId, SkeletonSample

DEGENERATE_EXTENT = 1e-9
_Y = 1


class PreprocessConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    target_frames: int = Field(default=160, ge=2)
    scale_lo: float = 1.0
    scale_hi: float = 3.0
    per_axis: bool = False

    @model_validator(mode="after")
    def _check_range(self):
        if not self.scale_lo < self.scale_hi:
            raise ValueError(f"scale_lo ({self.scale_lo}) must be smaller than scale_hi ({self.scale_hi})")
        return self


def resample(sample: SkeletonSample, target_frames: int) -> SkeletonSample:
    """Piecewise-linear resampling of every coordinate over normalized time [0, 1]"""
    if target_frames < 2:
        raise PreprocessError(f"target_frames must be >= 2, got {target_frames}")
    n = sample.n_frames
    if n < 2:
        raise PreprocessError(f"resampling needs at least 2 frames, sample has {n}")

    t_in = np.arange(n, dtype=np.float64) / (n - 1)
    t_out = np.arange(target_frames, dtype=np.float64) / (target_frames - 1)
    flat = sample.frames.reshape(n, -1)
    out = np.empty((target_frames, flat.shape[1]), dtype=np.float64)
    for channel in range(flat.shape[1]):
        out[:, channel] = np.interp(t_out, t_in, flat[:, channel])
    # endpoints are copied so they match the input bit for bit
    out[0] = flat[0]
    out[-1] = flat[-1]
    return sample.with_frames(out.reshape(target_frames, *sample.frames.shape[1:]))


def height_scale(sample: SkeletonSample, lo: float = 1.0, hi: float = 3.0) -> SkeletonSample:
    """
    Uniformly scale the sample so its vertical (Y) extent maps exactly onto [lo, hi].

    X and Z use the same factor and are centered on (lo + hi) / 2.
    """
    frames = sample.frames
    y = frames[..., _Y]
    y_min, y_max = float(y.min()), float(y.max())
    extent = y_max - y_min
    if not extent > DEGENERATE_EXTENT:
        raise PreprocessError(
            f"degenerate vertical extent {extent:.3g} (subject {sample.subject_id})",
            details={"extent": extent},
        )

    s = (hi - lo) / extent
    mid = (lo + hi) / 2.0
    out = np.empty_like(frames)
    for axis in range(3):
        values = frames[..., axis]
        if axis == _Y:
            out[..., axis] = lo + s * (values - y_min)
        else:
            center = (float(values.max()) + float(values.min())) / 2.0
            out[..., axis] = mid + s * (values - center)
    # pin the extremes exactly on the target range
    out[..., _Y][y == y_min] = lo
    out[..., _Y][y == y_max] = hi
    return sample.with_frames(out)


def per_axis_scale(sample: SkeletonSample, lo: float = 1.0, hi: float = 3.0) -> SkeletonSample:
    """Independent min-max scaling of X, Y and Z onto [lo, hi] (aspect ratio not preserved)"""
    frames = sample.frames
    out = np.empty_like(frames)
    for axis, name in enumerate("XYZ"):
        values = frames[..., axis]
        v_min, v_max = float(values.min()), float(values.max())
        extent = v_max - v_min
        if not extent > DEGENERATE_EXTENT:
            raise PreprocessError(f"degenerate {name} extent {extent:.3g} (subject {sample.subject_id})")
        out[..., axis] = lo + (hi - lo) * (values - v_min) / extent
    return sample.with_frames(out)


def hip_center_relative(sample: SkeletonSample) -> SkeletonSample:
    """Subtract HipCenter from every joint, frame by frame"""
    frames = sample.frames
    hip = frames[:, int(JointId.HIP_CENTER), :][:, None, :]
    out = frames - hip
    out[:, int(JointId.HIP_CENTER), :] = 0.0
    return sample.with_frames(out)


def preprocess_pipeline(sample: SkeletonSample, cfg: PreprocessConfig | None = None) -> SkeletonSample:
    """resample -> height scale -> hip-center-relative"""
    cfg = cfg or PreprocessConfig()
    if sample.preprocessed:
        raise PreprocessError("sample is already preprocessed")
    out = resample(sample, cfg.target_frames)
    if cfg.per_axis:
        out = per_axis_scale(out, cfg.scale_lo, cfg.scale_hi)
    else:
        out = height_scale(out, cfg.scale_lo, cfg.scale_hi)
    out = hip_center_relative(out)
    return out.with_frames(out.frames, preprocessed=True)


def preprocess_dataset(dataset: Dataset, cfg: PreprocessConfig | None = None) -> Dataset:
    cfg = cfg or PreprocessConfig()
    if dataset.preprocessed:
        raise PreprocessError(f"dataset {dataset.provenance} is already preprocessed")

    start = time.time()
    logger.log_stage_start("preprocess", samples=len(dataset), target_frames=cfg.target_frames)
    samples = []
    for index, sample in enumerate(dataset):
        try:
            samples.append(preprocess_pipeline(sample, cfg))
        except PreprocessError as e:
            e.details.setdefault("sample_index", index)
            raise
    logger.log_stage_complete("preprocess", time.time() - start, samples=len(samples))
    return Dataset(samples=tuple(samples), provenance=dataset.provenance, preprocessed=True)
