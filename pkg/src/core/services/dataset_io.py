"""
Dataset ingestion and export (JSONL / CSV) with per-record validation.
"""

from __future__ import annotations

import io
import json
from pathlib import Path
from typing import Iterable, List, Literal, Optional, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, ValidationError as PydanticValidationError

from ..exceptions import DatasetError
from ..logging import logger
from ..models.skeleton import N_JOINTS, Dataset, Label, SkeletonSample, ValidationResult
from ..storage import atomic_write_text

DatasetFormat = Literal["jsonl", "csv"]

META_COLUMNS = ["subject_id", "exercise", "label", "sample_idx", "frame_idx"]
COORD_COLUMNS = [f"j{j}{axis}" for j in range(N_JOINTS) for axis in "xyz"]


class SampleRecord(BaseModel):
    """One JSONL line"""
    model_config = ConfigDict(extra="forbid", strict=False)

    subject_id: int
    exercise: str
    label: str
    frames: list
    preprocessed: bool = False


def validate_sample(sample: SkeletonSample) -> ValidationResult:
    """Collect every invariant violation of a sample; never raises"""
    violations: List[str] = []
    frames = np.asarray(sample.frames)

    if frames.size == 0 or frames.ndim == 0 or frames.shape[0] == 0:
        violations.append("empty frame list")
    elif frames.ndim != 3 or frames.shape[1:] != (N_JOINTS, 3):
        violations.append(f"frames must have shape (n, {N_JOINTS}, 3), got {frames.shape}")
    else:
        if frames.shape[0] < 2:
            violations.append(f"fewer than 2 frames (got {frames.shape[0]})")
        bad = np.argwhere(~np.isfinite(frames))
        for frame_idx, joint_idx in sorted({(int(f), int(j)) for f, j, _ in bad}):
            violations.append(f"non-finite coordinate at frame {frame_idx}, joint {joint_idx}")

    if sample.label not in (Label.GOOD, Label.BAD):
        violations.append(f"unknown label {sample.label!r}")

    return ValidationResult(tuple(violations))


def infer_format(path: Union[str, Path]) -> DatasetFormat:
    return "csv" if str(path).lower().endswith(".csv") else "jsonl"


def load_dataset(path: Union[str, Path], format: Optional[DatasetFormat] = None) -> Dataset:
    """
    Load and validate a dataset file.

    Raises:
        DatasetError: I/O failure, malformed record (with line number), wrong joint count,
            non-finite coordinate, unknown label, mixed coordinate conventions or empty file
    """
    path = Path(path)
    fmt = format or infer_format(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise DatasetError(f"cannot read {path}: {e}", details={"path": str(path)})

    if fmt == "jsonl":
        samples = _parse_jsonl(text, path)
    elif fmt == "csv":
        samples = _parse_csv(text, path)
    else:
        raise DatasetError(f"unsupported dataset format {fmt!r}")

    if not samples:
        raise DatasetError(f"{path}: no samples", details={"path": str(path)})

    flags = {s.preprocessed for s in samples}
    if len(flags) > 1:
        raise DatasetError(f"{path}: mixes raw and preprocessed samples")

    logger.log_system_event("dataset_loaded", path=str(path), format=fmt, samples=len(samples))
    return Dataset(samples=tuple(samples), provenance=str(path), preprocessed=flags.pop())


def _parse_jsonl(text: str, path: Path) -> List[SkeletonSample]:
    samples: List[SkeletonSample] = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            record = SampleRecord.model_validate(json.loads(line))
        except (json.JSONDecodeError, PydanticValidationError) as e:
            raise DatasetError(f"{path}:{line_no}: malformed record: {e}", details={"line": line_no})
        samples.append(_build_sample(
            record.subject_id, record.exercise, record.label, record.frames,
            record.preprocessed, where=f"{path}:{line_no}",
        ))
    return samples


def _build_sample(subject_id, exercise, label, frames, preprocessed: bool, where: str) -> SkeletonSample:
    try:
        parsed_label = Label.from_text(label)
    except ValueError as e:
        raise DatasetError(f"{where}: {e}")

    if not isinstance(frames, list) or not frames:
        raise DatasetError(f"{where}: empty frame list")
    for k, frame in enumerate(frames):
        if not isinstance(frame, list) or len(frame) != N_JOINTS:
            n = len(frame) if isinstance(frame, list) else "no"
            raise DatasetError(f"{where}: frame {k} has {n} joints, expected {N_JOINTS}")
        for j, joint in enumerate(frame):
            if not isinstance(joint, list) or len(joint) != 3:
                raise DatasetError(f"{where}: frame {k}, joint {j} is not an (x, y, z) triple")

    try:
        array = np.array(frames, dtype=np.float64)
    except (TypeError, ValueError) as e:
        raise DatasetError(f"{where}: coordinates must be numbers: {e}")

    sample = SkeletonSample(
        subject_id=int(subject_id),
        exercise=str(exercise),
        label=parsed_label,
        frames=array,
        preprocessed=bool(preprocessed),
    )
    result = validate_sample(sample)
    if not result.ok:
        raise DatasetError(f"{where}: {result.violations[0]}", details={"violations": list(result.violations)})
    return sample


def _parse_csv(text: str, path: Path) -> List[SkeletonSample]:
    try:
        df = pd.read_csv(io.StringIO(text), float_precision="round_trip")
    except pd.errors.EmptyDataError:
        return []
    except (pd.errors.ParserError, ValueError) as e:
        raise DatasetError(f"{path}: malformed CSV: {e}")

    missing = [c for c in META_COLUMNS + COORD_COLUMNS if c not in df.columns]
    if missing:
        raise DatasetError(f"{path}: missing columns {missing[:5]}{'...' if len(missing) > 5 else ''}")
    if df.empty:
        return []

    has_flag = "preprocessed" in df.columns
    samples: List[SkeletonSample] = []
    # pandas row i is file line i + 2 (header is line 1)
    df["_line"] = np.arange(len(df)) + 2
    for _, group in df.groupby("sample_idx", sort=False):
        first = group.iloc[0]
        where = f"{path}:{int(first['_line'])}"
        for column in ("subject_id", "exercise", "label"):
            if group[column].nunique(dropna=False) != 1:
                raise DatasetError(f"{where}: {column} changes within sample {first['sample_idx']}")
        group = group.sort_values("frame_idx", kind="stable")
        coords = group[COORD_COLUMNS]
        non_numeric = coords.apply(pd.to_numeric, errors="coerce").isna() & coords.notna()
        if non_numeric.to_numpy().any():
            row = int(group.loc[non_numeric.any(axis=1), "_line"].iloc[0])
            raise DatasetError(f"{path}:{row}: coordinates must be numbers")
        values = coords.to_numpy(dtype=np.float64)
        bad_rows = ~np.isfinite(values).all(axis=1)
        if bad_rows.any():
            row = int(group["_line"].to_numpy()[bad_rows][0])
            raise DatasetError(f"{path}:{row}: non-finite coordinate")
        frames = values.reshape(len(group), N_JOINTS, 3).tolist()
        preprocessed = bool(first["preprocessed"]) if has_flag else False
        samples.append(_build_sample(
            int(first["subject_id"]), first["exercise"], first["label"], frames, preprocessed, where,
        ))
    return samples


def dataset_to_jsonl(dataset: Dataset) -> str:
    lines = []
    for sample in dataset:
        record = {
            "subject_id": int(sample.subject_id),
            "exercise": sample.exercise,
            "label": sample.label.text,
            "frames": sample.frames.tolist(),
        }
        if sample.preprocessed:
            record["preprocessed"] = True
        lines.append(json.dumps(record, separators=(",", ":")))
    return "\n".join(lines) + "\n"


def dataset_to_csv(dataset: Dataset) -> str:
    frames: List[pd.DataFrame] = []
    for sample_idx, sample in enumerate(dataset):
        n = sample.n_frames
        block = pd.DataFrame(sample.frames.reshape(n, N_JOINTS * 3), columns=COORD_COLUMNS)
        block.insert(0, "frame_idx", np.arange(n))
        block.insert(0, "sample_idx", sample_idx)
        block.insert(0, "label", sample.label.text)
        block.insert(0, "exercise", sample.exercise)
        block.insert(0, "subject_id", sample.subject_id)
        if dataset.preprocessed:
            block["preprocessed"] = True
        frames.append(block)
    # full-precision floats round-trip exactly through read_csv(float_precision="round_trip")
    return pd.concat(frames, ignore_index=True).to_csv(index=False, lineterminator="\n")


def save_dataset(dataset: Dataset, path: Union[str, Path], format: Optional[DatasetFormat] = None) -> Path:
    """Write a dataset atomically in JSONL or CSV form"""
    fmt = format or infer_format(path)
    if fmt == "jsonl":
        text = dataset_to_jsonl(dataset)
    elif fmt == "csv":
        text = dataset_to_csv(dataset)
    else:
        raise DatasetError(f"unsupported dataset format {fmt!r}")
    target = atomic_write_text(path, text)
    logger.log_system_event("dataset_saved", path=str(target), format=fmt, samples=len(dataset))
    return target


def count_by_subject(samples: Iterable[SkeletonSample]) -> pd.DataFrame:
    """Per-subject negative/positive counts in the layout of the dataset summary table"""
    rows = [{"subject_id": s.subject_id, "label": s.label.text} for s in samples]
    df = pd.DataFrame(rows, columns=["subject_id", "label"])
    table = pd.crosstab(df["label"], df["subject_id"])
    return table.reindex(["bad", "good"], fill_value=0)
