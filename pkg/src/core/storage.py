"""
Atomic file output: every result file is written to a temporary sibling and renamed.
"""

from __future__ import annotations

import os
import shutil
import tempfile
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, Union

from .exceptions import StorageError

PathLike = Union[str, os.PathLike]


def atomic_write_text(path: PathLike, text: str) -> Path:
    """Write ``text`` to ``path`` via temp file + rename in the same directory"""
    target = Path(path)
    directory = target.parent if str(target.parent) else Path(".")
    try:
        fd, tmp_name = tempfile.mkstemp(prefix=f".{target.name}.", suffix=".tmp", dir=directory)
    except OSError as e:
        raise StorageError(f"cannot write {target}: {e}", details={"path": str(target)})
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp_name, target)
    except OSError as e:
        _silent_unlink(tmp_name)
        raise StorageError(f"cannot write {target}: {e}", details={"path": str(target)})
    return target


@contextmanager
def staged_directory(out_dir: PathLike) -> Iterator[Path]:
    """
    Yield an empty staging directory inside ``out_dir``; on success its contents are moved
    into ``out_dir`` (replacing same-named entries), on failure the staging tree is removed.
    """
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        staging = Path(tempfile.mkdtemp(prefix=".staging-", dir=out))
    except OSError as e:
        raise StorageError(f"output directory {out} is not writable: {e}", details={"path": str(out)})

    try:
        yield staging
    except BaseException:
        shutil.rmtree(staging, ignore_errors=True)
        raise

    try:
        for entry in sorted(staging.iterdir()):
            destination = out / entry.name
            if destination.is_dir() and entry.is_dir():
                shutil.rmtree(destination)
            os.replace(entry, destination)
    except OSError as e:
        raise StorageError(f"cannot publish results into {out}: {e}", details={"path": str(out)})
    finally:
        shutil.rmtree(staging, ignore_errors=True)


def _silent_unlink(name: str) -> None:
    try:
        os.unlink(name)
    except OSError:
        pass
