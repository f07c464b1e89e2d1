#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Data files written by the command line and the plugin tools.

Every file goes through a temporary sibling and ``os.replace`` so a failing
command never leaves a half-written CSV behind.
"""

import csv
import io
import json
import logging
import os
import tempfile
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Iterable, List, Sequence, Union

import numpy as np

from ramsey_lgi import __version__
from ramsey_lgi.errors import ConfigError

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


@dataclass(frozen=True)
class GridSpec:
    """Inclusive linear grid ``start:stop:count``."""
    start: float
    stop: float
    count: int

    def __post_init__(self):
        if int(self.count) < 1:
            raise ConfigError(f"grid needs at least one point, got count {self.count!r}")
        if self.count == 1 and self.start != self.stop:
            raise ConfigError("a one-point grid needs start == stop")
        object.__setattr__(self, "count", int(self.count))

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        parts = str(text).split(":")
        if len(parts) != 3:
            raise ConfigError(f"grid must look like start:stop:count, got {text!r}")
        try:
            return cls(float(parts[0]), float(parts[1]), int(parts[2]))
        except ValueError as exc:
            raise ConfigError(f"bad grid {text!r}: {exc}") from exc

    @classmethod
    def point(cls, value: float) -> "GridSpec":
        return cls(float(value), float(value), 1)

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.count)

    def __str__(self) -> str:
        return f"{self.start!r}:{self.stop!r}:{self.count}"


def fmt(value: Any) -> str:
    """Cells of numeric CSV columns use 17 significant digits."""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def atomic_write_bytes(path: PathLike, data: bytes) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=str(path.parent))
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def atomic_write_text(path: PathLike, text: str) -> Path:
    return atomic_write_bytes(path, text.encode("utf-8"))


def csv_text(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buffer.getvalue()


def write_csv(path: PathLike, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    path = atomic_write_text(path, csv_text(header, rows))
    logger.info("wrote %s", path)
    return path


def write_matrix_csv(path: PathLike, matrix: np.ndarray) -> Path:
    rows = [[fmt(v) for v in row] for row in np.asarray(matrix, dtype=float)]
    buffer = io.StringIO()
    csv.writer(buffer, lineterminator="\n").writerows(rows)
    path = atomic_write_text(path, buffer.getvalue())
    logger.info("wrote %s", path)
    return path


def _jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return _jsonable(value.tolist())
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, Path):
        return str(value)
    if hasattr(value, "to_dict"):
        return _jsonable(value.to_dict())
    if hasattr(value, "value") and hasattr(value, "name"):
        return value.value
    return value


def write_json(path: PathLike, data: Dict[str, Any]) -> Path:
    text = json.dumps(_jsonable(data), indent=2, sort_keys=True) + "\n"
    return atomic_write_text(path, text)


def write_sidecar(csv_path: PathLike, metadata: Dict[str, Any]) -> Path:
    """``<name>.json`` next to a data file; ``created_at`` is the only volatile field."""
    payload = dict(metadata)
    payload["code_version"] = __version__
    payload["created_at"] = datetime.now(timezone.utc).isoformat()
    return write_json(Path(csv_path).with_suffix(".json"), payload)


def read_csv(path: PathLike) -> List[Dict[str, str]]:
    with open(path, newline="", encoding="utf-8") as handle:
        return list(csv.DictReader(handle))
