"""Analysis reports and plot-data files.

Report values are stored already rounded to 12 significant digits, so the
JSON form round-trips exactly and repeated runs serialise byte for byte.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Literal, Sequence, TextIO

import numpy as np

from . import __version__

SIG_DIGITS = 12


def fmt(value: float) -> str:
    return f"{value:.{SIG_DIGITS}g}"


def _plain(value: Any) -> Any:
    """JSON-ready copy: numpy to Python, floats rounded to 12 significant digits."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return _plain(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if not math.isfinite(value):
            return value
        rounded = float(fmt(value))
        return 0.0 if rounded == 0 else rounded
    return value


@dataclass
class AnalysisReport:
    kind: str
    inputs: dict[str, Any]
    results: dict[str, Any]
    warnings: list[str] = field(default_factory=list)
    toolkit_version: str = __version__

    def __post_init__(self):
        self.inputs = _plain(self.inputs)
        self.results = _plain(self.results)
        self.warnings = [str(w) for w in self.warnings]

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "AnalysisReport":
        data = json.loads(text)
        missing = {"kind", "inputs", "results", "warnings", "toolkit_version"} - data.keys()
        if missing:
            raise ValueError(f"report is missing keys: {sorted(missing)}")
        return cls(**data)


def _scalar(v: Any) -> str:
    if isinstance(v, float):
        return fmt(v)
    return str(v)


def _text_lines(prefix: str, value: Any) -> list[str]:
    if isinstance(value, dict):
        lines = []
        for k, v in value.items():
            lines.extend(_text_lines(f"{prefix}.{k}" if prefix else k, v))
        return lines
    if isinstance(value, list):
        if all(not isinstance(v, (list, dict)) for v in value):
            return [f"{prefix} = [{', '.join(_scalar(v) for v in value)}]"]
        lines = []
        for i, v in enumerate(value):
            lines.extend(_text_lines(f"{prefix}[{i}]", v))
        return lines
    return [f"{prefix} = {_scalar(value)}"]


def render_report(r: AnalysisReport, format: Literal["text", "json"] = "text") -> str:
    if format == "json":
        return r.to_json()
    lines = [f"kind: {r.kind}", f"toolkit_version: {r.toolkit_version}"]
    if r.inputs:
        lines.append("inputs:")
        lines.extend("  " + s for s in _text_lines("", r.inputs))
    lines.append("results:")
    lines.extend("  " + s for s in _text_lines("", r.results))
    if r.warnings:
        lines.append("warnings:")
        lines.extend(f"  - {w}" for w in r.warnings)
    return "\n".join(lines) + "\n"


def write_atomic(path: str | os.PathLike, text: str) -> None:
    """Write via a temporary file in the same directory, then rename over ``path``."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent or ".")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit_frontier_csv(samples: Sequence, destination: str | os.PathLike | TextIO) -> None:
    """Write ``r,w,p_1,...,p_n`` rows for plotting the wage-profit frontier."""
    if not samples:
        raise ValueError("no frontier samples")
    n = len(samples[0][2])
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["r", "w", *(f"p_{i + 1}" for i in range(n))])
    for r, w, p in samples:
        writer.writerow([fmt(r), fmt(w), *(fmt(x) for x in p)])
    if hasattr(destination, "write"):
        destination.write(buf.getvalue())
    else:
        write_atomic(destination, buf.getvalue())


def read_frontier_csv(source: str | os.PathLike | TextIO) -> list[tuple[float, float, np.ndarray]]:
    text = source.read() if hasattr(source, "read") else Path(source).read_text(encoding="utf-8")
    rows = list(csv.reader(io.StringIO(text)))
    return [(float(row[0]), float(row[1]), np.array([float(x) for x in row[2:]])) for row in rows[1:]]
