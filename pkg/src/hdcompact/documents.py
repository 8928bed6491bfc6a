"""JSON documents for matrices and chart points.

Floats are written with 17 significant digits so that every double survives a
write/read cycle bit for bit. Non-finite values use the ``Infinity``/``NaN``
tokens understood by :func:`json.loads`.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .boundary_chart import BoundaryChartPoint
from .flags import PartialFlag

SL_DET_TOL = 1e-6


class DocumentError(ValueError):
    """A JSON document does not satisfy its schema."""


def _format_float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    if x == int(x) and abs(x) < 1e16:
        return f"{int(x)}.0"
    return format(x, ".17g")


def dumps(obj, indent: int | None = 2, _level: int = 0) -> str:
    """Serialize plain data (dicts, sequences, numbers, strings, numpy values)."""
    pad = "" if indent is None else "\n" + " " * (indent * (_level + 1))
    end = "" if indent is None else "\n" + " " * (indent * _level)
    sep = ", " if indent is None else ","
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, (np.bool_, bool)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (np.integer, int)):
        return str(int(obj))
    if isinstance(obj, (np.floating, float)):
        return _format_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{" + sep.join(items) + end + "}"
    if isinstance(obj, (list, tuple, frozenset, set)):
        seq = sorted(obj) if isinstance(obj, (frozenset, set)) else obj
        if not seq:
            return "[]"
        # numeric rows stay on one line to keep matrices readable
        if all(isinstance(v, (int, float, np.integer, np.floating)) and not isinstance(v, bool) for v in seq):
            return "[" + ", ".join(dumps(v, None) for v in seq) + "]"
        return "[" + sep.join(f"{pad}{dumps(v, indent, _level + 1)}" for v in seq) + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _matrix(rows, name: str, n: int | None = None) -> np.ndarray:
    try:
        m = np.array(rows, dtype=float)
    except (TypeError, ValueError) as exc:
        raise DocumentError(f"{name} must be a numeric matrix") from exc
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise DocumentError(f"{name} must be a non-empty square matrix")
    if n is not None and m.shape != (n, n):
        raise DocumentError(f"{name} must be {n}x{n}")
    if not np.all(np.isfinite(m)):
        raise DocumentError(f"{name} has non-finite entries")
    return m


@dataclass(frozen=True)
class MatrixDocument:
    """Square matrix; ``sl=True`` additionally requires |det - 1| <= 1e-6."""

    n: int
    rows: np.ndarray
    sl: bool = False

    @classmethod
    def from_dict(cls, data: dict, require_sl: bool = False) -> "MatrixDocument":
        if not isinstance(data, dict) or "rows" not in data:
            raise DocumentError("matrix document needs a 'rows' field")
        m = _matrix(data["rows"], "rows")
        n = data.get("n", m.shape[0])
        if n != m.shape[0]:
            raise DocumentError(f"declared n={n} does not match a {m.shape[0]}x{m.shape[0]} matrix")
        sl = bool(data.get("sl", False)) or require_sl
        if sl and abs(np.linalg.det(m) - 1.0) > SL_DET_TOL:
            raise DocumentError("matrix is tagged 'sl' but its determinant is not 1")
        return cls(n=m.shape[0], rows=m, sl=sl)

    def to_dict(self) -> dict:
        out = {"n": self.n, "rows": self.rows}
        if self.sl:
            out["sl"] = True
        return out


def chart_to_dict(p: BoundaryChartPoint) -> dict:
    return {
        "n": p.n,
        "breaks": list(p.breaks),
        "tau": p.tau,
        "left_flag": {"basis": p.left_flag.basis, "breaks": list(p.left_flag.breaks)},
        "right_flag": {"basis": p.right_flag.basis, "breaks": list(p.right_flag.breaks)},
        "blocks": [b for b in p.blocks],
        "scale": p.scale,
    }


def chart_from_dict(data: dict) -> BoundaryChartPoint:
    """Validate a chart document and build the chart point."""
    required = ("n", "breaks", "tau", "left_flag", "right_flag", "blocks", "scale")
    if not isinstance(data, dict) or any(k not in data for k in required):
        raise DocumentError(f"chart document needs fields {required}")
    n = data["n"]
    if not isinstance(n, int) or n < 1:
        raise DocumentError("n must be a positive integer")
    try:
        flags = []
        for side in ("left_flag", "right_flag"):
            f = data[side]
            flags.append(PartialFlag(_matrix(f["basis"], f"{side}.basis", n), tuple(f["breaks"])))
        blocks = tuple(_matrix(b, "block") for b in data["blocks"])
        return BoundaryChartPoint(
            breaks=tuple(data["breaks"]),
            left_flag=flags[0],
            right_flag=flags[1],
            tau=np.array(data["tau"], dtype=float),
            blocks=blocks,
            scale=float(data["scale"]),
        )
    except DocumentError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise DocumentError(f"invalid chart document: {exc}") from exc


