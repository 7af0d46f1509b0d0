"""Matrix file I/O: a small JSON schema and a complex-valued CSV dialect.

JSON files look like

    {"rows": 2, "cols": 2, "entries": [[1.0, 0.0], [0.0, 1.0], ...]}

with entries row-major as (real, imaginary) pairs.  CSV files hold one
matrix row per line with cells written as decimal literals "a", "a+bi" or
"a-bi"; a bare "i" (or "-i") means a unit imaginary part.  Numbers are
serialized with 17 significant digits so a write/read round trip is exact.
"""

from __future__ import annotations

import json
import re
from pathlib import Path

import numpy as np


class MatrixParseError(ValueError):
    """The input file does not describe a complex matrix."""


_NUM = r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_CELL = re.compile(
    rf"^\s*(?:(?P<re>{_NUM})(?:(?P<im1>[+-](?:{_NUM})?)i)?|(?P<im2>[+-]?(?:{_NUM})?)i)\s*$"
)


def parse_complex(cell: str) -> complex:
    """Parse one CSV cell: "a", "a+bi", "a-bi", "bi" or a bare "i"."""
    m = _CELL.match(cell)
    if not m:
        raise MatrixParseError(f"cannot parse complex literal {cell!r}")
    if m.group("im2") is not None:
        s = m.group("im2")
        if s in ("", "+"):
            return 1j
        if s == "-":
            return -1j
        return complex(0.0, float(s))
    re_part = float(m.group("re"))
    im = m.group("im1")
    if im is None:
        return complex(re_part, 0.0)
    if im in ("+", "-"):
        return complex(re_part, 1.0 if im == "+" else -1.0)
    return complex(re_part, float(im))


def format_complex(z: complex) -> str:
    """Inverse of parse_complex at 17 significant digits."""
    re_s = f"{z.real:.17g}"
    im = z.imag
    if im == 0.0:
        return re_s
    sign = "+" if im >= 0 else "-"
    return f"{re_s}{sign}{abs(im):.17g}i"


def matrix_to_json_dict(X: np.ndarray) -> dict:
    X = np.asarray(X, dtype=complex)
    return {
        "rows": X.shape[0],
        "cols": X.shape[1],
        "entries": [[float(z.real), float(z.imag)] for z in X.ravel()],
    }


def matrix_from_json_dict(obj: dict) -> np.ndarray:
    try:
        m, n = int(obj["rows"]), int(obj["cols"])
        entries = obj["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise MatrixParseError(f"bad matrix JSON: {exc}") from exc
    if m < 0 or n < 0 or len(entries) != m * n:
        raise MatrixParseError(
            f"entries length {len(entries)} does not match {m}x{n}"
        )
    flat = []
    for e in entries:
        if not isinstance(e, (list, tuple)) or len(e) != 2:
            raise MatrixParseError(f"entry {e!r} is not an [re, im] pair")
        flat.append(complex(float(e[0]), float(e[1])))
    return np.array(flat, dtype=complex).reshape(m, n)


def read_matrix(path) -> np.ndarray:
    """Read a matrix from a .json or .csv file (sniffed by content)."""
    text = Path(path).read_text()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MatrixParseError(f"invalid JSON: {exc}") from exc
        return matrix_from_json_dict(obj)
    rows = []
    width = None
    for line in text.splitlines():
        if not line.strip():
            continue
        cells = [parse_complex(c) for c in line.split(",")]
        if width is None:
            width = len(cells)
        elif len(cells) != width:
            raise MatrixParseError("CSV rows have inconsistent lengths")
        rows.append(cells)
    if not rows:
        raise MatrixParseError("empty matrix file")
    return np.array(rows, dtype=complex)


def write_matrix(path, X, fmt: str | None = None) -> None:
    """Write a matrix as JSON or CSV (format from extension unless given)."""
    path = Path(path)
    X = np.asarray(X, dtype=complex)
    if fmt is None:
        fmt = "csv" if path.suffix.lower() == ".csv" else "json"
    if fmt == "json":
        path.write_text(json.dumps(matrix_to_json_dict(X)) + "\n")
    elif fmt == "csv":
        lines = [",".join(format_complex(z) for z in row) for row in X]
        path.write_text("\n".join(lines) + "\n")
    else:
        raise ValueError(f"unknown format {fmt!r}")
