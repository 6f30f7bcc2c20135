"""JSON encodings for matrices and blocks.

Matrix: ``{"n": int, "re": [[...]], "im": [[...]]}`` with row-major nested
lists; ``"im"`` may be omitted for real matrices. Non-square matrices use
``"rows"`` and ``"cols"`` instead of ``"n"``.

Block: ``{"A": Matrix, "B": Matrix, "X": Matrix}`` meaning
``[[A, X^*], [X, B]]``.
"""

from __future__ import annotations

import numpy as np

from .blocks import Block2x2
from .errors import InvalidInput


def matrix_to_json(a) -> dict:
    a = np.asarray(a, dtype=np.complex128)
    rows, cols = a.shape
    out: dict = {"n": rows} if rows == cols else {"rows": rows, "cols": cols}
    out["re"] = a.real.tolist()
    if np.any(a.imag != 0):
        out["im"] = a.imag.tolist()
    return out


def _grid(obj, key: str, where: str, rows: int, cols: int) -> np.ndarray:
    try:
        arr = np.array(obj[key], dtype=float)
    except (TypeError, ValueError) as exc:
        raise InvalidInput(f"{where}.{key}: entries must be real numbers ({exc})") from None
    if arr.shape != (rows, cols):
        raise InvalidInput(f"{where}.{key}: expected shape ({rows}, {cols}), got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInput(f"{where}.{key}: entries must be finite")
    return arr


def matrix_from_json(obj, where: str = "matrix") -> np.ndarray:
    if not isinstance(obj, dict):
        raise InvalidInput(f"{where}: expected a JSON object")
    if "n" in obj:
        n = obj["n"]
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            raise InvalidInput(f"{where}.n: must be a positive integer")
        rows = cols = n
    elif "rows" in obj and "cols" in obj:
        rows, cols = obj["rows"], obj["cols"]
        if not all(isinstance(v, int) and v >= 1 for v in (rows, cols)):
            raise InvalidInput(f"{where}.rows/cols: must be positive integers")
    else:
        raise InvalidInput(f"{where}.n: missing")
    if "re" not in obj:
        raise InvalidInput(f"{where}.re: missing")
    re = _grid(obj, "re", where, rows, cols)
    im = _grid(obj, "im", where, rows, cols) if "im" in obj else np.zeros_like(re)
    return re + 1j * im


def block_to_json(block: Block2x2) -> dict:
    return {
        "A": matrix_to_json(block.A),
        "B": matrix_to_json(block.B),
        "X": matrix_to_json(block.X),
    }


def block_from_json(obj, where: str = "block") -> Block2x2:
    if not isinstance(obj, dict):
        raise InvalidInput(f"{where}: expected a JSON object")
    parts = {}
    for key in ("A", "B", "X"):
        if key not in obj:
            raise InvalidInput(f"{where}.{key}: missing")
        parts[key] = matrix_from_json(obj[key], f"{where}.{key}")
    try:
        return Block2x2(parts["A"], parts["X"], parts["B"])
    except InvalidInput as exc:
        raise InvalidInput(f"{where}: {exc}") from None
