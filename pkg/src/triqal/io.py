"""JSON serialization of algebras and parsing of complex literals.

File layout (all complex entries are [re, im] pairs, indices 0-based):

    {
      "n": 2,
      "P": [0, 1],
      "Qbar": [[[[re, im], ...], ...], ...],   # [i][j][s][t]
      "Qm":   optional, [i][j][k][t]
      "h":    optional, [j][k]
    }

Floats are written with Python's shortest round-trip representation, so a
save/load cycle reproduces every tensor bit-exactly.
"""

from __future__ import annotations

import json
import re
from pathlib import Path

import numpy as np

from .lawrence import ThreeAlgebra
from .tensor_core import LOWER, UPPER, BasisPermutation, DenseTensor

_QBAR_LEGS = (LOWER, LOWER, UPPER, UPPER)
_QM_LEGS = (LOWER, LOWER, LOWER, UPPER)


def parse_complex(text: str) -> complex:
    """Parse "re" / "re+imi" literals: "0.25", "1+1i", "-2", "i", "2-0.5i"."""
    s = str(text).strip().replace(" ", "")
    if not s:
        raise ValueError("empty complex literal")
    s = s.replace("i", "j")
    # a bare trailing j needs an explicit coefficient for Python's parser
    s = re.sub(r"(?<![0-9.])j", "1j", s)
    try:
        z = complex(s)
    except ValueError as exc:
        raise ValueError(f"cannot parse complex literal {text!r}") from exc
    if not (np.isfinite(z.real) and np.isfinite(z.imag)):
        raise ValueError(f"complex literal {text!r} is not finite")
    return z


def format_complex(z: complex, digits: int = 12) -> str:
    """Render a value as "re" or "re + im i" with fixed digits."""
    z = complex(z)
    re_part = f"{z.real:.{digits}f}"
    if abs(z.imag) <= 10.0 ** (-digits):
        return re_part
    sign = "+" if z.imag >= 0 else "-"
    return f"{re_part} {sign} {abs(z.imag):.{digits}f} i"


def to_pairs(arr: np.ndarray):
    if arr.ndim == 0:
        z = complex(arr)
        return [z.real, z.imag]
    return [to_pairs(sub) for sub in arr]


def from_pairs(nested, shape: tuple[int, ...], field: str) -> np.ndarray:
    out = np.zeros(shape, dtype=np.complex128)
    def fill(node, idx):
        if len(idx) == len(shape):
            if (not isinstance(node, (list, tuple)) or len(node) != 2
                    or not all(isinstance(x, (int, float)) for x in node)):
                raise ValueError(
                    f"field {field!r}: entry at {idx} is not a [re, im] pair")
            out[idx] = complex(node[0], node[1])
            return
        if not isinstance(node, (list, tuple)) or len(node) != shape[len(idx)]:
            raise ValueError(
                f"field {field!r}: expected {shape[len(idx)]} entries at depth "
                f"{len(idx)}, got {node if not isinstance(node, (list, tuple)) else len(node)}")
        for i, sub in enumerate(node):
            fill(sub, idx + (i,))
    fill(nested, ())
    return out


def algebra_to_dict(alg: ThreeAlgebra, h: np.ndarray | None = None) -> dict:
    doc = {
        "n": alg.n,
        "P": list(alg.P.map),
        "Qbar": to_pairs(alg.Qbar.data),
    }
    if alg.Qm is not None:
        doc["Qm"] = to_pairs(alg.Qm.data)
    if h is not None:
        doc["h"] = to_pairs(np.asarray(h, dtype=np.complex128))
    return doc


def algebra_from_dict(doc: dict) -> tuple[ThreeAlgebra, np.ndarray | None]:
    """Parse an algebra document; errors name the offending field."""
    if not isinstance(doc, dict):
        raise ValueError("algebra document must be a JSON object")
    if "n" not in doc or not isinstance(doc["n"], int) or isinstance(doc["n"], bool):
        raise ValueError("field 'n': missing or not an integer")
    n = doc["n"]
    if "P" not in doc:
        raise ValueError("field 'P': missing")
    try:
        p = BasisPermutation(n=n, map=tuple(doc["P"]))
    except (TypeError, ValueError) as exc:
        raise ValueError(f"field 'P': {exc}") from exc
    if "Qbar" not in doc:
        raise ValueError("field 'Qbar': missing")
    qbar_arr = from_pairs(doc["Qbar"], (n,) * 4, "Qbar")
    qbar = DenseTensor(n=n, legs=_QBAR_LEGS, data=qbar_arr)
    qm = None
    if doc.get("Qm") is not None:
        qm = DenseTensor(n=n, legs=_QM_LEGS,
                         data=from_pairs(doc["Qm"], (n,) * 4, "Qm"))
    h = None
    if doc.get("h") is not None:
        h = from_pairs(doc["h"], (n, n), "h")
    return ThreeAlgebra(n=n, P=p, Qbar=qbar, Qm=qm), h


def save_algebra(path: str | Path, alg: ThreeAlgebra,
                 h: np.ndarray | None = None) -> None:
    Path(path).write_text(
        json.dumps(algebra_to_dict(alg, h), indent=2) + "\n", encoding="utf-8")


def load_algebra(path: str | Path) -> tuple[ThreeAlgebra, np.ndarray | None]:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: not valid JSON ({exc})") from exc
    return algebra_from_dict(doc)


def load_form(path: str | Path) -> np.ndarray:
    """Load a bilinear form: either {"h": [[..]]} (any algebra file with an
    h field works) or a bare nested [j][k] array of [re, im] pairs."""
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: not valid JSON ({exc})") from exc
    node = doc.get("h") if isinstance(doc, dict) else doc
    if node is None:
        raise ValueError(f"{path}: no 'h' field present")
    if not isinstance(node, list) or not node:
        raise ValueError("field 'h': must be a non-empty nested array")
    n = len(node)
    return from_pairs(node, (n, n), "h")
