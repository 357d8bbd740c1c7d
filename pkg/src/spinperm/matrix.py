"""Input matrix representation, parsing, and seeded generation."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ParseError
from .exact import ExactComplex

_FLOAT = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_COMPLEX_RE = re.compile(
    rf"^(?P<re>[+-]?{_FLOAT})(?:(?P<im>[+-]{_FLOAT})[ij])?$"
)

GENERATOR_KINDS = ("complex_gaussian", "real_uniform", "zero_one")


def parse_complex_literal(token: str, backend: str = "float"):
    """Parse ``a``, ``a+bi`` or ``a-bj`` into a scalar of the given backend."""
    m = _COMPLEX_RE.match(token.strip())
    if m is None:
        raise ParseError(f"invalid complex literal {token.strip()!r}")
    re_part = m.group("re")
    im_part = m.group("im")
    if backend == "exact":
        return ExactComplex(
            Fraction(re_part), Fraction(im_part) if im_part else Fraction(0)
        )
    return complex(float(re_part), float(im_part) if im_part else 0.0)


def format_complex(value) -> str:
    """Render a scalar as ``a+bi`` (pure reals stay as ``a``)."""
    if isinstance(value, ExactComplex):
        value = complex(value)
    value = complex(value)
    re_txt = repr(value.real)
    if value.imag == 0.0:
        return re_txt
    sign = "+" if value.imag >= 0 else "-"
    return f"{re_txt}{sign}{repr(abs(value.imag))}i"


@dataclass(frozen=True)
class SquareMatrix:
    """n x n weight matrix; entry(r, c) is the level-r, site-c edge weight.

    ``entries`` is a complex128 array for the float backend, or a tuple of
    tuples of ExactComplex for the exact backend.
    """

    n: int
    entries: object
    backend: str = "float"

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("matrix dimension must be >= 1")
        if self.backend == "float":
            arr = self.entries
            if not isinstance(arr, np.ndarray) or arr.shape != (self.n, self.n):
                raise ValueError("float backend entries must be an (n, n) array")
            if not np.all(np.isfinite(arr)):
                raise ParseError("matrix entries must be finite")
        elif self.backend == "exact":
            rows = self.entries
            if len(rows) != self.n or any(len(r) != self.n for r in rows):
                raise ValueError("exact backend entries must be n rows of n scalars")
        else:
            raise ValueError(f"unknown backend {self.backend!r}")

    @classmethod
    def from_array(cls, arr) -> "SquareMatrix":
        arr = np.asarray(arr, dtype=np.complex128)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError("expected a square 2-d array")
        return cls(arr.shape[0], arr, "float")

    @classmethod
    def from_exact_rows(cls, rows) -> "SquareMatrix":
        rows = tuple(tuple(r) for r in rows)
        return cls(len(rows), rows, "exact")

    def weight(self, r: int, c: int):
        if self.backend == "float":
            return complex(self.entries[r, c])
        return self.entries[r][c]

    def to_array(self) -> np.ndarray:
        if self.backend == "float":
            return np.array(self.entries, dtype=np.complex128)
        return np.array(
            [[complex(v) for v in row] for row in self.entries], dtype=np.complex128
        )

    def to_float(self) -> "SquareMatrix":
        return SquareMatrix.from_array(self.to_array())

    def transpose(self) -> "SquareMatrix":
        if self.backend == "float":
            return SquareMatrix.from_array(self.entries.T)
        return SquareMatrix.from_exact_rows(
            tuple(tuple(self.entries[r][c] for r in range(self.n)) for c in range(self.n))
        )


def _rows_to_matrix(rows: list[list], backend: str) -> SquareMatrix:
    n = len(rows)
    if n == 0:
        raise ParseError("empty matrix input")
    for i, row in enumerate(rows):
        if len(row) != n:
            raise ParseError(f"ragged row {i}: expected {n} entries, got {len(row)}")
    if backend == "exact":
        return SquareMatrix.from_exact_rows(rows)
    return SquareMatrix.from_array(np.array(rows, dtype=np.complex128))


def _json_value_to_scalar(value, backend: str):
    if isinstance(value, str):
        return parse_complex_literal(value, backend)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"invalid matrix entry {value!r}")
    if backend == "exact":
        frac = Fraction(value) if isinstance(value, int) else Fraction(repr(value))
        return ExactComplex(frac)
    return complex(value)


def parse_matrix(source: str, format: str = "csv", backend: str = "float") -> SquareMatrix:
    """Parse a CSV or JSON matrix blob.

    CSV: one row per line, comma-separated complex literals.
    JSON: ``{"n": int, "rows": [[entry, ...], ...]}`` with numeric or
    string entries.
    """
    if format == "csv":
        lines = [ln for ln in source.splitlines() if ln.strip()]
        if not lines:
            raise ParseError("empty matrix input")
        rows = [
            [parse_complex_literal(tok, backend) for tok in ln.split(",")]
            for ln in lines
        ]
        return _rows_to_matrix(rows, backend)
    if format == "json":
        try:
            doc = json.loads(source)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from exc
        if not isinstance(doc, dict) or "rows" not in doc:
            raise ParseError("JSON matrix must be an object with a 'rows' field")
        rows = [
            [_json_value_to_scalar(v, backend) for v in row] for row in doc["rows"]
        ]
        matrix = _rows_to_matrix(rows, backend)
        if "n" in doc and doc["n"] != matrix.n:
            raise ParseError(f"declared n={doc['n']} but parsed {matrix.n} rows")
        return matrix
    raise ParseError(f"unknown matrix format {format!r}")


def matrix_to_csv(matrix: SquareMatrix) -> str:
    lines = []
    for r in range(matrix.n):
        lines.append(",".join(format_complex(matrix.weight(r, c)) for c in range(matrix.n)))
    return "\n".join(lines) + "\n"


def matrix_to_json(matrix: SquareMatrix) -> str:
    rows = [
        [format_complex(matrix.weight(r, c)) for c in range(matrix.n)]
        for r in range(matrix.n)
    ]
    return json.dumps({"n": matrix.n, "rows": rows})


def random_matrix(
    n: int, seed: int, kind: str = "complex_gaussian", backend: str = "float"
) -> SquareMatrix:
    """Deterministic seeded test matrix.

    ``complex_gaussian`` draws independent standard normals for the real and
    imaginary parts; ``real_uniform`` draws from [0, 1); ``zero_one`` draws
    uniform bits.  Only ``zero_one`` supports the exact backend.
    """
    if n < 1:
        raise ValueError("matrix dimension must be >= 1")
    if kind not in GENERATOR_KINDS:
        raise ValueError(f"unknown generator kind {kind!r}")
    rng = np.random.default_rng(seed)
    if kind == "complex_gaussian":
        arr = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    elif kind == "real_uniform":
        arr = rng.random((n, n)).astype(np.complex128)
    else:
        arr = rng.integers(0, 2, size=(n, n)).astype(np.complex128)
    if backend == "exact":
        if kind != "zero_one":
            raise ValueError("exact backend requires rational entries (use zero_one)")
        rows = [
            [ExactComplex.of(int(arr[r, c].real)) for c in range(n)] for r in range(n)
        ]
        return SquareMatrix.from_exact_rows(rows)
    return SquareMatrix.from_array(arr)
