"""Implicit sparse application of the branching operator over Hamming levels.

The operator raises one site per step with weight ``w[h, j]`` (``h`` the
source Hamming level, ``j`` the raised site), optionally signed by the
occupied-sites-to-the-right parity for fermionic statistics.  Sweeping it n
times against the all-empty state yields the permanent (bosonic) or the
determinant (fermionic) at a counted cost of exactly ``n * 2**n`` fused
multiply-adds.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass, field

import numpy as np

from . import _kernels, bits
from .errors import (
    LevelMismatchError,
    OccupiedSiteError,
    RangeError,
    SizeGuardError,
)
from .exact import EXACT_ZERO, ExactComplex
from .matrix import SquareMatrix

VARIANTS = ("tilde", "breve")
STATISTICS = ("bosonic", "fermionic")

DENSE_MAX_N = 12


@dataclass(frozen=True)
class BasisState:
    """Occupation string; bit b of ``mask`` is the occupation of site b."""

    mask: int
    n: int

    def __post_init__(self):
        if not 0 <= self.mask < (1 << self.n):
            raise ValueError(f"mask {self.mask} out of range for n={self.n}")

    @property
    def level(self) -> int:
        return self.mask.bit_count()

    @property
    def text(self) -> str:
        """Rendered label, site 0 leftmost."""
        return bits.mask_to_text(self.mask, self.n)

    @property
    def code(self) -> int:
        """The label read as a binary number; basis sort key."""
        return bits.mask_to_code(self.mask, self.n)

    @classmethod
    def from_text(cls, text: str) -> "BasisState":
        return cls(bits.text_to_mask(text), len(text))

    @classmethod
    def from_code(cls, code: int, n: int) -> "BasisState":
        return cls(bits.code_to_mask(code, n), n)


def jw_sign(state: BasisState, site: int) -> int:
    """Jordan-Wigner phase for creating a particle at ``site``.

    Counts occupied sites with index greater than ``site`` (to the right in
    the rendered label); odd count flips the sign.
    """
    if state.mask >> site & 1:
        raise OccupiedSiteError(f"site {site} of {state.text} already occupied")
    above = state.mask >> (site + 1)
    return -1 if above.bit_count() & 1 else 1


@dataclass
class OpCount:
    """Fused multiply-add tally: one multiplication and one addition per edge."""

    multiplications: int = 0
    additions: int = 0

    @property
    def total(self) -> int:
        return self.multiplications + self.additions

    def tally_edges(self, edges: int) -> None:
        self.multiplications += edges
        self.additions += edges

    def __add__(self, other: "OpCount") -> "OpCount":
        return OpCount(
            self.multiplications + other.multiplications,
            self.additions + other.additions,
        )


def spin_op_count(n: int) -> OpCount:
    """Counted cost of the full closed-variant sweep: n * 2**n in total."""
    edges = n * (1 << (n - 1))
    return OpCount(edges, edges)


@dataclass(frozen=True)
class SpinOperator:
    """Branching operator over a weight matrix.

    ``variant`` "tilde" keeps the all-occupied state and returns through a
    unit-weight back edge; "breve" closes directly from level n-1 to the
    empty state and drops the all-occupied state from the space.
    """

    matrix: SquareMatrix
    variant: str = "breve"
    statistics: str = "bosonic"

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}")
        if self.statistics not in STATISTICS:
            raise ValueError(f"statistics must be one of {STATISTICS}")

    @property
    def n(self) -> int:
        return self.matrix.n

    @property
    def dimension(self) -> int:
        return (1 << self.n) - (1 if self.variant == "breve" else 0)

    @property
    def fermionic(self) -> bool:
        return self.statistics == "fermionic"


@dataclass
class LevelVector:
    """Amplitudes over all weight-``level`` states, ascending code order."""

    n: int
    level: int
    amplitudes: object = field(default=None)

    def __post_init__(self):
        expected = bits.binom(self.n, self.level)
        if self.amplitudes is None:
            raise ValueError("amplitudes required")
        if len(self.amplitudes) != expected:
            raise ValueError(
                f"level {self.level} of n={self.n} needs {expected} amplitudes, "
                f"got {len(self.amplitudes)}"
            )

    @classmethod
    def vacuum(cls, n: int, backend: str = "float") -> "LevelVector":
        if backend == "exact":
            return cls(n, 0, [ExactComplex.of(1)])
        return cls(n, 0, np.ones(1, dtype=np.complex128))

    @property
    def is_exact(self) -> bool:
        return isinstance(self.amplitudes, list)


def _wbits_row(op: SpinOperator, h: int) -> np.ndarray:
    # weight for raising the site stored in code bit p is w[h, n-1-p]
    return op.matrix.to_array()[h, ::-1].copy()


def _check_level_for_apply(op: SpinOperator, v: LevelVector) -> None:
    top = op.n - 1 if op.variant == "breve" else op.n
    if not 0 <= v.level < top:
        raise LevelMismatchError(
            f"apply_level expects level in [0, {top}) for variant "
            f"{op.variant}, got {v.level}"
        )


def apply_level(op: SpinOperator, v: LevelVector, count: OpCount | None = None) -> LevelVector:
    """One raising sweep: level h -> h+1, one fused multiply-add per edge."""
    _check_level_for_apply(op, v)
    n, h = op.n, v.level
    if count is not None:
        count.tally_edges(bits.binom(n, h) * (n - h))
    if v.is_exact:
        return _apply_level_exact(op, v)
    kernel = _kernels.kernel_name()
    src = _kernels.level_codes(n, h, kernel)
    dst = _kernels.level_codes(n, h + 1, kernel)
    out = _kernels.apply_level(
        src, dst, np.asarray(v.amplitudes), _wbits_row(op, h), op.fermionic, kernel
    )
    return LevelVector(n, h + 1, out)


def apply_closing(op: SpinOperator, v: LevelVector, count: OpCount | None = None):
    """Closed-variant final step: level n-1 -> amplitude on the empty state."""
    if op.variant != "breve":
        raise LevelMismatchError("apply_closing is only defined for the breve variant")
    n = op.n
    if v.level != n - 1:
        raise LevelMismatchError(f"apply_closing expects level {n - 1}, got {v.level}")
    if count is not None:
        count.tally_edges(n)
    if v.is_exact:
        return _apply_closing_exact(op, v)
    kernel = _kernels.kernel_name()
    src = _kernels.level_codes(n, n - 1, kernel)
    return _kernels.apply_closing(
        src,
        np.asarray(v.amplitudes),
        _wbits_row(op, n - 1),
        op.fermionic,
        (1 << n) - 1,
        kernel,
    )


def _apply_level_exact(op: SpinOperator, v: LevelVector) -> LevelVector:
    n, h = op.n, v.level
    src = bits.level_codes_list(n, h)
    dst = bits.level_codes_list(n, h + 1)
    out = [EXACT_ZERO] * len(dst)
    for i, code in enumerate(src):
        amp = v.amplitudes[i]
        if amp.is_zero():
            continue
        for p in range(n):
            bit = 1 << p
            if code & bit:
                continue
            w = op.matrix.weight(h, n - 1 - p)
            term = w * amp
            if op.fermionic and bits.parity_below(code, bit):
                term = -term
            j = bisect_left(dst, code | bit)
            out[j] = out[j] + term
    return LevelVector(n, h + 1, out)


def _apply_closing_exact(op: SpinOperator, v: LevelVector) -> ExactComplex:
    n = op.n
    src = bits.level_codes_list(n, n - 1)
    full = (1 << n) - 1
    total = EXACT_ZERO
    for i, code in enumerate(src):
        rem = full ^ code
        p = rem.bit_length() - 1
        term = op.matrix.weight(n - 1, n - 1 - p) * v.amplitudes[i]
        if op.fermionic and bits.parity_below(code, rem):
            term = -term
        total = total + term
    return total


def evaluate(op: SpinOperator):
    """Full sweep from the empty state back to itself.

    Returns ``(value, OpCount)``: the permanent for bosonic statistics or the
    determinant for fermionic.  The closed variant takes n steps and exactly
    ``n * 2**n`` counted operations; the cyclic variant takes n+1 steps, the
    extra one being the unit-weight return edge.
    """
    n = op.n
    count = OpCount()
    v = LevelVector.vacuum(n, op.matrix.backend)
    for _ in range(n - 1):
        v = apply_level(op, v, count)
    if op.variant == "breve":
        return apply_closing(op, v, count), count
    v = apply_level(op, v, count)
    count.tally_edges(1)  # the unit-weight return edge
    value = v.amplitudes[0]
    if not v.is_exact:
        value = complex(value)
    return value, count


def operator_power_on_zero(op: SpinOperator, p: int) -> LevelVector:
    """p-fold application to the empty state as a level-p vector.

    For the closed variant, ``p == n`` applies the closing step and returns a
    level-0 vector whose single amplitude is the permanent/determinant.
    """
    n = op.n
    if not 0 <= p <= n:
        raise RangeError(f"power must satisfy 0 <= p <= {n}, got {p}")
    v = LevelVector.vacuum(n, op.matrix.backend)
    steps = p if (op.variant == "tilde" or p < n) else p - 1
    for _ in range(steps):
        v = apply_level(op, v)
    if op.variant == "breve" and p == n:
        value = apply_closing(op, v)
        if isinstance(value, ExactComplex):
            return LevelVector(n, 0, [value])
        return LevelVector(n, 0, np.array([value], dtype=np.complex128))
    return v


def dense_operator(op: SpinOperator) -> np.ndarray:
    """Materialize every edge of the operator as a dense array.

    The basis index of a state equals its code (label read as binary), so
    the empty state comes first and rows/columns follow label order.  The
    closed variant omits the all-occupied state entirely; the cyclic variant
    keeps it and carries the unit return entry to the empty state.
    """
    n = op.n
    if n > DENSE_MAX_N:
        raise SizeGuardError(f"dense operator limited to n <= {DENSE_MAX_N}")
    dim = op.dimension
    full = (1 << n) - 1
    dense = np.zeros((dim, dim), dtype=np.complex128)
    w = op.matrix.to_array()
    for h in range(n):
        for code in bits.level_codes_list(n, h):
            for p in range(n):
                bit = 1 << p
                if code & bit:
                    continue
                weight = w[h, n - 1 - p]
                if op.fermionic and bits.parity_below(code, bit):
                    weight = -weight
                target = code | bit
                if op.variant == "breve" and h == n - 1:
                    target = 0
                dense[target, code] = weight
    if op.variant == "tilde":
        dense[0, full] = 1.0
    return dense


def embed_level_vector(v: LevelVector, dimension: int) -> np.ndarray:
    """Place a level vector into the dense basis (index = code)."""
    out = np.zeros(dimension, dtype=np.complex128)
    codes = bits.level_codes(v.n, v.level)
    amps = v.amplitudes
    if v.is_exact:
        amps = np.array([complex(a) for a in amps])
    out[codes] = amps
    return out
