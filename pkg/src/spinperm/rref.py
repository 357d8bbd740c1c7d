"""Complex Gauss-Jordan elimination: RREF, rank, and null-space bases."""

from __future__ import annotations

import numpy as np

RANK_REL_TOL = 1e-9


def _threshold(a: np.ndarray, rel_tol: float) -> float:
    scale = float(np.max(np.abs(a))) if a.size else 0.0
    return rel_tol * scale if scale > 0 else rel_tol


def rref(a: np.ndarray, rel_tol: float = RANK_REL_TOL):
    """Reduced row echelon form with partial pivoting by magnitude.

    Returns ``(reduced, pivot_columns)``.  Entries below the relative
    threshold are treated as zero.
    """
    r = np.array(a, dtype=np.complex128)
    if r.ndim != 2:
        raise ValueError("rref expects a 2-d array")
    eps = _threshold(r, rel_tol)
    nrows, ncols = r.shape
    pivots = []
    row = 0
    for col in range(ncols):
        if row >= nrows:
            break
        pick = row + int(np.argmax(np.abs(r[row:, col])))
        if abs(r[pick, col]) <= eps:
            continue
        if pick != row:
            r[[row, pick]] = r[[pick, row]]
        r[row] /= r[row, col]
        mask = np.arange(nrows) != row
        r[mask] -= np.outer(r[mask, col], r[row])
        pivots.append(col)
        row += 1
    return r, pivots


def matrix_rank(a: np.ndarray, rel_tol: float = RANK_REL_TOL) -> int:
    return len(rref(a, rel_tol)[1])


def nullity(a: np.ndarray, rel_tol: float = RANK_REL_TOL) -> int:
    return a.shape[1] - matrix_rank(a, rel_tol)


def nullspace(a: np.ndarray, rel_tol: float = RANK_REL_TOL) -> list[np.ndarray]:
    """A spanning set for the kernel, one vector per free column."""
    r, pivots = rref(a, rel_tol)
    ncols = a.shape[1]
    free = [c for c in range(ncols) if c not in pivots]
    vectors = []
    for f in free:
        v = np.zeros(ncols, dtype=np.complex128)
        v[f] = 1.0
        for row, p in enumerate(pivots):
            v[p] = -r[row, f]
        vectors.append(v)
    return vectors


def leading_reduced_basis(vectors, rel_tol: float = RANK_REL_TOL) -> list[np.ndarray]:
    """Canonicalize a basis so each vector leads with 1 at its first nonzero.

    This is the lower-triangular reduced form: leads are distinct, every
    other vector vanishes at each lead, and vectors come back sorted by
    ascending lead.  The result depends only on the spanned subspace.
    """
    rows = [np.array(v, dtype=np.complex128) for v in vectors]
    done: list[tuple[int, np.ndarray]] = []
    while rows:
        leads = []
        for v in rows:
            eps = _threshold(v, rel_tol)
            nz = np.flatnonzero(np.abs(v) > eps)
            leads.append(nz[0] if nz.size else None)
        candidates = [
            (lead, -abs(rows[i][lead]), i)
            for i, lead in enumerate(leads)
            if lead is not None
        ]
        if not candidates:
            break
        lead, _, i = min(candidates)
        picked = rows.pop(i)
        pivot = picked / picked[lead]
        for v in rows:
            v -= v[lead] * pivot
        for _, v in done:
            v -= v[lead] * pivot
        done.append((lead, pivot))
    done.sort(key=lambda item: item[0])
    return [v for _, v in done]


def kernel_leading_basis(a: np.ndarray, rel_tol: float = RANK_REL_TOL) -> list[np.ndarray]:
    """Kernel basis in the leading-coordinate canonical form."""
    return leading_reduced_basis(nullspace(a, rel_tol), rel_tol)


def leading_index(v: np.ndarray, rel_tol: float = RANK_REL_TOL) -> int | None:
    eps = _threshold(v, rel_tol)
    nz = np.flatnonzero(np.abs(v) > eps)
    return int(nz[0]) if nz.size else None
