"""Occupancy bitstring helpers: masks, display codes, and per-level indexing.

Two integer encodings of an occupation string coexist:

* ``mask``: bit ``b`` (value ``2**b``) holds the occupation of site ``b``.
* ``code``: the rendered label (site 0 leftmost) read as a binary number,
  i.e. site ``s`` occupies bit ``n-1-s``.  All basis enumerations in this
  package are sorted by ascending ``code``, which makes dense matrices line
  up with labels sorted as binary numbers (``000 < 001 < 010 < ...``).
"""

from __future__ import annotations

import math

import numpy as np

_LEVEL_DTYPE = np.int64


def binom(n: int, k: int) -> int:
    """C(n, k), zero outside the valid range."""
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def reverse_bits(x: int, n: int) -> int:
    """Reverse the low n bits of x (mask <-> code conversion)."""
    out = 0
    for b in range(n):
        if x >> b & 1:
            out |= 1 << (n - 1 - b)
    return out


def mask_to_text(mask: int, n: int) -> str:
    """Render with site 0 as the leftmost character."""
    return "".join("1" if mask >> s & 1 else "0" for s in range(n))


def text_to_mask(text: str) -> int:
    mask = 0
    for s, ch in enumerate(text):
        if ch == "1":
            mask |= 1 << s
        elif ch != "0":
            raise ValueError(f"invalid occupation string {text!r}")
    return mask


def mask_to_code(mask: int, n: int) -> int:
    return reverse_bits(mask, n)


def code_to_mask(code: int, n: int) -> int:
    return reverse_bits(code, n)


def level_codes(n: int, h: int) -> np.ndarray:
    """All weight-h codes on n bits, ascending.

    Split on the top bit: codes without it keep their order below the ones
    that carry it, so the concatenation stays sorted.
    """
    if h < 0 or h > n:
        return np.empty(0, dtype=_LEVEL_DTYPE)
    if h == 0:
        return np.zeros(1, dtype=_LEVEL_DTYPE)
    if h == n:
        return np.array([(1 << n) - 1], dtype=_LEVEL_DTYPE)
    low = level_codes(n - 1, h)
    high = level_codes(n - 1, h - 1) + (1 << (n - 1))
    return np.concatenate([low, high])


def level_codes_list(n: int, h: int) -> list[int]:
    """Python-int variant of level_codes for the exact backend."""
    return [int(c) for c in level_codes(n, h)]


def rank_in_level(code: int, n: int) -> int:
    """Index of a weight-h code within the ascending weight-h enumeration.

    Combinadic rank: with set bit positions p_1 < p_2 < ... < p_h,
    rank = sum_k C(p_k, k).
    """
    rank = 0
    k = 0
    for p in range(n):
        if code >> p & 1:
            k += 1
            rank += binom(p, k)
    return rank


def parity_below(code: int, bit: int) -> int:
    """Parity of set bits strictly below the given single-bit value."""
    return (code & (bit - 1)).bit_count() & 1
