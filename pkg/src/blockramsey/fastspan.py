"""Compiled batch decomposition for exhaustive span checks.

:func:`decompose_rows` answers ``decompose`` for every row of a dense array
at once.  It is a separate implementation from the scalar window scan in
:mod:`blockramsey.vecspace`: each coefficient is read off at its block's top
index and the row is accepted iff it equals the resulting combination.
"""
from __future__ import annotations

import numba
import numpy as np

from .vecspace import BlockSeq


@numba.njit(cache=True, inline="always")
def _residue(V, r, j, cols, p):
    if j >= cols:
        return 0
    a = np.int64(V[r, j])
    # inputs are usually reduced already; skip the division when they are
    return a if 0 <= a < p else a % p


@numba.njit(cache=True)
def _decompose_kernel(V, blk, entry, opens, tops, inv_lead, mul, p):
    n, cols = V.shape
    width = blk.shape[0]
    m = tops.shape[0]
    coeffs = np.zeros((n, m), dtype=np.int64)
    ok = np.ones(n, dtype=np.bool_)
    c = np.zeros(m + 1, dtype=np.int64)  # c[m] = 0 stands for "no block"
    for r in range(n):
        for j in range(max(width, cols)):
            a = _residue(V, r, j, cols, p)
            if j < width:
                i = opens[j]
                if i >= 0:
                    # entering block i: its coefficient is fixed by the top entry
                    c[i] = mul[_residue(V, r, tops[i], cols, p), inv_lead[i]]
                want = mul[c[blk[j]], entry[j]]
            else:
                want = 0
            if a != want:
                ok[r] = False
                break
        if ok[r]:
            for i in range(m):
                coeffs[r, i] = c[i]
    return coeffs, ok


def decompose_rows(V: np.ndarray, X: BlockSeq) -> tuple[np.ndarray, np.ndarray]:
    """``(coeffs, ok)`` for each row of ``V``: ``ok[r]`` says whether row ``r``
    lies in the span of ``X``; ``coeffs[r]`` is its decomposition (zeros
    where ``ok`` is false).  Entries are read mod ``p``.
    """
    p, m = X.p, len(X)
    V = np.asarray(V)
    if V.ndim != 2 or V.dtype.kind not in "iu":
        raise ValueError("expected a 2-d integer array of rows")
    width = X.max_supp + 1
    blk = np.full(width, m, dtype=np.int64)
    entry = np.zeros(width, dtype=np.int64)
    opens = np.full(width, -1, dtype=np.int64)
    tops = np.empty(m, dtype=np.int64)
    inv_lead = np.empty(m, dtype=np.int64)
    for i, (x, (lo, hi)) in enumerate(zip(X.blocks, X.windows)):
        blk[lo : hi + 1] = i
        opens[lo] = i
        entry[lo : hi + 1] = x.coeffs[lo:]
        tops[i], inv_lead[i] = hi, pow(x[hi], p - 2, p)
    return _decompose_kernel(V, blk, entry, opens, tops, inv_lead, _mul_table(p), p)


_MUL: dict[int, np.ndarray] = {}


def _mul_table(p: int) -> np.ndarray:
    if p not in _MUL:
        _MUL[p] = np.arange(p)[:, None] * np.arange(p) % p
    return _MUL[p]
