"""Exact vertex enumeration for bounded polytopes with 0/1 constraint rows.

The polytope is ``{x >= 0 : A x <= b}`` where every row of ``A`` is a 0/1
vector and ``b`` is a nonnegative integer vector.  Vertices are found by
solving every square subsystem of tight constraints.  Nonnegativity
constraints are handled by enumerating the support of the vertex: a vertex
with support ``S`` is the unique solution of ``|S|`` independent facet rows
restricted to ``S``, with every coordinate in ``S`` strictly positive.

All arithmetic is on integers.  Determinants are computed with batched
fraction-free (Bareiss) elimination; solutions come from Cramer's rule as
integer numerator/denominator pairs, so no rounding occurs anywhere.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Sequence

import numpy as np

__all__ = ["batched_det", "enumerate_vertices_01", "rank_exact"]

_INT64_SAFE = 2**62


def batched_det(mats: np.ndarray) -> np.ndarray:
    """Determinants of a stack of square integer matrices, exactly.

    Parameters
    ----------
    mats : ndarray, shape (B, k, k)
        Integer matrices, either ``int64`` (caller guarantees no overflow)
        or ``object`` dtype holding Python ints.

    Returns
    -------
    ndarray, shape (B,)
        Exact determinants with the same dtype as ``mats``.
    """
    m = np.array(mats, copy=True)
    batch, k, _ = m.shape
    if batch == 0:
        return np.zeros(0, dtype=m.dtype)
    if k == 0:
        return np.ones(batch, dtype=m.dtype)
    sign = np.ones(batch, dtype=m.dtype)
    alive = np.ones(batch, dtype=bool)
    prev = np.ones(batch, dtype=m.dtype)
    rows = np.arange(batch)
    for p in range(k):
        col = m[:, p:, p] != 0
        has = col.any(axis=1)
        alive &= has
        r = p + np.argmax(col, axis=1)
        swap = alive & (r != p)
        if swap.any():
            b = rows[swap]
            rp = m[b, p].copy()
            m[b, p] = m[b, r[swap]]
            m[b, r[swap]] = rp
            sign[swap] = -sign[swap]
        if p == k - 1:
            break
        piv = m[:, p, p].copy()
        piv[~alive] = 1
        lower = m[:, p + 1:, p][:, :, None]
        right = m[:, p, p + 1:][:, None, :]
        block = m[:, p + 1:, p + 1:]
        block = (block * piv[:, None, None] - lower * right)
        # Bareiss: the division by the previous pivot is exact
        m[:, p + 1:, p + 1:] = block // prev[:, None, None]
        m[:, p + 1:, p] = 0
        prev = piv
    det = sign * m[:, k - 1, k - 1]
    det[~alive] = 0
    return det


def _dtype_for(k: int, bmax: int):
    # Hadamard bound on every minor of the augmented [A | b] system.
    bound = (k + bmax * bmax) ** (k / 2.0) * max(bmax, 1) * 4
    return np.int64 if bound < _INT64_SAFE else object


def rank_exact(rows: Sequence[Sequence[int]]) -> int:
    """Rank of a small integer matrix over the rationals."""
    mat = [[Fraction(v) for v in row] for row in rows]
    if not mat:
        return 0
    ncols = len(mat[0])
    rank = 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(mat)) if mat[i][c] != 0), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        for i in range(len(mat)):
            if i != rank and mat[i][c] != 0:
                f = mat[i][c] / mat[rank][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[rank])]
        rank += 1
    return rank


def _restricted_rows(rows, rhs, support):
    """Distinct nonzero facet rows restricted to ``support``, min rhs each."""
    best: dict[tuple, int] = {}
    for row, b in zip(rows, rhs):
        key = tuple(row[j] for j in support)
        if not any(key):
            continue
        if key not in best or b < best[key]:
            best[key] = b
    return list(best.items())


def enumerate_vertices_01(rows: Sequence[Sequence[int]],
                          rhs: Sequence[int]) -> list[tuple[Fraction, ...]]:
    """All vertices of ``{x >= 0 : rows @ x <= rhs}``, as exact tuples.

    ``rows`` must be 0/1 and ``rhs`` nonnegative integers, and the polytope
    must be bounded (each coordinate appears in some row).  The result is
    sorted lexicographically.
    """
    rows = [tuple(int(v) for v in r) for r in rows]
    rhs = [int(b) for b in rhs]
    if any(b < 0 for b in rhs):
        raise ValueError("right-hand sides must be nonnegative")
    n = len(rows[0]) if rows else 0
    full = np.array(rows, dtype=np.int64).reshape(len(rows), n)
    full_b = np.array(rhs, dtype=np.int64)
    bmax = max(rhs, default=0)

    found: set[tuple[Fraction, ...]] = {tuple(Fraction(0) for _ in range(n))}
    by_size: dict[int, list[tuple]] = {}
    for k in range(1, n + 1):
        for support in itertools.combinations(range(n), k):
            cand = _restricted_rows(rows, rhs, support)
            if len(cand) < k:
                continue
            for subset in itertools.combinations(range(len(cand)), k):
                by_size.setdefault(k, []).append(
                    (support, [cand[i] for i in subset]))

    for k, systems in by_size.items():
        dtype = _dtype_for(k, bmax)
        a = np.array([[r for r, _ in sel] for _, sel in systems], dtype=dtype)
        b = np.array([[v for _, v in sel] for _, sel in systems], dtype=dtype)
        stack = [a]
        for j in range(k):
            aj = a.copy()
            aj[:, :, j] = b
            stack.append(aj)
        dets = batched_det(np.concatenate(stack, axis=0))
        batch = len(systems)
        den = dets[:batch]
        nums = dets[batch:].reshape(k, batch).T
        ok = den != 0
        sgn = np.where(den < 0, -1, 1).astype(dtype)
        den_p = den * sgn
        nums_p = nums * sgn[:, None]
        ok &= (nums_p > 0).all(axis=1)
        idx = np.nonzero(ok)[0]
        if idx.size == 0:
            continue
        # feasibility against every facet: A_S x_S <= b  <=>  A_S num <= b den
        supports = np.array([systems[i][0] for i in idx], dtype=np.int64)
        sub = full[:, supports]                       # (m, B', k)
        lhs = (sub.transpose(1, 0, 2).astype(dtype) * nums_p[idx][:, None, :]).sum(axis=2)
        feas = (lhs <= full_b.astype(dtype)[None, :] * den_p[idx][:, None]).all(axis=1)
        for i, good in zip(idx, feas):
            if not good:
                continue
            support = systems[i][0]
            point = [Fraction(0)] * n
            d = int(den_p[i])
            for j, c in enumerate(support):
                point[c] = Fraction(int(nums_p[i, j]), d)
            found.add(tuple(point))
    return sorted(found)
