"""Exhaustive enumeration oracles, independent of the search code.

They enumerate every integer coefficient vector in a box and evaluate the
defining constraints directly; numpy keeps chunks vectorized.
"""
from __future__ import annotations

import numpy as np

_CHUNK = 1 << 21


def _digits(start: int, stop: int, n: int, base: int, offset: int) -> np.ndarray:
    idx = np.arange(start, stop, dtype=np.int64)
    out = np.empty((idx.size, n), dtype=np.int64)
    for j in range(n):
        out[:, j] = idx % base - offset
        idx //= base
    return out


def _conv_rows(h, Z: np.ndarray) -> np.ndarray:
    n = Z.shape[1]
    Y = np.zeros((Z.shape[0], n + len(h) - 1), dtype=np.int64)
    for k, dk in enumerate(h):
        if dk:
            Y[:, k:k + n] += dk * Z
    return Y


def brute_force_poly_distortion(h, deg_bound: int, budget: int, coeff_bound: int) -> tuple[int, list[int]]:
    """``max S(f)`` over f with ``deg f <= deg_bound``, ``|z_i| <= coeff_bound``, ``S(hf) <= budget``.

    ``h`` is a coefficient list (low -> high). Returns the value and one maximiser.
    """
    h = [int(c) for c in h]
    if deg_bound < 0:
        return 0, []
    n = deg_bound + 1
    base = 2 * coeff_bound + 1
    total = base ** n
    best, arg = 0, []
    for start in range(0, total, _CHUNK):
        Z = _digits(start, min(total, start + _CHUNK), n, base, coeff_bound)
        ok = np.abs(_conv_rows(h, Z)).sum(axis=1) <= budget
        if not ok.any():
            continue
        S = np.abs(Z).sum(axis=1)
        S[~ok] = -1
        i = int(S.argmax())
        if S[i] > best:
            best, arg = int(S[i]), Z[i].tolist()
    return best, arg


def brute_force_delta(h, l: int, coeff_bound: int) -> tuple[int, tuple[int, list[int]]]:
    """Literal window definition over integer Laurent f.

    f ranges over ``sum_{q=s}^{s+l} z_q x^q`` for ``-l <= s <= l`` and
    ``|z_q| <= coeff_bound``; with ``s, p`` the true valuation and span of f,
    the constraints are ``S(fh) <= l`` and
    ``max(t + s + p, 0) - min(s, 0) <= l``.
    Returns ``(value, (valuation, coefficients))``.
    """
    h = [int(c) for c in h]
    t = len(h) - 1
    n = l + 1
    base = 2 * coeff_bound + 1
    total = base ** n
    best, arg = 0, (0, [])
    for start in range(0, total, _CHUNK):
        Z = _digits(start, min(total, start + _CHUNK), n, base, coeff_bound)
        nz = Z != 0
        has = nz.any(axis=1)
        first = nz.argmax(axis=1)
        last = n - 1 - nz[:, ::-1].argmax(axis=1)
        e = np.abs(_conv_rows(h, Z)).sum(axis=1)
        S = np.abs(Z).sum(axis=1)
        for s0 in range(-l, l + 1):
            s = s0 + first
            p = last - first
            u = np.maximum(t + s + p, 0) - np.minimum(s, 0)
            ok = has & (e <= l) & (u <= l)
            if not ok.any():
                continue
            Sk = np.where(ok, S, -1)
            i = int(Sk.argmax())
            if Sk[i] > best:
                row = Z[i].tolist()
                fi, la = int(first[i]), int(last[i])
                best, arg = int(Sk[i]), (s0 + fi, row[fi:la + 1])
    return best, arg
