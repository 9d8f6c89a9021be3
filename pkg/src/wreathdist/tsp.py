"""Exact shortest path from a start point through a set of lattice points to an end point.

Distances are L1 (the word metric of Z^d on its standard basis). Subset
dynamic programming; among optimal visiting orders the lexicographically
least one (points compared as tuples) is returned.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations

import numpy as np

DEFAULT_CAP = 16
_NUMPY_FROM = 9


class SupportCapExceeded(ValueError):
    pass


def l1(p, q) -> int:
    return sum(abs(a - b) for a, b in zip(p, q))


def path_tsp(points, start, end, cap: int = DEFAULT_CAP) -> tuple[int, list[tuple[int, ...]]]:
    """Return ``(cost, order)`` of the cheapest path start -> all points -> end."""
    pts = tuple(sorted(set(map(tuple, points))))
    if len(pts) > cap:
        raise SupportCapExceeded(f"support of size {len(pts)} exceeds cap {cap}")
    cost, order = _solve(pts, tuple(start), tuple(end))
    return cost, [pts[i] for i in order]


@lru_cache(maxsize=1 << 16)
def _solve(pts, start, end):
    r = len(pts)
    if r == 0:
        return l1(start, end), ()
    if r >= _NUMPY_FROM:
        return _solve_numpy(pts, start, end)
    D = [[l1(p, q) for q in pts] for p in pts]
    to_end = [l1(p, end) for p in pts]
    full = (1 << r) - 1
    # G[mask][j]: cheapest completion from point j having visited mask (j in mask)
    G = [None] * (1 << r)
    G[full] = to_end
    for k in range(r - 1, 0, -1):
        for combo in combinations(range(r), k):
            mask = 0
            for i in combo:
                mask |= 1 << i
            row = [0] * r
            free = [j for j in range(r) if not mask >> j & 1]
            for last in combo:
                Dl = D[last]
                row[last] = min(Dl[j] + G[mask | 1 << j][j] for j in free)
            G[mask] = row
    return _reconstruct(pts, start, D, lambda m, j: G[m][j])


def _reconstruct(pts, start, D, G):
    r = len(pts)
    from_start = [l1(start, p) for p in pts]
    best = min(from_start[j] + G(1 << j, j) for j in range(r))
    order = []
    mask, cur, remaining = 0, None, best
    for _ in range(r):
        for j in range(r):
            if mask >> j & 1:
                continue
            step = from_start[j] if cur is None else D[cur][j]
            if step + G(mask | 1 << j, j) == remaining:
                order.append(j)
                mask |= 1 << j
                remaining -= step
                cur = j
                break
    return best, tuple(order)


def _solve_numpy(pts, start, end):
    r = len(pts)
    P = np.array(pts, dtype=np.int64)
    D = np.abs(P[:, None, :] - P[None, :, :]).sum(axis=2)
    to_end = np.abs(P - np.array(end, dtype=np.int64)).sum(axis=1)
    n = 1 << r
    big = np.iinfo(np.int64).max // 4
    G = np.full((n, r), big, dtype=np.int64)
    G[n - 1] = to_end
    masks = np.arange(n, dtype=np.int64)
    pop = np.zeros(n, dtype=np.int64)
    for j in range(r):
        pop += (masks >> j) & 1
    for k in range(r - 1, 0, -1):
        level = masks[pop == k]
        for j in range(r):
            sel = level[((level >> j) & 1) == 0]
            if sel.size == 0:
                continue
            cand = D[:, j][None, :] + G[sel | (1 << j), j][:, None]
            G[sel] = np.minimum(G[sel], cand)
    Dl = D.tolist()
    cost, order = _reconstruct(pts, start, Dl, lambda m, j: int(G[m, j]))
    return int(cost), order


def nearest_neighbor_tsp(points, start, end) -> tuple[int, list[tuple[int, ...]]]:
    """Heuristic (non-certified) path: nearest neighbour then 2-opt."""
    pts = sorted(set(map(tuple, points)))
    order, cur = [], tuple(start)
    left = list(pts)
    while left:
        nxt = min(left, key=lambda p: (l1(cur, p), p))
        left.remove(nxt)
        order.append(nxt)
        cur = nxt

    def cost(o):
        seq = [tuple(start)] + o + [tuple(end)]
        return sum(l1(a, b) for a, b in zip(seq, seq[1:]))

    best = cost(order)
    improved = True
    while improved:
        improved = False
        for i in range(len(order) - 1):
            for j in range(i + 1, len(order)):
                cand = order[:i] + order[i:j + 1][::-1] + order[j + 1:]
                c = cost(cand)
                if c < best:
                    order, best, improved = cand, c, True
    return best, order
