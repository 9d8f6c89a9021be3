"""Experiment harness: distortion curves, slope fits, CSV/JSON reports."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .algebra import FgAbelianGroup
from .distortion import IntPoly, best_witness, distortion_exponent, upper_bound
from .exemplary import ExemplarySubgroup, delta_exact
from .reduction import (GeneratorFile, Prediction, clear_denominators, predict_file, snf_laurent,
                        LaurentMatrix)
from .tsp import DEFAULT_CAP, SupportCapExceeded
from .wreath import WreathGroup, bfs_ball_raw, wr_len_closed, wr_len_trace

DEFAULT_LS = (4, 8, 16, 32, 64)


def fit_slope(points) -> float:
    """Least-squares slope of log(value) against log(l)."""
    pts = [(float(l), float(v)) for l, v in points]
    if len(pts) < 3:
        raise ValueError("need at least 3 points")
    if any(l <= 0 or v <= 0 for l, v in pts):
        raise ValueError("l and values must be positive")
    x = np.log([l for l, _ in pts])
    y = np.log([v for _, v in pts])
    if np.ptp(x) == 0:
        raise ValueError("all points share the same l")
    slope = np.polyfit(x, y, 1)[0]
    return float(round(slope, 12))


def dyadic(points):
    """The points whose l is a power of two."""
    return [(l, v) for l, v in points if l > 0 and int(l) & (int(l) - 1) == 0]


def doubling_ratio(points) -> float | None:
    """``v(2l) / v(l)`` at the largest l whose double is present."""
    d = {int(l): v for l, v in points}
    pairs = [l for l in d if 2 * l in d and d[l] > 0]
    if not pairs:
        return None
    l = max(pairs)
    return d[2 * l] / d[l]


@dataclass
class Row:
    l: int
    budget: int
    value: int | None  # exact value, if computed
    lower: int
    upper: int
    exact: bool


@dataclass
class DistortionReport:
    subject: str
    rows: list[Row]
    predicted_exponent: int
    fit_column: str = "lower"
    fitted_slope: float | None = None
    fitted_slope_upper: float | None = None
    last_doubling: float | None = None
    notes: list[str] = field(default_factory=list)

    def finish(self) -> "DistortionReport":
        self.rows.sort(key=lambda r: r.l)
        pts = self._points(self.fit_column)
        if len(pts) >= 3:
            self.fitted_slope = fit_slope(pts)
            r = doubling_ratio(pts)
            self.last_doubling = None if r is None else math.log2(r)
        up = self._points("upper")
        if len(up) >= 3:
            self.fitted_slope_upper = fit_slope(up)
        return self

    def _points(self, col):
        if col == "exact":
            return [(r.l, r.value) for r in self.rows if r.exact and r.value and r.l > 0]
        return [(r.l, getattr(r, col)) for r in self.rows if getattr(r, col) > 0 and r.l > 0]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["l", "budget", "value", "lower", "upper", "exact"])
        for r in self.rows:
            w.writerow([r.l, r.budget, "" if r.value is None else r.value, r.lower, r.upper, int(r.exact)])
        return buf.getvalue()

    def to_json(self) -> dict:
        return {"subject": self.subject, "predicted_exponent": self.predicted_exponent,
                "fit_column": self.fit_column, "fitted_slope": self.fitted_slope,
                "fitted_slope_upper": self.fitted_slope_upper, "last_doubling_log2": self.last_doubling,
                "rows": [asdict(r) for r in self.rows], "notes": self.notes}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)


def _pieces(subject) -> tuple[str, list[IntPoly], int, list[str]]:
    """Exemplary pieces whose distortions add up to the subject's."""
    if isinstance(subject, ExemplarySubgroup):
        return str(subject), [subject.intpoly], distortion_exponent(subject.intpoly).exponent, []
    if isinstance(subject, GeneratorFile):
        pred: Prediction = predict_file(subject)
        if pred.kind == "abelian":
            raise ValueError("subgroup lies in the abelian base group; undistorted")
        if pred.kind == "reduced":
            gens = pred.reduced.gens
            note = [f"reduced to A = {pred.reduced.A} with t = {pred.reduced.t}"]
        else:
            gens, note = subject.gens, []
        if not gens or all(p.is_zero() for g in gens for p in g):
            return "cyclic <b>", [IntPoly((1,))], 1, note
        diag = snf_laurent(LaurentMatrix.from_columns(gens)).diagonal
        pieces = [IntPoly.coerce(clear_denominators(d)) for d in diag]
        subj = "generators " + json.dumps(subject.to_json(), sort_keys=True)
        return subj, pieces, pred.exponent, note + ["tame pieces: " + ", ".join(str(p) for p in pieces)]
    raise TypeError(f"unsupported subject {subject!r}")


def sweep(subject, ls=DEFAULT_LS, exact_max_l: int = 8, time_limit: float = 20.0,
          fit_column: str = "lower") -> DistortionReport:
    """Distortion curve of an exemplary subgroup (or a sum of exemplary pieces).

    ``lower`` is the witness-family bound, ``upper`` the certified relaxation
    bound; exact values are attempted for ``l <= exact_max_l``.
    """
    if fit_column not in ("lower", "upper", "exact"):
        raise ValueError(f"unknown fit column {fit_column!r}")
    name, pieces, predicted, notes = _pieces(subject)
    rows = []
    for l in sorted(set(int(x) for x in ls)):
        if l <= 0:
            raise ValueError("l values must be positive")
        lo = hi = 0
        val, exact = 0, l <= exact_max_l
        for h in pieces:
            D = l - h.t
            lo += int(best_witness(h, D, l).norm())
            hi += upper_bound(h, D, l)
            if exact:
                d = delta_exact(ExemplarySubgroup.from_poly(h), l, time_limit=time_limit)
                exact = d.exact
                val += d.lower
        rows.append(Row(l, l, val if exact else None, lo, hi, exact))
    return DistortionReport(name, rows, predicted, fit_column, notes=notes).finish()


# ---------------------------------------------------------------------------
# the lamplighter over Z^2 and its higher-rank variant
# ---------------------------------------------------------------------------

@dataclass
class GridRow:
    l: int
    g_length: int
    g_exact: bool
    h_lower: int
    h_upper: int
    h_exact: bool

    @property
    def ratio(self) -> float:
        return self.h_lower / self.g_length


def _cube(l: int, k: int):
    pts = [()]
    for _ in range(k):
        pts = [p + (i,) for p in pts for i in range(l)]
    return pts


def pqp_rows(n: int, k: int, ls, support_cap: int = DEFAULT_CAP) -> list[GridRow]:
    """``u_l = f_l(x_1)...f_l(x_k) w`` with ``w = (1-x_1)...(1-x_{k-1}) a`` in Z_n wr Z^k.

    G-side: the expanded support ``prod_{i<k} (1 - x_i^l) f_l(x_k)``.
    H-side: H is isomorphic to G via w -> a, so u_l has the l^k cube as support.
    """
    if k < 2 or n < 2:
        raise ValueError("need k >= 2 and n >= 2")
    A = FgAbelianGroup(0, (n,))
    G = WreathGroup(A, k)
    out = []
    for l in ls:
        supp = {}
        for corner in _cube(2, k - 1):
            sign = (-1) ** sum(corner)
            for j in range(l):
                supp[tuple(c * l for c in corner) + (j,)] = (sign,)
        u = G.element(supp)
        try:
            g = wr_len_trace(u, support_cap)
            g_exact = True
        except SupportCapExceeded:
            g = wr_len_trace(u, support_cap, heuristic=True)
            g_exact = False
        cube = _cube(l, k)
        N = len(cube)
        h_ub = N + _closed_cube_tour(l, k)
        if N <= support_cap:
            hv = wr_len_trace(G.element({p: (1,) for p in cube}), support_cap).total
            out.append(GridRow(l, g.total, g_exact, hv, hv, True))
        else:
            out.append(GridRow(l, g.total, g_exact, 2 * N if N > 1 else N, h_ub, False))
    return out


def _closed_cube_tour(l: int, k: int) -> int:
    """Length of an explicit closed tour from the origin through the l^k cube."""
    if l == 1:
        return 0
    N = l ** k
    # boustrophedon Hamiltonian cycle exists when some side length is even
    return N if l % 2 == 0 else N + 1


def z2wrz2(ls=range(2, 9), support_cap: int = DEFAULT_CAP) -> list[GridRow]:
    return pqp_rows(2, 2, ls, support_cap)


# ---------------------------------------------------------------------------
# subgroups with b of Z_2 wr Z (finite A)
# ---------------------------------------------------------------------------

def _f2_divmod(p: int, h: int) -> tuple[int, int]:
    q = 0
    dh = h.bit_length()
    while p.bit_length() >= dh:
        s = p.bit_length() - dh
        q ^= 1 << s
        p ^= h << s
    return q, p


def finite_a_curve(h_bits: int, radius: int = 9) -> list[tuple[int, int]]:
    """``(l, max |g|_H)`` for ``H = <b, h(x) a>`` in Z_2 wr Z over the ball of radius l.

    ``h_bits`` encodes h over F_2 (bit i is the coefficient of x^i, bit 0 set).
    Over a field, H is again a lamplighter with ``f a b^n -> (f h) a b^n``.
    """
    if not h_bits & 1:
        raise ValueError("h needs a nonzero constant term")
    G = WreathGroup(FgAbelianGroup(0, (2,)), 1)
    ball = bfs_ball_raw(G, radius)
    best = [0] * (radius + 1)
    for (items, t), dist in ball.items():
        if items:
            lo = items[0][0][0]
            p = 0
            for (pos,), _ in items:
                p |= 1 << (pos - lo)
            q, r = _f2_divmod(p, h_bits)
            if r:
                continue
            f = {(lo + i,): (1,) for i in range(q.bit_length()) if q >> i & 1}
        else:
            f = {}
        hl = wr_len_closed(G.element(f, t)).total
        if hl > best[dist]:
            best[dist] = hl
    out, run = [], 0
    for l in range(1, radius + 1):
        run = max(run, best[l])
        out.append((l, run))
    return out


def empirical_distortion(gens, radius: int, max_l: int) -> list[tuple[int, int]]:
    """``(l, max |g|_H)`` over subgroup elements with ``|g|_G <= l``, from a subgroup ball.

    Exact for l up to ``max_l`` provided every such element has H-length at
    most ``radius``; otherwise the values are lower bounds.
    """
    from .wreath import subgroup_bfs, wr_length

    ball = subgroup_bfs(list(gens), radius)
    best = [0] * (max_l + 1)
    for g, hl in ball.items():
        gl = wr_length(g)
        if gl <= max_l and hl > best[gl]:
            best[gl] = hl
    out, run = [], 0
    for l in range(1, max_l + 1):
        run = max(run, best[l])
        out.append((l, run))
    return out
