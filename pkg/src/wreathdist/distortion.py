"""Distortion of integer polynomials.

For ``h = d_0 + ... + d_t x^t`` and a degree bound ``D`` / norm budget ``B`` we
study ``max { S(f) : deg f <= D, S(h f) <= B }`` over integer polynomials f.
The growth exponent in ``l`` (with ``D = B = c*l``) is one plus the largest
multiplicity of a root of h on the unit circle; that number is found here
exactly (Yun decomposition, reciprocal gcd, Sturm counting) without floating
point.
"""
from __future__ import annotations

import cmath
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import polytools as pt
from .algebra import LaurentPoly, parse_poly


class SolverBudgetExceeded(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# integer polynomials
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IntPoly:
    """``d_0 + d_1 x + ... + d_t x^t`` with ``d_0 != 0`` and ``d_t != 0``."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = tuple(int(x) for x in self.coeffs)
        object.__setattr__(self, "coeffs", c)
        if not c or c[0] == 0 or c[-1] == 0:
            raise ValueError(f"IntPoly needs nonzero constant and leading coefficients, got {c}")

    @property
    def t(self) -> int:
        return len(self.coeffs) - 1

    @property
    def d0(self) -> int:
        return self.coeffs[0]

    def norm(self) -> int:
        return sum(abs(c) for c in self.coeffs)

    def reversal(self) -> "IntPoly":
        return IntPoly(self.coeffs[::-1])

    def to_laurent(self) -> LaurentPoly:
        return LaurentPoly.from_list(self.coeffs)

    def __str__(self):
        return str(self.to_laurent())

    @classmethod
    def coerce(cls, h) -> "IntPoly":
        """Accept IntPoly, LaurentPoly (x-power stripped), int lists or text."""
        if isinstance(h, IntPoly):
            return h
        if isinstance(h, str):
            h = parse_poly(h)
        if isinstance(h, LaurentPoly):
            if h.is_zero():
                raise ValueError("zero polynomial")
            if not h.is_integral():
                raise ValueError("integer coefficients required")
            return cls(tuple(h.coeff_list()[1]))
        if isinstance(h, int):
            return cls((h,))
        c = list(h)
        while c and c[-1] == 0:
            c.pop()
        while c and c[0] == 0:
            c.pop(0)
        if not c:
            raise ValueError("zero polynomial")
        return cls(tuple(c))


def _from_q(p) -> IntPoly:
    """Primitive integer polynomial of a rational one, positive constant term."""
    ints = pt.primitive(p)
    while ints and ints[0] == 0:
        ints.pop(0)
    if ints[0] < 0:
        ints = [-c for c in ints]
    return IntPoly(tuple(ints))


# ---------------------------------------------------------------------------
# squarefree decomposition and unit circle roots
# ---------------------------------------------------------------------------

def squarefree_decomp(h) -> list[tuple[IntPoly, int]]:
    """``h = const * prod factor^mult``; factors primitive, squarefree, pairwise coprime."""
    h = IntPoly.coerce(h)
    return [(_from_q(a), i) for a, i in pt.squarefree_decomposition(list(h.coeffs))]


@dataclass
class UnitCircleCount:
    count: int
    off_circle: int
    at_plus_one: int
    at_minus_one: int
    reciprocal_gcd: list
    y_poly: list  # q with (palindromic part)(x) = x^m q(x + 1/x)
    intervals: list  # isolating intervals of the roots of q in (-2, 2)

    def to_json(self) -> dict:
        return {
            "count": self.count,
            "off_circle": self.off_circle,
            "at_plus_one": self.at_plus_one,
            "at_minus_one": self.at_minus_one,
            "reciprocal_gcd": [str(c) for c in self.reciprocal_gcd],
            "y_poly": [str(c) for c in self.y_poly],
            "intervals": [[str(a), str(b)] for a, b in self.intervals],
        }


def unit_circle_roots(p) -> UnitCircleCount:
    """Exact count of distinct roots of modulus one of a squarefree integer polynomial."""
    p = IntPoly.coerce(p)
    coeffs = list(p.coeffs)
    if not pt.is_squarefree(coeffs):
        raise ValueError(f"{p} is not squarefree")
    total = p.t
    g = pt.pgcd(coeffs, pt.reversal(coeffs))
    plus = minus = 0
    if pt.deg(g) >= 1 and pt.evaluate(g, 1) == 0:
        plus = 1
        g = pt.quo(g, [-1, 1])
    if pt.deg(g) >= 1 and pt.evaluate(g, -1) == 0:
        minus = 1
        g = pt.quo(g, [1, 1])
    g = pt.monic(g)
    if pt.deg(g) >= 1:
        # gcd with the reversal is self-reciprocal; without +-1 roots it is palindromic
        if pt.evaluate(g, 0) != 1:
            g = pt.scale(g, 1 / Fraction(g[0]))
        q = pt.palindromic_to_y(g)
        intervals = pt.isolate_roots(q, -2, 2)
        # q(2) != 0 since 1 is not a root of g, so (-2, 2] is the open interval
        inside = len(intervals)
        deg_q = pt.deg(q)
    else:
        q, intervals, inside, deg_q = [], [], 0, 0
    on = plus + minus + 2 * inside
    off = (total - (pt.deg(g) if pt.deg(g) > 0 else 0) - plus - minus) + 2 * (deg_q - inside)
    return UnitCircleCount(on, off, plus, minus, [Fraction(c) for c in pt.pgcd(coeffs, pt.reversal(coeffs))],
                           q, intervals)


def unit_circle_root_count(p) -> int:
    return unit_circle_roots(p).count


@dataclass
class LevelEvidence:
    multiplicity: int
    factor: IntPoly
    unit_roots: UnitCircleCount

    def to_json(self) -> dict:
        return {"multiplicity": self.multiplicity, "factor": str(self.factor),
                "factor_coeffs": list(self.factor.coeffs), "unit_circle": self.unit_roots.to_json()}


@dataclass
class ExponentCertificate:
    h: IntPoly
    kappa: int
    exponent: int
    levels: list[LevelEvidence] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"h": str(self.h), "kappa": self.kappa, "exponent": self.exponent,
                "levels": [lv.to_json() for lv in self.levels]}


def distortion_exponent(h) -> ExponentCertificate:
    """Exponent m with distortion of h equivalent to l^m, with per-level evidence."""
    if isinstance(h, LaurentPoly) and h.is_zero():
        raise ValueError("zero polynomial has no distortion exponent")
    h = IntPoly.coerce(h)
    levels = [LevelEvidence(i, f, unit_circle_roots(f)) for f, i in squarefree_decomp(h)]
    kappa = max((lv.multiplicity for lv in levels if lv.unit_roots.count > 0), default=0)
    return ExponentCertificate(h, kappa, kappa + 1, levels)


# ---------------------------------------------------------------------------
# companion matrix
# ---------------------------------------------------------------------------

def companion_matrix(h) -> list[list[Fraction]]:
    """Shift matrix with last row ``a_j = -d_{t-j+1}/d_0``; char poly ``x^t h(1/x)/d_0``."""
    h = IntPoly.coerce(h)
    t = h.t
    if t == 0:
        raise ValueError("constant polynomial has no companion matrix")
    d = h.coeffs
    A = [[Fraction(0)] * t for _ in range(t)]
    for i in range(t - 1):
        A[i][i + 1] = Fraction(1)
    for j in range(1, t + 1):
        A[t - 1][j - 1] = Fraction(-d[t - j + 1], d[0])
    return A


def charpoly(A) -> list[Fraction]:
    """Characteristic polynomial det(xI - A), low -> high (Faddeev-LeVerrier)."""
    n = len(A)
    A = [[Fraction(x) for x in row] for row in A]
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    M = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        # M <- A M + c_{n-k+1} I
        AM = [[sum(A[i][r] * M[r][j] for r in range(n)) for j in range(n)] for i in range(n)]
        for i in range(n):
            AM[i][i] += coeffs[n - k + 1]
        M = AM
        AMk = [[sum(A[i][r] * M[r][j] for r in range(n)) for j in range(n)] for i in range(n)]
        coeffs[n - k] = -sum(AMk[i][i] for i in range(n)) / k
    return coeffs


# ---------------------------------------------------------------------------
# witness families (lower bounds)
# ---------------------------------------------------------------------------

@dataclass
class Witness:
    f: LaurentPoly
    S_f: int
    S_hf: int
    l: int  # parameter actually used (l or l+1 in the complex case)
    root: complex | None
    constant: float  # realized S(hf) / l

    def to_json(self) -> dict:
        return {"S_f": self.S_f, "S_hf": self.S_hf, "l": self.l,
                "root": None if self.root is None else [self.root.real, self.root.imag],
                "constant": self.constant, "f": self.f.to_json()}


def _conv(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _ipow(a: list[int], n: int) -> list[int]:
    out = [1]
    for _ in range(n):
        out = _conv(out, a)
    return out


@lru_cache(maxsize=256)
def _dominant_root(h: IntPoly):
    """(kappa, c) where c is a unit-circle root of multiplicity kappa; real roots preferred."""
    cert = distortion_exponent(h)
    kappa = cert.kappa
    if kappa == 0:
        return 0, None
    level = next(lv for lv in cert.levels if lv.multiplicity == kappa)
    uc = level.unit_roots
    if uc.at_plus_one:
        return kappa, 1
    if uc.at_minus_one:
        return kappa, -1
    a, b = uc.intervals[0]
    q = uc.y_poly
    seq = pt.sturm_sequence(q)
    for _ in range(80):  # bisection on exact rationals; 2^-80 width
        mid = (a + b) / 2
        if pt.count_roots(q, a, mid, seq):
            b = mid
        else:
            a = mid
    y = float((a + b) / 2)
    theta = math.acos(max(-1.0, min(1.0, y / 2)))
    return kappa, cmath.exp(1j * theta)


def witness_family(h, l: int) -> Witness:
    """Polynomial f with S(f) growing like l^(kappa+1) while S(hf) = O(l)."""
    h = IntPoly.coerce(h)
    if l < 1:
        raise ValueError("l must be positive")
    kappa, c = _dominant_root(h)
    hc = list(h.coeffs)
    if c is None:
        f = [l]
        root = None
        used = l
    elif c in (1, -1):
        v = [c ** (l - 1 - i) for i in range(l)]
        f = _ipow(v, kappa + 1)
        root = complex(c)
        used = l
    else:
        used = l if abs(sum(c ** (2 * k) for k in range(l))) >= 0.5 else l + 1
        v = np.array([c ** (used - 1 - i) for i in range(used)])
        vv = np.convolve(v, np.conj(v)).real
        p = np.array([1.0])
        for _ in range(kappa + 1):
            p = np.convolve(p, vv)
        f = [int(round(x)) for x in p]
        root = c
    hf = _conv(hc, f)
    S_f = sum(abs(x) for x in f)
    S_hf = sum(abs(x) for x in hf)
    return Witness(LaurentPoly.from_list(f), S_f, S_hf, used, root, S_hf / used)


# ---------------------------------------------------------------------------
# certified upper bounds: least-squares left inverse of the convolution matrix
# ---------------------------------------------------------------------------

@lru_cache(maxsize=4096)
def left_inverse_norm(h: IntPoly, n: int) -> Fraction:
    """Exact l1->l1 norm of (M^T M)^-1 M^T, M the (n+t) x n matrix of f -> hf.

    For every f of degree < n: S(f) <= norm * S(hf).
    """
    d = [Fraction(c) for c in h.coeffs]
    t = h.t
    if n <= 0:
        return Fraction(0)
    if t == 0:
        return 1 / abs(d[0])
    r = [sum(d[s] * d[s + k] for s in range(t + 1 - k)) for k in range(t + 1)]
    # banded LDL^T of the symmetric Toeplitz Gram matrix G[i][j] = r[|i-j|]
    L = [dict() for _ in range(n)]  # L[i][j] for j in (i-t .. i-1)
    D = [Fraction(0)] * n
    for i in range(n):
        for j in range(max(0, i - t), i):
            s = r[i - j]
            for k in range(max(0, i - t), j):
                s -= L[i].get(k, 0) * L[j].get(k, 0) * D[k]
            L[i][j] = s / D[j]
        s = r[0]
        for k in range(max(0, i - t), i):
            s -= L[i][k] ** 2 * D[k]
        D[i] = s

    def solve(rhs):
        y = list(rhs)
        for i in range(n):
            for j, v in L[i].items():
                y[i] -= v * y[j]
        y = [y[i] / D[i] for i in range(n)]
        for i in range(n - 1, -1, -1):
            for k in range(i + 1, min(n, i + t + 1)):
                y[i] -= L[k].get(i, 0) * y[k]
        return y

    best = Fraction(0)
    # column `row` of the left inverse is G^-1 applied to row `row` of M
    for row in range(n + t):
        rhs = [Fraction(0)] * n
        for j in range(max(0, row - t), min(n, row + 1)):
            rhs[j] = d[row - j]
        col = solve(rhs)
        s = sum(abs(x) for x in col)
        if s > best:
            best = s
    return best


def upper_bound(h, deg_bound: int, budget: int) -> int:
    """Certified ``max S(f)`` bound over deg f <= deg_bound, S(hf) <= budget."""
    h = _positive(IntPoly.coerce(h))
    if deg_bound < 0 or budget <= 0:
        return 0
    return math.floor(left_inverse_norm(h, deg_bound + 1) * budget)


def _positive(h: IntPoly) -> IntPoly:
    return h if h.d0 > 0 else IntPoly(tuple(-c for c in h.coeffs))


# ---------------------------------------------------------------------------
# exact maximisation (branch and bound)
# ---------------------------------------------------------------------------

@dataclass
class DistortionValue:
    l: int
    lower: int
    upper: int
    witness: LaurentPoly
    exact: bool
    deg_bound: int = 0
    budget: int = 0
    nodes: int = 0

    @property
    def value(self) -> int | None:
        return self.lower if self.exact else None

    def to_json(self) -> dict:
        return {"l": self.l, "lower": self.lower, "upper": self.upper, "exact": self.exact,
                "deg_bound": self.deg_bound, "budget": self.budget, "witness": self.witness.to_json()}


def best_witness(h, deg_bound: int, budget: int) -> LaurentPoly:
    """Best member of the witness family (and its integer multiples) meeting the constraints."""
    h = IntPoly.coerce(h)
    best, best_f = 0, LaurentPoly.zero()
    if deg_bound < 0 or budget <= 0:
        return best_f
    k = budget // h.norm()
    if k:
        best, best_f = k, LaurentPoly.const(k)
    m = 1
    while True:
        w = witness_family(h, m)
        if w.f.degree is None or w.f.degree > deg_bound:
            if m > deg_bound + 2:
                break
            m += 1
            continue
        if w.S_hf and w.S_hf <= budget:
            mult = budget // w.S_hf
            if mult * w.S_f > best:
                best, best_f = mult * w.S_f, w.f.scale(mult)
        m += 1
        if m > deg_bound + 2:
            break
    return best_f


def max_norm_multiplier(h, deg_bound: int, budget: int, *, time_limit: float | None = None,
                        seed: LaurentPoly | None = None) -> tuple[int, list[int], int]:
    """Exact ``max S(f)`` over integer f with ``deg f <= deg_bound`` and ``S(hf) <= budget``.

    Returns ``(value, coefficients z_0..z_D, nodes)``; among maximisers with
    ``z_0 > 0`` the lexicographically least coefficient vector is returned
    (after stripping the x-power, every maximiser has this form up to sign).
    Raises :class:`SolverBudgetExceeded` when ``time_limit`` seconds pass.
    """
    h = _positive(IntPoly.coerce(h))
    d = h.coeffs
    t, d0 = h.t, h.d0
    D, B = deg_bound, budget
    if D < 0 or B <= 0:
        return 0, [], 0
    norms = [float(left_inverse_norm(h, m)) * (1 + 1e-12) + 1e-9 for m in range(D + 2)]
    seed_value = int(seed.norm()) if seed is not None and not seed.is_zero() else 0
    best = max(seed_value - 1, 0)
    best_vec: list[int] | None = None
    prefix: list[int] = []
    memo: dict = {}
    nodes = 0
    deadline = None if time_limit is None else time.monotonic() + time_limit
    NEG = -1

    def carry(win):
        # contributions of the last t coefficients to the next t products
        return [sum(d[k] * win[t + i - k] for k in range(i + 1, t + 1)) for i in range(t)]

    def dfs(p, win, R, value):
        nonlocal best, best_vec, nodes
        nodes += 1
        if deadline is not None and nodes & 1023 == 0 and time.monotonic() > deadline:
            raise SolverBudgetExceeded(f"exact search exceeded {time_limit}s")
        key = (p, win, R)
        ub = memo.get(key)
        if ub is not None and value + ub <= best:
            return NEG
        cv = carry(win)
        cnorm = sum(abs(x) for x in cv)
        if p == D + 1:
            if cnorm <= R:
                if value > best:
                    best, best_vec = value, list(prefix)
                return 0
            return NEG
        bound = math.floor(norms[D + 1 - p] * (R + cnorm))
        if value + bound <= best:
            memo[key] = bound
            return NEG
        c = cv[0] if t else 0
        lo = -((R + c) // d0)  # ceil((-R - c) / d0)
        hi = (R - c) // d0
        if p == 0:
            lo = max(lo, 1)
        found = NEG
        for z in range(lo, hi + 1):
            y = d0 * z + c
            prefix.append(z)
            g = dfs(p + 1, (win + (z,))[1:] if t else (), R - abs(y), value + abs(z))
            prefix.pop()
            if g != NEG and g + abs(z) > found:
                found = g + abs(z)
        memo[key] = max(found, best - value)
        return found

    import sys
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 4 * D + 100))
    try:
        dfs(0, (0,) * t, B, 0)
    finally:
        sys.setrecursionlimit(old)
    if best_vec is None:
        if seed_value > 0:
            raise AssertionError("search failed to reproduce the seed witness")
        return 0, [], nodes
    while best_vec and best_vec[-1] == 0:
        best_vec.pop()
    return best, best_vec, nodes


def distortion_search(h, deg_bound: int, budget: int, *, l: int = 0, mode: str = "exact",
                      time_limit: float | None = 60.0) -> DistortionValue:
    """Exact value (``mode="exact"``) or certified bounds (``mode="bounds"``).

    Exact mode falls back to bounds when the time limit is hit.
    """
    h = IntPoly.coerce(h)
    wit = best_witness(h, deg_bound, budget)
    lower = int(wit.norm())
    upper = upper_bound(h, deg_bound, budget)
    if mode == "exact":
        try:
            value, vec, nodes = max_norm_multiplier(h, deg_bound, budget, time_limit=time_limit, seed=wit)
        except SolverBudgetExceeded:
            return DistortionValue(l, lower, upper, wit, False, deg_bound, budget)
        return DistortionValue(l, value, value, LaurentPoly.from_list(vec), True, deg_bound, budget, nodes)
    if mode != "bounds":
        raise ValueError(f"unknown mode {mode!r}")
    return DistortionValue(l, lower, upper, wit, False, deg_bound, budget)


def poly_distortion_exact(h, c: Fraction | int, l: int, mode: str = "exact",
                          time_limit: float | None = 60.0) -> DistortionValue:
    """``max { S(f) : deg f <= c*l, S(hf) <= c*l }``."""
    if l < 0:
        raise ValueError("l must be nonnegative")
    c = Fraction(c)
    if c <= 0:
        raise ValueError("c must be positive")
    n = math.floor(c * l)
    return distortion_search(h, n, n, l=l, mode=mode, time_limit=time_limit)


# ---------------------------------------------------------------------------
# coefficient bound property
# ---------------------------------------------------------------------------

@dataclass
class CoefficientBoundReport:
    h: IntPoly
    kappa: int
    ratios: dict[int, float]  # n -> running max of max|z| / (S(hf) n^(kappa-1))
    passed: bool

    def to_json(self) -> dict:
        return {"h": str(self.h), "kappa": self.kappa,
                "ratios": {str(k): v for k, v in self.ratios.items()}, "passed": self.passed}


def coefficient_bound_check(h, trials: int = 20, seed: int = 0,
                            sizes=(8, 16, 32, 64)) -> CoefficientBoundReport:
    """Check that max|z_i| / (S(hf) * n^(kappa-1)) stays bounded as the degree n grows.

    Random f plus structured families (constant runs and witness polynomials).
    For kappa = 0 the power is taken as 0 (bounded coefficients).
    """
    import random

    if trials < 1:
        raise ValueError("trials must be >= 1")
    h = IntPoly.coerce(h)
    kappa = distortion_exponent(h).kappa
    rng = random.Random(seed)
    hc = list(h.coeffs)
    ratios = {}
    running = 0.0
    for n in sizes:
        fams = [[1] * n]
        for m in range(1, n + 1):
            w = witness_family(h, m).f
            if w.degree is not None and w.degree < n:
                cand = w.coeff_list()[1]
            else:
                break
        fams.append(cand)
        for _ in range(trials):
            fams.append([rng.randint(-5, 5) for _ in range(n - 1)] + [rng.choice([-1, 1]) * rng.randint(1, 5)])
        worst = 0.0
        scale = n ** max(kappa - 1, 0)
        for f in fams:
            S_hf = sum(abs(x) for x in _conv(hc, f))
            worst = max(worst, max(abs(x) for x in f) / (S_hf * scale))
        running = max(running, worst)
        ratios[n] = running
    base = ratios[sizes[0]]
    passed = all(ratios[n] <= 2 * base for n in sizes[1:])
    return CoefficientBoundReport(h, kappa, ratios, passed)
