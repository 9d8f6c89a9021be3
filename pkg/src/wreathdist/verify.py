"""Named property suites, each returning machine-readable pass/fail checks."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import polytools as pt
from .algebra import LaurentPoly, parse_poly
from .distortion import (IntPoly, charpoly, coefficient_bound_check, companion_matrix, distortion_exponent,
                         poly_distortion_exact, unit_circle_roots)
from .exemplary import ExemplarySubgroup, delta_exact, exemplary_len, exemplary_member
from .oracles import brute_force_poly_distortion
from .reduction import LaurentMatrix, check_snf, predicted_exponent, snf_laurent
from .report import dyadic, finite_a_curve, fit_slope, z2wrz2
from .wreath import WreathGroup, bfs_ball_raw, wr_len_closed, wr_len_trace


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""

    def to_json(self) -> dict:
        return {"check": self.name, "passed": self.passed, "detail": self.detail}


@dataclass
class SuiteResult:
    suite: str
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name, ok, detail=""):
        self.checks.append(Check(name, bool(ok), str(detail)))

    def to_json(self) -> dict:
        return {"suite": self.suite, "passed": self.passed, "checks": [c.to_json() for c in self.checks]}


def _formula_vs_bfs(res: SuiteResult, group: str, radius: int, closed: bool):
    G = WreathGroup.parse(group)
    ball = bfs_ball_raw(G, radius)
    from .wreath import WreathElement
    bad = 0
    for (items, t), dist in ball.items():
        u = WreathElement(G, items, t)
        got = wr_len_closed(u).total if closed else wr_len_trace(u).total
        bad += got != dist
    res.add(f"{group} radius {radius}", bad == 0, f"{len(ball)} elements, {bad} mismatches")


def suite_lamplighter_formula(seed=0):
    res = SuiteResult("lamplighter-formula")
    _formula_vs_bfs(res, "Z2 wr Z", 8, True)
    return res


def suite_zwrz_formula(seed=0):
    res = SuiteResult("zwrz-formula")
    _formula_vs_bfs(res, "Z wr Z", 7, True)
    return res


def suite_trace_formula(seed=0):
    res = SuiteResult("trace-formula")
    _formula_vs_bfs(res, "Z2 wr Z^2", 7, False)
    _formula_vs_bfs(res, "Z wr Z^2", 7, False)
    return res


def _rand_poly(rng, max_deg=4, bound=3, zero_prob=0.2) -> LaurentPoly:
    if rng.random() < zero_prob:
        return LaurentPoly.zero()
    d = rng.randint(0, max_deg)
    return LaurentPoly.from_list([rng.randint(-bound, bound) for _ in range(d + 1)], rng.randint(-2, 2))


def suite_snf(seed=0, trials=100):
    res = SuiteResult("snf")
    rng = random.Random(seed)
    bad = []
    for i in range(trials):
        k, s = rng.randint(1, 4), rng.randint(1, 4)
        M = LaurentMatrix([[_rand_poly(rng) for _ in range(s)] for _ in range(k)])
        if not check_snf(M, snf_laurent(M)):
            bad.append(i)
    res.add(f"{trials} random reconstructions", not bad, f"failures at {bad}" if bad else "U M V = D, units, chain")
    return res


def _rand_gens(rng, k, s):
    while True:
        gens = [[_rand_poly(rng, 3, 2, 0.3) for _ in range(k)] for _ in range(s)]
        if any(not p.is_zero() for g in gens for p in g):
            return gens


def suite_exponent_invariance(seed=0, trials=50):
    res = SuiteResult("exponent-invariance")
    rng = random.Random(seed)
    bad = []
    for i in range(trials):
        k, s = rng.randint(1, 3), rng.randint(1, 3)
        gens = _rand_gens(rng, k, s)
        base = predicted_exponent(k, gens)
        moved = {}
        perm = gens[:]
        rng.shuffle(perm)
        moved["permute"] = perm
        j = rng.randrange(s)
        unit = LaurentPoly.monomial(rng.randint(-3, 3), rng.choice([-1, 1]))
        moved["unit"] = [[p * unit for p in g] if idx == j else g for idx, g in enumerate(gens)]
        n = rng.choice([-3, -2, 2, 3, 5])
        moved["scale"] = [[p.scale(n) for p in g] if idx == j else g for idx, g in enumerate(gens)]
        if s > 1:
            src = (j + 1) % s
            q = _rand_poly(rng, 2, 2, 0.0)
            moved["add"] = [[p + q * r for p, r in zip(g, gens[src])] if idx == j else g
                            for idx, g in enumerate(gens)]
        for name, g2 in moved.items():
            if predicted_exponent(k, g2) != base:
                bad.append((i, name))
    res.add(f"{trials} generator sets x 4 moves", not bad, bad or "all invariant")
    rng = random.Random(seed + 1)
    bad = []
    for i in range(trials):
        h = _rand_intpoly(rng)
        e = distortion_exponent(h).exponent
        L = h.to_laurent()
        variants = [L.scale(rng.choice([-2, 3])), L.shift(rng.randint(-3, 3)).scale(-1), L.reversal()]
        if any(distortion_exponent(v).exponent != e for v in variants):
            bad.append(str(h))
        if predicted_exponent(1, [L]) != e:
            bad.append(f"predicted {h}")
    res.add("distortion_exponent under n*h, +-x^j h, reversal; matches predicted_exponent", not bad, bad or "ok")
    return res


def _rand_intpoly(rng, max_deg=6, bound=9) -> IntPoly:
    # products of small cyclotomic-ish factors make unit roots likely
    factors = [[1, -1], [1, 1], [1, 0, 1], [1, 1, 1], [1, -1, 1], [2, -1], [1, -3, 1], [1, 2]]
    while True:
        if rng.random() < 0.5:
            c = [1]
            for _ in range(rng.randint(1, 3)):
                c = pt.mul(c, rng.choice(factors))
        else:
            c = [rng.randint(-bound, bound) for _ in range(rng.randint(1, max_deg) + 1)]
        c = [int(x) for x in c]
        if c and c[0] and c[-1] and len(c) <= max_deg + 1:
            return IntPoly(tuple(c))


def suite_exponent(seed=0):
    res = SuiteResult("exponent")
    cases = [(f"(1-x)^{m - 1}", m) for m in range(1, 6)]
    cases += [("2-x", 1), ("1+x^2", 2), ("x^2-3*x+1", 1), ("(1-x)*(1+x)^2", 3), ("1+x+x^2", 2)]
    for text, want in cases:
        got = distortion_exponent(parse_poly(text)).exponent
        res.add(f"exponent {text}", got == want, f"got {got}, expected {want}")
    rng = random.Random(seed)
    bad = []
    for _ in range(40):
        c = list(_rand_intpoly(rng).coeffs)
        sq = pt.primitive(pt.quo(c, pt.pgcd(c, pt.derivative(c))))  # squarefree part
        if len(sq) < 2:
            continue
        uc = unit_circle_roots(sq)
        roots = np.roots(sq[::-1])
        numeric = int(np.sum(np.abs(np.abs(roots) - 1) < 1e-7))
        if uc.count + uc.off_circle != len(sq) - 1 or uc.count != numeric:
            bad.append((sq, uc.count, uc.off_circle, numeric))
    res.add("unit-circle accounting on random squarefree polynomials", not bad, bad or "count + off = deg")
    return res


def suite_companion(seed=0, trials=20):
    res = SuiteResult("companion")
    rng = random.Random(seed)
    bad = []
    for _ in range(trials):
        t = rng.randint(1, 6)
        d = [rng.choice([x for x in range(-9, 10) if x])] + [rng.randint(-9, 9) for _ in range(t - 1)] \
            + [rng.choice([x for x in range(-9, 10) if x])]
        want = [Fraction(c, d[0]) for c in d[::-1]]
        if charpoly(companion_matrix(d)) != want:
            bad.append(d)
    res.add(f"{trials} random char-poly identities", not bad, bad or "exact")
    return res


SOLVER_POLYS = ("1-x", "1+x", "1-2*x", "1+x^2", "(1-x)^2")


def suite_solver_oracle(seed=0, max_l=6):
    res = SuiteResult("solver-oracle")
    for text in SOLVER_POLYS:
        h = IntPoly.coerce(text)
        bad = []
        for l in range(max_l + 1):
            got = poly_distortion_exact(h, 1, l).lower
            want = brute_force_poly_distortion(h.coeffs, l, l, l)[0]
            if got != want:
                bad.append((l, got, want))
        res.add(f"branch and bound vs exhaustive, h = {text}, l <= {max_l}", not bad, bad or "equal")
    v = poly_distortion_exact(IntPoly.coerce("1-x"), 1, 4)
    res.add("value at h = 1-x, l = 4", v.exact and v.lower == 10, v.lower)
    return res


def suite_coefficient_bound(seed=0):
    res = SuiteResult("coefficient-bound")
    for text in ("1-x", "(1-x)^2", "2-x", "1+x^2"):
        rep = coefficient_bound_check(text, trials=20, seed=seed)
        res.add(f"running-max ratio, h = {text}", rep.passed, rep.ratios)
    return res


def suite_finite_a(seed=0, subgroups=10, radius=9):
    res = SuiteResult("finite-A-undistorted")
    rng = random.Random(seed)
    for _ in range(subgroups):
        hb = rng.randrange(1, 32) | 1
        curve = finite_a_curve(hb, radius)
        s = fit_slope(dyadic(curve))
        res.add(f"Z_2 wr Z, h bits {hb:b}", s <= 1.2,
                f"dyadic slope {s:.3f}, all-l slope {fit_slope(curve):.3f}, curve {curve}")
    return res


def suite_grid_subgroup(seed=0):
    res = SuiteResult("grid-subgroup")
    for row in z2wrz2(range(2, 9)):
        l = row.l
        ok = row.g_length == 6 * l - 2 and row.h_lower >= 2 * l * l
        if l <= 4:
            ok = ok and row.h_exact and row.h_lower == 2 * l * l + l % 2
        res.add(f"l = {l}", ok, f"G {row.g_length}, H [{row.h_lower}, {row.h_upper}], exact {row.h_exact}")
    return res


def suite_sandwich(seed=0, radius=7):
    res = SuiteResult("length-sandwich")
    G = WreathGroup.parse("Z wr Z")
    ball = bfs_ball_raw(G, radius)
    from .wreath import WreathElement
    for text in ("1-x", "1+x", "2-x"):
        H = ExemplarySubgroup.from_poly(text)
        delta = {l: delta_exact(H, l).lower for l in range(radius + 1)}
        Delta = [0] * (radius + 1)
        bad = 0
        for (items, t), dist in ball.items():
            c = exemplary_member(H, WreathElement(G, items, t))
            if c is None:
                continue
            hl = exemplary_len(H, c)
            Delta[dist] = max(Delta[dist], hl)
            bad += hl > delta[dist] + 3 * dist
        for l in range(1, radius + 1):
            Delta[l] = max(Delta[l], Delta[l - 1])
        low_ok = all(Delta[l] >= delta[l // 4] - l / 4 for l in range(radius + 1))
        res.add(f"h = {text}: |g|_H <= delta(|g|_G) + 3|g|_G", bad == 0, f"{bad} violations")
        res.add(f"h = {text}: Delta(l) >= delta(l/4) - l/4", low_ok, f"Delta {Delta}")
    return res


SUITES = {
    "lamplighter-formula": suite_lamplighter_formula,
    "zwrz-formula": suite_zwrz_formula,
    "trace-formula": suite_trace_formula,
    "snf": suite_snf,
    "exponent-invariance": suite_exponent_invariance,
    "exponent": suite_exponent,
    "companion": suite_companion,
    "solver-oracle": suite_solver_oracle,
    "coefficient-bound": suite_coefficient_bound,
    "finite-A-undistorted": suite_finite_a,
    "grid-subgroup": suite_grid_subgroup,
    "length-sandwich": suite_sandwich,
}


def run_suite(name: str, seed: int = 0) -> list[SuiteResult]:
    if name == "all":
        return [fn(seed=seed) for fn in SUITES.values()]
    if name not in SUITES:
        raise KeyError(name)
    return [SUITES[name](seed=seed)]
