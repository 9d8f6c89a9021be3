"""Subgroups of Z^k wr Z containing b, and subgroups with a shifted generator.

A subgroup ``<b, w_1, ..., w_s>`` is determined by the Z[x, 1/x]-module
spanned by the columns ``w_i`` of a k x s Laurent matrix.  Over
Q[x, 1/x] (a principal ideal domain) the Smith normal form splits it into
one-dimensional pieces ``d_i``, and the distortion exponent is the largest
exponent among the ``d_i``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from .algebra import INT, RAT, FgAbelianGroup, LaurentPoly, lp_divide_exact, lp_divmod, parse_poly
from .distortion import distortion_exponent

ONE = LaurentPoly.const(1, RAT)
ZERO = LaurentPoly.zero(RAT)


def _q(p) -> LaurentPoly:
    if isinstance(p, LaurentPoly):
        return p.with_ring(RAT)
    if isinstance(p, str):
        return parse_poly(p, RAT)
    return LaurentPoly.const(p, RAT)


class LaurentMatrix:
    """Rectangular matrix of rational Laurent polynomials (list of rows)."""

    def __init__(self, rows):
        rows = [[_q(e) for e in row] for row in rows]
        if not rows or not rows[0] or any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("matrix needs consistent nonzero dimensions")
        self.rows = rows

    @classmethod
    def identity(cls, n: int) -> "LaurentMatrix":
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, cols) -> "LaurentMatrix":
        cols = [list(c) for c in cols]
        return cls([[cols[j][i] for j in range(len(cols))] for i in range(len(cols[0]))])

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.rows[0])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def copy(self) -> "LaurentMatrix":
        return LaurentMatrix([list(r) for r in self.rows])

    def __matmul__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        n, m = self.shape
        m2, p = other.shape
        if m != m2:
            raise ValueError("shape mismatch")
        out = []
        for i in range(n):
            row = []
            for j in range(p):
                acc = ZERO
                for k in range(m):
                    a, b = self.rows[i][k], other.rows[k][j]
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return LaurentMatrix(out)

    def __eq__(self, other):
        return isinstance(other, LaurentMatrix) and self.rows == other.rows

    def is_zero(self) -> bool:
        return all(e.is_zero() for r in self.rows for e in r)

    def to_json(self):
        return [[str(e) for e in r] for r in self.rows]

    def __repr__(self):
        return f"LaurentMatrix({self.to_json()})"


def determinant(M: LaurentMatrix) -> LaurentPoly:
    """Laplace expansion (the matrices here are small)."""
    n, m = M.shape
    if n != m:
        raise ValueError("determinant of a non-square matrix")

    def det(rows, cols):
        if len(rows) == 1:
            return M.rows[rows[0]][cols[0]]
        acc = ZERO
        r0 = rows[0]
        for idx, c in enumerate(cols):
            e = M.rows[r0][c]
            if e.is_zero():
                continue
            minor = det(rows[1:], cols[:idx] + cols[idx + 1:])
            term = e * minor
            acc = acc + term if idx % 2 == 0 else acc - term
        return acc

    return det(list(range(n)), list(range(n)))


@dataclass
class SnfResult:
    U: LaurentMatrix
    V: LaurentMatrix
    diagonal: list[LaurentPoly]

    def D(self, shape) -> LaurentMatrix:
        k, s = shape
        return LaurentMatrix([[self.diagonal[i] if i == j and i < len(self.diagonal) else ZERO
                               for j in range(s)] for i in range(k)])

    def to_json(self) -> dict:
        return {"diagonal": [str(d) for d in self.diagonal], "U": self.U.to_json(), "V": self.V.to_json()}


def _unit_part(p: LaurentPoly) -> LaurentPoly:
    s, c = p.coeff_list()
    return LaurentPoly.monomial(s, c[-1], RAT)


def _unit_inverse(u: LaurentPoly) -> LaurentPoly:
    (k, c), = u.items()
    return LaurentPoly.monomial(-k, 1 / Fraction(c), RAT)


def snf_laurent(M: LaurentMatrix) -> SnfResult:
    """Smith normal form ``U M V = D`` over Q[x, 1/x].

    Pivot: smallest span in the active block, ties by row-major order.
    Diagonal entries are monic with valuation 0 and divide each other.
    """
    A = [list(r) for r in M.rows]
    k, s = M.shape
    U = [list(r) for r in LaurentMatrix.identity(k).rows]
    V = [list(r) for r in LaurentMatrix.identity(s).rows]

    def row_op(dst, src, q):  # row_dst -= q * row_src
        for R in (A, U):
            R[dst] = [a - q * b if b else a for a, b in zip(R[dst], R[src])]

    def col_op(dst, src, q):  # col_dst -= q * col_src
        for R in (A, V):
            for row in R:
                if row[src]:
                    row[dst] = row[dst] - q * row[src]

    def swap_rows(i, j):
        if i != j:
            for R in (A, U):
                R[i], R[j] = R[j], R[i]

    def swap_cols(i, j):
        if i != j:
            for R in (A, V):
                for row in R:
                    row[i], row[j] = row[j], row[i]

    def pick(i, cells):
        best = None
        for r, c in cells:
            e = A[r][c]
            if e and (best is None or e.span < best[0]):
                best = (e.span, r, c)
        return best

    diag = []
    for i in range(min(k, s)):
        p = pick(i, ((r, c) for r in range(i, k) for c in range(i, s)))
        if p is None:
            break
        swap_rows(i, p[1])
        swap_cols(i, p[2])
        while True:
            for r in range(i + 1, k):
                if A[r][i]:
                    q, _ = lp_divmod(A[r][i], A[i][i])
                    row_op(r, i, q)
            for c in range(i + 1, s):
                if A[i][c]:
                    q, _ = lp_divmod(A[i][c], A[i][i])
                    col_op(c, i, q)
            p = pick(i, [(r, i) for r in range(i + 1, k)] + [(i, c) for c in range(i + 1, s)])
            if p is not None:
                swap_rows(i, p[1])
                swap_cols(i, p[2])
                continue
            bad = next((r for r in range(i + 1, k) for c in range(i + 1, s)
                        if A[r][c] and lp_divide_exact(A[r][c], A[i][i], RAT) is None), None)
            if bad is None:
                break
            row_op(i, bad, -ONE)  # row_i += row_bad, then eliminate again
        u = _unit_inverse(_unit_part(A[i][i]))
        for R in (A, U):
            R[i] = [u * e if e else e for e in R[i]]
        diag.append(A[i][i])
    return SnfResult(LaurentMatrix(U), LaurentMatrix(V), diag)


def is_unit(p: LaurentPoly) -> bool:
    return len(p.items()) == 1


def check_snf(M: LaurentMatrix, res: SnfResult) -> bool:
    """Reconstruction, unimodularity and the divisibility chain."""
    if res.U @ M @ res.V != res.D(M.shape):
        return False
    if not (is_unit(determinant(res.U)) and is_unit(determinant(res.V))):
        return False
    d = res.diagonal
    return all(x and lp_divide_exact(d[j + 1], d[j], RAT) is not None for j, x in enumerate(d[:-1])) and all(d)


def clear_denominators(p: LaurentPoly) -> LaurentPoly:
    """Integer primitive polynomial with the same roots (valuation 0)."""
    s, c = p.coeff_list()
    den = lcm(*(Fraction(x).denominator for x in c))
    ints = [int(Fraction(x) * den) for x in c]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return LaurentPoly.from_list([x // g for x in ints])


def _as_vectors(k: int, gens) -> list[list[LaurentPoly]]:
    out = []
    for g in gens:
        if isinstance(g, (LaurentPoly, str, int)):
            g = [g]
        g = [parse_poly(e) if isinstance(e, str) else (e if isinstance(e, LaurentPoly) else LaurentPoly.const(e))
             for e in g]
        if len(g) != k:
            raise ValueError(f"generator {g} does not have {k} components")
        out.append(g)
    return out


def predicted_exponent(k: int, gens) -> int:
    """Distortion exponent of ``<b, w_1, ..., w_s>`` in Z^k wr Z."""
    vecs = _as_vectors(k, gens)
    if not vecs or all(e.is_zero() for v in vecs for e in v):
        raise ValueError("generator matrix is zero")
    res = snf_laurent(LaurentMatrix.from_columns(vecs))
    return max(distortion_exponent(clear_denominators(d)).exponent for d in res.diagonal)


# ---------------------------------------------------------------------------
# subgroups with a shifted generator
# ---------------------------------------------------------------------------

Vec = list  # list[LaurentPoly], one polynomial per generator of A


def _vec_mul(A: FgAbelianGroup, u, v):
    """``(w1 b^t1)(w2 b^t2) = (w1 + x^t1 w2) b^(t1+t2)``."""
    (w1, t1), (w2, t2) = u, v
    return [_reduce_poly(A, j, a + b.shift(t1)) for j, (a, b) in enumerate(zip(w1, w2))], t1 + t2


def _vec_inv(A: FgAbelianGroup, u):
    w, t = u
    return [_reduce_poly(A, j, -a.shift(-t)) for j, a in enumerate(w)], -t


def _vec_pow(A, u, n: int):
    base = u if n >= 0 else _vec_inv(A, u)
    acc = ([LaurentPoly.zero() for _ in u[0]], 0)
    for _ in range(abs(n)):
        acc = _vec_mul(A, acc, base)
    return acc


def _reduce_poly(A: FgAbelianGroup, j: int, p: LaurentPoly) -> LaurentPoly:
    if j < A.free_rank:
        return p
    n = A.torsion_orders[j - A.free_rank]
    return LaurentPoly({e: int(c) % n for e, c in p.items()})


def normalize_generators(A: FgAbelianGroup, gens) -> tuple[Vec, int, list[Vec]]:
    """Euclid on translation parts: returns ``(w0, t, [w_1..w_s])`` with one shifted generator.

    ``gens`` are pairs ``(w, t)`` describing ``w b^t``. The result generates
    the same subgroup; ``t >= 0`` is the gcd of the input translations.
    """
    gens = [([_reduce_poly(A, j, p) for j, p in enumerate(w)], int(t)) for w, t in gens]
    if not gens:
        raise ValueError("no generators")
    while sum(1 for _, t in gens if t) > 1:
        i = min((j for j, (_, t) in enumerate(gens) if t), key=lambda j: (abs(gens[j][1]), j))
        ti = gens[i][1]
        for j, g in enumerate(gens):
            if j != i and g[1]:
                q = g[1] // ti
                gens[j] = _vec_mul(A, g, _vec_pow(A, gens[i], -q))
    idx = next((j for j, (_, t) in enumerate(gens) if t), None)
    if idx is None:
        return [LaurentPoly.zero() for _ in range(A.ngens)], 0, [w for w, _ in gens if any(w)]
    g0 = gens[idx]
    if g0[1] < 0:
        g0 = _vec_inv(A, g0)
    rest = [w for j, (w, _) in enumerate(gens) if j != idx and any(not p.is_zero() for p in w)]
    return g0[0], g0[1], rest


def reindex(A: FgAbelianGroup, w: Vec, t: int) -> Vec:
    """View ``w`` in ``A^t wr <b^t>``: position ``q t + r`` goes to block r, position q."""
    out = [dict() for _ in range(A.ngens * t)]
    for j, p in enumerate(w):
        for e, c in p.items():
            q, r = divmod(e, t)
            out[r * A.ngens + j][q] = c
    return [LaurentPoly(d) for d in out]


@dataclass
class ReducedSubgroup:
    A: FgAbelianGroup
    gens: list[Vec]  # base generators; b is implicit
    t: int

    def to_json(self) -> dict:
        return {"A": str(self.A), "t": self.t, "gens": [[str(p) for p in g] for g in self.gens]}


def shift_gen_reduction(A: FgAbelianGroup, w0: Vec, t: int, gens: list[Vec]) -> ReducedSubgroup:
    """``<w0 b^t, w_1, ..., w_s>`` as a subgroup ``<b, w_1', ...>`` of ``A^|t| wr Z``.

    The automorphism fixing W and sending ``w0 b^t`` to ``b^t`` drops w0; the
    index-|t| subgroup ``W <b^t>`` is then identified with ``A^|t| wr Z``.
    """
    if t == 0:
        raise ValueError("t = 0: the subgroup lies in the base group")
    t = abs(t)
    return ReducedSubgroup(A.power(t), [reindex(A, w, t) for w in gens], t)


def reduced_exponent(red: ReducedSubgroup) -> int:
    if red.A.torsion_orders:
        raise ValueError("exponent prediction needs torsion-free A")
    if not red.gens or all(p.is_zero() for g in red.gens for p in g):
        return 1
    return predicted_exponent(red.A.ngens, red.gens)


# ---------------------------------------------------------------------------
# generator files
# ---------------------------------------------------------------------------

@dataclass
class GeneratorFile:
    k: int
    gens: list[Vec]
    shift_gen: tuple[Vec, int] | None = None
    A: FgAbelianGroup | None = None

    @property
    def group(self) -> FgAbelianGroup:
        return self.A or FgAbelianGroup(self.k)

    def to_json(self) -> dict:
        out = {"k": self.k, "gens": [[str(p) for p in g] for g in self.gens],
               "shift_gen": None if self.shift_gen is None else
               {"w0": [str(p) for p in self.shift_gen[0]], "t": self.shift_gen[1]}}
        if self.A is not None:
            out["A"] = str(self.A)
        return out


def _poly_field(e) -> LaurentPoly:
    if isinstance(e, dict):
        return LaurentPoly.from_json(e, INT)
    if isinstance(e, int):
        return LaurentPoly.const(e)
    return parse_poly(str(e))


def parse_generator_file(obj) -> GeneratorFile:
    """``{"k": int, "gens": [[poly, ...], ...], "shift_gen": {"w0": [...], "t": int} | null}``."""
    if isinstance(obj, str):
        obj = json.loads(obj)
    try:
        k = int(obj["k"])
        gens = [[_poly_field(e) for e in g] for g in obj.get("gens", [])]
        sg = obj.get("shift_gen")
        shift = None if sg is None else ([_poly_field(e) for e in sg["w0"]], int(sg["t"]))
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed generator file: {exc}") from None
    A = FgAbelianGroup.parse(obj["A"]) if obj.get("A") else None
    ngens = A.ngens if A is not None else k
    for g in gens + ([shift[0]] if shift else []):
        if len(g) != ngens:
            raise ValueError(f"generator of length {len(g)} in rank-{ngens} file")
    return GeneratorFile(k, gens, shift, A)


def load_generator_file(path) -> GeneratorFile:
    with open(path) as fh:
        return parse_generator_file(json.load(fh))


@dataclass
class Prediction:
    exponent: int
    kind: str  # "with-b", "reduced", "abelian"
    reduced: ReducedSubgroup | None = None
    diagonal: list[LaurentPoly] | None = None

    def to_json(self) -> dict:
        return {"exponent": self.exponent, "kind": self.kind,
                "reduced": None if self.reduced is None else self.reduced.to_json(),
                "diagonal": None if self.diagonal is None else [str(d) for d in self.diagonal]}


def predict_file(gf: GeneratorFile) -> Prediction:
    """Predicted exponent for the subgroup a generator file describes.

    No shift generator means ``<b, gens>``; ``t = 0`` means the subgroup lies
    in the abelian base and is undistorted.
    """
    if gf.group.torsion_orders:
        raise ValueError("exponent prediction needs torsion-free A")
    if gf.shift_gen is None:
        vecs = gf.gens
        if not vecs or all(p.is_zero() for g in vecs for p in g):
            return Prediction(1, "with-b", diagonal=[])
        res = snf_laurent(LaurentMatrix.from_columns(vecs))
        return Prediction(predicted_exponent(gf.group.ngens, vecs), "with-b", diagonal=res.diagonal)
    w0, t = gf.shift_gen
    w0, t, rest = normalize_generators(gf.group, [(w0, t)] + [(g, 0) for g in gf.gens])
    if t == 0:
        return Prediction(1, "abelian")
    red = shift_gen_reduction(gf.group, w0, t, rest)
    return Prediction(reduced_exponent(red), "reduced", red)
