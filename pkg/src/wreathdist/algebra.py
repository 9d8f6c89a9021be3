"""Finitely generated abelian groups and Laurent polynomials with exact coefficients.

Generating sets are always the standard basis: one generator per direct
summand of ``Z^r + Z_{n_1} + ... + Z_{n_s}``.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, NamedTuple, Union

Coeff = Union[int, Fraction]

INT = "Z"
RAT = "Q"


# ---------------------------------------------------------------------------
# finitely generated abelian groups
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FgAbelianGroup:
    free_rank: int = 1
    torsion_orders: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion_orders", tuple(int(n) for n in self.torsion_orders))
        if self.free_rank < 0:
            raise ValueError("free rank must be nonnegative")
        if any(n < 2 for n in self.torsion_orders):
            raise ValueError(f"torsion orders must be >= 2, got {self.torsion_orders}")

    @property
    def ngens(self) -> int:
        return self.free_rank + len(self.torsion_orders)

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    def reduce(self, coords: Iterable[int]) -> tuple[int, ...]:
        coords = tuple(int(c) for c in coords)
        if len(coords) != self.ngens:
            raise ValueError(f"expected {self.ngens} coordinates, got {len(coords)}")
        r = self.free_rank
        return coords[:r] + tuple(c % n for c, n in zip(coords[r:], self.torsion_orders))

    def element(self, *coords: int) -> "AElement":
        return AElement(self, self.reduce(coords))

    def zero(self) -> "AElement":
        return AElement(self, (0,) * self.ngens)

    def generator(self, i: int) -> "AElement":
        c = [0] * self.ngens
        c[i] = 1
        return self.element(*c)

    def length(self, v) -> int:
        return a_length(self, v)

    def power(self, m: int) -> "FgAbelianGroup":
        """A^m, with summands ordered block by block (free parts first)."""
        return FgAbelianGroup(self.free_rank * m, self.torsion_orders * m)

    def __str__(self):
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z_{n}" for n in self.torsion_orders)
        return " + ".join(parts) if parts else "1"

    @classmethod
    def parse(cls, text: str) -> "FgAbelianGroup":
        """Parse ``Z``, ``Z^3``, ``Z2``, ``Z_4``, sums joined by ``+``, ``x`` or ``(+)``."""
        text = text.strip().replace("⊕", "+").replace("(+)", "+").replace("×", "+")
        if text in ("1", "0", ""):
            return cls(0, ())
        free, tors = 0, []
        for tok in re.split(r"\s*(?:\+|\bx\b|,)\s*", text):
            tok = tok.replace(" ", "")
            m = re.fullmatch(r"Z(?:\^(\d+))?", tok)
            if m:
                free += int(m.group(1) or 1)
                continue
            m = re.fullmatch(r"Z_?(\d+)(?:\^(\d+))?", tok)
            if m:
                tors.extend([int(m.group(1))] * int(m.group(2) or 1))
                continue
            raise ValueError(f"cannot parse abelian group summand {tok!r}")
        return cls(free, tuple(tors))


@dataclass(frozen=True)
class AElement:
    group: FgAbelianGroup
    coords: tuple[int, ...]

    @property
    def free_part(self) -> tuple[int, ...]:
        return self.coords[: self.group.free_rank]

    @property
    def torsion_part(self) -> tuple[int, ...]:
        return self.coords[self.group.free_rank:]

    def is_identity(self) -> bool:
        return not any(self.coords)

    def __add__(self, other: "AElement") -> "AElement":
        if other.group != self.group:
            raise ValueError("elements of different groups")
        return AElement(self.group, self.group.reduce(a + b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "AElement":
        return AElement(self.group, self.group.reduce(-a for a in self.coords))

    def __sub__(self, other: "AElement") -> "AElement":
        return self + (-other)


def coords_length(group: FgAbelianGroup, coords: tuple[int, ...]) -> int:
    r = group.free_rank
    total = sum(abs(c) for c in coords[:r])
    for c, n in zip(coords[r:], group.torsion_orders):
        c %= n
        total += min(c, n - c)
    return total


def a_length(A: FgAbelianGroup, v) -> int:
    """Word length of ``v`` over the standard generators of ``A``.

    ``v`` may be an :class:`AElement` or a plain coordinate sequence.
    """
    coords = v.coords if isinstance(v, AElement) else tuple(v)
    if isinstance(v, AElement) and v.group != A:
        raise ValueError(f"element of {v.group} is not in {A}")
    if len(coords) != A.ngens:
        raise ValueError(f"dimension mismatch: {len(coords)} coordinates for {A}")
    return coords_length(A, coords)


# ---------------------------------------------------------------------------
# Laurent polynomials
# ---------------------------------------------------------------------------

def _norm_coeff(c, ring: str) -> Coeff:
    if isinstance(c, Fraction):
        if c.denominator == 1:
            return int(c.numerator)
        if ring == INT:
            raise ValueError(f"non-integer coefficient {c} in integer Laurent polynomial")
        return c
    if isinstance(c, int):
        return c
    if isinstance(c, float):
        raise TypeError("floating point coefficients are not allowed")
    return _norm_coeff(Fraction(c), ring)


class PolyStats(NamedTuple):
    S: Coeff
    valuation: int | None  # None: undefined (zero polynomial)
    degree: int | None


class LaurentPoly:
    """Finitely supported map exponent -> nonzero coefficient.

    ``ring`` is ``"Z"`` (integer coefficients) or ``"Q"`` (rationals).
    Instances are immutable and hashable.
    """

    __slots__ = ("_c", "ring", "_hash")

    def __init__(self, coeffs: dict[int, Coeff] | None = None, ring: str = INT):
        if ring not in (INT, RAT):
            raise ValueError(f"unknown ring tag {ring!r}")
        c = {}
        for k, v in (coeffs or {}).items():
            v = _norm_coeff(v, ring)
            if v:
                c[int(k)] = v
        self._c = c
        self.ring = ring
        self._hash = None

    # -- constructors -------------------------------------------------------
    @classmethod
    def from_list(cls, coeffs: Iterable[Coeff], s: int = 0, ring: str = INT) -> "LaurentPoly":
        return cls({s + i: v for i, v in enumerate(coeffs)}, ring)

    @classmethod
    def monomial(cls, k: int, c: Coeff = 1, ring: str = INT) -> "LaurentPoly":
        return cls({k: c}, ring)

    @classmethod
    def const(cls, c: Coeff, ring: str = INT) -> "LaurentPoly":
        return cls({0: c}, ring)

    @classmethod
    def zero(cls, ring: str = INT) -> "LaurentPoly":
        return cls({}, ring)

    # -- basic structure ----------------------------------------------------
    @property
    def coeffs(self) -> dict[int, Coeff]:
        return dict(self._c)

    def items(self):
        return sorted(self._c.items())

    def __getitem__(self, k: int) -> Coeff:
        return self._c.get(k, 0)

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self):
        return bool(self._c)

    @property
    def valuation(self) -> int | None:
        return min(self._c) if self._c else None

    @property
    def degree(self) -> int | None:
        return max(self._c) if self._c else None

    @property
    def span(self) -> int:
        """degree - valuation; the Euclidean size in the Laurent ring (-1 for zero)."""
        return max(self._c) - min(self._c) if self._c else -1

    def norm(self) -> Coeff:
        """S(f): sum of absolute values of the coefficients."""
        return sum(abs(v) for v in self._c.values())

    def coeff_list(self) -> tuple[int, list[Coeff]]:
        """``(s, [c_s, ..., c_{s+p}])``; ``(0, [])`` for zero."""
        if not self._c:
            return 0, []
        s, e = min(self._c), max(self._c)
        return s, [self._c.get(k, 0) for k in range(s, e + 1)]

    def with_ring(self, ring: str) -> "LaurentPoly":
        return LaurentPoly(self._c, ring)

    def is_integral(self) -> bool:
        return all(isinstance(v, int) for v in self._c.values())

    def is_unit(self) -> bool:
        """Units are c*x^j (c = +-1 over Z, c != 0 over Q)."""
        if len(self._c) != 1:
            return False
        (v,) = self._c.values()
        return self.ring == RAT or abs(v) == 1

    # -- arithmetic ---------------------------------------------------------
    def _join(self, other) -> str:
        return RAT if RAT in (self.ring, other.ring) else INT

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, (int, Fraction)):
            ring = RAT if isinstance(other, Fraction) and other.denominator != 1 else INT
            return LaurentPoly.const(other, ring)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        c = dict(self._c)
        for k, v in other._c.items():
            c[k] = c.get(k, 0) + v
        return LaurentPoly(c, self._join(other))

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({k: -v for k, v in self._c.items()}, self.ring)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        c: dict[int, Coeff] = {}
        for i, a in self._c.items():
            for j, b in other._c.items():
                c[i + j] = c.get(i + j, 0) + a * b
        return LaurentPoly(c, self._join(other))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if not self.is_unit():
                raise ValueError("negative power of a non-unit")
            ((k, v),) = self._c.items()
            return LaurentPoly({-k * (-n): Fraction(1, v) ** (-n) if self.ring == RAT else v ** (-n)}, self.ring)
        out = LaurentPoly.const(1, self.ring)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by x^k."""
        return LaurentPoly({e + k: v for e, v in self._c.items()}, self.ring)

    def scale(self, c: Coeff) -> "LaurentPoly":
        ring = RAT if isinstance(c, Fraction) and c.denominator != 1 else self.ring
        return LaurentPoly({e: v * c for e, v in self._c.items()}, ring)

    def reversal(self) -> "LaurentPoly":
        """f(1/x)."""
        return LaurentPoly({-e: v for e, v in self._c.items()}, self.ring)

    def __call__(self, x):
        return sum(v * x ** e for e, v in self._c.items())

    def content(self) -> Fraction:
        """Positive rational c with self/c integral and primitive (1 for zero)."""
        if not self._c:
            return Fraction(1)
        vals = [Fraction(v) for v in self._c.values()]
        den = lcm(*(v.denominator for v in vals))
        from math import gcd
        g = 0
        for v in vals:
            g = gcd(g, int(v * den))
        return Fraction(g, den)

    def primitive(self) -> "LaurentPoly":
        """Integer primitive part, sign kept."""
        c = self.content()
        return LaurentPoly({e: Fraction(v) / c for e, v in self._c.items()}, INT)

    # -- comparison / hashing ----------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.const(other, RAT)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    # -- text / json ----------------------------------------------------------
    def __repr__(self):
        return f"LaurentPoly({self})"

    def __str__(self):
        return format_poly(self)

    def to_json(self) -> dict:
        s, cs = self.coeff_list()
        return {"s": s, "coeffs": [c if isinstance(c, int) else str(c) for c in cs]}

    @classmethod
    def from_json(cls, obj, ring: str | None = None) -> "LaurentPoly":
        if isinstance(obj, str):
            return parse_poly(obj, ring or INT)
        if isinstance(obj, (int,)):
            return cls.const(obj)
        cs = [Fraction(c) if isinstance(c, str) else c for c in obj["coeffs"]]
        if ring is None:
            ring = INT if all(Fraction(c).denominator == 1 for c in cs) else RAT
        return cls.from_list(cs, int(obj.get("s", 0)), ring)

    @classmethod
    def parse(cls, text: str, ring: str = INT) -> "LaurentPoly":
        return parse_poly(text, ring)


def format_poly(f: LaurentPoly, var: str = "x") -> str:
    if f.is_zero():
        return "0"
    out = []
    for k, v in f.items():
        sign = "-" if v < 0 else "+"
        a = abs(v)
        if k == 0:
            body = str(a)
        else:
            mono = var if k == 1 else f"{var}^{k}"
            body = mono if a == 1 else f"{a}*{mono}"
        out.append((sign, body))
    first_sign, first = out[0]
    text = ("-" if first_sign == "-" else "") + first
    for sign, body in out[1:]:
        text += f" {sign} {body}"
    return text


_TERM = re.compile(
    r"""\s*(?P<sign>[+-])?\s*
        (?:(?P<coef>\d+(?:/\d+)?)\s*(?P<star>\*)?\s*)?
        (?P<var>x(?:\s*\^\s*(?P<exp>\(?\s*-?\d+\s*\)?))?)?
        \s*""",
    re.VERBOSE,
)


def parse_poly(text: str, ring: str = INT, var: str = "x") -> LaurentPoly:
    """Parse ``c``, ``c*x^k``, ``x^k`` terms joined by + / -, or ``[c_s, ...] @ s``.

    Products of parenthesized factors (``(1-x)^2*(1+x)``) are accepted too.
    """
    text = text.strip().replace("−", "-").replace("**", "^")
    if var != "x":
        text = text.replace(var, "x")
    m = re.fullmatch(r"\[(.*)\]\s*(?:@\s*(-?\d+))?", text)
    if m:
        body = m.group(1).strip()
        cs = [Fraction(t.strip()) for t in body.split(",")] if body else []
        if ring == INT and any(c.denominator != 1 for c in cs):
            ring = RAT
        return LaurentPoly.from_list(cs, int(m.group(2) or 0), ring)
    if "(" in text.replace("^(", "^"):
        return _parse_product(text, ring)
    return _parse_sum(text, ring)


def _parse_sum(text: str, ring: str) -> LaurentPoly:
    text = text.strip()
    if not text:
        raise ValueError("empty polynomial")
    coeffs: dict[int, Coeff] = {}
    pos = 0
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos or (m.group("coef") is None and m.group("var") is None):
            raise ValueError(f"cannot parse polynomial {text!r} at position {pos}")
        if m.group("star") and not m.group("var"):
            raise ValueError(f"dangling '*' in {text!r}")
        if pos > 0 and not m.group("sign"):
            raise ValueError(f"missing operator in {text!r} at position {pos}")
        c = Fraction(m.group("coef")) if m.group("coef") else Fraction(1)
        if m.group("sign") == "-":
            c = -c
        k = 0
        if m.group("var"):
            k = int(m.group("exp").strip("() ")) if m.group("exp") else 1
        coeffs[k] = coeffs.get(k, 0) + c
        pos = m.end()
    if ring == INT and any(Fraction(v).denominator != 1 for v in coeffs.values()):
        ring = RAT
    return LaurentPoly(coeffs, ring)


def _parse_product(text: str, ring: str) -> LaurentPoly:
    # split into top-level factors: (..)^k, joined by * or juxtaposition
    result = LaurentPoly.const(1, ring)
    pos, n = 0, len(text)
    sign = 1
    if text.startswith("-"):
        sign, pos = -1, 1
    while pos < n:
        while pos < n and text[pos] in " *":
            pos += 1
        if pos >= n:
            break
        if text[pos] == "(":
            depth, end = 0, pos
            while end < n:
                depth += {"(": 1, ")": -1}.get(text[end], 0)
                if depth == 0:
                    break
                end += 1
            if depth:
                raise ValueError(f"unbalanced parentheses in {text!r}")
            factor = parse_poly(text[pos + 1:end], ring)
            pos = end + 1
        else:
            end = pos
            while end < n and text[end] not in "(*":
                end += 1
            factor = _parse_sum(text[pos:end], ring)
            pos = end
        m = re.match(r"\s*\^\s*(\d+)", text[pos:])
        if m:
            factor = factor ** int(m.group(1))
            pos += m.end()
        result = result * factor
    return result.scale(sign) if sign < 0 else result


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def lp_mul(f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    return f * g


def poly_divmod(a: list, b: list) -> tuple[list, list]:
    """Dense division over Q, coefficient lists low->high; ``b[-1] != 0``."""
    a = [Fraction(x) for x in a]
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = Fraction(b[-1])
    db = len(b) - 1
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] / lead
        if c:
            q[i - db] = c
            for j, bj in enumerate(b):
                a[i - db + j] -= c * bj
    r = a[:db] if db > 0 else []
    while r and r[-1] == 0:
        r.pop()
    return q, r


def lp_divmod(a: LaurentPoly, b: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
    """Euclidean division in Q[x, 1/x]: ``a = q*b + r`` with ``span(r) < span(b)``."""
    if b.is_zero():
        raise ZeroDivisionError("division by the zero Laurent polynomial")
    if a.is_zero():
        return LaurentPoly.zero(RAT), LaurentPoly.zero(RAT)
    sa, ca = a.coeff_list()
    sb, cb = b.coeff_list()
    q, r = poly_divmod(ca, cb)
    return LaurentPoly.from_list(q, sa - sb, RAT), LaurentPoly.from_list(r, sa, RAT)


def lp_divide_exact(p: LaurentPoly, h: LaurentPoly, ring: str | None = None) -> LaurentPoly | None:
    """The quotient ``f`` with ``p = h*f`` over the given ring, or ``None``.

    With ``ring="Z"`` the quotient must have integer coefficients.
    """
    if h.is_zero():
        raise ZeroDivisionError("division by the zero Laurent polynomial")
    if ring is None:
        ring = RAT if RAT in (p.ring, h.ring) else INT
    if p.is_zero():
        return LaurentPoly.zero(ring)
    # both sides have nonzero constant term after stripping x-powers, so the
    # quotient (if any) is an honest polynomial times x^(sp - sh)
    sp, cp = p.coeff_list()
    sh, ch = h.coeff_list()
    if len(cp) < len(ch):
        return None
    q, r = poly_divmod(cp, ch)
    if r:
        return None
    if ring == INT and any(c.denominator != 1 for c in q):
        return None
    return LaurentPoly.from_list(q, sp - sh, ring)


def lp_stats(f: LaurentPoly) -> PolyStats:
    return PolyStats(f.norm(), f.valuation, f.degree)


def dumps_poly(f: LaurentPoly) -> str:
    return json.dumps(f.to_json())
