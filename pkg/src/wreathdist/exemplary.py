"""Subgroups ``H = <b, h(x) a>`` of Z wr Z.

Elements of H are ``(f h a) b^n``; since multiplication by h is injective on
Z[x, 1/x], ``(f, n)`` are coordinates for H, and ``f a b^n`` in a second copy
of Z wr Z has the same word length over {a, b} as the H-element over {w, b}.
"""
from __future__ import annotations

from dataclasses import dataclass

from .algebra import INT, FgAbelianGroup, LaurentPoly, lp_divide_exact, parse_poly
from .distortion import DistortionValue, IntPoly, distortion_search
from .wreath import WreathElement, WreathGroup, wr_len_closed

ZWRZ = WreathGroup(FgAbelianGroup(1), 1)


@dataclass(frozen=True)
class ExemplarySubgroup:
    """``<b, h(x) a>`` with h normalized to ``d_0 > 0`` and valuation 0.

    ``recorded_shift`` and ``recorded_sign`` give the stripped unit:
    the input polynomial equals ``sign * x^shift * h``.
    """

    h: LaurentPoly
    recorded_shift: int = 0
    recorded_sign: int = 1

    @classmethod
    def from_poly(cls, h) -> "ExemplarySubgroup":
        if isinstance(h, str):
            h = parse_poly(h)
        elif isinstance(h, IntPoly):
            h = h.to_laurent()
        elif not isinstance(h, LaurentPoly):
            h = LaurentPoly.from_list(list(h))
        if h.is_zero():
            raise ValueError("h must be nonzero")
        if not h.is_integral():
            raise ValueError("h must have integer coefficients")
        s = h.valuation
        g = h.shift(-s)
        sign = 1 if g[0] > 0 else -1
        return cls(g.scale(sign), s, sign)

    @classmethod
    def parse(cls, text: str) -> "ExemplarySubgroup":
        """``exemplary(h = <poly>)`` or a bare polynomial."""
        t = text.strip()
        if t.startswith("exemplary"):
            inner = t[len("exemplary"):].strip()
            if not (inner.startswith("(") and inner.endswith(")")):
                raise ValueError(f"bad subgroup literal {text!r}")
            inner = inner[1:-1].strip()
            if inner.startswith("h"):
                inner = inner[1:].lstrip()
                if not inner.startswith("="):
                    raise ValueError(f"bad subgroup literal {text!r}")
                inner = inner[1:]
            t = inner
        return cls.from_poly(parse_poly(t))

    @property
    def t(self) -> int:
        return self.h.degree

    @property
    def intpoly(self) -> IntPoly:
        return IntPoly.coerce(self.h)

    def generators(self) -> list[WreathElement]:
        return [ZWRZ.element({}, 1), ZWRZ.from_laurent(self.h)]

    def __str__(self):
        return f"exemplary(h = {self.h})"


@dataclass(frozen=True)
class SubgroupElementCoords:
    """The element ``(f h a) b^n`` of H."""

    f: LaurentPoly
    n: int = 0

    def e(self, H: ExemplarySubgroup) -> int:
        return int((self.f * H.h).norm())

    def e_H(self) -> int:
        return int(self.f.norm())

    def _sp(self):
        if self.f.is_zero():
            return 0, 0
        return self.f.valuation, self.f.degree - self.f.valuation

    def iota(self, H: ExemplarySubgroup) -> int:
        s, p = self._sp()
        return max(H.t + s + p, 0)

    def epsilon(self) -> int:
        return min(self._sp()[0], 0)

    def iota_H(self) -> int:
        s, p = self._sp()
        return max(s + p, 0)

    def u(self, H: ExemplarySubgroup) -> int:
        return self.iota(H) - self.epsilon()

    def u_H(self) -> int:
        return self.iota_H() - self.epsilon()

    def to_json(self) -> dict:
        return {"f": self.f.to_json(), "n": self.n}


def embed(H: ExemplarySubgroup, f: LaurentPoly, n: int = 0) -> WreathElement:
    return ZWRZ.from_laurent(f * H.h, n)


def exemplary_member(H: ExemplarySubgroup, u: WreathElement) -> SubgroupElementCoords | None:
    """Coordinates of u in H, or None when u is not in H."""
    if u.group.A != FgAbelianGroup(1) or u.group.d != 1:
        raise ValueError("element must lie in Z wr Z")
    (p,) = u.laurent()
    f = lp_divide_exact(p, H.h, INT)
    if f is None:
        return None
    return SubgroupElementCoords(f, u.translation[0])


def exemplary_len(H: ExemplarySubgroup, c: SubgroupElementCoords) -> int:
    """Word length of ``(f h a) b^n`` over {b, w}."""
    return wr_len_closed(ZWRZ.from_laurent(c.f, c.n)).total


@dataclass
class DeltaValue:
    l: int
    lower: int
    upper: int
    exact: bool
    witness: SubgroupElementCoords

    @property
    def value(self) -> int | None:
        return self.lower if self.exact else None

    def to_json(self) -> dict:
        return {"l": self.l, "lower": self.lower, "upper": self.upper, "exact": self.exact,
                "witness": self.witness.to_json()}


def delta_exact(H: ExemplarySubgroup, l: int, mode: str = "exact",
                time_limit: float | None = 60.0) -> DeltaValue:
    """``max { S(f) : S(f h) <= l, u <= l }`` over integer Laurent f.

    The window u of ``f h`` (together with the origin) is at least ``t + deg f - val f``
    and equals it once f is shifted to valuation 0, so the problem is the
    polynomial one with degree bound ``l - t`` and budget ``l``.
    """
    if l < 0:
        raise ValueError("l must be nonnegative")
    res: DistortionValue = distortion_search(H.intpoly, l - H.t, l, l=l, mode=mode, time_limit=time_limit)
    f = res.witness
    if not f.is_zero():
        f = f.shift(-f.valuation)
    return DeltaValue(l, res.lower, res.upper, res.exact, SubgroupElementCoords(f, 0))
