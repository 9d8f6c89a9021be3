"""Elements of A wr Z^d, exact word lengths and a breadth-first oracle.

Convention: ``(w1 g1)(w2 g2) = (w1 + g1.w2)(g1 g2)`` where ``g.w`` translates
the support of ``w`` by ``+g``. Hence ``b a b^-1`` has support ``{1}`` and a
word evaluated left to right writes each A-letter at the current position of
the cursor ``t``.

Generators: one per direct summand of A, sitting at the origin, and the
standard basis of Z^d. Symbols are ``a`` (or ``a1, a2, ...``) for A and
``b`` (``b, c`` when d = 2, ``b1, ..., bd`` otherwise) for Z^d; inverses carry
the suffix ``^-1``.
"""
from __future__ import annotations

import json
import re
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

from .algebra import AElement, FgAbelianGroup, LaurentPoly, coords_length, parse_poly
from .tsp import DEFAULT_CAP, SupportCapExceeded, nearest_neighbor_tsp, path_tsp

__all__ = [
    "WreathGroup", "WreathElement", "LengthBreakdown", "SupportCapExceeded",
    "BallMemoryExceeded", "wr_mul", "wr_len_closed", "wr_len_trace", "wr_length",
    "wr_geodesic_word", "evaluate_word", "format_word", "bfs_ball", "bfs_ball_raw",
    "subgroup_bfs", "format_element", "parse_element", "dumps_element",
]


@dataclass(frozen=True)
class WreathGroup:
    A: FgAbelianGroup
    d: int = 1

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("base dimension must be >= 1")

    def __str__(self):
        base = "Z" if self.d == 1 else f"Z^{self.d}"
        a = str(self.A).replace("Z_", "Z").replace(" + ", "+") if self.A.torsion_orders else str(self.A)
        return f"{a} wr {base}"

    @classmethod
    def parse(cls, text: str) -> "WreathGroup":
        m = re.fullmatch(r"\s*(.+?)\s+wr\s+Z(?:\s*\^\s*(\d+))?\s*", text)
        if not m:
            raise ValueError(f"cannot parse wreath product {text!r} (expected 'A wr Z^d')")
        return cls(FgAbelianGroup.parse(m.group(1)), int(m.group(2) or 1))

    # generator bookkeeping ---------------------------------------------------
    def a_symbols(self) -> list[str]:
        n = self.A.ngens
        return ["a"] if n == 1 else [f"a{i + 1}" for i in range(n)]

    def b_symbols(self) -> list[str]:
        if self.d == 1:
            return ["b"]
        if self.d == 2:
            return ["b", "c"]
        return [f"b{i + 1}" for i in range(self.d)]

    def generators(self) -> dict[str, "WreathElement"]:
        """All generators and their inverses keyed by symbol."""
        out = {}
        origin = (0,) * self.d
        for i, s in enumerate(self.a_symbols()):
            for e, suffix in ((1, ""), (-1, "^-1")):
                c = [0] * self.A.ngens
                c[i] = e
                coords = self.A.reduce(c)
                out[s + suffix] = WreathElement(self, ((origin, coords),) if any(coords) else (), origin)
        for j, s in enumerate(self.b_symbols()):
            for e, suffix in ((1, ""), (-1, "^-1")):
                t = [0] * self.d
                t[j] = e
                out[s + suffix] = WreathElement(self, (), tuple(t))
        return out

    def identity(self) -> "WreathElement":
        return WreathElement(self, (), (0,) * self.d)

    def element(self, support: dict | Iterable = (), translation=None) -> "WreathElement":
        """Build from ``{pos: coords}``; ints are accepted for d = 1 positions / rank-1 A."""
        items = support.items() if isinstance(support, dict) else support
        acc: dict[tuple, tuple] = {}
        for pos, val in items:
            pos = (pos,) if isinstance(pos, int) else tuple(pos)
            if len(pos) != self.d:
                raise ValueError(f"position {pos} is not in Z^{self.d}")
            if isinstance(val, AElement):
                val = val.coords
            elif isinstance(val, int):
                val = (val,)
            prev = acc.get(pos, (0,) * self.A.ngens)
            acc[pos] = self.A.reduce(a + b for a, b in zip(prev, val))
        if translation is None:
            translation = (0,) * self.d
        elif isinstance(translation, int):
            translation = (translation,)
        translation = tuple(translation)
        if len(translation) != self.d:
            raise ValueError("translation has wrong dimension")
        return WreathElement(self, _canon(acc), translation)

    def from_laurent(self, polys, translation: int = 0) -> "WreathElement":
        """d = 1: ``sum_i f_i(x) a_i`` times ``b^translation``."""
        if self.d != 1:
            raise ValueError("Laurent form needs d = 1")
        if isinstance(polys, LaurentPoly):
            polys = [polys]
        if len(polys) != self.A.ngens:
            raise ValueError("one polynomial per generator of A expected")
        acc: dict[tuple, list] = {}
        for i, f in enumerate(polys):
            for k, c in f.items():
                v = acc.setdefault((k,), [0] * self.A.ngens)
                v[i] += int(c)
        return self.element({p: tuple(v) for p, v in acc.items()}, translation)


def _canon(acc: dict) -> tuple:
    return tuple(sorted((p, v) for p, v in acc.items() if any(v)))


@dataclass(frozen=True)
class WreathElement:
    group: WreathGroup
    items: tuple  # sorted ((pos, coords), ...), identity values never stored
    translation: tuple

    @property
    def support(self) -> dict[tuple, AElement]:
        return {p: AElement(self.group.A, v) for p, v in self.items}

    def positions(self) -> list[tuple]:
        return [p for p, _ in self.items]

    def is_identity(self) -> bool:
        return not self.items and not any(self.translation)

    def __mul__(self, other: "WreathElement") -> "WreathElement":
        return wr_mul(self, other)

    def inverse(self) -> "WreathElement":
        t = self.translation
        A = self.group.A
        items = [(tuple(x - y for x, y in zip(p, t)), A.reduce(-c for c in v)) for p, v in self.items]
        return WreathElement(self.group, tuple(sorted(items)), tuple(-x for x in t))

    def laurent(self) -> list[LaurentPoly]:
        """d = 1: the polynomials f_i with w = sum f_i(x) a_i."""
        if self.group.d != 1:
            raise ValueError("Laurent form needs d = 1")
        out = []
        for i in range(self.group.A.ngens):
            out.append(LaurentPoly({p[0]: v[i] for p, v in self.items}))
        return out

    def to_json(self) -> dict:
        return {
            "group": str(self.group),
            "support": [[list(p), list(v)] for p, v in self.items],
            "translation": list(self.translation),
        }

    def __str__(self):
        return format_element(self)


def wr_mul(u: WreathElement, v: WreathElement) -> WreathElement:
    if u.group != v.group:
        raise ValueError(f"cannot multiply elements of {u.group} and {v.group}")
    A = u.group.A
    t = u.translation
    acc = {p: c for p, c in u.items}
    for p, c in v.items:
        q = tuple(a + b for a, b in zip(p, t))
        prev = acc.get(q)
        acc[q] = c if prev is None else A.reduce(x + y for x, y in zip(prev, c))
    return WreathElement(u.group, _canon(acc), tuple(a + b for a, b in zip(t, v.translation)))


# ---------------------------------------------------------------------------
# lengths
# ---------------------------------------------------------------------------

@dataclass
class LengthBreakdown:
    total: int
    a_part: int
    trace_part: int
    visit_order: list = field(default_factory=list)
    certified: bool = True

    def to_json(self) -> dict:
        return {
            "total": self.total, "a_part": self.a_part, "trace_part": self.trace_part,
            "visit_order": [list(p) for p in self.visit_order], "certified": self.certified,
        }


def _a_part(u: WreathElement) -> int:
    A = u.group.A
    return sum(coords_length(A, v) for _, v in u.items)


def wr_len_closed(u: WreathElement) -> LengthBreakdown:
    """Closed-form length in A wr Z (nonnegative and negative support sides)."""
    if u.group.d != 1:
        raise ValueError("closed formula applies to A wr Z only (d = 1)")
    (t,) = u.translation
    pos = [p[0] for p, _ in u.items]
    nonneg = sorted(x for x in pos if x >= 0)
    neg = sorted((x for x in pos if x < 0), reverse=True)
    iota = nonneg[-1] if nonneg else 0
    eps = -neg[-1] if neg else 0
    left_first = 2 * eps + iota + abs(t - iota)
    right_first = 2 * iota + eps + abs(t + eps)
    if left_first <= right_first:
        order = neg + nonneg
    else:
        order = nonneg + neg
    trace = min(left_first, right_first)
    a = _a_part(u)
    return LengthBreakdown(a + trace, a, trace, [(x,) for x in order])


def wr_len_trace(u: WreathElement, support_cap: int = DEFAULT_CAP, heuristic: bool = False) -> LengthBreakdown:
    """Length ``||w||_A + trace(u)``; the trace is an exact path TSP over the support."""
    origin = (0,) * u.group.d
    pts = u.positions()
    a = _a_part(u)
    if len(pts) > support_cap:
        if not heuristic:
            raise SupportCapExceeded(f"support of size {len(pts)} exceeds cap {support_cap}")
        cost, order = nearest_neighbor_tsp(pts, origin, u.translation)
        return LengthBreakdown(a + cost, a, cost, order, certified=False)
    cost, order = path_tsp(pts, origin, u.translation, cap=support_cap)
    return LengthBreakdown(a + cost, a, cost, order)


def wr_length(u: WreathElement, support_cap: int = DEFAULT_CAP) -> int:
    if u.group.d == 1:
        return wr_len_closed(u).total
    return wr_len_trace(u, support_cap).total


# ---------------------------------------------------------------------------
# words
# ---------------------------------------------------------------------------

def _moves(group: WreathGroup, src, dst) -> list[str]:
    syms = group.b_symbols()
    word = []
    for j, (a, b) in enumerate(zip(src, dst)):
        step = syms[j] if b > a else syms[j] + "^-1"
        word.extend([step] * abs(b - a))
    return word


def _a_letters(group: WreathGroup, coords) -> list[str]:
    A = group.A
    syms = group.a_symbols()
    word = []
    for i, c in enumerate(coords):
        if i >= A.free_rank:
            n = A.torsion_orders[i - A.free_rank]
            c %= n
            if c > n - c:
                c -= n
        word.extend([syms[i] if c > 0 else syms[i] + "^-1"] * abs(c))
    return word


def wr_geodesic_word(u: WreathElement, support_cap: int = DEFAULT_CAP) -> list[str]:
    """A word of length ``wr_len_trace(u).total`` evaluating to ``u``."""
    br = wr_len_trace(u, support_cap)
    vals = dict(u.items)
    cur = (0,) * u.group.d
    word: list[str] = []
    for p in br.visit_order:
        word += _moves(u.group, cur, p)
        word += _a_letters(u.group, vals[p])
        cur = p
    word += _moves(u.group, cur, u.translation)
    return word


def evaluate_word(group: WreathGroup, word: Iterable[str]) -> WreathElement:
    gens = group.generators()
    acc = group.identity()
    for s in word:
        s = s.replace("⁻¹", "^-1")
        if s not in gens:
            raise ValueError(f"unknown generator symbol {s!r} for {group}")
        acc = acc * gens[s]
    return acc


def format_word(word: list[str], unicode: bool = False) -> str:
    if not word:
        return "(empty)"
    out = " ".join(word)
    return out.replace("^-1", "⁻¹") if unicode else out


# ---------------------------------------------------------------------------
# breadth-first oracle
# ---------------------------------------------------------------------------

class BallMemoryExceeded(RuntimeError):
    def __init__(self, msg, partial: dict, radius_done: int):
        super().__init__(msg)
        self.partial = partial
        self.radius_done = radius_done


def _right_steps(group: WreathGroup):
    """Right multiplication by each generator as a function on raw (items, t)."""
    A = group.A
    steps = []
    for i in range(A.ngens):
        for e in (1, -1):
            c = [0] * A.ngens
            c[i] = e
            delta = A.reduce(c)
            if e == -1 and delta == A.reduce([-x for x in c]):
                continue  # order-2 generator: a^-1 = a
            steps.append(("a", delta))
    for j in range(group.d):
        for e in (1, -1):
            t = [0] * group.d
            t[j] = e
            steps.append(("b", tuple(t)))
    return steps


def _apply(A: FgAbelianGroup, key, step):
    items, t = key
    kind, delta = step
    if kind == "b":
        return items, tuple(x + y for x, y in zip(t, delta))
    out = []
    placed = False
    for p, v in items:
        if p == t:
            placed = True
            nv = A.reduce(x + y for x, y in zip(v, delta))
            if any(nv):
                out.append((p, nv))
        else:
            out.append((p, v))
    if not placed:
        out.append((t, delta))
        out.sort()
    return tuple(out), t


def bfs_ball_raw(group: WreathGroup, radius: int, memory_cap: int = 5_000_000) -> dict:
    """``{(items, translation): distance}`` for the ball of the given radius."""
    A = group.A
    steps = _right_steps(group)
    start = ((), (0,) * group.d)
    dist = {start: 0}
    frontier = [start]
    for r in range(1, radius + 1):
        nxt = []
        for key in frontier:
            for st in steps:
                k2 = _apply(A, key, st)
                if k2 not in dist:
                    dist[k2] = r
                    nxt.append(k2)
                    if len(dist) > memory_cap:
                        raise BallMemoryExceeded(
                            f"ball of radius {radius} exceeds {memory_cap} elements", dist, r - 1)
        frontier = nxt
    return dist


def bfs_ball(group: WreathGroup, radius: int, memory_cap: int = 5_000_000) -> dict[WreathElement, int]:
    """Exact distances of all elements within ``radius``, by breadth-first search."""
    try:
        raw = bfs_ball_raw(group, radius, memory_cap)
    except BallMemoryExceeded as exc:
        exc.partial = {WreathElement(group, k[0], k[1]): v for k, v in exc.partial.items()}
        raise
    return {WreathElement(group, k[0], k[1]): v for k, v in raw.items()}


def subgroup_bfs(gens: list[WreathElement], radius: int, memory_cap: int = 2_000_000) -> dict[WreathElement, int]:
    """Distances in the Cayley graph of the subgroup generated by ``gens`` (and inverses)."""
    letters = []
    for g in gens:
        letters.append(g)
        inv = g.inverse()
        if inv != g:
            letters.append(inv)
    group = gens[0].group
    start = group.identity()
    dist = {start: 0}
    frontier = deque([start])
    while frontier:
        u = frontier.popleft()
        r = dist[u]
        if r == radius:
            continue
        for g in letters:
            v = u * g
            if v not in dist:
                dist[v] = r + 1
                frontier.append(v)
                if len(dist) > memory_cap:
                    raise BallMemoryExceeded("subgroup ball too large", dist, r)
    return dist


# ---------------------------------------------------------------------------
# text syntax
# ---------------------------------------------------------------------------

def format_element(u: WreathElement) -> str:
    g = u.group

    def pos(p):
        return "(" + ",".join(map(str, p)) + ")"

    def val(v):
        return str(v[0]) if len(v) == 1 else "(" + ",".join(map(str, v)) + ")"

    body = " ; ".join(f"{pos(p)}->{val(v)}" for p, v in u.items)
    return f"wr({g.A}; {g.d}) {{ {body} | {pos(u.translation)} }}"


def _parse_tuple(text: str) -> tuple[int, ...]:
    text = text.strip()
    if text.startswith("(") and text.endswith(")"):
        text = text[1:-1]
    return tuple(int(x) for x in text.split(",") if x.strip())


def parse_element(text: str, group: WreathGroup | None = None) -> WreathElement:
    """Parse ``wr(A; d) { (pos)->coeffs ; ... | t }`` or the d = 1 form ``f(x)*a ; t``."""
    text = text.strip().replace("−", "-")
    m = re.fullmatch(r"(?:wr\((?P<A>[^;]+);\s*(?P<d>\d+)\)\s*)?\{(?P<body>.*)\}", text, re.S)
    if m:
        if m.group("A"):
            g2 = WreathGroup(FgAbelianGroup.parse(m.group("A")), int(m.group("d")))
            if group is not None and g2 != group:
                raise ValueError(f"element group {g2} does not match {group}")
            group = g2
        if group is None:
            raise ValueError("group not specified")
        body = m.group("body")
        supp_text, _, t_text = body.rpartition("|")
        if not _:
            supp_text, t_text = body, ""
        support = {}
        for entry in filter(None, (e.strip() for e in supp_text.split(";"))):
            p, _, v = entry.partition("->")
            if not _:
                raise ValueError(f"bad support entry {entry!r}")
            vt = _parse_tuple(v)
            p = _parse_tuple(p)
            if p in support:
                raise ValueError(f"position {p} listed twice")
            support[p] = vt
        t = _parse_tuple(t_text) if t_text.strip() else None
        return group.element(support, t)
    if group is None:
        raise ValueError("group not specified")
    if group.d != 1:
        raise ValueError("Laurent shorthand is only available for d = 1")
    w_text, _, t_text = text.partition(";")
    t = int(t_text.strip()) if t_text.strip() else 0
    polys = [LaurentPoly.zero() for _ in range(group.A.ngens)]
    syms = group.a_symbols()
    for sign, term in _split_top(w_text):
        m = re.fullmatch(r"(?:(?P<p>.*?)\s*\*\s*)?(?P<s>a\d*)", term.strip())
        if not m or m.group("s") not in syms:
            raise ValueError(f"cannot parse term {term!r}")
        p = m.group("p")
        f = LaurentPoly.const(1) if not p else parse_poly(p.strip("() ") if _balanced_outer(p) else p)
        i = syms.index(m.group("s"))
        polys[i] = polys[i] + (f if sign > 0 else -f)
    return group.from_laurent(polys, t)


def _balanced_outer(p: str) -> bool:
    p = p.strip()
    if not (p.startswith("(") and p.endswith(")")):
        return False
    depth = 0
    for i, ch in enumerate(p):
        depth += {"(": 1, ")": -1}.get(ch, 0)
        if depth == 0 and i < len(p) - 1:
            return False
    return True


def _split_top(text: str) -> list[tuple[int, str]]:
    """Split a W-expression at top-level + / - that start a new ``...*a`` term."""
    text = text.strip()
    if not text:
        return []
    terms, depth, cur, sign = [], 0, "", 1
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if depth == 0 and ch in "+-" and re.search(r"a\d*\s*$", cur):
            terms.append((sign, cur))
            cur, sign = "", (1 if ch == "+" else -1)
        elif depth == 0 and ch == "-" and not cur.strip():
            sign = -sign
        else:
            cur += ch
        i += 1
    terms.append((sign, cur))
    return [(s, t) for s, t in terms if t.strip()]


def dumps_element(u: WreathElement) -> str:
    return json.dumps(u.to_json())
