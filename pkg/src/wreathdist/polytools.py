"""Dense univariate polynomials over Q as coefficient lists (low degree first).

Only what the exponent machinery needs: gcd, Yun squarefree decomposition,
the y = x + 1/x transform of palindromic polynomials and Sturm sequences.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm

from .algebra import poly_divmod

Poly = list  # list[Fraction | int], low -> high, no trailing zeros


def trim(p) -> Poly:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def deg(p) -> int:
    return len(trim(p)) - 1


def add(p, q) -> Poly:
    n = max(len(p), len(q))
    return trim([(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)])


def sub(p, q) -> Poly:
    return add(p, [-c for c in q])


def mul(p, q) -> Poly:
    if not p or not q:
        return []
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return trim(out)


def scale(p, c) -> Poly:
    return trim([a * c for a in p])


def derivative(p) -> Poly:
    return trim([i * p[i] for i in range(1, len(p))])


def rem(p, q) -> Poly:
    return poly_divmod(trim(p), trim(q))[1]


def quo(p, q) -> Poly:
    return trim(poly_divmod(trim(p), trim(q))[0])


def monic(p) -> Poly:
    p = trim(p)
    if not p:
        return p
    lead = Fraction(p[-1])
    return [Fraction(c) / lead for c in p]


def pgcd(p, q) -> Poly:
    """Monic gcd over Q."""
    p, q = trim(p), trim(q)
    while q:
        p, q = q, rem(p, q)
    return monic(p)


def primitive(p) -> list[int]:
    """Integer primitive part; sign normalized so the lowest nonzero coefficient is positive."""
    p = trim([Fraction(c) for c in p])
    if not p:
        return []
    den = lcm(*(c.denominator for c in p))
    ints = [int(c * den) for c in p]
    g = 0
    for c in ints:
        g = gcd(g, c)
    ints = [c // g for c in ints]
    first = next(c for c in ints if c)
    return [-c for c in ints] if first < 0 else ints


def evaluate(p, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def reversal(p) -> Poly:
    """x^deg(p) * p(1/x) for p with p(0) != 0."""
    return list(reversed(trim(p)))


def squarefree_decomposition(p) -> list[tuple[Poly, int]]:
    """Yun's algorithm over Q: ``p = c * prod(a_i^i)``; returns monic nonconstant ``(a_i, i)``."""
    p = monic(p)
    if deg(p) < 1:
        return []
    out = []
    dp = derivative(p)
    a = pgcd(p, dp)
    b = quo(p, a)
    c = quo(dp, a)
    d = sub(c, derivative(b))
    i = 1
    while deg(b) > 0:
        a = pgcd(b, d)
        if deg(a) > 0:
            out.append((monic(a), i))
        b = quo(b, a)
        c = quo(d, a)
        d = sub(c, derivative(b))
        i += 1
    return out


def is_squarefree(p) -> bool:
    return deg(pgcd(p, derivative(p))) < 1


# -- palindromic transform --------------------------------------------------

def dickson(k: int) -> list[int]:
    """P_k(y) with x^k + x^-k = P_k(x + 1/x); P_0 = 2 (k = 0 unused by callers)."""
    if k == 0:
        return [2]
    prev, cur = [2], [0, 1]
    for _ in range(k - 1):
        prev, cur = cur, sub(mul([0, 1], cur), prev)
    return cur


def palindromic_to_y(p) -> Poly:
    """For palindromic p of degree 2m return q with p(x) = x^m q(x + 1/x)."""
    p = trim(p)
    n = len(p) - 1
    if n % 2 or any(p[i] != p[n - i] for i in range(n + 1)):
        raise ValueError("polynomial is not palindromic of even degree")
    m = n // 2
    q: Poly = [p[m]]
    for k in range(1, m + 1):
        q = add(q, scale(dickson(k), p[m + k]))
    return q


# -- Sturm sequences ----------------------------------------------------------

def sturm_sequence(p) -> list[Poly]:
    seq = [trim([Fraction(c) for c in p])]
    seq.append(derivative(seq[0]))
    while seq[-1]:
        r = rem(seq[-2], seq[-1])
        if not r:
            break
        seq.append([-c for c in r])
    return [s for s in seq if s]


def sign_changes(seq, x) -> int:
    signs = [s for s in (evaluate(p, x) for p in seq) if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if (a > 0) != (b > 0))


def count_roots(p, lo, hi, seq=None) -> int:
    """Distinct real roots in the half-open interval (lo, hi]."""
    seq = seq or sturm_sequence(p)
    return sign_changes(seq, Fraction(lo)) - sign_changes(seq, Fraction(hi))


def isolate_roots(p, lo, hi) -> list[tuple[Fraction, Fraction]]:
    """Disjoint intervals (a, b], each holding exactly one distinct real root of p in (lo, hi]."""
    seq = sturm_sequence(p)
    out = []
    stack = [(Fraction(lo), Fraction(hi))]
    while stack:
        a, b = stack.pop()
        n = count_roots(p, a, b, seq)
        if n == 0:
            continue
        if n == 1:
            out.append((a, b))
            continue
        mid = (a + b) / 2
        stack.append((mid, b))
        stack.append((a, mid))
    return sorted(out)
