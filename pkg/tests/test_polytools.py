from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st

from conftest import X
from wreathdist import polytools as pt

int_polys = st.lists(st.integers(-5, 5), min_size=2, max_size=7).filter(lambda c: c[-1] != 0)


def _sym(c):
    return sum(sympy.Rational(str(a)) * X**i for i, a in enumerate(c))


@given(int_polys)
def test_squarefree_decomposition_matches_sympy(c):
    ours = pt.squarefree_decomposition(c)
    _, theirs = sympy.sqf_list(_sym(c), X)
    theirs = [(sympy.Poly(f, X).monic(), m) for f, m in theirs if sympy.Poly(f, X).degree() > 0]
    ours = [(sympy.Poly(_sym(f), X).monic(), m) for f, m in ours]
    assert sorted(ours, key=lambda t: t[1]) == sorted(theirs, key=lambda t: t[1])


@given(int_polys)
def test_decomposition_reassembles(c):
    prod = [Fraction(1)]
    for f, m in pt.squarefree_decomposition(c):
        for _ in range(m):
            prod = pt.mul(prod, f)
    assert pt.monic(prod or [1]) == pt.monic(c) or pt.deg(c) == 0


@pytest.mark.parametrize("k", range(1, 7))
def test_dickson_identity(k):
    y = X + 1 / X
    assert sympy.simplify(_sym(pt.dickson(k)).subs(X, y) - (X**k + X**-k)) == 0


def test_palindromic_transform():
    # x^2 - 3x + 1 = x (y - 3)
    assert pt.palindromic_to_y([1, -3, 1]) == [-3, 1]
    with pytest.raises(ValueError):
        pt.palindromic_to_y([1, 2])


@given(int_polys)
def test_sturm_count_matches_numpy(c):
    c = pt.primitive(pt.quo(c, pt.pgcd(c, pt.derivative(c))))
    if pt.deg(c) < 1:
        return
    roots = np.roots(c[::-1])
    real = roots[np.abs(roots.imag) < 1e-9].real
    # stay away from interval endpoints where floating point is unreliable
    if np.any(np.abs(np.abs(real) - 2) < 1e-6):
        return
    assert pt.count_roots(c, -2, 2) == int(np.sum((real > -2) & (real <= 2)))


def test_isolate_roots_disjoint():
    p = [Fraction(x) for x in [-1, 0, 3, 0, -1]]  # roots of y^4 - 3y^2 + 1 are +-0.618, +-1.618
    iv = pt.isolate_roots(p, -2, 2)
    assert len(iv) == 4
    assert all(b <= a2 for (_, b), (a2, _) in zip(iv, iv[1:]))
