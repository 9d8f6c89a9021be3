from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st

from conftest import X
from wreathdist.algebra import LaurentPoly, parse_poly
from wreathdist.distortion import (IntPoly, best_witness, charpoly, coefficient_bound_check, companion_matrix,
                                   distortion_exponent, left_inverse_norm, max_norm_multiplier,
                                   poly_distortion_exact, squarefree_decomp, unit_circle_root_count,
                                   unit_circle_roots, upper_bound, witness_family)
from wreathdist.oracles import brute_force_poly_distortion

nonzero = st.integers(-9, 9).filter(bool)
int_polys = st.builds(lambda a, mid, b: IntPoly((a, *mid, b)), nonzero, st.lists(st.integers(-9, 9), max_size=5),
                      nonzero)


class TestIntPoly:
    def test_normalizes_laurent(self):
        assert IntPoly.coerce(parse_poly("x^-2 - x^-1")).coeffs == (1, -1)

    @pytest.mark.parametrize("bad", [(0, 1), (1, 0), ()])
    def test_rejects_zero_ends(self, bad):
        with pytest.raises(ValueError):
            IntPoly(bad)


class TestSquarefree:
    @pytest.mark.parametrize("h,want", [
        ("(1-x)^2*(1+x)", [((1, 1), 1), ((1, -1), 2)]),
        ("1-2*x+x^2", [((1, -1), 2)]),
        ("1+x+x^2", [((1, 1, 1), 1)]),
    ])
    def test_examples(self, h, want):
        assert [(f.coeffs, m) for f, m in squarefree_decomp(h)] == want

    @given(int_polys)
    def test_reassembles_up_to_constant(self, h):
        prod = sympy.Integer(1)
        for f, m in squarefree_decomp(h):
            prod *= sum(c * X**i for i, c in enumerate(f.coeffs)) ** m
        ratio = sympy.cancel(sum(c * X**i for i, c in enumerate(h.coeffs)) / prod)
        assert ratio.is_number


class TestUnitCircle:
    @pytest.mark.parametrize("p,want", [("1+x^2", 2), ("x^2-3*x+1", 0), ("x^2+x+1", 2), ("1-x", 1),
                                        ("1+x", 1), ("1-x^6", 6), ("2-x", 0)])
    def test_examples(self, p, want):
        assert unit_circle_root_count(p) == want

    def test_salem_like_polynomial_has_off_circle_pair(self):
        # Lehmer's polynomial: two real roots off the circle, eight on it
        lehmer = [1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1]
        uc = unit_circle_roots(lehmer)
        assert (uc.count, uc.off_circle) == (8, 2)

    def test_rejects_non_squarefree(self):
        with pytest.raises(ValueError):
            unit_circle_root_count("(1-x)^2")

    @given(int_polys)
    def test_accounting_and_numeric_oracle(self, h):
        c = [int(x) for x in h.coeffs]
        f = sympy.Poly(list(reversed(c)), X)
        sq = sympy.Poly(sympy.quo(f, sympy.gcd(f, f.diff(X))), X)
        coeffs = [int(x) for x in reversed(sq.all_coeffs())]
        if len(coeffs) < 2:
            return
        uc = unit_circle_roots(coeffs)
        assert uc.count + uc.off_circle == len(coeffs) - 1
        roots = np.roots(coeffs[::-1])
        assert uc.count == int(np.sum(np.abs(np.abs(roots) - 1) < 1e-6))


class TestExponent:
    @pytest.mark.parametrize("m", range(1, 6))
    def test_powers_of_one_minus_x(self, m):
        assert distortion_exponent(LaurentPoly.from_list([1, -1]) ** (m - 1)).exponent == m

    @pytest.mark.parametrize("h,want", [("2-x", 1), ("1+x^2", 2), ("x^2-3*x+1", 1), ("(1-x)*(1+x)^2", 3),
                                        ("7", 1), ("(1+x+x^2)^2*(1-x)", 3)])
    def test_examples(self, h, want):
        cert = distortion_exponent(h)
        assert cert.exponent == want == cert.kappa + 1

    def test_zero(self):
        with pytest.raises(ValueError):
            distortion_exponent(LaurentPoly.zero())

    @given(int_polys, st.integers(-3, 3), st.sampled_from([-3, -1, 2, 5]))
    def test_invariances(self, h, j, n):
        e = distortion_exponent(h).exponent
        L = h.to_laurent()
        assert distortion_exponent(L.scale(n)).exponent == e
        assert distortion_exponent(L.shift(j).scale(-1)).exponent == e
        assert distortion_exponent(h.reversal()).exponent == e

    def test_certificate_json_has_exact_intervals(self):
        js = distortion_exponent("1+x^2").to_json()
        iv = js["levels"][0]["unit_circle"]["intervals"]
        assert len(iv) == 1 and all(isinstance(x, str) for x in iv[0])


class TestCompanion:
    def test_examples(self):
        assert companion_matrix([1, -2, 1]) == [[0, 1], [-1, 2]]
        assert companion_matrix([2, 1]) == [[Fraction(-1, 2)]]
        assert companion_matrix([1, 0, 1]) == [[0, 1], [-1, 0]]
        assert charpoly(companion_matrix([2, 1])) == [Fraction(1, 2), 1]

    def test_constant_has_none(self):
        with pytest.raises(ValueError):
            companion_matrix([3])

    @given(int_polys.filter(lambda h: h.t >= 1))
    def test_char_poly_identity_and_sympy(self, h):
        A = companion_matrix(h)
        want = [Fraction(c, h.d0) for c in reversed(h.coeffs)]
        assert charpoly(A) == want
        sym = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row] for row in A]).charpoly(X)
        assert [Fraction(str(c)) for c in reversed(sym.all_coeffs())] == want


class TestWitness:
    def test_one_minus_x(self):
        w = witness_family([1, -1], 5)
        assert w.f == LaurentPoly.from_list([1] * 5) ** 2
        assert (w.S_f, w.S_hf) == (25, 10)

    def test_one_plus_x(self):
        w = witness_family([1, 1], 5)
        v5 = LaurentPoly.from_list([1, -1, 1, -1, 1])
        assert w.f == v5 ** 2 and (w.S_f, w.S_hf) == (25, 10)

    def test_complex_root(self):
        w = witness_family([1, 0, 1], 6)
        assert w.l in (6, 7)
        assert w.S_f >= w.l ** 2 / 4
        # geometric-ratio constant for c = i is 2 / |1 - c^2| = 1, so S(hf) stays O(l)
        assert w.S_hf <= 4 * w.l

    def test_no_unit_root_gives_constant(self):
        w = witness_family([2, -1], 7)
        assert w.f == LaurentPoly.const(7)

    @pytest.mark.parametrize("h", [[1, -1], [1, -2, 1], [1, 0, 1], [1, 1, 1], [1, 1, -1, -1]])
    def test_growth_rate(self, h):
        kappa = distortion_exponent(h).kappa
        ws = [witness_family(h, l) for l in (8, 16, 32)]
        consts = [w.S_hf / w.l for w in ws]
        assert max(consts) <= 2 * min(consts)
        for w in ws:
            assert w.S_f >= w.l ** (kappa + 1) / 4 ** (kappa + 1)


class TestBounds:
    @pytest.mark.parametrize("h", [[1, -1], [1, -2, 1], [2, -1], [1, 0, 1]])
    @pytest.mark.parametrize("n", [1, 4, 9])
    def test_left_inverse_norm_matches_numpy(self, h, n):
        t = len(h) - 1
        M = np.zeros((n + t, n))
        for j in range(n):
            M[j:j + t + 1, j] = h
        L = np.linalg.pinv(M)
        assert float(left_inverse_norm(IntPoly(tuple(h)), n)) == pytest.approx(np.abs(L).sum(axis=0).max(), rel=1e-9)

    @pytest.mark.parametrize("h", [[1, -1], [1, 1], [1, -2], [1, -2, 1]])
    def test_upper_bound_dominates_oracle(self, h):
        for l in range(5):
            assert brute_force_poly_distortion(h, l, l, l)[0] <= upper_bound(h, l, l)

    def test_best_witness_feasible(self):
        for l in (8, 16, 32):
            f = best_witness([1, -2, 1], l, l)
            assert f.degree <= l and (f * LaurentPoly.from_list([1, -2, 1])).norm() <= l


class TestExact:
    def test_examples(self):
        v = poly_distortion_exact([1, -1], 1, 4)
        assert v.exact and v.value == 10
        assert v.witness == LaurentPoly.from_list([2, 2, 2, 2, 2])
        assert poly_distortion_exact([1], 1, 7).value == 7
        assert poly_distortion_exact([2], 1, 4).value == 2
        assert poly_distortion_exact([1, -1], 1, 0).value == 0

    def test_rational_c(self):
        # c = 1/2, l = 8 is the same problem as c = 1, l = 4
        assert poly_distortion_exact([1, -1], Fraction(1, 2), 8).value == 10

    @pytest.mark.parametrize("h", [[1, -1], [1, 1], [1, -2], [1, 0, 1], [1, -2, 1], [3, 1, -2]])
    @pytest.mark.parametrize("l", range(5))
    def test_matches_exhaustive_oracle(self, h, l):
        assert poly_distortion_exact(h, 1, l).value == brute_force_poly_distortion(h, l, l, l)[0]

    @pytest.mark.parametrize("h,l", [([1, -1], 3), ([1, 0, 1], 4), ([1, -2, 1], 4), ([1, 1], 4)])
    def test_lexicographically_least_witness(self, h, l):
        v = poly_distortion_exact(h, 1, l)
        n = l + 1
        grids = np.array(np.meshgrid(*[np.arange(-l, l + 1)] * n, indexing="ij")).reshape(n, -1).T
        Y = np.zeros((len(grids), n + len(h) - 1), dtype=np.int64)
        for k, d in enumerate(h):
            Y[:, k:k + n] += d * grids
        ok = (np.abs(Y).sum(1) <= l) & (np.abs(grids).sum(1) == v.value)
        # maximisers normalized to valuation 0 and positive constant term
        cands = set()
        for row in grids[ok].tolist():
            while row and row[0] == 0:
                row = row[1:] + [0]
            if row and row[0] > 0:
                while row and row[-1] == 0:
                    row.pop()
                cands.add(tuple(row))
        assert list(min(cands)) == v.witness.coeff_list()[1]

    def test_witness_satisfies_constraints(self):
        for h in ([1, -1], [1, 0, 1], [1, -2, 1]):
            v = poly_distortion_exact(h, 1, 6)
            f = v.witness
            assert f.norm() == v.value and f.degree <= 6
            assert (f * LaurentPoly.from_list(h)).norm() <= 6

    def test_timeout_downgrades_to_bounds(self):
        v = poly_distortion_exact([1, -2, 1], 1, 40, time_limit=0.01)
        assert not v.exact and v.value is None
        assert v.lower == v.witness.norm() <= v.upper

    def test_bounds_mode(self):
        v = poly_distortion_exact([1, -1], 1, 16, mode="bounds")
        assert not v.exact and v.lower <= v.upper
        with pytest.raises(ValueError):
            poly_distortion_exact([1, -1], 1, 4, mode="fast")

    def test_solver_seed_is_reproduced(self):
        seed = best_witness([1, -1], 5, 6)
        value, _, _ = max_norm_multiplier([1, -1], 5, 6, seed=seed)
        assert value >= seed.norm()

    @pytest.mark.parametrize("h", [[1, -1], [1, -2, 1], [1, 0, 1]])
    def test_sandwich(self, h):
        kappa = distortion_exponent(h).kappa
        ratios = []
        for l in range(2, 9):
            v = poly_distortion_exact(h, 1, l)
            assert witness_family(h, 1).S_f <= v.value or witness_family(h, 1).S_hf > l
            assert best_witness(h, l, l).norm() <= v.value <= upper_bound(h, l, l)
            ratios.append(v.value / (l + 1) ** (kappa + 1))
        # one constant bounds every l
        for l in (16, 32, 64):
            ratios.append(upper_bound(h, l, l) / (l + 1) ** (kappa + 1))
        assert max(ratios) <= 1.0


class TestCoefficientBound:
    @pytest.mark.parametrize("h", ["1-x", "(1-x)^2", "2-x", "1+x^2", "(1-x)*(1+x)^2"])
    def test_passes(self, h):
        rep = coefficient_bound_check(h, trials=10, seed=3)
        assert rep.passed, rep.ratios

    def test_ramp_ratio_for_one_minus_x(self):
        rep = coefficient_bound_check("1-x", trials=1, seed=0)
        assert rep.ratios[8] == pytest.approx(0.5)

    def test_needs_trials(self):
        with pytest.raises(ValueError):
            coefficient_bound_check("1-x", trials=0)


@pytest.mark.slow
@pytest.mark.parametrize("h,l", [([1, -1], 8), ([1, 0, 1], 6), ([1, -2, 1], 6), ([2, -1], 8)])
def test_exact_doubling_ratio_matches_exponent(h, l):
    m = distortion_exponent(h).exponent
    ratio = poly_distortion_exact(h, 1, 2 * l).value / poly_distortion_exact(h, 1, l).value
    assert abs(ratio - 2 ** m) <= 0.25 * 2 ** m
