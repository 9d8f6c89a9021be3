import json
import random

import pytest
import sympy
from hypothesis import given, strategies as st

from conftest import to_sympy
from wreathdist.algebra import FgAbelianGroup, LaurentPoly, parse_poly
from wreathdist.distortion import distortion_exponent
from wreathdist.reduction import (LaurentMatrix, check_snf, determinant, normalize_generators,
                                  parse_generator_file, predict_file, predicted_exponent, reindex,
                                  shift_gen_reduction, snf_laurent)
from wreathdist.report import empirical_distortion, fit_slope
from wreathdist.wreath import WreathGroup

P = parse_poly


class TestSnf:
    def test_identity(self):
        assert snf_laurent(LaurentMatrix.identity(2)).diagonal == [P("1"), P("1")]

    def test_diag(self):
        M = LaurentMatrix([[P("1-x"), P("0")], [P("0"), P("2")]])
        r = snf_laurent(M)
        assert r.diagonal == [P("1"), P("-1+x")]
        assert check_snf(M, r)

    def test_column(self):
        M = LaurentMatrix.from_columns([[P("1-x"), P("1+x")]])
        r = snf_laurent(M)
        assert r.diagonal == [P("1")] and check_snf(M, r)

    def test_divisibility_needs_row_addition(self):
        M = LaurentMatrix([[P("1-x"), P("0")], [P("0"), P("1+x")]])
        r = snf_laurent(M)
        assert r.diagonal == [P("1"), P("-1+x^2")] and check_snf(M, r)

    def test_random_reconstructions(self):
        rng = random.Random(7)
        for _ in range(100):
            k, s = rng.randint(1, 4), rng.randint(1, 4)
            rows = [[LaurentPoly.from_list([rng.randint(-3, 3) for _ in range(rng.randint(0, 4) + 1)],
                                           rng.randint(-2, 2)) for _ in range(s)] for _ in range(k)]
            M = LaurentMatrix(rows)
            assert check_snf(M, snf_laurent(M))

    def test_diagonal_product_matches_sympy_determinant(self):
        M = LaurentMatrix([[P("1-x"), P("x")], [P("1+x^2"), P("2")]])
        d = snf_laurent(M).diagonal
        ours = to_sympy(d[0] * d[1])
        theirs = sympy.Matrix([[to_sympy(e) for e in r] for r in M.rows]).det()
        assert sympy.cancel(theirs / ours).is_number

    def test_determinant(self):
        M = LaurentMatrix([[P("x"), P("1")], [P("1"), P("x^-1")]])
        assert determinant(M).is_zero()


class TestPredicted:
    def test_examples(self):
        assert predicted_exponent(1, [P("(1-x)^2")]) == 3
        assert predicted_exponent(2, [[P("1-x"), P("1+x")]]) == 1
        assert predicted_exponent(2, [[P("1-x"), P("0")], [P("0"), P("(1-x)^2")]]) == 3

    def test_zero_matrix(self):
        with pytest.raises(ValueError):
            predicted_exponent(2, [[P("0"), P("0")]])

    @given(st.sampled_from(["1-x", "(1-x)^2", "2-x", "1+x^2", "(1-x)*(1+x)^2", "x^2-3*x+1", "5"]))
    def test_agrees_with_exemplary_exponent(self, h):
        assert predicted_exponent(1, [P(h)]) == distortion_exponent(P(h)).exponent

    @given(st.integers(0, 10_000))
    def test_moves(self, seed):
        rng = random.Random(seed)

        def rp():
            return LaurentPoly.from_list([rng.randint(-2, 2) for _ in range(rng.randint(0, 3) + 1)], rng.randint(-1, 1))

        k, s = 2, 2
        gens = [[rp() for _ in range(k)] for _ in range(s)]
        if all(p.is_zero() for g in gens for p in g):
            return
        e = predicted_exponent(k, gens)
        q = rp()
        assert predicted_exponent(k, gens[::-1]) == e
        assert predicted_exponent(k, [[p.shift(2).scale(-1) for p in gens[0]], gens[1]]) == e
        assert predicted_exponent(k, [[p.scale(3) for p in gens[0]], gens[1]]) == e
        assert predicted_exponent(k, [[a + q * b for a, b in zip(gens[0], gens[1])], gens[1]]) == e


class TestShift:
    def test_cyclic(self):
        red = shift_gen_reduction(FgAbelianGroup(1), [P("1")], 2, [])
        assert red.A == FgAbelianGroup(2) and red.gens == []

    def test_b_squared_and_a(self):
        red = shift_gen_reduction(FgAbelianGroup(1), [P("0")], 2, [[P("1")]])
        assert red.gens == [[P("1"), P("0")]]
        assert predicted_exponent(2, red.gens) == 1

    def test_t_one_is_identity(self):
        red = shift_gen_reduction(FgAbelianGroup(1), [P("0")], 1, [[P("1-x")]])
        assert red.gens == [[P("1-x")]] and red.A == FgAbelianGroup(1)

    def test_reindex(self):
        # positions -1, 0, 1, 2, 3 with t = 2 land in blocks 1, 0, 1, 0, 1
        w = reindex(FgAbelianGroup(1), [P("x^-1 + 2 + 3*x + 4*x^2 + 5*x^3")], 2)
        assert w == [P("2 + 4*x"), P("x^-1 + 3 + 5*x")]

    def test_t_zero(self):
        with pytest.raises(ValueError):
            shift_gen_reduction(FgAbelianGroup(1), [P("1")], 0, [])

    def test_negative_t_uses_inverse(self):
        A = FgAbelianGroup(1)
        w0, t, rest = normalize_generators(A, [([P("1")], -2)])
        assert t == 2 and w0 == [P("-x^2")]

    def test_euclid(self):
        A = FgAbelianGroup(1)
        w0, t, rest = normalize_generators(A, [([P("1")], 2), ([P("x")], 3)])
        assert t == 1 and w0 == [P("0")] and rest == [[P("1")]]

    def test_torsion_coefficients_reduced(self):
        A = FgAbelianGroup(0, (3,))
        w0, t, rest = normalize_generators(A, [([P("1")], 1), ([P("4 + x")], 0)])
        assert rest == [[P("1 + x")]]

    def test_preserves_measured_slope(self):
        G = WreathGroup.parse("Z wr Z")
        G2 = WreathGroup.parse("Z^2 wr Z")
        cases = [
            ([G.element({0: 1}, 2)], [G2.element({}, 1)]),
            ([G.element({}, 2), G.element({0: 1})], [G2.element({}, 1), G2.element({0: (1, 0)})]),
        ]
        for before, after in cases:
            s1 = fit_slope([p for p in empirical_distortion(before, 10, 10) if p[1] > 0])
            s2 = fit_slope([p for p in empirical_distortion(after, 10, 10) if p[1] > 0])
            assert abs(s1 - s2) <= 0.3, (s1, s2)


class TestFiles:
    def test_parse(self):
        gf = parse_generator_file('{"k": 2, "gens": [["1-x", "1+x"]], "shift_gen": null}')
        assert gf.gens == [[P("1-x"), P("1+x")]] and gf.shift_gen is None
        assert predict_file(gf).exponent == 1

    def test_json_coefficient_form(self):
        gf = parse_generator_file({"k": 1, "gens": [[{"s": 0, "coeffs": [1, -2, 1]}]], "shift_gen": None})
        assert predict_file(gf).exponent == 3

    def test_shifted(self):
        gf = parse_generator_file({"k": 1, "gens": [], "shift_gen": {"w0": ["1"], "t": 2}})
        pred = predict_file(gf)
        assert pred.kind == "reduced" and pred.exponent == 1

    def test_abelian(self):
        gf = parse_generator_file({"k": 1, "gens": [["1-x"]], "shift_gen": {"w0": ["1"], "t": 0}})
        assert predict_file(gf).kind == "abelian"

    @pytest.mark.parametrize("bad", ['{"gens": []}', '{"k": 2, "gens": [["1"]], "shift_gen": null}'])
    def test_malformed(self, bad):
        with pytest.raises(ValueError):
            parse_generator_file(bad)

    def test_roundtrip(self):
        gf = parse_generator_file({"k": 2, "gens": [["1-x", "0"]], "shift_gen": {"w0": ["x", "1"], "t": 3}})
        again = parse_generator_file(json.dumps(gf.to_json()))
        assert again == gf
