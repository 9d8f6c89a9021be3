import pytest
from hypothesis import given, strategies as st

from wreathdist.algebra import LaurentPoly, parse_poly
from wreathdist.distortion import upper_bound
from wreathdist.exemplary import (ZWRZ, ExemplarySubgroup, SubgroupElementCoords, delta_exact, embed,
                                  exemplary_len, exemplary_member)
from wreathdist.oracles import brute_force_delta
from wreathdist.wreath import subgroup_bfs

H1 = ExemplarySubgroup.from_poly("1-x")
laurent = st.builds(LaurentPoly.from_list, st.lists(st.integers(-4, 4), max_size=5), st.integers(-3, 3))


class TestNormalization:
    def test_strips_unit(self):
        H = ExemplarySubgroup.from_poly("-x^3 + x^4")
        assert H.h == parse_poly("1-x")
        assert (H.recorded_shift, H.recorded_sign) == (3, -1)

    def test_literal(self):
        assert ExemplarySubgroup.parse("exemplary(h = 1 - 2*x)").h == parse_poly("1-2*x")
        with pytest.raises(ValueError):
            ExemplarySubgroup.parse("exemplary[1-x]")

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            ExemplarySubgroup.from_poly(LaurentPoly.zero())


class TestMembership:
    def test_examples(self):
        assert exemplary_member(H1, ZWRZ.from_laurent(parse_poly("1-x^2"))) == \
            SubgroupElementCoords(parse_poly("1+x"), 0)
        assert exemplary_member(H1, ZWRZ.from_laurent(parse_poly("1+x"))) is None
        assert exemplary_member(H1, ZWRZ.element({}, 3)) == SubgroupElementCoords(LaurentPoly.zero(), 3)

    def test_integer_divisibility(self):
        H = ExemplarySubgroup.from_poly("2")
        assert exemplary_member(H, ZWRZ.from_laurent(parse_poly("1"))) is None

    @given(laurent, st.integers(-5, 5), st.sampled_from(["1-x", "2+x", "(1-x)^2", "1+x^2", "3"]))
    def test_roundtrip(self, f, n, h):
        H = ExemplarySubgroup.from_poly(h)
        assert exemplary_member(H, embed(H, f, n)) == SubgroupElementCoords(f, n)


class TestLength:
    def test_examples(self):
        assert exemplary_len(H1, SubgroupElementCoords(LaurentPoly.const(1), 0)) == 1
        assert exemplary_len(H1, SubgroupElementCoords(parse_poly("1+x+x^2+x^3"), 0)) == 10
        assert exemplary_len(ExemplarySubgroup.from_poly("1+x^2"), SubgroupElementCoords(LaurentPoly.zero(), 5)) == 5

    @pytest.mark.parametrize("h", ["1-x", "1+x^2", "2-x"])
    def test_matches_subgroup_bfs(self, h):
        H = ExemplarySubgroup.from_poly(h)
        ball = subgroup_bfs(H.generators(), 6)
        for g, dist in ball.items():
            c = exemplary_member(H, g)
            assert c is not None
            assert exemplary_len(H, c) == dist

    def test_norms(self):
        c = SubgroupElementCoords(parse_poly("x^-2 + x"), 0)
        # f spans -2..1, t = 1: iota = max(1 + (-2) + 3, 0) = 2, epsilon = -2
        assert (c.iota(H1), c.epsilon(), c.u(H1), c.iota_H(), c.u_H()) == (2, -2, 4, 1, 3)
        assert (c.e(H1), c.e_H()) == (4, 2)


class TestDelta:
    def test_trivial_cases(self):
        for l in range(6):
            assert delta_exact(ExemplarySubgroup.from_poly("1"), l).value == l
        assert delta_exact(ExemplarySubgroup.from_poly("2"), 4).value == 2

    def test_one_minus_x(self):
        # the window constraint u <= l caps the span of hf at l, so the plateau has 4 entries
        d = delta_exact(H1, 4)
        assert d.value == 8
        assert d.witness.f == LaurentPoly.from_list([2, 2, 2, 2])

    @pytest.mark.parametrize("h", ["1-x", "1+x", "(1-x)^2", "1+x^2", "2-x", "2"])
    @pytest.mark.parametrize("l", range(5))
    def test_matches_literal_oracle(self, h, l):
        H = ExemplarySubgroup.from_poly(h)
        assert delta_exact(H, l).value == brute_force_delta(H.intpoly.coeffs, l, l)[0]

    def test_witness_meets_constraints(self):
        for h in ("1-x", "(1-x)^2", "1+x^2"):
            H = ExemplarySubgroup.from_poly(h)
            for l in range(1, 9):
                d = delta_exact(H, l)
                w = d.witness
                assert w.e_H() == d.value
                if not w.f.is_zero():
                    assert w.e(H) <= l and w.u(H) <= l

    @pytest.mark.parametrize("h", ["1-x", "(1-x)^2", "1+x^2"])
    def test_monotone_and_bounded(self, h):
        H = ExemplarySubgroup.from_poly(h)
        vals = [delta_exact(H, l).value for l in range(10)]
        assert vals == sorted(vals)
        for l, v in enumerate(vals):
            assert v <= upper_bound(H.intpoly, l - H.t, l)
        if H.h(1) == 0:
            assert all(v >= l - 4 for l, v in enumerate(vals))

    def test_bounds_mode(self):
        d = delta_exact(H1, 40, mode="bounds")
        assert not d.exact and d.lower <= d.upper and d.witness.e(H1) <= 40
