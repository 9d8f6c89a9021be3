import pytest

from wreathdist.verify import SUITES, run_suite

QUICK = ["lamplighter-formula", "zwrz-formula", "snf", "exponent-invariance", "exponent", "companion",
         "coefficient-bound", "finite-A-undistorted", "grid-subgroup", "length-sandwich"]


@pytest.mark.parametrize("name", QUICK)
def test_quick_suites_pass(name):
    (res,) = run_suite(name, seed=1)
    assert res.passed, [c.to_json() for c in res.checks if not c.passed]
    assert res.checks


def test_registry():
    assert set(QUICK) | {"trace-formula", "solver-oracle"} == set(SUITES)


def test_unknown_suite():
    with pytest.raises(KeyError):
        run_suite("nope")


def test_json_shape():
    (res,) = run_suite("companion")
    d = res.to_json()
    assert d["suite"] == "companion" and d["passed"] is True
    assert set(d["checks"][0]) == {"check", "passed", "detail"}
