import sympy
from hypothesis import settings

from wreathdist.algebra import LaurentPoly

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

X = sympy.Symbol("x")


def to_sympy(f: LaurentPoly):
    return sum((sympy.Rational(str(c)) * X**k for k, c in f.items()), sympy.Integer(0))
