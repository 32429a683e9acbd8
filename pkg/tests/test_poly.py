from __future__ import annotations

import sympy
from hypothesis import given, strategies as st

from qfpure.poly import PolyError, PolyRing, SparsePoly

R3 = PolyRing(("x", "y"), 3)
ZZ = PolyRing(("x", "y"), 0)


def polys(ring, max_deg=3, max_terms=5, coeffs=st.integers(-4, 4)):
    mono = st.tuples(*[st.integers(0, max_deg)] * ring.nvars)
    return st.dictionaries(mono, coeffs, max_size=max_terms).map(lambda d: SparsePoly.from_terms(ring, d))


def to_sympy(f):
    x, y = sympy.symbols("x y")
    return sum((c * x ** m[0] * y ** m[1] for m, c in f.terms.items()), sympy.Integer(0))


@given(polys(R3), polys(R3), polys(R3))
def test_ring_axioms_gf3(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == R3.zero()
    assert a * R3.one() == a


@given(polys(ZZ), polys(ZZ))
def test_integer_product_matches_sympy(a, b):
    x, y = sympy.symbols("x y")
    ours = to_sympy(a * b)
    assert sympy.expand(ours - to_sympy(a) * to_sympy(b)) == 0


@given(polys(R3))
def test_parse_print_roundtrip(f):
    assert R3.parse(str(f)) == f


@given(polys(R3))
def test_frobenius_then_root(f):
    assert (f ** 3) == f.frobenius()
    assert f.frobenius().pth_root() == f


def test_coefficients_reduce_mod_p():
    f = R3.parse("4*x + 3*y - 1")
    assert f == R3.parse("x + 2")


def test_homogeneity_and_degree():
    f = R3.parse("x^2*y + y^3")
    assert f.is_homogeneous() and f.total_degree() == 3
    assert not R3.parse("x + 1").is_homogeneous()


def test_derivative_char_p():
    f = R3.parse("x^3 + x^2*y")
    assert f.derivative(0) == R3.parse("2*x*y")


def test_bad_ring():
    import pytest

    with pytest.raises(PolyError):
        PolyRing(("x", "x"), 2)
    with pytest.raises(PolyError):
        PolyRing(("x",), 1)
