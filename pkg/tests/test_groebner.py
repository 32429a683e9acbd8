from __future__ import annotations

import sympy
from hypothesis import given, strategies as st

from qfpure.groebner import (IdealBasis, buchberger, groebner_normal_form, is_groebner, poly_gcd,
                             squarefree_test)
from qfpure.poly import PolyRing, SparsePoly

R2 = PolyRing(("x", "y", "z"), 2)
R3 = PolyRing(("x", "y"), 3)
X, Y, Z = sympy.symbols("x y z")


def polys(ring, max_deg=2, max_terms=4):
    mono = st.tuples(*[st.integers(0, max_deg)] * ring.nvars)
    coef = st.integers(1, ring.modulus - 1)
    return st.dictionaries(mono, coef, min_size=1, max_size=max_terms).map(
        lambda d: SparsePoly.from_terms(ring, d))


def sym(f):
    syms = sympy.symbols(" ".join(f.ring.names))
    syms = syms if isinstance(syms, tuple) else (syms,)
    out = sympy.Integer(0)
    for m, c in f.terms.items():
        t = sympy.Integer(c)
        for s, e in zip(syms, m):
            t *= s ** e
        out += t
    return out


@given(st.lists(polys(R2), min_size=1, max_size=3), polys(R2, 3, 5))
def test_membership_matches_sympy(gens, f):
    G = buchberger(gens)
    assert is_groebner(G)
    ours = IdealBasis.of(gens).contains(f)
    theirs = sympy.groebner([sym(g) for g in gens], X, Y, Z, modulus=2, order="grevlex").contains(sym(f))
    assert ours == theirs


@given(polys(R2), st.lists(polys(R2), min_size=1, max_size=2))
def test_normal_form_is_congruent_and_reduced(f, gens):
    I = IdealBasis.of(gens)
    nf = groebner_normal_form(f, I)
    assert I.contains(f - nf)
    lead = I.leading_monomials()
    for m in nf.terms:
        assert not any(all(a <= b for a, b in zip(l, m)) for l in lead)


@given(polys(R3), polys(R3), polys(R3))
def test_gcd_matches_sympy(a, b, c):
    g = poly_gcd(a * c, b * c)
    theirs = sympy.Poly(sympy.gcd(sym(a * c), sym(b * c), modulus=3), *sympy.symbols("x y"), modulus=3)
    ours = sympy.Poly(sym(g), *sympy.symbols("x y"), modulus=3)
    assert ours.monic() == theirs.monic()


@given(polys(R3), polys(R3))
def test_squarefree_detects_squares(g, h):
    if g.is_constant():
        return
    res = squarefree_test(g * g * h if h else g * g)
    assert not res.squarefree
    assert res.witness is not None and not res.witness.is_constant()


def test_squarefree_examples():
    R = PolyRing(("s", "t", "x", "y", "z"), 2)
    assert squarefree_test(R.parse("s*x^2 + t*y^2 + z^2")).squarefree
    f = R.parse("s^2*x^2 + t^2*y^2 + z^2")
    res = squarefree_test(f)
    assert res.witness == R.parse("s*x + t*y + z")
    assert res.witness * res.witness == f
