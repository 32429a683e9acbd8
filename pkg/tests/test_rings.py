from __future__ import annotations

import itertools

import pytest

from qfpure import gallery
from qfpure.rings import (FiniteAlgebra, RingElement, RingError, galois_field, is_reduced,
                          make_finite_algebra, nilradical, prime_power, truncated_local_ring)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 8, 9])
def test_galois_field_is_a_field(q):
    F = galois_field(q)
    assert F.size == q
    units = [a for a in F.elements() if a != F.zero]
    for a in units:
        assert any(F.mul(a, b) == F.one for b in units)
    assert all(F.frobenius(a) != F.zero for a in units)


@pytest.mark.parametrize("key", ["F2xF2", "DUAL2", "DUAL3", "FAT2", "GF4"])
def test_finite_algebra_axioms(key):
    R = gallery.ring(key)
    els = list(R.elements())
    for a, b, c in itertools.product(els, repeat=3):
        assert R.add(R.add(a, b), c) == R.add(a, R.add(b, c))
        assert R.mul(R.mul(a, b), c) == R.mul(a, R.mul(b, c))
        assert R.mul(a, R.add(b, c)) == R.add(R.mul(a, b), R.mul(a, c))
        assert R.mul(a, b) == R.mul(b, a)


@pytest.mark.parametrize("key", gallery.finite_keys() + gallery.affine_keys() + ("DUALG", "SS3", "ORD3"))
def test_reducedness_matches_gallery(key):
    e = gallery.get(key)
    res = is_reduced(e.build())
    assert res.reduced == e.reduced
    if not res.reduced:
        w = res.witness
        assert not w.is_zero()
        R = w.ring
        v = w.value
        for _ in range(8):
            v = R.frobenius(v)
        assert R.is_zero(v)


def test_nilradical_of_fat_point():
    R = gallery.ring("FAT2")
    nil = nilradical(R)
    assert len(nil) == 3  # basis x, y, y^2
    assert all(R.is_zero(R.power(t, 4)) for t in nil)
    assert sum(1 for t in R.elements() if R.is_zero(R.power(t, 4))) == 8


def test_int_coercion_is_a_code_and_from_int_is_a_multiple():
    R = galois_field(4)
    u = R.coerce("u")
    assert R.coerce(u) == u
    assert R.from_int(3) == R.one
    e = RingElement(R, u)
    assert (e + 1).value == R.add(u, R.one)
    with pytest.raises(RingError):
        R.coerce(99)


def test_truncated_ring_and_ideal_powers():
    R = truncated_local_ring(2, 6)
    assert R.size == 64
    for k in range(1, 7):
        assert len(R.ideal_power(R.maximal_ideal, k).basis()) == 6 - k


def test_graded_hilbert_function_of_conic():
    R = gallery.ring("CONIC3")
    assert [len(R.graded_piece_basis(e)) for e in range(6)] == [1, 3, 5, 7, 9, 11]


def test_artinian_graded_to_finite():
    G = gallery.ring("DUALG")
    assert G.is_artinian() and G.top_degree() == 1
    F = G.to_finite()
    assert isinstance(F, FiniteAlgebra) and F.size == 4
    assert not gallery.ring("SS3").is_artinian()


def test_prime_power():
    assert prime_power(8) == (2, 3)
    assert prime_power(12) is None


def test_inconsistent_presentation_rejected():
    with pytest.raises(RingError):
        make_finite_algebra(2, ["x"], ["1"])
