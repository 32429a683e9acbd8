from __future__ import annotations

import itertools

from hypothesis import given, strategies as st

from qfpure.linalg import AffineSystem, Subspace, kernel


@st.composite
def systems(draw):
    p = draw(st.sampled_from([2, 3, 5]))
    nv = draw(st.integers(1, 4))
    nr = draw(st.integers(1, 6))
    rows = [draw(st.lists(st.integers(0, p - 1), min_size=nv, max_size=nv)) for _ in range(nr)]
    rhs = draw(st.lists(st.integers(0, p - 1), min_size=nr, max_size=nr))
    return p, nv, rows, rhs


@given(systems())
def test_solver_matches_brute_force(data):
    p, nv, rows, rhs = data
    S = AffineSystem(p)
    vs = [S.var(i) for i in range(nv)]
    for r, b in zip(rows, rhs):
        S.add_row({v: c for v, c in zip(vs, r) if c}, b)
    brute = any(all(sum(c * x for c, x in zip(r, xs)) % p == b for r, b in zip(rows, rhs))
                for xs in itertools.product(range(p), repeat=nv))
    res = S.solve()
    assert res.feasible == brute
    if res.feasible:
        assert S.check_solution(res.solution)
    else:
        assert S.check_certificate(res.certificate)


@given(st.sampled_from([2, 3]), st.lists(st.lists(st.integers(0, 2), min_size=3, max_size=3), max_size=4))
def test_kernel_vectors_are_annihilated(p, matrix):
    matrix = [[c % p for c in row] for row in matrix]
    for v in kernel(p, matrix, 3):
        assert all(sum(a * b for a, b in zip(row, v)) % p == 0 for row in matrix)


def test_subspace_growth():
    sp = Subspace(2, 3)
    assert sp.add([1, 1, 0])
    assert sp.add([0, 1, 1])
    assert not sp.add([1, 0, 1])
    assert sp.contains([1, 0, 1]) and not sp.contains([1, 0, 0])
    assert len(sp) == 2


def test_bad_certificate_rejected():
    S = AffineSystem(2)
    a = S.var("a")
    S.add_row({a: 1}, 0)
    S.add_row({a: 1}, 1)
    assert S.check_certificate({0: 1, 1: 1})
    assert not S.check_certificate({0: 1})
