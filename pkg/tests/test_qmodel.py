from __future__ import annotations

import itertools

import pytest

from qfpure import gallery
from qfpure.qmodel import (QModelError, build_Q, compare_q_models, phi, phi_kernel, split_finite,
                           v_annihilates, verify_splitting)
from qfpure.rings import galois_field


def brute_force_split(R, Q):
    """Search every additive map from Q to R through its images on a basis."""
    one = Q.phi(R.one)
    for images in itertools.product(list(R.elements()), repeat=Q.dimension):
        table = {}
        for cid, vec in Q.coords.items():
            acc = R.zero
            for c, img in zip(vec, images):
                acc = R.add(acc, R.scalar(c, img))
            table[cid] = acc
        if table[one] != R.one:
            continue
        if all(table[Q.act(r, cid)] == R.mul(r, table[cid]) for r in R.elements() for cid in table):
            return True
    return False


@pytest.mark.parametrize("key,n", [("GF2", 2), ("GF4", 2), ("F2xF2", 1), ("F2xF2", 2), ("F2xF4", 1),
                                   ("DUAL2", 1), ("DUAL2", 2), ("DUAL3", 1), ("GF3", 2)])
def test_split_finite_agrees_with_brute_force(key, n):
    R = gallery.ring(key)
    Q = build_Q(R, n)
    res = split_finite(R, n, Q=Q)
    assert res.split == brute_force_split(R, Q)
    if res.split:
        assert res.verified and verify_splitting(Q, res.sigma)


@pytest.mark.parametrize("q,n", [(2, 1), (2, 2), (4, 2), (8, 2), (2, 3)])
def test_perfect_fields_have_q_equal_to_the_field(q, n):
    F = galois_field(q)
    Q = build_Q(F, n)
    assert Q.size == q
    assert sorted(Q.phi(r) for r in F.elements()) == list(range(q))


def test_phi_kernel_of_dual_numbers():
    R = gallery.ring("DUAL2")
    x = R.coerce("x")
    for n in (1, 2):
        assert sorted(phi_kernel(R, n)) == sorted([R.zero, x])
        assert phi(R, n, x) == build_Q(R, n).zero


@pytest.mark.parametrize("key", ["GF4", "DUAL2", "FAT2"])
def test_v_images_act_trivially(key):
    assert v_annihilates(build_Q(gallery.ring(key), 2))


@pytest.mark.parametrize("key", ["F2xF2", "DUAL2", "DUAL3"])
def test_models_agree(key):
    cmp = compare_q_models(gallery.ring(key), 2)
    assert cmp.isomorphic and cmp.report()["outcome"] == "isomorphic"


def test_enumeration_cap():
    with pytest.raises(QModelError):
        build_Q(gallery.ring("FAT2"), 3, cap=100)


def test_graded_rings_rejected():
    with pytest.raises(QModelError):
        build_Q(gallery.ring("SS3"), 1)
