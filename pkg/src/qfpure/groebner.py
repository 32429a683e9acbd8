"""Buchberger completion, normal forms, gcd and squarefree analysis over GF(p)."""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

from .poly import (
    MonomialOrder,
    PolyError,
    PolyRing,
    SparsePoly,
    mono_div,
    mono_divides,
    mono_lcm,
    mono_mul,
)


@dataclass(frozen=True)
class IdealBasis:
    generators: tuple
    order: MonomialOrder
    is_groebner: bool = False

    @classmethod
    def of(cls, generators: Sequence[SparsePoly], groebner: bool = True) -> "IdealBasis":
        gens = tuple(g for g in generators if g)
        if not gens:
            raise PolyError("need at least one nonzero generator (use the zero ideal explicitly)")
        ring = gens[0].ring
        if not ring.modulus:
            raise PolyError("Groebner bases are only supported over GF(p)")
        basis = cls(gens, ring.order, False)
        return basis.completed() if groebner else basis

    @property
    def ring(self) -> PolyRing:
        return self.generators[0].ring

    def completed(self) -> "IdealBasis":
        if self.is_groebner:
            return self
        return IdealBasis(tuple(buchberger(self.generators)), self.order, True)

    def leading_monomials(self):
        return [g.lm() for g in self.generators]

    def contains(self, f: SparsePoly) -> bool:
        return groebner_normal_form(f, self).is_zero()


def _reduce_terms(terms: Dict, divisors: List[SparsePoly], ring: PolyRing, full: bool = True):
    """Reduce a term dict by ``divisors``; returns the remainder dict."""
    p = ring.modulus
    key = ring.order.key
    work = dict(terms)
    rem: Dict = {}
    lead = [(g.lm(), pow(g.lc(), -1, p), g) for g in divisors]
    while work:
        m = max(work, key=key)
        c = work[m]
        for lm_g, inv, g in lead:
            if mono_divides(lm_g, m):
                shift = mono_div(m, lm_g)
                factor = (c * inv) % p
                for gm, gc in g.terms.items():
                    t = mono_mul(gm, shift)
                    v = (work.get(t, 0) - factor * gc) % p
                    if v:
                        work[t] = v
                    else:
                        work.pop(t, None)
                break
        else:
            rem[m] = c
            del work[m]
            if not full:
                rem.update(work)
                break
    return rem


def reduce_poly(f: SparsePoly, divisors: Sequence[SparsePoly]) -> SparsePoly:
    """Full multivariate division remainder of ``f`` by ``divisors``."""
    if not f:
        return f
    return SparsePoly(f.ring, _reduce_terms(f.terms, list(divisors), f.ring))


def groebner_normal_form(f: SparsePoly, ideal: IdealBasis) -> SparsePoly:
    """Unique reduced normal form of ``f`` modulo ``ideal``; zero iff ``f`` is in it."""
    if f.ring.order != ideal.order:
        raise PolyError("monomial order mismatch between polynomial and ideal")
    if not f:
        return f
    if f.ring != ideal.ring:
        raise PolyError("polynomial and ideal live in different rings")
    ideal = ideal.completed()
    return reduce_poly(f, ideal.generators)


def s_polynomial(f: SparsePoly, g: SparsePoly) -> SparsePoly:
    p = f.ring.modulus
    L = mono_lcm(f.lm(), g.lm())
    a = SparsePoly(f.ring, {mono_div(L, f.lm()): pow(f.lc(), -1, p)})
    b = SparsePoly(f.ring, {mono_div(L, g.lm()): pow(g.lc(), -1, p)})
    return a * f - b * g


def buchberger(generators: Sequence[SparsePoly]) -> List[SparsePoly]:
    """Reduced Groebner basis using the sugar pair-selection strategy."""
    gens = [g.monic() for g in generators if g]
    if not gens:
        return []
    ring = gens[0].ring
    key = ring.order.key
    if any(g.is_constant() for g in gens):
        return [ring.one()]

    basis: List[SparsePoly] = []
    sugar: List[int] = []
    pairs: list = []
    counter = 0

    def add(h: SparsePoly, s: int):
        nonlocal counter
        idx = len(basis)
        lm_h = h.lm()
        for i, g in enumerate(basis):
            lm_g = g.lm()
            L = mono_lcm(lm_g, lm_h)
            s_pair = max(sugar[i] + sum(L) - sum(lm_g), s + sum(L) - sum(lm_h))
            heapq.heappush(pairs, (s_pair, key(L), counter, i, idx))
            counter += 1
        basis.append(h)
        sugar.append(s)

    for g in gens:
        h = reduce_poly(g, basis)
        if h:
            add(h.monic(), h.total_degree())

    handled = set()
    while pairs:
        _, _, _, i, j = heapq.heappop(pairs)
        handled.add((i, j))
        f, g = basis[i], basis[j]
        lf, lg = f.lm(), g.lm()
        if all(a == 0 or b == 0 for a, b in zip(lf, lg)):
            continue  # product criterion
        L = mono_lcm(lf, lg)
        if _chain_criterion(basis, handled, i, j, L):
            continue
        h = reduce_poly(s_polynomial(f, g), basis)
        if h:
            if h.is_constant():
                return [ring.one()]
            s = max(sugar[i] + sum(L) - sum(lf), sugar[j] + sum(L) - sum(lg))
            add(h.monic(), max(s, h.total_degree()))

    return _interreduce(basis)


def _chain_criterion(basis, handled, i, j, L) -> bool:
    # skip (i, j) if some k has lm_k | lcm and both (i,k), (j,k) were already handled
    for k, g in enumerate(basis):
        if k in (i, j):
            continue
        if (min(i, k), max(i, k)) not in handled or (min(j, k), max(j, k)) not in handled:
            continue
        if mono_divides(g.lm(), L):
            Li = mono_lcm(basis[i].lm(), g.lm())
            Lj = mono_lcm(basis[j].lm(), g.lm())
            if Li != L and Lj != L:
                return True
    return False


def _interreduce(basis: List[SparsePoly]) -> List[SparsePoly]:
    # drop non-minimal elements, then fully reduce each against the rest
    minimal = []
    for i, g in enumerate(basis):
        lm = g.lm()
        dominated = False
        for j, h in enumerate(basis):
            if i == j:
                continue
            if mono_divides(h.lm(), lm) and (h.lm() != lm or j < i):
                dominated = True
                break
        if not dominated:
            minimal.append(g)
    out = []
    for i, g in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1:]
        out.append(reduce_poly(g, others).monic())
    key = minimal[0].ring.order.key if minimal else None
    out.sort(key=lambda g: key(g.lm()))
    return out


def is_groebner(basis: Sequence[SparsePoly]) -> bool:
    """Check that every S-polynomial reduces to zero."""
    basis = list(basis)
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            if reduce_poly(s_polynomial(basis[i], basis[j]), basis):
                return False
    return True


def divide_exact(f: SparsePoly, g: SparsePoly) -> SparsePoly:
    """Quotient ``f / g`` over GF(p); raises if ``g`` does not divide ``f``."""
    q = try_divide(f, g)
    if q is None:
        raise PolyError("polynomial division is not exact")
    return q


def try_divide(f: SparsePoly, g: SparsePoly) -> Optional[SparsePoly]:
    if not g:
        raise ZeroDivisionError("division by the zero polynomial")
    ring = f.ring
    p = ring.modulus
    key = ring.order.key
    lm_g, inv = g.lm(), pow(g.lc(), -1, p)
    work = dict(f.terms)
    quot: Dict = {}
    while work:
        m = max(work, key=key)
        if not mono_divides(lm_g, m):
            return None
        shift = mono_div(m, lm_g)
        factor = (work[m] * inv) % p
        quot[shift] = factor
        for gm, gc in g.terms.items():
            t = mono_mul(gm, shift)
            v = (work.get(t, 0) - factor * gc) % p
            if v:
                work[t] = v
            else:
                work.pop(t, None)
    return SparsePoly(ring, quot)


def poly_lcm(f: SparsePoly, g: SparsePoly) -> SparsePoly:
    """Monic lcm via the elimination ideal ``(t f, (1 - t) g) ∩ k[x]``."""
    ring = f.ring
    if not f or not g:
        return ring.zero()
    if f.is_constant():
        return g.monic()
    if g.is_constant():
        return f.monic()
    big = PolyRing(("_t",) + ring.names, ring.modulus, MonomialOrder("elim", 1))
    shift = list(range(1, ring.nvars + 1))
    t = big.gen(0)
    F = f.embed(big, shift)
    G = g.embed(big, shift)
    gb = buchberger([t * F, (big.one() - t) * G])
    free = [h for h in gb if h.degree_in(0) == 0]
    if len(free) != 1:
        raise AssertionError("intersection of principal ideals must be principal")
    h = free[0]
    back = SparsePoly.from_terms(ring, [(m[1:], c) for m, c in h.terms.items()])
    return back.monic()


def poly_gcd(f: SparsePoly, g: SparsePoly) -> SparsePoly:
    """Monic gcd over GF(p)."""
    ring = f.ring
    if not f:
        return g.monic() if g else ring.zero()
    if not g:
        return f.monic()
    if f.is_constant() or g.is_constant():
        return ring.one()
    L = poly_lcm(f, g)
    return divide_exact(f * g, L).monic()


@dataclass(frozen=True)
class SquarefreeResult:
    squarefree: bool
    witness: Optional[SparsePoly] = None

    def __bool__(self):
        return self.squarefree


def _gcd_with_partials(f: SparsePoly) -> Optional[SparsePoly]:
    partials = [f.derivative(i) for i in range(f.ring.nvars)]
    partials = [d for d in partials if d]
    if not partials:
        return None
    G = f
    for d in partials:
        G = poly_gcd(G, d)
        if G.is_constant():
            break
    return G


def _squarefree_core(g: SparsePoly) -> SparsePoly:
    """Product of the irreducible factors of ``g`` (each once), up to a unit."""
    while True:
        G = _gcd_with_partials(g)
        if G is None:
            g = g.pth_root()
            continue
        return divide_exact(g, G).monic()


def squarefree_test(f: SparsePoly) -> SquarefreeResult:
    """Decide whether ``f`` over GF(p) has a repeated irreducible factor.

    Over the perfect field GF(p), an irreducible ``q`` divides ``f`` and all its
    partial derivatives exactly when ``q^2`` divides ``f``. When every partial
    vanishes, ``f`` is a p-th power.
    """
    if not f:
        raise PolyError("squarefree_test of the zero polynomial")
    if not f.ring.modulus:
        raise PolyError("squarefree_test requires GF(p) coefficients")
    if f.is_constant():
        return SquarefreeResult(True)
    G = _gcd_with_partials(f)
    if G is None:
        witness = f.pth_root().monic()
    elif G.is_constant():
        return SquarefreeResult(True)
    else:
        witness = _squarefree_core(G)
    if try_divide(f, witness * witness) is None:
        raise AssertionError("squarefree witness failed to certify")
    return SquarefreeResult(False, witness)
