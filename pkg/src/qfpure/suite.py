"""Runnable verification suite: exact checks of the Witt and quasi-F-split machinery.

Each case yields ledger rows ``(case, anchor, check, verdict, detail)`` with
verdict ``pass``, ``fail`` or ``discrepancy`` (computed law holds, an alternative
convention differs). Failures are rows, never exceptions.
"""

from __future__ import annotations

import itertools
import random
import zlib
from dataclasses import asdict, dataclass
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from . import gallery
from .graded import fedder_check, split_graded_system
from .groebner import squarefree_test
from .height import height_search
from .poly import PolyRing
from .qmodel import build_Q, compare_q_models, phi_kernel, split_finite, v_annihilates
from .rings import FiniteAlgebra, galois_field, is_reduced, truncated_local_ring
from .witt import (ModP, WittRing, frobenius_w, gen_witt_polys, ghost_map, ker_restriction_action,
                   m_adic_order, p_multiple, restriction, verschiebung, verschiebung_truncated,
                   witt_ideal_membership)

DEFAULT_SEED = 20240601

ANCHORS = {
    "ghost": "witt-vectors: universal polynomials, ghost components additive and multiplicative",
    "axioms": "witt-vectors: W_n(R) is a commutative ring",
    "S1-p2": "witt-vectors: S_1, P_1 at p = 2 (the p*a_1*b_1 term vanishes mod p)",
    "S1-p3": "witt-vectors: S_1 with coefficients binom(p-1, i) for general p",
    "operators": "witt-operators: p = FV = VF, p = (0,1,0,...,0)",
    "restriction": "witt-operators: restriction and Frobenius are ring maps",
    "verschiebung": "witt-operators: V is additive, not multiplicative",
    "decomposition": "witt-operators: a = sum_i V^i([a_i])",
    "galois": "witt-structure: W_2(GF(2)) = Z/4, W_3(GF(2)) = Z/8, W_2(GF(4)) = Galois ring GR(4,2)",
    "collapse": "wbar: W_n(R)/p = R for perfect R",
    "wbar-dual": "wbar: V([x]) is nonzero mod p over GF(2)[x]/(x^2)",
    "ker-computed": "ker(r) action: a * V^{n-1}([r]) = V^{n-1}([a_0^{p^{n-1}} r])",
    "ker-printed": "ker(r) action with the last index: V^{n-1}([a_{n-1}^{p^{n-1}} r])",
    "cofinality": "cofinality: J^(k+n-1) inside W_n(m^k)",
    "cofinality-naive": "cofinality: t = k factors are not enough",
    "phi-kernel": "Phi_{R,n}: t^p = 0 iff Phi(t) = 0; R reduced iff Phi injective",
    "v-annihilates": "Q_{R,n}: V-images act by zero under the twisted action",
    "q-compare": "Q_{R,n}: pushout model equals F_* Wbar_n(R)",
    "example-trio": "inseparable base change: (sqrt(S) x + sqrt(T) y + z)^2 = 0",
    "monotone": "height: n-quasi-F-split implies (n+1)-quasi-F-split",
    "fedder": "height: F-pure iff 1-quasi-F-pure (Fedder cross-check)",
    "cross": "height: graded and finite solvers agree on Artinian graded rings",
    "etale": "etale: ht(R) = ht(S) for finite etale R -> S (finite fields)",
    "gate": "height: quasi-F-pure implies reduced",
    "heights": "height: gallery heights",
}

CASES = ("WITT-AXIOMS", "WITT-GALOIS", "PERFECT-COLLAPSE", "KER-R-ACTION", "COFINALITY",
         "PHI-KERNEL", "Q-COMPARE", "EXAMPLE-4", "MONOTONE", "ETALE-SMOKE", "HEIGHT-GALLERY")


@dataclass(frozen=True)
class LedgerRow:
    case: str
    anchor: str
    check: str
    verdict: str  # pass | fail | discrepancy
    detail: str = ""

    def to_dict(self) -> dict:
        return asdict(self)


def _row(case, key, check, ok, detail="", discrepancy=False) -> LedgerRow:
    if discrepancy:
        verdict = "discrepancy"
    else:
        verdict = "pass" if ok else "fail"
    return LedgerRow(case, ANCHORS[key], check, verdict, detail)


def _rng(case: str, seed: int) -> random.Random:
    return random.Random((zlib.crc32(case.encode()) << 32) ^ seed)


# --- Witt engine checks -------------------------------------------------------

def ghost_oracle_check(p: int, n: int, samples: int, rng: random.Random, bound: int = 6):
    """Random integer pairs: ghost(a + b) = ghost(a) + ghost(b), likewise for products."""
    W = WittRing.over_integers(p, n)
    for _ in range(samples):
        a = W([rng.randint(-bound, bound) for _ in range(n)])
        b = W([rng.randint(-bound, bound) for _ in range(n)])
        ga, gb = ghost_map(a), ghost_map(b)
        if ghost_map(a + b) != tuple(x + y for x, y in zip(ga, gb)):
            return False, f"sum mismatch at {a}, {b}"
        if ghost_map(a * b) != tuple(x * y for x, y in zip(ga, gb)):
            return False, f"product mismatch at {a}, {b}"
        if ghost_map(-a) != tuple(-x for x in ga):
            return False, f"negation mismatch at {a}"
    return True, f"{samples} pairs"


def ring_axioms_exhaustive(W: WittRing) -> Tuple[bool, int]:
    els = list(W.elements())
    zero, one = W.zero(), W.one()
    for a in els:
        if a + zero != a or a * one != a or a + (-a) != zero:
            return False, 0
    for a, b in itertools.product(els, repeat=2):
        if a + b != b + a or a * b != b * a:
            return False, 0
    count = 0
    for a, b, c in itertools.product(els, repeat=3):
        count += 1
        if (a + b) + c != a + (b + c) or (a * b) * c != a * (b * c) or a * (b + c) != a * b + a * c:
            return False, count
    return True, count


def operator_identities(W: WittRing) -> Tuple[bool, str]:
    """FV = VF = p-multiplication = table product with (0,1,0,...) on every element."""
    p_el = W.p_element()
    expected = [W.base.zero] * W.n
    if W.n > 1:
        expected[1] = W.base.one
    if p_el.coords != tuple(expected) or W.from_int(W.p) != p_el:
        return False, f"p = {p_el}"
    count = 0
    for a in W.elements():
        count += 1
        fv = frobenius_w(verschiebung_truncated(a))
        vf = verschiebung_truncated(frobenius_w(a))
        if not (fv == vf == p_multiple(a) == p_el * a):
            return False, f"mismatch at {a}"
    return True, f"{count} elements"


def ring_map_checks(W: WittRing) -> Tuple[bool, str]:
    els = list(W.elements())
    count = 0
    for a, b in itertools.product(els, repeat=2):
        count += 1
        Fa, Fb = frobenius_w(a), frobenius_w(b)
        if frobenius_w(a + b) != Fa + Fb or frobenius_w(a * b) != Fa * Fb:
            return False, f"F fails at {a}, {b}"
        if W.n > 1:
            ra, rb = restriction(a), restriction(b)
            if restriction(a + b) != ra + rb or restriction(a * b) != ra * rb:
                return False, f"restriction fails at {a}, {b}"
            if restriction(frobenius_w(a)) != frobenius_w(ra):
                return False, f"restriction and F do not commute at {a}"
        if verschiebung_truncated(a + b) != verschiebung_truncated(a) + verschiebung_truncated(b):
            return False, f"V not additive at {a}, {b}"
    if frobenius_w(W.one()) != W.one():
        return False, "F(1) != 1"
    return True, f"{count} pairs"


def decomposition_check(W: WittRing) -> bool:
    for a in W.elements():
        acc = W.zero()
        for i, c in enumerate(a.coords):
            term = W.teichmuller(c)
            for _ in range(i):
                term = verschiebung_truncated(term)
            acc = acc + term
        if acc != a:
            return False
    return True


def isomorphic_to_integers_mod(W: WittRing, modulus: int) -> bool:
    """``k -> k * 1`` is a ring isomorphism ``Z/modulus -> W``."""
    image = [W.from_int(k) for k in range(modulus)]
    if len(set(image)) != modulus or len(list(W.elements())) != modulus:
        return False
    for a, b in itertools.product(range(modulus), repeat=2):
        if image[(a + b) % modulus] != image[a] + image[b]:
            return False
        if image[(a * b) % modulus] != image[a] * image[b]:
            return False
    return True


def galois_ring_check() -> Tuple[bool, str]:
    """``Z/4[g]/(g^2 + g + 1) -> W_2(GF(4))``, ``a + b g -> a + b [u]``."""
    F4 = galois_field(4)
    W = WittRing(F4, 2)
    g = W.teichmuller(F4.coerce("u"))
    if W.from_int(4) != W.zero() or W.from_int(2) == W.zero():
        return False, "characteristic is not 4"
    if g * g + g + W.one() != W.zero():
        return False, "[u]^2 + [u] + 1 != 0"

    def phi(a, b):
        return W.from_int(a) + W.from_int(b) * g

    def gr_mul(x, y):
        (a, b), (c, d) = x, y
        # g^2 = -g - 1
        return ((a * c - b * d) % 4, (a * d + b * c - b * d) % 4)

    elems = [(a, b) for a in range(4) for b in range(4)]
    images = {e: phi(*e) for e in elems}
    if len(set(images.values())) != 16:
        return False, "map is not injective"
    for x, y in itertools.product(elems, repeat=2):
        s = ((x[0] + y[0]) % 4, (x[1] + y[1]) % 4)
        if images[s] != images[x] + images[y] or images[gr_mul(x, y)] != images[x] * images[y]:
            return False, f"not a ring map at {x}, {y}"
    return True, "16 elements, 256 pairs"


def perfect_collapse(q: int, n: int) -> Tuple[bool, str]:
    F = galois_field(q)
    W = WittRing(F, n)
    M = ModP(W)
    classes = {M.canonical(a) for a in W.elements()}
    teich = {M.canonical(W.teichmuller(r)) for r in F.elements()}
    ok = len(classes) == F.size and teich == classes
    # class -> first coordinate is a ring map
    for a, b in itertools.product(list(W.elements())[: 64], repeat=2):
        if (a + b).coords[0] != F.add(a.coords[0], b.coords[0]):
            ok = False
    return ok, f"|Wbar_{n}(GF({q}))| = {len(classes)}"


@dataclass
class KerActionResult:
    computed_law_holds: bool
    last_index_matches: bool
    pairs: int
    witness: Optional[str] = None


def ker_r_action_check(R: FiniteAlgebra, n: int) -> KerActionResult:
    """Compare ``a * V^{n-1}([r])`` against both index conventions, exhaustively."""
    W = WittRing(R, n)
    e = R.p ** (n - 1)
    computed = True
    last_index = True
    witness = None
    pairs = 0
    for a in W.elements():
        for r in R.elements():
            pairs += 1
            last = ker_restriction_action(a, r).coords[-1]
            if last != R.mul(R.power(a.coords[0], e), r):
                computed = False
            if last != R.mul(R.power(a.coords[-1], e), r):
                if last_index:
                    witness = f"a = {a}, r = {R.format(r)}: product last coordinate {R.format(last)}"
                last_index = False
    return KerActionResult(computed, last_index, pairs, witness)


@dataclass
class CofinalityResult:
    holds: bool
    samples: int
    counterexample: Optional[str] = None


def _random_j_element(W: WittRing, rng: random.Random):
    R = W.base
    m = R.ideal_span(R.maximal_ideal)
    basis = m.basis()
    c0 = [0] * R.dim
    for v in basis:
        if rng.random() < 0.5:
            c0 = [(x + y) % R.p for x, y in zip(c0, v)]
    coords = [R.encode(c0)] + [rng.randrange(R.size) for _ in range(W.n - 1)]
    return W.from_raw(tuple(coords))


def cofinality_check(R: FiniteAlgebra, n: int, k: int, samples: int, rng: random.Random,
                     t: Optional[int] = None) -> CofinalityResult:
    """Products of ``t`` random elements of ``J``; check ``a_i`` in ``m^(t-i)`` and membership in ``W_n(m^k)``."""
    bound_mode = t is None
    t = k + n - 1 if t is None else t
    if R.maximal_ideal is None:
        raise ValueError("ring has no designated maximal ideal")
    # m^t must survive the truncation for the bound to be visible
    if not R.ideal_power(R.maximal_ideal, t).basis():
        raise ValueError("truncation too shallow for this t")
    W = WittRing(R, n)
    for s in range(samples):
        factors = [_random_j_element(W, rng) for _ in range(t)]
        prod = factors[0]
        for f in factors[1:]:
            prod = prod * f
        inside = witt_ideal_membership(prod, "Wmk", k)
        coord_ok = all(m_adic_order(R, c) >= t - i for i, c in enumerate(prod.coords))
        if not inside or (bound_mode and not coord_ok):
            return CofinalityResult(False, s + 1, " * ".join(map(str, factors)) + f" = {prod}")
    return CofinalityResult(True, samples)


def naive_cofinality_counterexample(R: FiniteAlgebra, n: int, k: int, rng: random.Random,
                                    tries: int = 500) -> Optional[str]:
    res = cofinality_check(R, n, k, tries, rng, t=k)
    return None if res.holds else res.counterexample


# --- case runners -------------------------------------------------------------

def _case_witt_axioms(seed: int, samples: int) -> List[LedgerRow]:
    case = "WITT-AXIOMS"
    rng = _rng(case, seed)
    rows = []
    for p, n in [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (3, 4)]:
        ok, detail = ghost_oracle_check(p, n, samples, rng)
        rows.append(_row(case, "ghost", f"ghost oracle p={p} n={n}", ok, detail))
        rows.append(_row(case, "ghost", f"ghost compatibility of the table p={p} n={n}",
                         gen_witt_polys(p, n).check_ghost_compatibility()))
    T2 = gen_witt_polys(2, 2)
    Z = T2.ring
    S1 = Z.parse("X1 + Y1 - X0*Y0")
    P1 = Z.parse("X1*Y0^2 + X0^2*Y1 + 2*X1*Y1")
    rows.append(_row(case, "S1-p2", "S_1 at p = 2", T2.sums[1] == S1, str(T2.sums[1])))
    rows.append(_row(case, "S1-p2", "P_1 at p = 2", T2.products[1] == P1, str(T2.products[1])))
    T3 = gen_witt_polys(3, 2)
    Z3 = T3.ring
    computed = Z3.parse("X1 + Y1 - X0^2*Y0 - X0*Y0^2")
    binom_form = Z3.parse("X1 + Y1 - X0^2*Y0 - 2*X0*Y0^2")
    ok = T3.sums[1] == computed
    differs = T3.sums[1] != binom_form
    rows.append(LedgerRow(case, ANCHORS["S1-p3"], "S_1 at p = 3",
                          "discrepancy" if ok and differs else ("pass" if ok else "fail"),
                          f"computed {T3.sums[1]}; binom(p-1,i) form {binom_form}"))
    for q, n in [(2, 2), (4, 2), (2, 3)]:
        W = WittRing(galois_field(q), n)
        ok, count = ring_axioms_exhaustive(W)
        rows.append(_row(case, "axioms", f"ring axioms W_{n}(GF({q}))", ok, f"{count} triples"))
    for q, n in [(2, 3), (4, 2)]:
        W = WittRing(galois_field(q), n)
        ok, detail = operator_identities(W)
        rows.append(_row(case, "operators", f"FV = VF = p on W_{n}(GF({q}))", ok, detail))
        ok, detail = ring_map_checks(W)
        rows.append(_row(case, "restriction", f"restriction, F ring maps on W_{n}(GF({q}))", ok, detail))
        rows.append(_row(case, "decomposition", f"a = sum V^i([a_i]) on W_{n}(GF({q}))", decomposition_check(W)))
    F2 = galois_field(2)
    W3 = WittRing(F2, 3)
    W2 = WittRing(F2, 2)
    v1 = verschiebung_truncated(W3.one())
    lhs, rhs = v1 * v1, verschiebung_truncated(W3.one() * W3.one())
    rows.append(_row(case, "verschiebung", "V([1])^2 != V([1]^2) in W_3(GF(2))",
                     lhs.coords == (0, 0, 1) and rhs.coords == (0, 1, 0) and lhs != rhs, f"{lhs} vs {rhs}"))
    V_up = all(verschiebung(a + b, W3) == verschiebung(a, W3) + verschiebung(b, W3)
               for a, b in itertools.product(list(W2.elements()), repeat=2))
    rows.append(_row(case, "verschiebung", "V: W_2 -> W_3 additive over GF(2)", V_up))
    W4 = WittRing(galois_field(4), 2)
    functorial = all(frobenius_w(a).coords == tuple(W4.base.frobenius(c) for c in a.coords)
                     for a in W4.elements())
    rows.append(_row(case, "operators", "F = W_n(Frobenius) on W_2(GF(4))", functorial))
    return rows


def _case_witt_galois(seed: int, samples: int) -> List[LedgerRow]:
    case = "WITT-GALOIS"
    F2 = galois_field(2)
    rows = [
        _row(case, "galois", "W_2(GF(2)) = Z/4", isomorphic_to_integers_mod(WittRing(F2, 2), 4)),
        _row(case, "galois", "W_3(GF(2)) = Z/8", isomorphic_to_integers_mod(WittRing(F2, 3), 8)),
    ]
    ok, detail = galois_ring_check()
    rows.append(_row(case, "galois", "W_2(GF(4)) = Z/4[u]/(u^2+u+1)", ok, detail))
    return rows


def _case_perfect_collapse(seed: int, samples: int) -> List[LedgerRow]:
    case = "PERFECT-COLLAPSE"
    rows = []
    for q, n in [(2, 2), (2, 3), (4, 2), (8, 2)]:
        ok, detail = perfect_collapse(q, n)
        rows.append(_row(case, "collapse", f"Wbar_{n}(GF({q})) = GF({q})", ok, detail))
    R = gallery.ring("DUAL2")
    W = WittRing(R, 2)
    M = ModP(W)
    x = R.coerce("x")
    vx = verschiebung_truncated(W.teichmuller(x))
    image = sorted(str(W.from_raw(c)) for c in M.image)
    rows.append(_row(case, "wbar-dual", "class(V([x])) != 0, im(p) = {(0,0),(0,1)}",
                     not M.is_in_im_p(vx) and len(M.image) == 2, f"im(p) = {image}"))
    return rows


def _case_ker_r_action(seed: int, samples: int) -> List[LedgerRow]:
    case = "KER-R-ACTION"
    rows = []
    for q, n in [(4, 2), (2, 3), (2, 2)]:
        R = galois_field(q)
        res = ker_r_action_check(R, n)
        rows.append(_row(case, "ker-computed", f"computed law on W_{n}(GF({q}))",
                         res.computed_law_holds, f"{res.pairs} pairs (a, r)"))
        if q == 2 and n == 2:
            continue
        rows.append(LedgerRow(case, ANCHORS["ker-printed"], f"last-coordinate index on W_{n}(GF({q}))",
                              "pass" if res.last_index_matches else "discrepancy",
                              res.witness or "last-coordinate index agrees"))
    # Teichmuller inputs: both conventions agree when a = [s] and n = 1 pattern coincides
    R = galois_field(4)
    W = WittRing(R, 2)
    teich_ok = all(ker_restriction_action(W.teichmuller(s), r).coords[-1] == R.mul(R.power(s, 2), r)
                   for s in R.elements() for r in R.elements())
    rows.append(_row(case, "ker-computed", "[s] * V([r]) = V([s^p r]) on GF(4)", teich_ok))
    return rows


def _case_cofinality(seed: int, samples: int) -> List[LedgerRow]:
    case = "COFINALITY"
    rng = _rng(case, seed)
    R = truncated_local_ring(2, 12)
    rows = []
    for n in (2, 3):
        for k in (1, 2, 3):
            res = cofinality_check(R, n, k, samples, rng)
            rows.append(_row(case, "cofinality", f"n={n} k={k} t={k + n - 1}", res.holds,
                             f"{res.samples}/{samples} samples" if res.holds else res.counterexample))
    # the product (x,1)(x,1) is (x^2, 0): no counterexample there
    W2 = WittRing(R, 2)
    x = R.coerce("x")
    sq = W2.from_raw((x, R.one)) * W2.from_raw((x, R.one))
    rows.append(_row(case, "cofinality-naive", "(x,1)*(x,1) = (x^2, 0) lies in W_2(m^2)",
                     sq.coords == (R.power(x, 2), R.zero) and witt_ideal_membership(sq, "Wmk", 2), str(sq)))
    for n, k in [(2, 1), (3, 1), (3, 2)]:
        cex = naive_cofinality_counterexample(R, n, k, rng)
        rows.append(_row(case, "cofinality-naive", f"t = k = {k}, n = {n}: counterexample found",
                         cex is not None, cex or "none in 500 samples"))
    # for n = 2 the second coordinate of a product is a_1 b_0^p + a_0^p b_1, so t = k >= 2 is enough
    cex = naive_cofinality_counterexample(R, 2, 2, rng)
    rows.append(_row(case, "cofinality-naive", "t = k = 2, n = 2: no counterexample (bound not sharp)",
                     cex is None, cex or "500 samples inside W_2(m^2)"))
    return rows


def _case_phi_kernel(seed: int, samples: int) -> List[LedgerRow]:
    case = "PHI-KERNEL"
    rows = []
    for key in gallery.KERNEL_GALLERY:
        R = gallery.ring(key)
        expected = sorted(t for t in R.elements() if R.frobenius(t) == R.zero)
        for n in (1, 2):
            Q = build_Q(R, n)
            ker = sorted(phi_kernel(R, n, Q))
            reduced = is_reduced(R).reduced
            ok = ker == expected and (reduced == (len(ker) == 1))
            rows.append(_row(case, "phi-kernel", f"{key} n={n}", ok,
                             "{" + ", ".join(R.format(t) for t in ker) + "}"))
            rows.append(_row(case, "v-annihilates", f"{key} n={n}", v_annihilates(Q)))
    return rows


def _case_q_compare(seed: int, samples: int) -> List[LedgerRow]:
    case = "Q-COMPARE"
    rows = []
    for key in gallery.finite_keys():
        R = gallery.ring(key)
        cmp2 = compare_q_models(R, 2)
        rows.append(_row(case, "q-compare", f"{key} n=2", cmp2.isomorphic,
                         f"|Q| = {cmp2.sizes[1]}"))
    for key in ("F2xF4", "DUAL2", "FAT2", "DUAL3"):
        R = gallery.ring(key)
        cmp3 = compare_q_models(R, 3)
        rows.append(_row(case, "q-compare", f"{key} n=3 (outcome recorded)", cmp3.isomorphic,
                         f"{cmp3.report()['outcome']}, |Q| = {cmp3.sizes[1]}"))
    return rows


def _case_example4(seed: int, samples: int) -> List[LedgerRow]:
    case = "EXAMPLE-4"
    rows = []
    R0 = gallery.ring("EX4")
    r0 = is_reduced(R0)
    rows.append(_row(case, "example-trio", "s x^2 + t y^2 + z^2 reduced", r0.reduced, "squarefree"))
    R1 = gallery.ring("EX4S")
    r1 = is_reduced(R1)
    rows.append(_row(case, "example-trio", "s'^2 x^2 + t y^2 + z^2 reduced (sqrt(S) adjoined)",
                     r1.reduced, "squarefree"))
    R2 = gallery.ring("EX4ST")
    r2 = is_reduced(R2)
    f = R2.hypersurface
    g = R2.poly_ring.parse("s'*x + t'*y + z")
    sf = squarefree_test(f)
    ok = (not r2.reduced and sf.witness == g and g * g == f
          and R2.normal_form(r2.witness.value ** 2).is_zero())
    rows.append(_row(case, "example-trio", "s'^2 x^2 + t'^2 y^2 + z^2 non-reduced (sqrt(S), sqrt(T) adjoined)",
                     ok, f"nilpotent {r2.witness}"))
    return rows


def _case_monotone(seed: int, samples: int) -> List[LedgerRow]:
    case = "MONOTONE"
    rows = []
    for key in gallery.finite_keys():
        e = gallery.get(key)
        if not e.reduced:
            continue
        R = e.build()
        verdicts = [split_finite(R, n).split for n in (1, 2, 3)]
        ok = all(b for a, b in zip(verdicts, verdicts[1:]) if a)
        rows.append(_row(case, "monotone", f"{key} n=1..3", ok,
                         " ".join("split" if v else "not_split" for v in verdicts)))
    for key in ("ORD3", "SS3", "CONIC2"):
        R = gallery.ring(key)
        v = [split_graded_system(R, n, 3).feasible for n in (1, 2)]
        rows.append(_row(case, "monotone", f"{key} n=1..2 (D=3)", not (v[0] and not v[1]),
                         " ".join("feasible" if x else "not_split" for x in v)))
    for key in gallery.FEDDER_GALLERY:
        R = gallery.ring(key)
        fed = fedder_check(R.hypersurface)
        res = split_graded_system(R, 1, 3)
        rows.append(_row(case, "fedder", f"{key}: solver n=1 vs Fedder", res.feasible == fed.f_split,
                         f"{res.verdict} / {fed.verdict}"))
    for key in gallery.CROSS_GALLERY:
        G = gallery.ring(key)
        Fa = G.to_finite()
        hg = height_search(G, 2 if G.p == 2 else 1, 3)
        hf = height_search(Fa, 2)
        rows.append(_row(case, "cross", f"{key}: graded vs finite", hg.height() == hf.height(),
                         f"{hg.height()} / {hf.height()}"))
    return rows


def _case_etale(seed: int, samples: int) -> List[LedgerRow]:
    case = "ETALE-SMOKE"
    rows = []
    for key in ("GF2", "GF4", "GF8", "F2xF4"):
        rep = height_search(gallery.ring(key), 2)
        rows.append(_row(case, "etale", f"ht({key}) = 1", rep.kind == "exact" and rep.value == 1,
                         rep.summary()))
    return rows


def _case_heights(seed: int, samples: int) -> List[LedgerRow]:
    case = "HEIGHT-GALLERY"
    rows = []
    for key in ("GF3", "GF9", "F2xF2"):
        rep = height_search(gallery.ring(key), 2)
        rows.append(_row(case, "heights", f"ht({key}) = 1", rep.kind == "exact" and rep.value == 1, rep.summary()))
    for key in ("DUAL2", "DUAL4", "FAT2"):
        rep = height_search(gallery.ring(key), 2)
        rows.append(_row(case, "gate", f"ht({key}) = infinity", rep.kind == "infinity"
                         and all(lv.verdict == "gated_nonreduced" for lv in rep.levels), rep.summary()))
    rep = height_search(gallery.ring("ORD3"), 1, 4)
    rows.append(_row(case, "heights", "ordinary cubic cone: exact 1", rep.kind == "exact" and rep.value == 1
                     and rep.fedder == "f_split", rep.summary()))
    R = gallery.ring("SS3")
    n1 = split_graded_system(R, 1, 3)
    rows.append(_row(case, "heights", "supersingular cubic cone: n=1 infeasible at D=3 (certified)",
                     not n1.feasible and n1.verified, f"{len(n1.certificate or [])} rows in certificate"))
    feas = [split_graded_system(R, 2, D).feasible for D in (3, 4, 5)]
    rows.append(_row(case, "heights", "supersingular cubic cone: n=2 feasible at D=3,4,5", all(feas)))
    return rows


_RUNNERS: Dict[str, Callable[[int, int], List[LedgerRow]]] = {
    "WITT-AXIOMS": _case_witt_axioms,
    "WITT-GALOIS": _case_witt_galois,
    "PERFECT-COLLAPSE": _case_perfect_collapse,
    "KER-R-ACTION": _case_ker_r_action,
    "COFINALITY": _case_cofinality,
    "PHI-KERNEL": _case_phi_kernel,
    "Q-COMPARE": _case_q_compare,
    "EXAMPLE-4": _case_example4,
    "MONOTONE": _case_monotone,
    "ETALE-SMOKE": _case_etale,
    "HEIGHT-GALLERY": _case_heights,
}

#: sample counts per case: ghost pairs, cofinality products
DEFAULT_SAMPLES = {"WITT-AXIOMS": 500, "COFINALITY": 200}


def run_suite(filter: Optional[Iterable[str]] = None, seed: int = DEFAULT_SEED,
              samples: Optional[Dict[str, int]] = None) -> List[LedgerRow]:
    """Run the selected cases (all by default) in case-id order."""
    wanted = list(CASES) if not filter else [c.upper() for c in filter]
    unknown = [c for c in wanted if c not in _RUNNERS]
    if unknown:
        raise KeyError(f"unknown suite case(s): {', '.join(unknown)}")
    counts = dict(DEFAULT_SAMPLES)
    counts.update(samples or {})
    rows: List[LedgerRow] = []
    for case in CASES:
        if case not in wanted:
            continue
        try:
            rows.extend(_RUNNERS[case](seed, counts.get(case, 0)))
        except Exception as exc:  # a crashing case is a failed row
            rows.append(LedgerRow(case, "", "case raised", "fail", f"{type(exc).__name__}: {exc}"))
    return rows


def format_ledger(rows: Sequence[LedgerRow]) -> str:
    width = max((len(r.case) for r in rows), default=4)
    lines = []
    for r in rows:
        text = f"{r.verdict.upper():<11} {r.case:<{width}}  {r.check}"
        if r.detail:
            text += f"  [{r.detail}]"
        lines.append(text)
    return "\n".join(lines)
