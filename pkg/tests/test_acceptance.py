"""Acceptance criteria 1-13, one test each.

Every test records ``(ok, title, detail, seconds)`` in ``RESULTS``; the
conftest hook prints one PASS/FAIL line per criterion after the run. Run this
file directly (``python3 tests/test_acceptance.py``) to get the same lines
without pytest.
"""

from __future__ import annotations

import functools
import itertools
import json
import os
import random
import subprocess
import sys
import time

import sympy

from qfpure import gallery
from qfpure.dsl import parse_ring_dsl, parse_ring_file
from qfpure.graded import build_graded_system, fedder_check, split_graded_system
from qfpure.height import height_search
from qfpure.qmodel import build_Q, compare_q_models, phi_kernel, split_finite
from qfpure.rings import galois_field, is_reduced, truncated_local_ring
from qfpure.suite import ker_r_action_check
from qfpure.witt import (ModP, WittRing, frobenius_w, gen_witt_polys, p_multiple, restriction,
                         verschiebung, verschiebung_truncated)

SEED = 20240601
START = time.perf_counter()
RESULTS: dict = {}


def criterion(num: int, title: str):
    def wrap(fn):
        @functools.wraps(fn)
        def run():
            t0 = time.perf_counter()
            ok, detail = False, ""
            try:
                ok, detail = fn()
            except Exception as exc:
                detail = f"{type(exc).__name__}: {exc}"
                raise
            finally:
                RESULTS[num] = (ok, title, detail, time.perf_counter() - t0)
                print(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {title}  {detail}")
            assert ok, detail
        return run
    return wrap


# --- 1 ----------------------------------------------------------------------------

def ghost(p, coords):
    """Ghost components computed from scratch."""
    return tuple(sum(p ** i * coords[i] ** (p ** (m - i)) for i in range(m + 1)) for m in range(len(coords)))


@criterion(1, "ghost-oracle equivalence, p in {2,3}, n <= 4, 500 pairs each")
def test_criterion_01_ghost_oracle():
    t0 = time.perf_counter()
    rng = random.Random(SEED)
    pairs = 0
    for p in (2, 3):
        for n in (1, 2, 3, 4):
            W = WittRing.over_integers(p, n)
            for _ in range(500):
                a = [rng.randint(-9, 9) for _ in range(n)]
                b = [rng.randint(-9, 9) for _ in range(n)]
                ga, gb = ghost(p, a), ghost(p, b)
                s, m = W(a) + W(b), W(a) * W(b)
                if ghost(p, s.coords) != tuple(x + y for x, y in zip(ga, gb)):
                    return False, f"sum mismatch p={p} n={n} a={a} b={b}"
                if ghost(p, m.coords) != tuple(x * y for x, y in zip(ga, gb)):
                    return False, f"product mismatch p={p} n={n} a={a} b={b}"
                pairs += 1
    elapsed = time.perf_counter() - t0
    return elapsed < 60, f"{pairs} pairs in {elapsed:.1f} s"


# --- 2 ----------------------------------------------------------------------------

def _sympy_level_one(p):
    """S_1, P_1 from ghost inversion in sympy: (ghost_1 combination - (level 0)^p) / p."""
    X0, X1, Y0, Y1 = sympy.symbols("X0 X1 Y0 Y1")
    S1 = sympy.expand(X1 + Y1 + (X0 ** p + Y0 ** p - (X0 + Y0) ** p) / p)
    P1 = sympy.expand(((X0 ** p + p * X1) * (Y0 ** p + p * Y1) - (X0 * Y0) ** p) / p)
    return S1, P1


def _as_sympy(f):
    syms = sympy.symbols(" ".join(f.ring.names))
    out = sympy.Integer(0)
    for m, c in f.terms.items():
        t = sympy.Integer(c)
        for s, e in zip(syms, m):
            t *= s ** e
        out += t
    return sympy.expand(out)


@criterion(2, "S_1 and P_1 at p = 2 exact; p = 3 divergence from binom(p-1,i) recorded")
def test_criterion_02_level_one_polynomials():
    T2 = gen_witt_polys(2, 2)
    S1, P1 = _sympy_level_one(2)
    X0, X1, Y0, Y1 = sympy.symbols("X0 X1 Y0 Y1")
    ok = (_as_sympy(T2.sums[1]) == S1 == sympy.expand(X1 + Y1 - X0 * Y0)
          and _as_sympy(T2.products[1]) == P1 == sympy.expand(X1 * Y0 ** 2 + X0 ** 2 * Y1 + 2 * X1 * Y1))
    T3 = gen_witt_polys(3, 2)
    S1_3, _ = _sympy_level_one(3)
    computed = _as_sympy(T3.sums[1])
    binom_form = sympy.expand(X1 + Y1 - sum(sympy.binomial(2, i) * X0 ** (3 - i) * Y0 ** i for i in (1, 2)))
    ok = ok and computed == S1_3 == sympy.expand(X1 + Y1 - X0 ** 2 * Y0 - X0 * Y0 ** 2)
    diverges = computed != binom_form
    return ok, f"p=3 S_1 = {computed}; binom(p-1,i) form {'differs (discrepancy)' if diverges else 'agrees'}"


# --- 3 ----------------------------------------------------------------------------

@criterion(3, "FV = VF = p, ring maps, V additive not multiplicative, exhaustive")
def test_criterion_03_operators():
    checked = []
    W3 = WittRing(galois_field(2), 3)
    W4 = WittRing(galois_field(4), 2)
    for W in (W3, W4):
        p_el = W.p_element()
        expect = tuple([W.base.zero, W.base.one] + [W.base.zero] * (W.n - 2))
        if p_el.coords != expect:
            return False, f"p = {p_el}"
        els = list(W.elements())
        for a in els:
            fv, vf = frobenius_w(verschiebung_truncated(a)), verschiebung_truncated(frobenius_w(a))
            if not (fv == vf == p_el * a == p_multiple(a)):
                return False, f"FV/VF/p mismatch at {a}"
        Wr = WittRing.of(W.base, W.n - 1)
        for a, b in itertools.product(els, repeat=2):
            if frobenius_w(a * b) != frobenius_w(a) * frobenius_w(b) or frobenius_w(a + b) != frobenius_w(a) + frobenius_w(b):
                return False, f"F not a ring map at {a}, {b}"
            if restriction(a * b, Wr) != restriction(a, Wr) * restriction(b, Wr) \
                    or restriction(a + b, Wr) != restriction(a, Wr) + restriction(b, Wr):
                return False, f"restriction not a ring map at {a}, {b}"
            if verschiebung_truncated(a + b) != verschiebung_truncated(a) + verschiebung_truncated(b):
                return False, f"V not additive at {a}, {b}"
        count = len(els) ** 2
        if W is W3:
            count = 0
            for a, b, c in itertools.product(els, repeat=3):
                count += 1
                if (a * b) * c != a * (b * c) or a * (b + c) != a * b + a * c:
                    return False, f"ring axioms fail at {a}, {b}, {c}"
        label = f"W_{W.n}(GF({W.base.size}))"
        checked.append(f"{label}: {len(els)} elements, {count} {'triples' if W is W3 else 'pairs'}")
    # V: W_2 -> W_3 additive over GF(2)
    W2 = WittRing.of(W3.base, 2)
    for a, b in itertools.product(list(W2.elements()), repeat=2):
        if verschiebung(a + b, W3) != verschiebung(a, W3) + verschiebung(b, W3):
            return False, "V: W_2 -> W_3 not additive"
    v = verschiebung_truncated(W3.one())
    sq, vsq = v * v, verschiebung_truncated(W3.one() * W3.one())
    ok = sq.coords == (0, 0, 1) and vsq.coords == (0, 1, 0)
    return ok, "; ".join(checked) + f"; V([1])^2 = {sq} != V([1]^2) = {vsq}"


# --- 4 ----------------------------------------------------------------------------

def _iso_by_tables(elements, add, mul, W, image):
    """``image`` is a bijection onto W that carries both tables across."""
    imgs = {e: image(e) for e in elements}
    if len(set(imgs.values())) != len(elements) or len(list(W.elements())) != len(elements):
        return False
    return all(imgs[add(x, y)] == imgs[x] + imgs[y] and imgs[mul(x, y)] == imgs[x] * imgs[y]
               for x, y in itertools.product(elements, repeat=2))


@criterion(4, "W_2(GF2) = Z/4, W_3(GF2) = Z/8, W_2(GF4) = GR(4,2), Wbar_n(GF(q)) = GF(q)")
def test_criterion_04_structures():
    F2, F4 = galois_field(2), galois_field(4)
    parts = []
    for n, N in ((2, 4), (3, 8)):
        W = WittRing(F2, n)
        ok = _iso_by_tables(list(range(N)), lambda a, b: (a + b) % N, lambda a, b: (a * b) % N, W, W.from_int)
        parts.append(ok)
    W = WittRing(F4, 2)
    g = W.teichmuller(F4.coerce("u"))
    gr = [(a, b) for a in range(4) for b in range(4)]

    def gr_mul(x, y):
        (a, b), (c, d) = x, y
        return ((a * c - b * d) % 4, (a * d + b * c - b * d) % 4)  # g^2 = -g - 1

    parts.append(_iso_by_tables(gr, lambda x, y: ((x[0] + y[0]) % 4, (x[1] + y[1]) % 4), gr_mul, W,
                                lambda e: W.from_int(e[0]) + W.from_int(e[1]) * g))
    for q, n in ((2, 2), (2, 3), (4, 2), (8, 2)):
        F = galois_field(q)
        Wq = WittRing(F, n)
        M = ModP(Wq)
        classes = sorted({M.canonical(a) for a in Wq.elements()})
        to_field = {c: c[0] for c in classes}
        ok = len(classes) == q and sorted(to_field.values()) == sorted(F.elements())
        for c, d in itertools.product(classes, repeat=2):
            s, m = M.canonical(Wq.from_raw(Wq.add(c, d))), M.canonical(Wq.from_raw(Wq.mul(c, d)))
            ok = ok and to_field[s] == F.add(c[0], d[0]) and to_field[m] == F.mul(c[0], d[0])
        parts.append(ok)
    return all(parts), "tables agree for 3 Witt rings and 4 Wbar quotients" if all(parts) else str(parts)


# --- 5 ----------------------------------------------------------------------------

@criterion(5, "ker(restriction) action law exhaustive; last-coordinate index refuted")
def test_criterion_05_ker_action():
    details = []
    ok = True
    for q, n in ((4, 2), (2, 3)):
        res = ker_r_action_check(galois_field(q), n)
        ok = ok and res.computed_law_holds and not res.last_index_matches and res.witness is not None
        details.append(f"W_{n}(GF({q})): {res.pairs} pairs, witness {res.witness}")
    return ok, "; ".join(details)


# --- 6 ----------------------------------------------------------------------------

@criterion(6, "Phi kernel = {t : t^p = 0} on the kernel gallery, n in {1,2}")
def test_criterion_06_phi_kernel():
    rows = []
    for key in gallery.KERNEL_GALLERY:
        R = gallery.ring(key)
        expected = sorted(t for t in R.elements() if R.is_zero(R.power(t, R.p)))
        for n in (1, 2):
            if sorted(phi_kernel(R, n, build_Q(R, n))) != expected:
                return False, f"{key} n={n}"
        rows.append(f"{key}:{len(expected)}")
    return True, "kernel sizes " + " ".join(rows)


# --- 7 ----------------------------------------------------------------------------

def _sympy_squarefree_mod2(text, names):
    syms = sympy.symbols(names)
    f = sympy.sympify(text.replace("^", "**"), locals={n: s for n, s in zip(names.split(), syms)})
    g = f
    for s in syms:
        d = sympy.diff(f, s)
        if sympy.Poly(d, *syms, modulus=2).is_zero:
            continue
        g = sympy.gcd(g, d, modulus=2)
    return sympy.Poly(g, *syms, modulus=2).total_degree() == 0


@criterion(7, "inseparable base change trio: reduced, reduced, repeated factor s'x + t'y + z")
def test_criterion_07_trio():
    r0 = is_reduced(gallery.ring("EX4"))
    r1 = is_reduced(gallery.ring("EX4S"))
    R2 = gallery.ring("EX4ST")
    r2 = is_reduced(R2)
    g = R2.poly_ring.parse("s'*x + t'*y + z")
    ok = r0.reduced and r1.reduced and not r2.reduced
    ok = ok and _sympy_squarefree_mod2("s*x^2 + t*y^2 + z^2", "s t x y z")
    ok = ok and _sympy_squarefree_mod2("a^2*x^2 + t*y^2 + z^2", "a t x y z")
    # every partial of the third vanishes, so it is a square; the square root is the witness
    ok = ok and g * g == R2.hypersurface and r2.witness.value == g
    return ok, f"nilpotent witness {r2.witness}, ({g})^2 = {R2.hypersurface}"


# --- 8 ----------------------------------------------------------------------------

def _order(R, code):
    vec = R.decode(code)
    return next((i for i, c in enumerate(vec) if c), 10 ** 9)


@criterion(8, "cofinality: J^(k+n-1) in W_n(m^k) on 200 products; t = k counterexample")
def test_criterion_08_cofinality():
    R = truncated_local_ring(2, 12)
    assert R.labels[1] == "x"
    rng = random.Random(SEED)

    def random_j(W):
        c0 = 0
        for i in range(1, 12):
            if rng.random() < 0.5:
                c0 |= 1 << i
        vec = [(c0 >> i) & 1 for i in range(12)]
        return W.from_raw((R.encode(vec),) + tuple(rng.randrange(R.size) for _ in range(W.n - 1)))

    for n in (2, 3):
        W = WittRing(R, n)
        for k in (1, 2, 3):
            t = k + n - 1
            for _ in range(200):
                prod = functools.reduce(lambda a, b: a * b, [random_j(W) for _ in range(t)])
                if any(_order(R, c) < k for c in prod.coords):
                    return False, f"n={n} k={k}: {prod} not in W_n(m^k)"
                if any(_order(R, c) < t - i for i, c in enumerate(prod.coords)):
                    return False, f"n={n} k={k}: coordinate bound fails at {prod}"
    found = []
    for n, k in ((2, 1), (3, 1), (3, 2)):
        W = WittRing(R, n)
        for _ in range(500):
            prod = functools.reduce(lambda a, b: a * b, [random_j(W) for _ in range(k)])
            if any(_order(R, c) < k for c in prod.coords):
                found.append(f"n={n} k={k}: {prod}")
                break
    ok = len(found) == 3
    return ok, "1200 products inside W_n(m^k); naive t = k counterexamples " + "; ".join(found)


# --- 9 ----------------------------------------------------------------------------

def _independent_certificate_check(R, n, D, cert):
    S = build_graded_system(R, n, D)
    acc, total = {}, 0
    for entry in cert:
        i, c = entry["row"], entry["multiplier"]
        for col, v in S.rows[i].items():
            acc[col] = (acc.get(col, 0) + c * v) % R.p
        total = (total + c * S.rhs[i]) % R.p
    return not any(acc.values()) and total != 0


@criterion(9, "heights: GF(q) = 1, dual numbers infinite, ordinary cubic 1, supersingular >= 2")
def test_criterion_09_heights():
    t0 = time.perf_counter()
    notes = []
    for q in (2, 3, 4, 8, 9):
        rep = height_search(galois_field(q), 2)
        if (rep.kind, rep.value) != ("exact", 1):
            return False, f"GF({q}): {rep.summary()}"
    rep = height_search(gallery.ring("DUAL2"), 2)
    if rep.kind != "infinity" or rep.witness != "x":
        return False, rep.summary()
    notes.append(rep.summary())
    ORD = gallery.ring("ORD3")
    if not (split_graded_system(ORD, 1, 3).feasible and fedder_check(ORD.hypersurface).f_split):
        return False, "ordinary cubic cone"
    SS = gallery.ring("SS3")
    n1 = split_graded_system(SS, 1, 3)
    if n1.feasible or not _independent_certificate_check(SS, 1, 3, n1.certificate):
        return False, "supersingular n=1 certificate"
    notes.append(f"supersingular n=1 certificate: {len(n1.certificate)} rows")
    for D in (3, 4, 5):
        rep = height_search(SS, 2, D)
        if rep.height() != {"kind": "lower_bound", "value": 2, "evidence_height": 2, "evidence_degree": D}:
            return False, f"D={D}: {rep.summary()}"
    elapsed = time.perf_counter() - t0
    notes.append(f"{elapsed:.1f} s")
    return elapsed <= 120, "; ".join(notes)


# --- 10 ---------------------------------------------------------------------------

@criterion(10, "Q models: pushout = Wbar at n = 2 on every finite gallery ring; n = 3 recorded")
def test_criterion_10_q_models():
    for key in gallery.finite_keys():
        if not compare_q_models(gallery.ring(key), 2).isomorphic:
            return False, f"{key} n=2 discrepancy"
    outcomes = []
    for key in ("GF2", "F2xF4", "DUAL2", "FAT2", "DUAL3"):
        rep = compare_q_models(gallery.ring(key), 3).report()
        outcomes.append(f"{key}:{rep['outcome']}")
    return True, f"{len(gallery.finite_keys())} rings at n=2; n=3 " + " ".join(outcomes)


# --- 11 ---------------------------------------------------------------------------

@criterion(11, "monotonicity on the gallery; n = 1 solver agrees with Fedder")
def test_criterion_11_monotone_and_fedder():
    for key in gallery.finite_keys():
        if not gallery.get(key).reduced:
            continue
        R = gallery.ring(key)
        split = [split_finite(R, n).split for n in (1, 2, 3)]
        if any(a and not b for a, b in zip(split, split[1:])):
            return False, f"{key}: {split}"
    for key in ("ORD3", "SS3", "CONIC2"):
        v = [split_graded_system(gallery.ring(key), n, 3).feasible for n in (1, 2)]
        if v[0] and not v[1]:
            return False, f"{key}: {v}"
    agree = []
    for key in gallery.FEDDER_GALLERY:
        R = gallery.ring(key)
        a = split_graded_system(R, 1, 3).feasible
        b = fedder_check(R.hypersurface).f_split
        if a != b:
            return False, f"{key}: solver {a}, Fedder {b}"
        agree.append(key)
    return len(agree) >= 6, f"Fedder agreement on {len(agree)} hypersurfaces"


# --- 12 ---------------------------------------------------------------------------

@criterion(12, "etale smoke: ht(GF2) = ht(GF4) = ht(GF8) = 1 through the full pipeline")
def test_criterion_12_etale():
    values = []
    for q in (2, 4, 8):
        R = parse_ring_dsl(f"ring F = GF({q})[] finite").build()
        rep = height_search(R, 2)
        values.append(rep.height())
    return all(v == {"kind": "exact", "value": 1} for v in values), str(values)


# --- 13 ---------------------------------------------------------------------------

EXTRA_CORPUS = [
    "ring A=GF(3)[x]/(x^2-1)finite",
    "ring B = GF(2)[x,y] / ((x+y)^2, x y) finite  # comment",
    "ring C = GF(5)[ a , b ] / ( a^2*b - 3*b^3 ) graded",
    "ring D = GF(4)[x] / (x^2 + u*x + 1) finite",
    "ring E = GF(2)[s,t,x] / (s*x^2 + t + 1) affine",
]


def _fixpoint(text):
    d1 = parse_ring_dsl(text)
    t1 = d1.to_text()
    d2 = parse_ring_dsl(t1)
    return d1 == d2 and d2.to_text() == t1


def _cli(args, hashseed):
    env = dict(os.environ, PYTHONHASHSEED=str(hashseed))
    out = subprocess.run([sys.executable, "-m", "qfpure.cli"] + args, capture_output=True, env=env, check=True)
    return out.stdout


@criterion(13, "CLI: parser fixpoint corpus, byte-identical JSON, suite within 5 minutes")
def test_criterion_13_cli():
    corpus = [e.text for e in gallery.GALLERY.values()] + EXTRA_CORPUS
    bad = [t for t in corpus if not _fixpoint(t)]
    if bad:
        return False, f"fixpoint fails: {bad}"
    joined = ";\n".join(corpus)
    if [d.to_text() for d in parse_ring_file(joined)] != [parse_ring_dsl(t).to_text() for t in corpus]:
        return False, "multi-declaration file differs"
    runs = [
        ["height", "--ring", "gallery:SS3", "--max-degree", "4", "--emit", "json", "--seed", "11"],
        ["verify", "--filter", "COFINALITY,EXAMPLE-4", "--emit", "json", "--seed", "11"],
    ]
    for args in runs:
        a, b = _cli(args, 1), _cli(args, 2)
        if a != b:
            return False, f"JSON differs for {' '.join(args)}"
        json.loads(a)
    total = time.perf_counter() - START
    return total <= 300, f"{len(corpus)} corpus cases; 2 JSON reports byte-identical; suite {total:.0f} s"


if __name__ == "__main__":
    failures = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failures += 1
    sys.exit(1 if failures else 0)
