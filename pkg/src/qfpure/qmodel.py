"""Exact ``Q_{R,n}`` models, ``Phi_{R,n}`` and splitting search over finite algebras.

Two models are built by enumeration:

``wbar``
    classes of ``W_n(R)`` modulo ``p W_n(R)``; ``r`` acts by ``[r^p] * -``.
``pushout``
    ``(R ⊕ W_n(R))`` modulo ``{(r^{n-1}(a), -F(a))}``; ``r`` acts by
    ``(r * -, [r^p] * -)``.

Both are elementary abelian p-groups, so a splitting ``sigma: Q -> R`` is a
GF(p)-linear map and its existence is a linear feasibility question.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .linalg import AffineSystem
from .rings import FiniteAlgebra, RingError
from .witt import WittRing, frobenius_w, p_multiple

#: refuse to enumerate more elements than this when building Q
ENUM_CAP = 1 << 17


class QModelError(ValueError):
    pass


def _partition(elements, subgroup, add):
    """Cosets of ``subgroup``; returns (element -> class id, canonical reps)."""
    class_of: Dict = {}
    reps: List = []
    for e in elements:
        if e in class_of:
            continue
        coset = [add(e, h) for h in subgroup]
        cid = len(reps)
        reps.append(min(coset))
        for c in coset:
            class_of[c] = cid
    return class_of, reps


@dataclass
class QModel:
    """An enumerated ``Q_{R,n}`` with its group structure and ``R``-action."""

    R: FiniteAlgebra
    n: int
    kind: str
    W: WittRing
    reps: List
    class_of: Dict
    _add: Callable
    _act: Callable
    _phi: Callable
    _lift: Callable  # Witt vector coordinates -> domain element
    basis: List[int] = field(default_factory=list)
    coords: Dict[int, Tuple[int, ...]] = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.reps)

    @property
    def zero(self) -> int:
        return self.class_of[self._lift(self.W.zero().coords)]

    def cls(self, element) -> int:
        return self.class_of[element]

    def add(self, i: int, j: int) -> int:
        return self.class_of[self._add(self.reps[i], self.reps[j])]

    def act(self, r, i: int) -> int:
        return self.class_of[self._act(r, self.reps[i])]

    def phi(self, r) -> int:
        return self.class_of[self._phi(r)]

    def of_witt(self, coords) -> int:
        """Class of ``F_*`` of a Witt vector."""
        return self.class_of[self._lift(tuple(coords))]

    def scalar(self, c: int, i: int) -> int:
        acc = self.zero
        for _ in range(c % self.R.p):
            acc = self.add(acc, i)
        return acc

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def _find_basis(self):
        # greedy generators; span bookkeeping gives every class its coordinates
        p = self.R.p
        span: Dict[int, Tuple[int, ...]] = {self.zero: ()}
        basis: List[int] = []
        for cid in range(self.size):
            if cid in span:
                continue
            k = len(basis)
            basis.append(cid)
            new: Dict[int, Tuple[int, ...]] = {}
            multiples = [self.zero]
            for _ in range(p - 1):
                multiples.append(self.add(multiples[-1], cid))
            for s, vec in span.items():
                for c, m in enumerate(multiples):
                    new[self.add(s, m)] = vec + (0,) * (k - len(vec)) + (c,)
            span = new
        if len(span) != self.size:
            raise QModelError("Q is not an elementary abelian p-group")
        d = len(basis)
        self.basis = basis
        self.coords = {cid: vec + (0,) * (d - len(vec)) for cid, vec in span.items()}
        if p ** d != self.size:
            raise QModelError("basis size inconsistent with |Q|")


def build_Q(R: FiniteAlgebra, n: int, kind: str = "wbar", cap: int = ENUM_CAP) -> QModel:
    if not isinstance(R, FiniteAlgebra):
        raise QModelError("exact Q models need a finite algebra")
    if kind not in ("wbar", "pushout"):
        raise QModelError(f"unknown model kind {kind!r}")
    W = WittRing(R, n)
    size_W = R.size ** n
    if size_W > cap or (kind == "pushout" and size_W * R.size > cap):
        raise QModelError(f"enumeration of W_{n}({R.name}) exceeds cap {cap}")
    elements = list(itertools.product(range(R.size), repeat=n))
    F = R.frobenius

    def teich_p(r):
        return (F(r),) + (R.zero,) * (n - 1)

    if kind == "wbar":
        sub = sorted({p_multiple(W.from_raw(a)).coords for a in elements})

        def add(a, b):
            return W.add(a, b)

        def act(r, a):
            return W.mul(teich_p(r), a)

        def phi(r):
            return teich_p(r)

        def lift(w):
            return w

        domain = elements
    else:
        sub = sorted({(a[0], W.neg(frobenius_w(W.from_raw(a)).coords)) for a in elements})

        def add(a, b):
            return (R.add(a[0], b[0]), W.add(a[1], b[1]))

        def act(r, a):
            return (R.mul(r, a[0]), W.mul(teich_p(r), a[1]))

        def phi(r):
            return (r, W.zero().coords)

        def lift(w):
            return (R.zero, w)

        domain = [(r, w) for r in range(R.size) for w in elements]

    class_of, reps = _partition(domain, sub, add)
    Q = QModel(R, n, kind, W, reps, class_of, add, act, phi, lift)
    Q._find_basis()
    return Q


def phi(R: FiniteAlgebra, n: int, r, Q: Optional[QModel] = None) -> int:
    """Class of ``F_*[r^p]`` in ``Q_{R,n}``."""
    Q = Q or build_Q(R, n)
    return Q.phi(R.coerce(r))


def phi_kernel(R: FiniteAlgebra, n: int, Q: Optional[QModel] = None) -> List[int]:
    """Elements of ``R`` (as codes) sent to zero by ``Phi_{R,n}``."""
    Q = Q or build_Q(R, n)
    zero = Q.zero
    return [r for r in R.elements() if Q.phi(r) == zero]


def v_annihilates(Q: QModel) -> bool:
    """Check that ``V(W_{n-1}(R))`` acts by zero on ``Q`` through ``beta -> F(beta) * -``."""
    R, W, n = Q.R, Q.W, Q.n
    if n == 1:
        return True
    gens = []
    for i in range(1, n):
        for k in range(R.dim):
            coords = [R.zero] * n
            coords[i] = R.basis_element(k)
            gens.append(tuple(coords))
    zero = Q.zero
    for g in gens:
        Fg = frobenius_w(W.from_raw(g)).coords
        for b in Q.basis:
            rep = Q.reps[b]
            if Q.kind == "wbar":
                moved = W.mul(Fg, rep)
            else:
                moved = (R.mul(g[0], rep[0]), W.mul(Fg, rep[1]))
            if Q.class_of[moved] != zero:
                return False
    return True


@dataclass
class SplitResult:
    split: bool
    n: int
    kind: str
    sigma: Optional[Dict[int, int]] = None  # class id -> R element code
    certificate: Optional[Dict[int, int]] = None
    verified: bool = False
    system_size: Tuple[int, int] = (0, 0)

    @property
    def verdict(self) -> str:
        return "split" if self.split else "not_split"


def _splitting_system(Q: QModel) -> AffineSystem:
    R = Q.R
    p, d = R.p, R.dim
    sys_ = AffineSystem(p)
    for gi in range(Q.dimension):
        for k in range(d):
            sys_.var(("sigma", gi, k))

    def sigma_expr(cid):
        # linear form for the k-th coordinate of sigma(class cid)
        vec = Q.coords[cid]
        return [{sys_.var(("sigma", gi, k)): c for gi, c in enumerate(vec) if c} for k in range(d)]

    def times(r_code, forms):
        # coordinates of r * sigma(...) as linear forms
        out = [dict() for _ in range(d)]
        rvec = R.decode(r_code)
        for j in range(d):
            # contribution of coordinate j of sigma: basis_j * r
            prod = R.decode(R.mul(R.basis_element(j), r_code))
            for k, c in enumerate(prod):
                if c:
                    for var, a in forms[j].items():
                        out[k][var] = (out[k].get(var, 0) + a * c) % p
        del rvec
        return out

    for k_r in range(d):
        r = R.basis_element(k_r)
        for gi, cid in enumerate(Q.basis):
            lhs = sigma_expr(Q.act(r, cid))
            rhs = times(r, sigma_expr(cid))
            for k in range(d):
                row = dict(lhs[k])
                for var, a in rhs[k].items():
                    row[var] = (row.get(var, 0) - a) % p
                sys_.add_row(row, 0, tag=("linear", k_r, gi, k))
    one_forms = sigma_expr(Q.phi(R.one))
    unit = R.decode(R.one)
    for k in range(d):
        sys_.add_row(one_forms[k], unit[k], tag=("unit", k))
    return sys_


def _sigma_table(Q: QModel, solution) -> Dict[int, int]:
    R = Q.R
    d = R.dim
    images = []
    for gi in range(Q.dimension):
        images.append([solution[gi * d + k] for k in range(d)])
    table = {}
    for cid, vec in Q.coords.items():
        acc = [0] * d
        for gi, c in enumerate(vec):
            if c:
                acc = [(a + c * b) % R.p for a, b in zip(acc, images[gi])]
        table[cid] = R.encode(acc)
    return table


def verify_splitting(Q: QModel, sigma: Dict[int, int], samples: int = 2000, seed: int = 0) -> bool:
    """Re-check a splitting table by direct evaluation."""
    R = Q.R
    for r in (R.basis_element(k) for k in range(R.dim)):
        if sigma[Q.phi(r)] != r:
            return False
    for r in (R.basis_element(k) for k in range(R.dim)):
        for cid in range(Q.size):
            if sigma[Q.act(r, cid)] != R.mul(r, sigma[cid]):
                return False
    if sigma[Q.phi(R.one)] != R.one:
        return False
    ids = range(Q.size)
    if Q.size * Q.size <= samples:
        pairs = itertools.product(ids, ids)
    else:
        rng = random.Random(seed)
        pairs = [(rng.randrange(Q.size), rng.randrange(Q.size)) for _ in range(samples)]
    for i, j in pairs:
        if sigma[Q.add(i, j)] != R.add(sigma[i], sigma[j]):
            return False
    return True


def split_finite(R: FiniteAlgebra, n: int, kind: str = "wbar", Q: Optional[QModel] = None) -> SplitResult:
    """Decide whether ``Phi_{R,n}`` admits an ``R``-linear retraction."""
    Q = Q or build_Q(R, n, kind)
    system = _splitting_system(Q)
    res = system.solve()
    if res.feasible:
        table = _sigma_table(Q, res.solution)
        ok = verify_splitting(Q, table)
        if not ok:
            raise AssertionError("solver produced a splitting that fails verification")
        return SplitResult(True, n, Q.kind, sigma=table, verified=True,
                           system_size=(len(system.rows), system.nvars))
    ok = system.check_certificate(res.certificate)
    return SplitResult(False, n, Q.kind, certificate=res.certificate, verified=ok,
                       system_size=(len(system.rows), system.nvars))


@dataclass
class QComparison:
    isomorphic: bool
    n: int
    sizes: Tuple[int, int]
    well_defined: bool
    bijective: bool
    equivariant: bool
    additive: bool
    mapping: Optional[Dict[int, int]] = None

    def report(self) -> dict:
        return {
            "outcome": "isomorphic" if self.isomorphic else "discrepancy",
            "n": self.n,
            "pushout_size": self.sizes[0],
            "wbar_size": self.sizes[1],
            "well_defined": self.well_defined,
            "bijective": self.bijective,
            "equivariant": self.equivariant,
            "additive": self.additive,
        }


def compare_q_models(R: FiniteAlgebra, n: int) -> QComparison:
    """Check the canonical map pushout-Q -> wbar-Q, ``(r, w) -> Phi(r) + [w]``."""
    P = build_Q(R, n, "pushout")
    B = build_Q(R, n, "wbar")
    W = B.W

    def image(pair):
        r, w = pair
        return B.class_of[W.add(B._phi(r), w)]

    mapping: Dict[int, int] = {}
    well_defined = True
    for elem, cid in P.class_of.items():
        img = image(elem)
        prev = mapping.setdefault(cid, img)
        if prev != img:
            well_defined = False
            break
    bijective = well_defined and len(set(mapping.values())) == B.size == P.size
    equivariant = additive = False
    if well_defined:
        equivariant = all(
            mapping[P.act(R.basis_element(k), cid)] == B.act(R.basis_element(k), mapping[cid])
            for k in range(R.dim) for cid in range(P.size))
        additive = all(
            mapping[P.add(i, j)] == B.add(mapping[i], mapping[j])
            for i in P.basis for j in range(P.size))
    iso = well_defined and bijective and equivariant and additive
    return QComparison(iso, n, (P.size, B.size), well_defined, bijective, equivariant, additive,
                       mapping if well_defined else None)
