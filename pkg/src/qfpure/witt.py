"""Truncated p-typical Witt vectors over the rings in :mod:`qfpure.rings`.

The universal sum, product and negation polynomials are produced once per
``(p, n)`` by inverting the ghost map over the integers; every division by a
power of p is exact or the generation aborts.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .poly import PolyRing, SparsePoly, exact_div_by_int
from .rings import FiniteAlgebra, IntegerRing, Ring, RingElement, is_prime

#: generation caps on the truncation length, by prime
LENGTH_CAPS = {2: 4, 3: 4, 5: 3}
DEFAULT_LENGTH_CAP = 2


class WittError(ValueError):
    pass


def ghost_poly(ring: PolyRing, offset: int, m: int, p: int) -> SparsePoly:
    """``w_m(Z) = sum_{i<=m} p^i Z_i^(p^(m-i))`` with ``Z_i`` = variable ``offset + i``."""
    out = ring.zero()
    for i in range(m + 1):
        out = out + ring.gen(offset + i) ** (p ** (m - i)) * (p ** i)
    return out


@dataclass(frozen=True)
class WittPolyTable:
    p: int
    n: int
    ring: PolyRing  # ZZ[X_0..X_{n-1}, Y_0..Y_{n-1}]
    sums: Tuple[SparsePoly, ...]
    products: Tuple[SparsePoly, ...]
    negations: Tuple[SparsePoly, ...]  # in the X variables only

    def X(self, i):
        return self.ring.gen(i)

    def Y(self, i):
        return self.ring.gen(self.n + i)

    def ghost_X(self, m):
        return ghost_poly(self.ring, 0, m, self.p)

    def ghost_Y(self, m):
        return ghost_poly(self.ring, self.n, m, self.p)

    def check_ghost_compatibility(self) -> bool:
        for m in range(self.n):
            pk = [self.p ** i for i in range(m + 1)]

            def ghost_of(polys):
                return sum((polys[i] ** (self.p ** (m - i)) * pk[i] for i in range(m + 1)),
                           self.ring.zero())

            if ghost_of(self.sums) != self.ghost_X(m) + self.ghost_Y(m):
                return False
            if ghost_of(self.products) != self.ghost_X(m) * self.ghost_Y(m):
                return False
            if ghost_of(self.negations) != -self.ghost_X(m):
                return False
        return True


_TABLES: Dict[Tuple[int, int], WittPolyTable] = {}
_TABLE_LOCK = threading.Lock()


def _invert_ghost(target: SparsePoly, previous: List[SparsePoly], p: int, m: int) -> SparsePoly:
    acc = target
    for i, prev in enumerate(previous):
        acc = acc - prev ** (p ** (m - i)) * (p ** i)
    return exact_div_by_int(acc, p ** m)


def gen_witt_polys(p: int, n: int, cap: Optional[int] = None) -> WittPolyTable:
    """Universal Witt polynomials for length ``n``, memoized per ``(p, n)``."""
    if not is_prime(p):
        raise WittError(f"{p} is not prime")
    limit = cap if cap is not None else LENGTH_CAPS.get(p, DEFAULT_LENGTH_CAP)
    if n < 1 or n > limit:
        raise WittError(f"length {n} outside supported range 1..{limit} for p={p}")
    key = (p, n)
    table = _TABLES.get(key)
    if table is not None:
        return table
    with _TABLE_LOCK:
        if key in _TABLES:
            return _TABLES[key]
        names = [f"X{i}" for i in range(n)] + [f"Y{i}" for i in range(n)]
        ring = PolyRing(names, 0)
        sums: List[SparsePoly] = []
        prods: List[SparsePoly] = []
        negs: List[SparsePoly] = []
        for m in range(n):
            gx = ghost_poly(ring, 0, m, p)
            gy = ghost_poly(ring, n, m, p)
            sums.append(_invert_ghost(gx + gy, sums, p, m))
            prods.append(_invert_ghost(gx * gy, prods, p, m))
            negs.append(_invert_ghost(-gx, negs, p, m))
        table = WittPolyTable(p, n, ring, tuple(sums), tuple(prods), tuple(negs))
        _TABLES[key] = table
        return table


def _compile(poly: SparsePoly, ring: Ring):
    """Terms of ``poly`` as ``(raw coefficient, ((var, exp), ...))`` in ``ring``."""
    out = []
    for m, c in poly.terms.items():
        rc = ring.from_int(c)
        if ring.is_zero(rc):
            continue
        out.append((rc, tuple((i, e) for i, e in enumerate(m) if e)))
    return tuple(out)


_RING_CACHE: Dict[Tuple[object, int], "WittRing"] = {}
_RING_LOCK = threading.Lock()


class WittRing:
    """``W_n(R)`` for a coefficient ring ``R``.

    Elements are :class:`WittVector` instances holding raw coordinates of ``R``.
    """

    def __init__(self, base: Ring, n: int, cap: Optional[int] = None):
        if n < 1:
            raise WittError("length must be at least 1")
        self.base = base
        self.n = n
        p = getattr(base, "characteristic", 0)
        if isinstance(base, IntegerRing):
            raise WittError("integer coefficients need an explicit prime; use WittRing.over_integers")
        self.p = p
        self._setup(cap)

    @classmethod
    def of(cls, base: Ring, n: int) -> "WittRing":
        """Shared instance per ``(base, n)``, so derived vectors compare equal."""
        key = (base, n)
        with _RING_LOCK:
            W = _RING_CACHE.get(key)
            if W is None:
                W = _RING_CACHE[key] = cls(base, n)
        return W

    @classmethod
    def over_integers(cls, p: int, n: int, cap: Optional[int] = None) -> "WittRing":
        obj = cls.__new__(cls)
        obj.base = IntegerRing()
        obj.n = n
        obj.p = p
        obj._setup(cap)
        return obj

    def _setup(self, cap):
        self.table = gen_witt_polys(self.p, self.n, cap)
        base = self.base
        self._sum = [_compile(s, base) for s in self.table.sums]
        self._prod = [_compile(s, base) for s in self.table.products]
        self._neg = [_compile(s, base) for s in self.table.negations]
        self.char_p = bool(base.characteristic)

    def __repr__(self):
        return f"W_{self.n}({self.base!r})"

    # construction
    def __call__(self, coords) -> "WittVector":
        coords = tuple(self.base.coerce(c) for c in coords)
        if len(coords) != self.n:
            raise WittError(f"expected {self.n} coordinates, got {len(coords)}")
        return WittVector(self, coords)

    def from_raw(self, coords) -> "WittVector":
        return WittVector(self, tuple(coords))

    def zero(self) -> "WittVector":
        return WittVector(self, (self.base.zero,) * self.n)

    def one(self) -> "WittVector":
        return self.teichmuller(self.base.one)

    def teichmuller(self, r) -> "WittVector":
        r = self.base.coerce(r)
        return WittVector(self, (r,) + (self.base.zero,) * (self.n - 1))

    def from_int(self, k: int) -> "WittVector":
        one = self.one()
        acc = self.zero()
        base = one if k >= 0 else -one
        for _ in range(abs(k)):
            acc = acc + base
        return acc

    def p_element(self) -> "WittVector":
        """``p`` itself, i.e. ``(0, 1, 0, ..., 0)`` in characteristic p."""
        return self.from_int(self.p)

    def elements(self, cap: int = 1 << 16):
        base = self.base
        if not isinstance(base, FiniteAlgebra):
            raise WittError("enumeration requires a finite coefficient algebra")
        total = base.size ** self.n
        if total > cap:
            raise WittError(f"|W_{self.n}(R)| = {total} exceeds enumeration cap {cap}")
        import itertools

        for coords in itertools.product(range(base.size), repeat=self.n):
            yield WittVector(self, coords)

    # evaluation of the universal polynomials
    def _eval(self, compiled, values):
        base = self.base
        add, mul, power = base.add, base.mul, base.power
        total = base.zero
        cache = {}
        for coef, mono in compiled:
            term = coef
            for i, e in mono:
                v = values[i]
                if e == 1:
                    term = mul(term, v)
                    continue
                key = (i, e)
                pv = cache.get(key)
                if pv is None:
                    pv = power(v, e)
                    cache[key] = pv
                term = mul(term, pv)
            total = add(total, term)
        return total

    def _binary(self, polys, a, b):
        vals = tuple(a) + tuple(b)
        # coordinate m only involves X_0..X_m, Y_0..Y_m, but the table is laid out
        # as X_0..X_{n-1}, Y_0..Y_{n-1} so the full vector is passed
        return tuple(self._eval(polys[m], vals) for m in range(self.n))

    def add(self, a, b):
        return self._binary(self._sum, a, b)

    def mul(self, a, b):
        return self._binary(self._prod, a, b)

    def neg(self, a):
        vals = tuple(a) + (self.base.zero,) * self.n
        return tuple(self._eval(self._neg[m], vals) for m in range(self.n))

    def ghost(self, a) -> Tuple[int, ...]:
        if self.char_p:
            raise WittError("ghost components are only meaningful over torsion-free rings")
        p = self.p
        return tuple(sum(p ** i * a[i] ** (p ** (m - i)) for i in range(m + 1))
                     for m in range(self.n))


@dataclass(frozen=True)
class WittVector:
    parent: WittRing
    coords: tuple

    def _same(self, other: "WittVector"):
        if not isinstance(other, WittVector):
            if isinstance(other, int):
                return self.parent.from_int(other)
            raise WittError(f"cannot combine Witt vector with {type(other).__name__}")
        if other.parent is not self.parent:
            if other.parent.n != self.parent.n:
                raise WittError("length mismatch")
            raise WittError("coefficient ring mismatch")
        return other

    def __add__(self, other):
        other = self._same(other)
        return WittVector(self.parent, self.parent.add(self.coords, other.coords))

    __radd__ = __add__

    def __neg__(self):
        return WittVector(self.parent, self.parent.neg(self.coords))

    def __sub__(self, other):
        return self + (-self._same(other))

    def __rsub__(self, other):
        return self._same(other) + (-self)

    def __mul__(self, other):
        other = self._same(other)
        return WittVector(self.parent, self.parent.mul(self.coords, other.coords))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        result = self.parent.one()
        for _ in range(e):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, WittVector):
            return self.parent is other.parent and self.coords == other.coords
        if isinstance(other, int):
            return self == self.parent.from_int(other)
        return NotImplemented

    def __hash__(self):
        return hash((id(self.parent), self.coords))

    def __len__(self):
        return len(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def is_zero(self):
        return all(self.parent.base.is_zero(c) for c in self.coords)

    def coordinate(self, i) -> RingElement:
        return RingElement(self.parent.base, self.coords[i])

    def __str__(self):
        return "(" + ", ".join(self.parent.base.format(c) for c in self.coords) + ")"

    def __repr__(self):
        return f"WittVector{self}"


# the named operations


def witt_add(a: WittVector, b: WittVector) -> WittVector:
    return a + b


def witt_mul(a: WittVector, b: WittVector) -> WittVector:
    return a * b


def witt_neg(a: WittVector) -> WittVector:
    return -a


def ghost_map(a: WittVector) -> Tuple[int, ...]:
    return a.parent.ghost(a.coords)


def teichmuller(r, W: WittRing) -> WittVector:
    return W.teichmuller(r)


def _require_char_p(W: WittRing):
    if not W.char_p:
        raise WittError("operation requires a characteristic-p coefficient ring")


def frobenius_w(a: WittVector) -> WittVector:
    """Coordinatewise p-th power; the functorial Witt Frobenius."""
    W = a.parent
    _require_char_p(W)
    return WittVector(W, tuple(W.base.frobenius(c) for c in a.coords))


def verschiebung(a: WittVector, target: Optional[WittRing] = None) -> WittVector:
    """``(a_0, ..., a_{n-1}) -> (0, a_0, ..., a_{n-1})`` into ``W_{n+1}``."""
    W = a.parent
    if target is None:
        target = WittRing.of(W.base, W.n + 1)
    if target.n != W.n + 1 or target.base is not W.base:
        raise WittError("target must be W_{n+1} over the same ring")
    return WittVector(target, (W.base.zero,) + a.coords)


def verschiebung_truncated(a: WittVector) -> WittVector:
    """Shift right inside ``W_n``, dropping the last coordinate."""
    W = a.parent
    return WittVector(W, (W.base.zero,) + a.coords[:-1])


def restriction(a: WittVector, target: Optional[WittRing] = None) -> WittVector:
    """Drop the last coordinate: ``W_n(R) -> W_{n-1}(R)``."""
    W = a.parent
    if W.n < 2:
        raise WittError("restriction needs length at least 2")
    if target is None:
        target = WittRing.of(W.base, W.n - 1) if W.char_p else WittRing.over_integers(W.p, W.n - 1)
    return WittVector(target, a.coords[:-1])


def restriction_to_base(a: WittVector):
    """``r^{n-1}``: the first coordinate, as a raw element of ``R``."""
    return a.coords[0]


def p_multiple(a: WittVector) -> WittVector:
    """``p * a = (0, a_0^p, ..., a_{n-2}^p)`` in characteristic p."""
    W = a.parent
    _require_char_p(W)
    F = W.base.frobenius
    return WittVector(W, (W.base.zero,) + tuple(F(c) for c in a.coords[:-1]))


def ker_restriction_action(a: WittVector, r) -> WittVector:
    """``a * V^{n-1}([r])`` by direct Witt multiplication.

    The product always lies in the kernel of ``r^{n-1}``; its last coordinate is
    ``a_0^(p^(n-1)) * r``.
    """
    W = a.parent
    base = W.base
    r = base.coerce(r)
    v = W.from_raw((base.zero,) * (W.n - 1) + (r,))
    out = a * v
    if any(not base.is_zero(c) for c in out.coords[:-1]):
        raise AssertionError("product escaped the kernel of restriction")
    return out


class ModP:
    """The quotient ``W̄_n(R) = W_n(R) / p W_n(R)`` over a finite algebra.

    Classes are computed by enumerating ``im(p)`` and taking orbit minima, so
    the canonical representative is the smallest coordinate tuple in the coset.
    """

    def __init__(self, W: WittRing):
        _require_char_p(W)
        if not isinstance(W.base, FiniteAlgebra):
            raise WittError("exact W̄_n classes are implemented for finite algebras")
        self.W = W
        base = W.base
        import itertools

        image = set()
        for coords in itertools.product(range(base.size), repeat=max(W.n - 1, 0)):
            a = W.from_raw(tuple(coords) + (base.zero,))
            image.add(p_multiple(a).coords)
        self.image = frozenset(image)
        self._canon: Dict[tuple, tuple] = {}

    def is_in_im_p(self, a: WittVector) -> bool:
        return a.coords in self.image

    def canonical(self, a: WittVector) -> tuple:
        c = self._canon.get(a.coords)
        if c is None:
            W = self.W
            coset = [W.add(a.coords, x) for x in self.image]
            c = min(coset)
            for member in coset:
                self._canon[member] = c
        return c

    def cls(self, a: WittVector) -> "WbarClass":
        return WbarClass(self, self.canonical(a))

    def same_class(self, a: WittVector, b: WittVector) -> bool:
        return (a - b).coords in self.image


@dataclass(frozen=True)
class WbarClass:
    quotient: ModP
    rep: tuple

    def is_zero(self):
        return self.rep == self.quotient.W.zero().coords

    def representative(self) -> WittVector:
        return self.quotient.W.from_raw(self.rep)


def modp_class(a: WittVector, quotient: Optional[ModP] = None) -> WbarClass:
    return (quotient or ModP(a.parent)).cls(a)


def is_in_im_p(a: WittVector) -> bool:
    """Membership in ``{(0, b_0^p, ..., b_{n-2}^p)}`` checked coordinatewise."""
    W = a.parent
    _require_char_p(W)
    base = W.base
    if not base.is_zero(a.coords[0]):
        return False
    if isinstance(base, FiniteAlgebra):
        fro = frobenius_image(base)
        return all(c in fro for c in a.coords[1:])
    raise WittError("membership test needs an enumerable coefficient ring")


def is_in_im_V(a: WittVector) -> bool:
    return a.parent.base.is_zero(a.coords[0])


def frobenius_image(R: FiniteAlgebra) -> frozenset:
    return frozenset(R.frobenius(a) for a in R.elements(cap=max(R.dim, 12)))


def witt_ideal_membership(a: WittVector, kind: str, k: int = 1) -> bool:
    """Membership in ``W_n(m^k)`` (``kind="Wmk"``) or in ``J`` (``kind="J"``).

    ``J`` is the kernel of ``W_n(R) -> R/m``: first coordinate in ``m``. For
    ``J^t`` use sampled products, see :func:`qfpure.suite.cofinality_check`.
    """
    R = a.parent.base
    if not isinstance(R, FiniteAlgebra) or R.maximal_ideal is None:
        raise WittError("coefficient ring has no designated maximal ideal")
    if kind == "J":
        return R.in_span(R.ideal_span(R.maximal_ideal), a.coords[0])
    if kind == "Wmk":
        sp = R.ideal_power(R.maximal_ideal, k)
        return all(R.in_span(sp, c) for c in a.coords)
    raise WittError(f"unknown ideal kind {kind!r}")


def m_adic_order(R: FiniteAlgebra, a, limit: int = 64) -> int:
    """Largest ``k`` with ``a`` in ``m^k`` (``limit`` for zero)."""
    if a == R.zero:
        return limit
    k = 0
    while k < limit and R.in_span(R.ideal_power(R.maximal_ideal, k + 1), a):
        k += 1
    return k
