"""Sparse multivariate polynomials over the integers or GF(p).

Polynomials live in a :class:`PolyRing`, which fixes the variable names, the
coefficient domain (``modulus == 0`` for the integers) and the monomial order.
Terms are stored as ``{exponent_tuple: coefficient}`` with no zero entries.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, Sequence, Tuple

Monomial = Tuple[int, ...]

#: hard upper guard on any single exponent
MAX_EXPONENT = 1 << 16


class PolyError(ValueError):
    """Raised on domain/arity mismatch or an invalid polynomial operation."""


class InexactDivisionError(ArithmeticError):
    """A coefficient was not divisible by the requested integer."""


def _grevlex_key(m: Monomial):
    return (sum(m), tuple(-e for e in reversed(m)))


def _lex_key(m: Monomial):
    return m


@dataclass(frozen=True)
class MonomialOrder:
    """A multiplicative well-order on monomials.

    ``kind`` is ``"grevlex"``, ``"lex"`` or ``"elim"``. The elimination order
    compares the first ``block`` variables by grevlex and breaks ties by
    grevlex on the remaining ones, so any monomial involving the first block
    is larger than every monomial free of it.
    """

    kind: str = "grevlex"
    block: int = 0

    def __post_init__(self):
        if self.kind not in ("grevlex", "lex", "elim"):
            raise PolyError(f"unknown monomial order {self.kind!r}")

    def key(self, m: Monomial):
        if self.kind == "grevlex":
            return _grevlex_key(m)
        if self.kind == "lex":
            return _lex_key(m)
        k = self.block
        return (_grevlex_key(m[:k]), _grevlex_key(m[k:]))


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    out = tuple(x + y for x, y in zip(a, b))
    if any(e > MAX_EXPONENT for e in out):
        raise OverflowError("exponent exceeds configured limit")
    return out


def mono_divides(a: Monomial, b: Monomial) -> bool:
    """True when ``a`` divides ``b``."""
    return all(x <= y for x, y in zip(a, b))


def mono_div(b: Monomial, a: Monomial) -> Monomial:
    return tuple(y - x for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


class PolyRing:
    """Polynomial ring ``Z[names]`` (``modulus=0``) or ``GF(p)[names]``."""

    def __init__(self, names: Sequence[str], modulus: int = 0,
                 order: MonomialOrder = GREVLEX):
        if modulus < 0 or modulus == 1:
            raise PolyError(f"invalid modulus {modulus}")
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise PolyError("duplicate variable names")
        self.modulus = modulus
        self.order = order
        self.nvars = len(self.names)

    def __repr__(self):
        dom = "ZZ" if self.modulus == 0 else f"GF({self.modulus})"
        return f"PolyRing({dom}[{','.join(self.names)}], {self.order.kind})"

    def __eq__(self, other):
        return (isinstance(other, PolyRing) and self.names == other.names
                and self.modulus == other.modulus and self.order == other.order)

    def __hash__(self):
        return hash((self.names, self.modulus, self.order))

    # construction helpers
    def _coef(self, c: int) -> int:
        return c % self.modulus if self.modulus else c

    def zero(self) -> "SparsePoly":
        return SparsePoly(self, {})

    def one(self) -> "SparsePoly":
        return self.const(1)

    def const(self, c: int) -> "SparsePoly":
        return SparsePoly.from_terms(self, {(0,) * self.nvars: c})

    def gen(self, i) -> "SparsePoly":
        if isinstance(i, str):
            i = self.names.index(i)
        e = [0] * self.nvars
        e[i] = 1
        return SparsePoly(self, {tuple(e): 1})

    def gens(self):
        return tuple(self.gen(i) for i in range(self.nvars))

    def monomial(self, exps: Monomial, c: int = 1) -> "SparsePoly":
        return SparsePoly.from_terms(self, {tuple(exps): c})

    def parse(self, text: str) -> "SparsePoly":
        from .dsl import parse_poly

        return parse_poly(text, self)

    def with_modulus(self, modulus: int) -> "PolyRing":
        return PolyRing(self.names, modulus, self.order)

    def with_order(self, order: MonomialOrder) -> "PolyRing":
        return PolyRing(self.names, self.modulus, order)


class SparsePoly:
    """Immutable sparse polynomial. Use ring helpers or arithmetic to build."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: Dict[Monomial, int]):
        # caller guarantees canonical terms (reduced, nonzero, correct arity)
        self.ring = ring
        self.terms = terms
        self._hash = None

    @classmethod
    def from_terms(cls, ring: PolyRing, terms) -> "SparsePoly":
        out: Dict[Monomial, int] = {}
        items = terms.items() if isinstance(terms, dict) else terms
        for m, c in items:
            m = tuple(m)
            if len(m) != ring.nvars:
                raise PolyError(f"exponent vector {m} has wrong arity")
            if any(e < 0 for e in m):
                raise PolyError("negative exponent")
            if any(e > MAX_EXPONENT for e in m):
                raise OverflowError("exponent exceeds configured limit")
            c = ring._coef(out.get(m, 0) + c)
            if c:
                out[m] = c
            else:
                out.pop(m, None)
        return cls(ring, out)

    # basic protocol
    def __iter__(self) -> Iterator[Tuple[Monomial, int]]:
        return iter(self.terms.items())

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, int):
            return self == self.ring.const(other)
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def _check(self, other) -> "SparsePoly":
        if isinstance(other, int):
            return self.ring.const(other)
        if not isinstance(other, SparsePoly):
            raise PolyError(f"cannot combine polynomial with {type(other).__name__}")
        if other.ring.modulus != self.ring.modulus:
            raise PolyError("coefficient domain mismatch")
        if other.ring.nvars != self.ring.nvars:
            raise PolyError("arity mismatch")
        if other.ring != self.ring:
            raise PolyError("polynomials belong to different rings")
        return other

    def __add__(self, other):
        other = self._check(other)
        out = dict(self.terms)
        mod = self.ring.modulus
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if mod:
                v %= mod
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return SparsePoly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        mod = self.ring.modulus
        if mod:
            return SparsePoly(self.ring, {m: (-c) % mod for m, c in self.terms.items()})
        return SparsePoly(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        other = self._check(other)
        mod = self.ring.modulus
        out: Dict[Monomial, int] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        if mod:
            out = {m: c % mod for m, c in out.items() if c % mod}
        else:
            out = {m: c for m, c in out.items() if c}
        return SparsePoly(self.ring, out)

    __rmul__ = __mul__

    def scale(self, c: int) -> "SparsePoly":
        return SparsePoly.from_terms(self.ring, [(m, v * c) for m, v in self.terms.items()])

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise PolyError("exponent must be a nonnegative integer")
        p = self.ring.modulus
        if p and k >= p and k % p == 0:
            # char p: (sum c m)^p = sum c^p m^p
            return self.frobenius() ** (k // p)
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def frobenius(self) -> "SparsePoly":
        """``f^p`` for ``f`` over GF(p), computed termwise."""
        p = self.ring.modulus
        if not p:
            raise PolyError("frobenius requires a GF(p) polynomial")
        return SparsePoly.from_terms(
            self.ring, [(tuple(e * p for e in m), pow(c, p, p)) for m, c in self.terms.items()])

    # inspection
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def constant_coeff(self) -> int:
        return self.terms.get((0,) * self.ring.nvars, 0)

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def degree_in(self, i: int) -> int:
        if not self.terms:
            return -1
        return max(m[i] for m in self.terms)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self.terms}) <= 1

    def homogeneous_part(self, d: int) -> "SparsePoly":
        return SparsePoly(self.ring, {m: c for m, c in self.terms.items() if sum(m) == d})

    def sorted_terms(self):
        key = self.ring.order.key
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    def lm(self) -> Monomial:
        if not self.terms:
            raise PolyError("zero polynomial has no leading monomial")
        return max(self.terms, key=self.ring.order.key)

    def lc(self) -> int:
        return self.terms[self.lm()]

    def coeff(self, m: Monomial) -> int:
        return self.terms.get(tuple(m), 0)

    def variables(self) -> Tuple[int, ...]:
        used = set()
        for m in self.terms:
            used.update(i for i, e in enumerate(m) if e)
        return tuple(sorted(used))

    # transformations
    def derivative(self, i: int) -> "SparsePoly":
        out = []
        for m, c in self.terms.items():
            if m[i]:
                e = list(m)
                e[i] -= 1
                out.append((tuple(e), c * m[i]))
        return SparsePoly.from_terms(self.ring, out)

    def monic(self) -> "SparsePoly":
        p = self.ring.modulus
        if not p:
            raise PolyError("monic requires GF(p) coefficients")
        if not self.terms:
            return self
        inv = pow(self.lc(), -1, p)
        return self.scale(inv)

    def reduce_mod(self, p: int, ring: PolyRing = None) -> "SparsePoly":
        """Image in GF(p)[...] of an integer polynomial."""
        ring = ring or self.ring.with_modulus(p)
        return SparsePoly.from_terms(ring, self.terms)

    def change_ring(self, ring: PolyRing) -> "SparsePoly":
        if ring.nvars != self.ring.nvars:
            raise PolyError("arity mismatch")
        return SparsePoly.from_terms(ring, self.terms)

    def embed(self, ring: PolyRing, positions: Sequence[int]) -> "SparsePoly":
        """Rename variable ``i`` to variable ``positions[i]`` of ``ring``."""
        out = []
        for m, c in self.terms.items():
            e = [0] * ring.nvars
            for i, k in enumerate(m):
                e[positions[i]] += k
            out.append((tuple(e), c))
        return SparsePoly.from_terms(ring, out)

    def evaluate(self, values: Sequence, add, mul, one, zero, from_int, power=None):
        """Evaluate in an arbitrary commutative ring given by callables."""
        power = power or _default_power(mul, one)
        total = zero
        cache = {}
        for m, c in self.terms.items():
            term = from_int(c)
            for i, e in enumerate(m):
                if e:
                    key = (i, e)
                    if key not in cache:
                        cache[key] = power(values[i], e)
                    term = mul(term, cache[key])
            total = add(total, term)
        return total

    def substitute(self, mapping: Dict[int, "SparsePoly"], ring: PolyRing = None) -> "SparsePoly":
        """Replace variable ``i`` by ``mapping[i]``; other variables embed by name."""
        ring = ring or self.ring
        images = []
        for i, name in enumerate(self.ring.names):
            if i in mapping:
                images.append(mapping[i])
            else:
                images.append(ring.gen(name))
        return self.evaluate(images, lambda a, b: a + b, lambda a, b: a * b,
                             ring.one(), ring.zero(), ring.const, power=lambda a, e: a ** e)

    def pth_root(self) -> "SparsePoly":
        """Return ``g`` with ``g^p == self`` over GF(p), or raise.

        Over a prime field the p-th root of a coefficient is the coefficient.
        """
        p = self.ring.modulus
        if not p:
            raise PolyError("pth_root requires GF(p) coefficients")
        out = {}
        for m, c in self.terms.items():
            if any(e % p for e in m):
                raise PolyError("polynomial is not a p-th power")
            out[tuple(e // p for e in m)] = c
        return SparsePoly(self.ring, out)

    # printing
    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            mono = "*".join(
                (n if e == 1 else f"{n}^{e}") for n, e in zip(self.ring.names, m) if e)
            neg = c < 0
            a = abs(c)
            if not mono:
                s = str(a)
            elif a == 1:
                s = mono
            else:
                s = f"{a}*{mono}"
            parts.append(("-", s) if neg else ("+", s))
        out = parts[0][1] if parts[0][0] == "+" else "-" + parts[0][1]
        for sign, s in parts[1:]:
            out += f" {sign} {s}"
        return out

    def __repr__(self):
        return f"SparsePoly({self})"


def _default_power(mul, one):
    def power(a, e):
        result = one
        base = a
        while e:
            if e & 1:
                result = mul(result, base)
            e >>= 1
            if e:
                base = mul(base, base)
        return result

    return power


def poly_arith(a: SparsePoly, b, op: str) -> SparsePoly:
    """Dispatch ``add``/``sub``/``mul``/``pow``; ``b`` is the exponent for ``pow``."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "pow":
        return a ** b
    raise PolyError(f"unknown operation {op!r}")


def exact_div_by_int(a: SparsePoly, m: int) -> SparsePoly:
    """Divide an integer polynomial by ``m``, refusing to round."""
    if a.ring.modulus:
        raise PolyError("exact_div_by_int requires integer coefficients")
    if m == 0:
        raise ZeroDivisionError("division by zero")
    out = {}
    for mono, c in a.terms.items():
        q, r = divmod(c, m)
        if r:
            raise InexactDivisionError(f"coefficient {c} of {mono} not divisible by {m}")
        out[mono] = q
    return SparsePoly(a.ring, out)


def monomials_of_degree(nvars: int, d: int) -> Iterable[Monomial]:
    """All exponent vectors of total degree ``d`` (lexicographically descending)."""
    if nvars == 0:
        if d == 0:
            yield ()
        return
    if nvars == 1:
        yield (d,)
        return
    for first in range(d, -1, -1):
        for rest in monomials_of_degree(nvars - 1, d - first):
            yield (first,) + rest
