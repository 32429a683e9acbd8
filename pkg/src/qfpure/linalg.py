"""Exact linear algebra over GF(p): subspaces and affine systems with certificates.

Rows of affine systems are sparse ``{column: coefficient}`` dicts. For p = 2
rows are packed into Python ints and eliminated with XOR.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple


class Subspace:
    """Row-echelon basis of a subspace of GF(p)^dim, grown incrementally."""

    def __init__(self, p: int, dim: int):
        self.p = p
        self.dim = dim
        self._pivots: Dict[int, List[int]] = {}  # pivot column -> normalized row

    def __len__(self):
        return len(self._pivots)

    def reduce(self, vec: Sequence[int]) -> List[int]:
        p = self.p
        v = [x % p for x in vec]
        for col in sorted(self._pivots):
            c = v[col]
            if c:
                row = self._pivots[col]
                v = [(a - c * b) % p for a, b in zip(v, row)]
        return v

    def add(self, vec: Sequence[int]) -> bool:
        """Insert ``vec``; returns False when it was already in the span."""
        v = self.reduce(vec)
        lead = next((i for i, x in enumerate(v) if x), None)
        if lead is None:
            return False
        inv = pow(v[lead], -1, self.p)
        v = [(x * inv) % self.p for x in v]
        for col, row in self._pivots.items():
            c = row[lead]
            if c:
                self._pivots[col] = [(a - c * b) % self.p for a, b in zip(row, v)]
        self._pivots[lead] = v
        return True

    def contains(self, vec: Sequence[int]) -> bool:
        return not any(self.reduce(vec))

    def basis(self) -> List[Tuple[int, ...]]:
        return [tuple(self._pivots[c]) for c in sorted(self._pivots)]

    def pivot_columns(self) -> List[int]:
        return sorted(self._pivots)


def kernel(p: int, matrix: Sequence[Sequence[int]], ncols: int) -> List[Tuple[int, ...]]:
    """Basis of ``{x : M x = 0}`` for an ``m x ncols`` matrix over GF(p)."""
    rows = [[x % p for x in r] for r in matrix]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], -1, p)
        rows[r] = [(x * inv) % p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    out = []
    for fcol in free:
        x = [0] * ncols
        x[fcol] = 1
        for i, pc in enumerate(pivots):
            x[pc] = (-rows[i][fcol]) % p
        out.append(tuple(x))
    return out


@dataclass
class AffineSystem:
    """Constraints ``sum_j a_ij x_j = b_i`` over GF(p) with labelled unknowns."""

    p: int
    labels: List = field(default_factory=list)
    rows: List[Dict[int, int]] = field(default_factory=list)
    rhs: List[int] = field(default_factory=list)
    tags: List = field(default_factory=list)
    _index: Dict = field(default_factory=dict)

    def var(self, label) -> int:
        idx = self._index.get(label)
        if idx is None:
            idx = len(self.labels)
            self._index[label] = idx
            self.labels.append(label)
        return idx

    def has_var(self, label) -> bool:
        return label in self._index

    def add_row(self, coeffs: Dict[int, int], rhs: int = 0, tag=None):
        p = self.p
        row = {c: v % p for c, v in coeffs.items() if v % p}
        rhs %= p
        if not row and not rhs:
            return
        self.rows.append(row)
        self.rhs.append(rhs)
        self.tags.append(tag)

    @property
    def nvars(self):
        return len(self.labels)

    def solve(self) -> "SolveResult":
        if self.p == 2:
            return _solve_gf2(self)
        return _solve_gfp(self)

    def check_solution(self, x: Sequence[int]) -> bool:
        p = self.p
        for row, b in zip(self.rows, self.rhs):
            if sum(v * x[c] for c, v in row.items()) % p != b:
                return False
        return True

    def check_certificate(self, y: Dict[int, int]) -> bool:
        """True when ``sum_i y_i * row_i == 0`` and ``sum_i y_i * b_i == 1``."""
        p = self.p
        acc: Dict[int, int] = {}
        total = 0
        for i, c in y.items():
            c %= p
            if not c:
                continue
            for col, v in self.rows[i].items():
                acc[col] = (acc.get(col, 0) + c * v) % p
            total = (total + c * self.rhs[i]) % p
        return not any(acc.values()) and total == 1


@dataclass
class SolveResult:
    feasible: bool
    solution: Optional[List[int]] = None
    certificate: Optional[Dict[int, int]] = None  # row index -> multiplier
    rank: int = 0


def _solve_gf2(system: AffineSystem) -> SolveResult:
    n = system.nvars
    rhs_bit = 1 << n
    pivots: Dict[int, Tuple[int, int]] = {}  # lowest set column -> (row bits, combination)
    for i, (row, b) in enumerate(zip(system.rows, system.rhs)):
        bits = 0
        for c in row:
            bits |= 1 << c
        if b:
            bits |= rhs_bit
        combo = 1 << i
        while True:
            low = bits & (rhs_bit - 1)
            if not low:
                break
            col = (low & -low).bit_length() - 1
            piv = pivots.get(col)
            if piv is None:
                break
            # eliminate every pivot column present, lowest first
            bits ^= piv[0]
            combo ^= piv[1]
        low = bits & (rhs_bit - 1)
        if not low:
            if bits & rhs_bit:
                cert = {}
                k = 0
                while combo:
                    if combo & 1:
                        cert[k] = 1
                    combo >>= 1
                    k += 1
                return SolveResult(False, certificate=cert, rank=len(pivots))
            continue
        col = (low & -low).bit_length() - 1
        pivots[col] = (bits, combo)
    x = [0] * n
    for col in sorted(pivots, reverse=True):
        bits = pivots[col][0]
        val = 1 if bits & rhs_bit else 0
        rest = bits & (rhs_bit - 1) & ~(1 << col)
        while rest:
            c = (rest & -rest).bit_length() - 1
            val ^= x[c]
            rest &= rest - 1
        x[col] = val
    return SolveResult(True, solution=x, rank=len(pivots))


def _solve_gfp(system: AffineSystem) -> SolveResult:
    import heapq

    p = system.p
    pivots: Dict[int, Tuple[Dict[int, int], int, Dict[int, int]]] = {}
    for i, (row0, b0) in enumerate(zip(system.rows, system.rhs)):
        row = dict(row0)
        b = b0
        combo = {i: 1}
        heap = list(row)
        heapq.heapify(heap)
        lead = None
        while heap:
            col = heapq.heappop(heap)
            c = row.get(col, 0)
            if not c:
                continue
            piv = pivots.get(col)
            if piv is None:
                if lead is None:
                    lead = col
                continue
            prow, pb, pcombo = piv
            for k, v in prow.items():
                nv = (row.get(k, 0) - c * v) % p
                if nv:
                    if k not in row:
                        heapq.heappush(heap, k)
                    row[k] = nv
                else:
                    row.pop(k, None)
            b = (b - c * pb) % p
            for k, v in pcombo.items():
                nv = (combo.get(k, 0) - c * v) % p
                if nv:
                    combo[k] = nv
                else:
                    combo.pop(k, None)
        row = {k: v for k, v in row.items() if v}
        if not row:
            if b:
                inv = pow(b, -1, p)
                return SolveResult(False, certificate={k: (v * inv) % p for k, v in combo.items()},
                                   rank=len(pivots))
            continue
        lead = min(row)
        inv = pow(row[lead], -1, p)
        pivots[lead] = ({k: (v * inv) % p for k, v in row.items()}, (b * inv) % p,
                        {k: (v * inv) % p for k, v in combo.items()})
    x = [0] * system.nvars
    for col in sorted(pivots, reverse=True):
        prow, pb, _ = pivots[col]
        val = pb
        for k, v in prow.items():
            if k != col:
                val = (val - v * x[k]) % p
        x[col] = val
    return SolveResult(True, solution=x, rank=len(pivots))
