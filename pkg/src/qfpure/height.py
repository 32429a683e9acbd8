"""Quasi-F-split height search with per-level verdicts and certificates."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional

from .graded import GradedSolverError, fedder_check, split_graded_system
from .qmodel import ENUM_CAP, QModelError, build_Q, split_finite
from .rings import AffineQuotient, FiniteAlgebra, GradedQuotient, RingError, is_reduced

#: hard guard on the level searched for finite algebras
MAX_LEVEL = 4


@dataclass
class LevelVerdict:
    n: int
    verdict: str  # split | not_split | feasible_up_to | gated_nonreduced | cap_exceeded | unsupported
    certificate: Optional[object] = None
    verified: Optional[bool] = None
    degree: Optional[int] = None
    note: Optional[str] = None

    def to_dict(self) -> dict:
        out: Dict[str, object] = {"n": self.n, "verdict": self.verdict}
        for key in ("certificate", "verified", "degree", "note"):
            val = getattr(self, key)
            if val is not None:
                out[key] = val
        return out


@dataclass
class HeightReport:
    ring: str
    mode: str
    levels: List[LevelVerdict] = field(default_factory=list)
    kind: str = "lower_bound"  # exact | lower_bound | infinity
    value: Optional[int] = None
    evidence_height: Optional[int] = None
    evidence_degree: Optional[int] = None
    witness: Optional[str] = None
    fedder: Optional[str] = None
    monotone: bool = True

    def verdict(self, n: int) -> Optional[str]:
        for lv in self.levels:
            if lv.n == n:
                return lv.verdict
        return None

    def height(self) -> dict:
        out: Dict[str, object] = {"kind": self.kind}
        if self.value is not None:
            out["value"] = self.value
        if self.evidence_degree is not None:
            out["evidence_degree"] = self.evidence_degree
        if self.evidence_height is not None:
            out["evidence_height"] = self.evidence_height
        return out

    def to_dict(self, certificates: bool = True) -> dict:
        levels = []
        for lv in self.levels:
            d = lv.to_dict()
            if not certificates:
                d.pop("certificate", None)
            levels.append(d)
        out: Dict[str, object] = {
            "ring": self.ring,
            "mode": self.mode,
            "height": self.height(),
            "levels": levels,
            "monotone": self.monotone,
        }
        if self.witness is not None:
            out["nilpotent_witness"] = self.witness
        if self.fedder is not None:
            out["fedder"] = self.fedder
        return out

    def summary(self) -> str:
        h = self.height()
        if self.kind == "infinity":
            return f"ht({self.ring}) = infinity (nilpotent {self.witness})"
        if self.kind == "exact":
            return f"ht({self.ring}) = {self.value}"
        text = f"ht({self.ring}) >= {self.value}"
        if "evidence_height" in h:
            text += f"; feasible at n = {self.evidence_height} up to degree {self.evidence_degree}"
        return text


def _sigma_certificate(R: FiniteAlgebra, Q, table: Dict[int, int]) -> Dict[str, str]:
    def fmt_rep(rep):
        if Q.kind == "wbar":
            return "(" + ", ".join(R.format(c) for c in rep) + ")"
        r, w = rep
        return f"({R.format(r)}; (" + ", ".join(R.format(c) for c in w) + "))"

    return {fmt_rep(Q.reps[cid]): R.format(val) for cid, val in sorted(table.items())}


def _check_monotone(levels: List[LevelVerdict]) -> bool:
    positive = ("split", "feasible_up_to")
    seen = False
    for lv in levels:
        if lv.verdict in positive:
            seen = True
        elif seen and lv.verdict == "not_split":
            return False
    return True


def _finite_search(R: FiniteAlgebra, n_max: int, report: HeightReport, cap: int):
    first = None
    for n in range(1, n_max + 1):
        try:
            Q = build_Q(R, n, cap=cap)
        except QModelError as exc:
            report.levels.append(LevelVerdict(n, "cap_exceeded", note=str(exc)))
            continue
        res = split_finite(R, n, Q=Q)
        if res.split:
            cert = _sigma_certificate(R, Q, res.sigma)
            if first is None:
                first = n
        else:
            cert = {str(k): v for k, v in sorted(res.certificate.items())}
        report.levels.append(LevelVerdict(n, res.verdict, cert, res.verified))
    if first is not None:
        report.kind, report.value = "exact", first
    else:
        tested = [lv.n for lv in report.levels if lv.verdict == "not_split"]
        report.kind = "lower_bound"
        report.value = (max(tested) + 1) if tested else 1


def _graded_search(R: GradedQuotient, n_max: int, D: int, report: HeightReport):
    top = 2 if R.p == 2 else 1
    lower = 1
    for n in range(1, n_max + 1):
        if n > top:
            report.levels.append(LevelVerdict(n, "unsupported", note=f"graded systems stop at n = {top} for p = {R.p}"))
            continue
        res = split_graded_system(R, n, D)
        cert = res.sigma if res.feasible else res.certificate
        report.levels.append(LevelVerdict(n, res.verdict, cert, res.verified, degree=D))
        if res.feasible:
            if report.evidence_height is None:
                report.evidence_height, report.evidence_degree = n, D
        elif report.evidence_height is None:
            lower = n + 1
    report.value = lower
    report.kind = "lower_bound"
    top = R.top_degree()
    if report.evidence_height is not None and top is not None and D >= top:
        # every graded piece past the top degree vanishes, so no constraint was dropped
        report.kind, report.value = "exact", report.evidence_height
        report.evidence_height = report.evidence_degree = None
        return
    if report.evidence_height == 1 and R.is_hypersurface():
        fed = fedder_check(R.hypersurface)
        report.fedder = fed.verdict
        if fed.f_split:
            report.kind, report.value = "exact", 1
            report.evidence_height = report.evidence_degree = None


def height_search(R, n_max: int = 2, D: int = 4, name: Optional[str] = None,
                  cap: int = ENUM_CAP) -> HeightReport:
    """Search levels ``1..n_max``; finite algebras get exact answers, graded rings bounds."""
    if n_max < 1 or n_max > MAX_LEVEL:
        raise ValueError(f"n_max must lie in [1, {MAX_LEVEL}]")
    if isinstance(R, FiniteAlgebra):
        mode = "finite"
    elif isinstance(R, AffineQuotient):
        mode = "affine"
    elif isinstance(R, GradedQuotient):
        mode = "graded"
    else:
        raise RingError(f"unsupported ring {R!r}")
    report = HeightReport(name or R.name, mode)
    red = is_reduced(R)
    if not red.reduced:
        report.witness = str(red.witness)
        report.kind = "infinity"
        report.levels = [LevelVerdict(n, "gated_nonreduced", note=f"nilpotent {red.witness}")
                         for n in range(1, n_max + 1)]
        return report
    if mode == "affine":
        raise RingError(f"{report.ring} is ungraded; only reducedness is supported")
    if mode == "finite":
        _finite_search(R, n_max, report, cap)
    else:
        _graded_search(R, n_max, D, report)
    report.monotone = _check_monotone(report.levels)
    return report


__all__ = ["HeightReport", "LevelVerdict", "height_search", "GradedSolverError"]
