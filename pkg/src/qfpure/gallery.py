"""Named test rings, declared in the ring DSL."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Optional, Tuple

from .dsl import RingDecl, parse_ring_dsl


@dataclass(frozen=True)
class GalleryEntry:
    key: str
    text: str
    reduced: bool
    height: Optional[int] = None  # None: infinite (non-reduced) or unknown
    note: str = ""

    @property
    def decl(self) -> RingDecl:
        return parse_ring_dsl(self.text)

    def build(self):
        return _build(self.text)


@lru_cache(maxsize=None)
def _build(text: str):
    return parse_ring_dsl(text).build()


_ENTRIES = [
    # finite algebras
    GalleryEntry("GF2", "ring GF2 = GF(2)[] finite", True, 1),
    GalleryEntry("GF3", "ring GF3 = GF(3)[] finite", True, 1),
    GalleryEntry("GF4", "ring GF4 = GF(4)[] finite", True, 1),
    GalleryEntry("GF8", "ring GF8 = GF(8)[] finite", True, 1),
    GalleryEntry("GF9", "ring GF9 = GF(9)[] finite", True, 1),
    GalleryEntry("F2xF2", "ring F2xF2 = GF(2)[x] / (x^2 + x) finite", True, 1, "idempotents x, x + 1"),
    GalleryEntry("F2xF4", "ring F2xF4 = GF(2)[x] / (x^3 + x^2 + x) finite", True, 1, "x (x^2 + x + 1)"),
    GalleryEntry("DUAL2", "ring DUAL2 = GF(2)[x] / (x^2) finite", False),
    GalleryEntry("DUAL3", "ring DUAL3 = GF(3)[x] / (x^2) finite", False),
    GalleryEntry("DUAL4", "ring DUAL4 = GF(4)[x] / (x^2) finite", False),
    GalleryEntry("FAT2", "ring FAT2 = GF(2)[x,y] / (x^2, x*y, y^3) finite", False,
                 note="Artinian truncation of GF(2)[x,y]/(x^2, xy)"),
    # graded hypersurfaces
    GalleryEntry("ORD3", "ring ORD3 = GF(2)[x,y,z] / (x^3 + z^3 + y^2*z + x*y*z) graded", True, 1,
                 "ordinary cubic cone"),
    GalleryEntry("SS3", "ring SS3 = GF(2)[x,y,z] / (x^3 + y^2*z + y*z^2) graded", True, 2,
                 "supersingular cubic cone"),
    GalleryEntry("LINE", "ring LINE = GF(2)[x] / (x) graded", True, 1),
    GalleryEntry("LINE3", "ring LINE3 = GF(3)[x] / (x) graded", True, 1),
    GalleryEntry("POINT2", "ring POINT2 = GF(2)[x,y] / (x, y) graded", True, 1),
    GalleryEntry("DUALG", "ring DUALG = GF(2)[x] / (x^2) graded", False),
    GalleryEntry("CONIC2", "ring CONIC2 = GF(2)[x,y,z] / (x*y + z^2) graded", True, 1),
    GalleryEntry("CONIC3", "ring CONIC3 = GF(3)[x,y,z] / (x^2 + y^2 + z^2) graded", True, 1),
    GalleryEntry("SS3P3", "ring SS3P3 = GF(3)[x,y,z] / (y^2*z - x^3 + x*z^2) graded", True,
                 note="supersingular cubic cone, p = 3"),
    GalleryEntry("ORD3P3", "ring ORD3P3 = GF(3)[x,y,z] / (y^2*z - x^3 - x^2*z - z^3) graded", True, 1,
                 note="ordinary cubic cone, p = 3"),
    GalleryEntry("QUARTIC", "ring QUARTIC = GF(2)[x,y,z] / (x^3*y + y^3*z + z^3*x) graded", True,
                 note="quartic cone, not quasi-F-split"),
    # inseparable base change trio
    GalleryEntry("EX4", "ring EX4 = GF(2)[s,t,x,y,z] / (s*x^2 + t*y^2 + z^2) affine", True),
    GalleryEntry("EX4S", "ring EX4S = GF(2)[s',t,x,y,z] / (s'^2*x^2 + t*y^2 + z^2) affine", True),
    GalleryEntry("EX4ST", "ring EX4ST = GF(2)[s',t',x,y,z] / (s'^2*x^2 + t'^2*y^2 + z^2) affine", False),
]

GALLERY: Dict[str, GalleryEntry] = {e.key: e for e in _ENTRIES}

#: finite rings whose Phi kernel is compared against {t : t^p = 0}
KERNEL_GALLERY: Tuple[str, ...] = ("GF4", "GF8", "F2xF2", "DUAL2", "DUAL4", "FAT2")

#: hypersurfaces for the Fedder cross-check at n = 1
FEDDER_GALLERY: Tuple[str, ...] = ("ORD3", "SS3", "LINE", "CONIC2", "CONIC3", "SS3P3", "ORD3P3", "QUARTIC")

#: graded rings that are also finite algebras, for solver agreement
CROSS_GALLERY: Tuple[str, ...] = ("LINE", "LINE3", "POINT2", "DUALG")


def get(key: str) -> GalleryEntry:
    try:
        return GALLERY[key]
    except KeyError:
        raise KeyError(f"unknown gallery ring {key!r}") from None


def ring(key: str):
    return get(key).build()


def finite_keys():
    return tuple(k for k, e in GALLERY.items() if e.text.endswith("finite"))


def graded_keys():
    return tuple(k for k, e in GALLERY.items() if e.text.endswith("graded"))


def affine_keys():
    return tuple(k for k, e in GALLERY.items() if e.text.endswith("affine"))
