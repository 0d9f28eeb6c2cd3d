"""Germs of Weyl simplices at a point and the residue building there.

A germ is named by ``(chart, w, face)``: the simplex ``x + w . face`` in that
chart, where ``x`` is the base point's local coordinates.  Two names denote
the same germ exactly when one chart contains both germs and the gluing map
carries one direction onto the other.  The canonical name is the least
``(chart, w)`` over all charts containing the germ, with ``w`` reduced to the
shortest coset representative for the face.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .atlas import BPoint, BuildingInstance
from .complexes import ChamberSystem
from .coxeter import format_word
from .model_space import WeylSimplex, germ_in_region
from .reports import CheckReport

__all__ = [
    "Germ",
    "BaseMismatchError",
    "germ_charts",
    "canonical_germ",
    "germ_equal",
    "residue",
    "ResidueComplex",
    "opposite_at",
    "delta_x",
]


class BaseMismatchError(ValueError):
    """Germs at different points were compared."""


@dataclass(frozen=True, order=True)
class Germ:
    """Canonical germ of ``at.local + w . face`` in chart ``at.chart``."""

    chart: int
    w: int
    face: tuple = ()
    at: BPoint = field(default=None, compare=False)

    @property
    def key(self):
        return (self.chart, self.w, self.face)

    def simplex(self) -> WeylSimplex:
        return WeylSimplex(self.at.local, self.w, frozenset(self.face))

    def ident(self, phi) -> str:
        s = f"{self.chart}:{self.at.local}:{format_word(phi.elements[self.w].word)}"
        if self.face:
            s += ":" + ".".join(str(j + 1) for j in self.face)
        return s

    def __str__(self):
        return f"germ{self.key}@{self.at}"


def germ_charts(B: BuildingInstance, p: BPoint, w: int, face=frozenset()) -> dict:
    """``{chart: (local base, direction)}`` for charts containing the germ."""
    phi = B.phi
    face = frozenset(face)
    here = B.charts_containing(p)
    simplex = WeylSimplex(p.local, w, face)
    out = {p.chart: (p.local, phi.coset_rep(w, face))}
    for d, yd in here.items():
        if d == p.chart:
            continue
        g = B.gluing(p.chart, d)
        if g is None or not germ_in_region(g.region, simplex):
            continue
        out[d] = (yd, phi.coset_rep(phi.mul[g.map.weyl][w], face))
    return out


def canonical_germ(B: BuildingInstance, p: BPoint, w: int, face=frozenset()) -> Germ:
    charts = germ_charts(B, p, w, face)
    c = min(charts)
    y, wc = charts[c]
    return Germ(c, wc, tuple(sorted(face)), BPoint(c, y))


def _parse_germ(B, g):
    """Accept a Germ or a ``(BPoint, w[, face])`` tuple."""
    if isinstance(g, Germ):
        return g.at, g.w, frozenset(g.face)
    p, w, *rest = g
    return p, w, frozenset(rest[0]) if rest else frozenset()


def germ_equal(B: BuildingInstance, S, T) -> bool:
    p, w, f = _parse_germ(B, S)
    q, v, h = _parse_germ(B, T)
    if not B.same_point(p, q):
        raise BaseMismatchError(f"germs based at {p} and {q}")
    if f != h:
        return False
    return canonical_germ(B, p, w, f).key == canonical_germ(B, q, v, h).key


class ResidueComplex:
    """Chamber germs at a point with panels and apartments from the atlas."""

    def __init__(self, B: BuildingInstance, x: BPoint):
        self.B = B
        phi = B.phi
        self.at = B.canonical(x)
        self.charts = B.charts_containing(self.at)
        canon = {}
        apartments = {}
        for c, y in sorted(self.charts.items()):
            base = BPoint(c, y)
            labels = []
            for w in range(phi.order):
                g = canonical_germ(B, base, w)
                canon[g.key] = g
                labels.append(g.key)
            apartments[c] = tuple(labels)
        panels = {}
        for key, g in canon.items():
            panels[key] = tuple(
                canonical_germ(B, g.at, g.w, frozenset([j])).key for j in range(phi.rank)
            )
        self.germs = canon
        self.system = ChamberSystem(phi, canon, panels, apartments)

    @property
    def chambers(self):
        return self.system.chambers

    @property
    def apartments(self):
        return self.system.apartments

    def germ(self, key) -> Germ:
        return self.germs[key]

    def check(self) -> CheckReport:
        rep = self.system.check_building("residue")
        if rep.witness is not None:
            rep.witness["at"] = str(self.at)
        return rep

    def delta(self, a, b) -> int:
        return self.system.distance(a, b)

    def summary(self) -> dict:
        phi = self.B.phi
        return {
            "at": str(self.at),
            "chambers": [self.germs[k].ident(phi) for k in self.chambers],
            "apartments": {str(c): sorted({self.germs[k].ident(phi) for k in labels})
                           for c, labels in self.apartments.items()},
            "adjacency": {self.germs[k].ident(phi): [self.germs[m].ident(phi) for m in v]
                          for k, v in self.system.adjacent.items()},
        }


def residue(B: BuildingInstance, x: BPoint) -> ResidueComplex:
    return ResidueComplex(B, x)


def _chamber_key(B, g):
    p, w, f = _parse_germ(B, g)
    if f:
        raise ValueError("expected a chamber germ")
    return p, canonical_germ(B, p, w).key


def delta_x(B: BuildingInstance, S, T, res: ResidueComplex | None = None) -> int:
    """Gallery distance between two chamber germs at the same point."""
    p, a = _chamber_key(B, S)
    q, b = _chamber_key(B, T)
    if not B.same_point(p, q):
        raise BaseMismatchError(f"germs based at {p} and {q}")
    res = res or residue(B, p)
    return res.delta(a, b)


def opposite_at(B: BuildingInstance, S, T, res: ResidueComplex | None = None) -> bool:
    return delta_x(B, S, T, res) == B.phi.diameter
