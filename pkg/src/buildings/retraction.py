"""Retractions onto an apartment centred at a chamber germ.

To retract ``y`` onto chart ``A`` with centre ``mu`` pick a chart ``g``
containing both ``y`` and the germ ``mu``.  The overlap of ``g`` and ``A``
contains a neighbourhood of ``mu`` in ``g``, so the gluing map ``g -> A``
is the unique affine Weyl map identifying the two charts near ``mu``; apply
it to the whole of ``g``.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .atlas import BPoint, BuildingInstance
from .local_structure import Germ
from .model_space import WeylSimplex, germ_in_region, metric
from .reports import CheckReport

__all__ = ["Retraction", "NoChartError", "retract", "check_well_defined", "check_nonexpansive", "distance"]


class NoChartError(LookupError):
    """No chart contains both the point and the centre germ."""


@dataclass
class Retraction:
    B: BuildingInstance
    target: int
    center: Germ  # a chamber germ at a point of the target chart

    def __post_init__(self):
        B = self.B
        local = B.transport(self.center.at, self.target)
        if local is None:
            raise ValueError("centre is not in the target apartment")
        self.base = BPoint(self.target, local)
        g = self.center
        if g.chart == self.target:
            self.w = g.w
        else:
            glue = B.gluing(g.chart, self.target)
            if not germ_in_region(glue.region, g.simplex()):
                raise ValueError("centre germ is not in the target apartment")
            self.w = B.phi.mul[glue.map.weyl][g.w]
        self._admissible = self._charts_with_center()

    def _charts_with_center(self):
        """Charts containing the centre germ, breadth-first from the target."""
        B = self.B
        start = WeylSimplex(self.base.local, self.w)
        out = [self.target]
        seen = {self.target}
        queue = deque([self.target])
        while queue:
            c = queue.popleft()
            for d in B.neighbours(c):
                if d in seen:
                    continue
                g = B.gluing(self.target, d)
                if g is not None and germ_in_region(g.region, start):
                    seen.add(d)
                    out.append(d)
                    queue.append(d)
        return out

    @property
    def admissible(self):
        return list(self._admissible)

    def evaluations(self, y: BPoint):
        """``{g: image}`` over every admissible chart containing ``y``."""
        here = self.B.charts_containing(y)
        out = {}
        for g in self._admissible:
            if g in here:
                out[g] = self.B.map(g, self.target)(here[g])
        return out

    def __call__(self, y: BPoint) -> BPoint:
        here = self.B.charts_containing(y)
        for g in self._admissible:
            if g in here:
                return BPoint(self.target, self.B.map(g, self.target)(here[g]))
        raise NoChartError(f"no chart contains {y} and the centre germ")


def retract(r: Retraction, y: BPoint) -> BPoint:
    return r(y)


def distance(B: BuildingInstance, p: BPoint, q: BPoint, which="d1"):
    """Distance in the glued space, measured in the first common chart.

    Returns ``(value, consistent)``: ``consistent`` is False when two common
    charts disagree.  ``value`` is None when no chart contains both.
    """
    a, b = B.charts_containing(p), B.charts_containing(q)
    common = sorted(set(a) & set(b))
    if not common:
        return None, True
    vals = {metric(B.phi, a[c], b[c], which) for c in common}
    return metric(B.phi, a[common[0]], b[common[0]], which), len(vals) == 1


def check_well_defined(r: Retraction, samples) -> CheckReport:
    """All admissible charts agree on every sample; charts through the centre
    are mapped isometrically onto the target."""
    rep = CheckReport("well_defined")
    B = r.B
    for g in r.admissible:
        rep.count("charts")
        if B.map(g, r.target).weyl is None:
            return rep.fail({"kind": "retraction_not_isometric", "center": _center(r), "chart": g},
                            "chart through the centre is not mapped by an affine Weyl map")
    for y in samples:
        ev = r.evaluations(y)
        rep.count("points")
        if not ev:
            return rep.fail({"kind": "retraction_no_chart", "center": _center(r), "y": str(y)},
                            "no chart contains the point and the centre germ")
        vals = sorted(ev.items())
        g1, v1 = vals[0]
        for g2, v2 in vals[1:]:
            rep.count("chart_pairs")
            if v1 != v2:
                return rep.fail({"kind": "retraction_ambiguous", "center": _center(r), "y": str(y),
                                 "charts": [g1, g2]}, "admissible charts give different images")
        if r.target in B.charts_containing(y):
            if v1 != B.transport(y, r.target):
                return rep.fail({"kind": "retraction_moves_target", "center": _center(r), "y": str(y)},
                                "point of the target apartment is moved")
    return rep


def check_nonexpansive(r: Retraction, pairs, which="d1") -> CheckReport:
    """``d(r x, r y) <= d(x, y)`` and nothing but the centre maps to the centre."""
    rep = CheckReport(f"nonexpansive[{which}]")
    B = r.B
    for x, y in pairs:
        rep.count("pairs")
        dxy, _ = distance(B, x, y, which)
        if dxy is None:
            continue
        rx, ry = r(x), r(y)
        if metric(B.phi, rx.local, ry.local, which) > dxy:
            return rep.fail({"kind": "retraction_expands", "center": _center(r), "x": str(x), "y": str(y),
                             "metric": which}, "retraction increases a distance")
        for p, rp in ((x, rx), (y, ry)):
            if rp == r.base and not B.same_point(p, r.base):
                return rep.fail({"kind": "retraction_fiber", "center": _center(r), "y": str(p)},
                                "a point other than the centre maps to the centre")
    return rep


def _center(r: Retraction):
    g = r.center
    return {"target": r.target, "at": str(g.at), "w": g.w}
