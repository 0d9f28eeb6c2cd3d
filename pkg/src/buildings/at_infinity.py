"""Parallel classes of Weyl simplices and the building at infinity.

Inside one chart every translate of a Weyl simplex is parallel to it, so a
simplex at infinity is named by a direction ``(chart, w, face)`` alone.
Directions in charts ``i`` and ``j`` are parallel when the overlap region
contains a translate of the cone and the gluing map carries one direction to
the other.  For proper faces the same test is applied to the face cone,
which is how corresponding faces of parallel chambers are matched.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product

from .atlas import BPoint, BuildingInstance
from .complexes import ChamberSystem
from .coxeter import format_word
from .local_structure import ResidueComplex, canonical_germ
from .model_space import Point, WeylSimplex, region_contains_cone
from .reports import CheckReport

__all__ = [
    "ParallelClass",
    "FaceTypeMismatch",
    "parallel",
    "BoundaryComplex",
    "boundary_complex",
    "sundial",
    "SundialError",
    "lift_gallery",
    "project_pi_x",
    "triple_intersection",
]


class FaceTypeMismatch(ValueError):
    pass


class SundialError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class ParallelClass:
    """A simplex at infinity named by its least direction ``(chart, w, face)``."""

    chart: int
    w: int
    face: tuple = ()

    def ident(self, phi) -> str:
        s = f"{self.chart}:{format_word(phi.elements[self.w].word)}"
        if self.face:
            s += ":" + ".".join(str(j + 1) for j in self.face)
        return s

    @classmethod
    def parse(cls, text, phi):
        parts = text.split(":")
        from .coxeter import parse_word
        w = phi.element_from_word(parse_word(parts[1]))
        face = tuple(sorted(int(j) - 1 for j in parts[2].split("."))) if len(parts) > 2 else ()
        return cls(int(parts[0]), phi.coset_rep(w, frozenset(face)), face)


def _direct_parallel(B: BuildingInstance, i, w, j, v, face: frozenset) -> bool:
    """One-step test between directions in charts ``i`` and ``j``."""
    phi = B.phi
    if i == j:
        return phi.coset_rep(w, face) == phi.coset_rep(v, face)
    g = B.gluing(i, j)
    if g is None:
        return False
    if phi.coset_rep(phi.mul[g.map.weyl][w], face) != phi.coset_rep(v, face):
        return False
    origin = Point.origin(B.spec, B.rank)
    ok, _ = region_contains_cone(g.region, WeylSimplex(origin, w, face))
    return ok


def parallel(B: BuildingInstance, S, T) -> bool:
    """Are two Weyl simplices ``(chart, WeylSimplex)`` parallel?"""
    (i, s), (j, t) = S, T
    if s.face != t.face:
        raise FaceTypeMismatch(f"face types {sorted(s.face)} and {sorted(t.face)} differ")
    return _direct_parallel(B, i, s.w, j, t.w, frozenset(s.face))


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            lo, hi = min(ra, rb), max(ra, rb)
            self.parent[hi] = lo


def _faces(phi):
    """Face types with a nonempty direction cone: proper subsets of the simple roots."""
    n = phi.rank
    out = []
    for r in range(n):
        for J in combinations(range(n), r):
            out.append(frozenset(J))
    return out


class BoundaryComplex:
    """Parallel classes of every face type, chambers, panels and apartments."""

    def __init__(self, B: BuildingInstance):
        self.B = B
        phi = B.phi
        self.classes = {}  # face -> {node: ParallelClass}
        self.relation = {}  # face -> set of parallel node pairs (ordered)
        for face in _faces(phi):
            nodes = sorted({(i, phi.coset_rep(w, face)) for i in range(B.n) for w in range(phi.order)})
            rel = set()
            uf = _UnionFind(nodes)
            for (i, w), (j, v) in product(nodes, nodes):
                if _direct_parallel(B, i, w, j, v, face):
                    rel.add(((i, w), (j, v)))
                    uf.union((i, w), (j, v))
            self.relation[face] = rel
            self.classes[face] = {n: ParallelClass(*uf.find(n), tuple(sorted(face))) for n in nodes}
        chambers = self.classes[frozenset()]
        apartments = {i: tuple(chambers[(i, w)] for w in range(phi.order)) for i in range(B.n)}
        panels = {}
        for (i, w), c in chambers.items():
            if c in panels:
                continue
            ps = []
            for j in range(phi.rank):
                face = frozenset([j])
                if len(face) == phi.rank:
                    ps.append("empty")  # rank one: the panel is the empty simplex
                else:
                    ps.append(self.classes[face][(i, phi.coset_rep(w, face))])
            panels[c] = tuple(ps)
        self.system = ChamberSystem(phi, set(chambers.values()), panels, apartments)

    # -- accessors ------------------------------------------------------------
    @property
    def chambers(self):
        return self.system.chambers

    @property
    def apartments(self):
        return self.system.apartments

    def chamber_of(self, chart, w) -> ParallelClass:
        return self.classes[frozenset()][(chart, w)]

    def class_of(self, chart, w, face=frozenset()) -> ParallelClass:
        face = frozenset(face)
        return self.classes[face][(chart, self.B.phi.coset_rep(w, face))]

    def in_boundary(self, c: ParallelClass, chart) -> bool:
        return c in self.apartments[chart]

    def directions(self, c: ParallelClass, chart):
        """Directions ``w`` in ``chart`` representing chamber ``c``."""
        return [w for w, d in enumerate(self.apartments[chart]) if d == c]

    def opposite(self, c, d) -> bool:
        if self.B.rank == 1:
            return c != d
        return self.system.distance(c, d) == self.B.phi.diameter

    # -- checks ---------------------------------------------------------------
    def check_equivalence(self) -> CheckReport:
        """Reflexive, symmetric and transitive, exhaustively over all directions."""
        rep = CheckReport("parallelism")
        for face, rel in self.relation.items():
            nodes = sorted(self.classes[face])
            succ = {n: set() for n in nodes}
            for a, b in rel:
                succ[a].add(b)
            for a in nodes:
                rep.count("directions")
                if a not in succ[a]:
                    return rep.fail({"kind": "not_reflexive", "face": sorted(face), "a": list(a)})
                for b in succ[a]:
                    if a not in succ[b]:
                        return rep.fail({"kind": "not_symmetric", "face": sorted(face), "a": list(a), "b": list(b)})
                    for c in succ[b]:
                        rep.count("triples")
                        if c not in succ[a]:
                            return rep.fail({"kind": "not_transitive", "face": sorted(face),
                                             "a": list(a), "b": list(b), "c": list(c)})
        return rep

    def check(self) -> CheckReport:
        rep = self.system.check_building("boundary")
        if not rep.passed:
            return rep
        seen = {}
        for i, labels in self.apartments.items():
            key = frozenset(labels)
            if key in seen:
                return rep.fail({"kind": "apartment_not_bijective", "apartments": [seen[key], i]},
                                "two charts have the same apartment at infinity")
            seen[key] = i
        rep.stats["apartment_bijection"] = len(seen)
        return rep

    def summary(self) -> dict:
        phi = self.B.phi
        return {
            "chambers": [c.ident(phi) for c in self.chambers],
            "apartments": {str(i): sorted({c.ident(phi) for c in labels}) for i, labels in self.apartments.items()},
        }


def boundary_complex(B: BuildingInstance) -> BoundaryComplex:
    return BoundaryComplex(B)


def triple_intersection(B: BuildingInstance, a, b, c):
    """``A cap B cap C`` in chart-``a`` coordinates, with its classification."""
    rb, rc = B.region(a, b), B.region(a, c)
    if rb is None or rc is None:
        return None, "empty"
    r = rb.intersect(rc)
    return r, r.classify()


def sundial(B: BuildingInstance, a: int, c: ParallelClass, bc: BoundaryComplex | None = None):
    """The two apartments of the sundial around apartment ``a`` and chamber ``c``.

    Returns ``(a1, a2, info)``; ``info`` holds the opposite chambers, the
    pairwise overlap classes and the triple intersection.
    """
    bc = bc or boundary_complex(B)
    phi = B.phi
    labels = bc.apartments[a]
    if c in labels:
        raise SundialError("chamber lies in the apartment at infinity")
    if phi.rank > 1:
        own = {bc.system.panels[d][j] for d in labels for j in range(phi.rank)}
        if not any(p in own for p in bc.system.panels[c]):
            raise SundialError("chamber shares no panel with the apartment at infinity")
    opp = sorted({d for d in labels if bc.opposite(c, d)})
    if len(opp) != 2:
        raise SundialError(f"expected two opposite chambers, found {len(opp)}")
    found = []
    for d in opp:
        hits = [i for i, lab in bc.apartments.items() if c in lab and d in lab]
        if not hits:
            raise SundialError(f"no apartment contains {c.ident(phi)} and {d.ident(phi)}; "
                               "the atlas may be missing exchange apartments")
        found.append(hits[0])
    a1, a2 = found
    pairs = {}
    for x, y in ((a, a1), (a, a2), (a1, a2)):
        r = B.region(x, y)
        pairs[f"{x},{y}"] = "empty" if r is None else r.classify()
    region, kind = triple_intersection(B, a, a1, a2)
    info = {
        "opposite": [d.ident(phi) for d in opp],
        "pairwise": pairs,
        "triple": kind,
        "triple_region": str(region),
    }
    return a1, a2, info


def project_pi_x(B: BuildingInstance, c: ParallelClass, x: BPoint, bc: BoundaryComplex | None = None):
    """Germ at ``x`` of the ``x``-based chamber in class ``c``.

    Every chart containing ``x`` whose boundary contains ``c`` yields a
    representative; they must all have the same germ.  Returns None when
    no chart qualifies.
    """
    bc = bc or boundary_complex(B)
    germs = set()
    for g, y in sorted(B.charts_containing(x).items()):
        for w in bc.directions(c, g):
            germs.add(canonical_germ(B, BPoint(g, y), w))
    if not germs:
        return None
    if len(germs) > 1:
        raise AssertionError(f"class {c} has several germs at {x}")
    return germs.pop()


def lift_gallery(B: BuildingInstance, x: BPoint, gallery, bc: BoundaryComplex | None = None,
                 res: ResidueComplex | None = None):
    """An apartment containing the ``x``-based chambers of a minimal gallery.

    Returns ``(chart or None, reason)``; reason is "ok", "absent" or a
    precondition failure.
    """
    bc = bc or boundary_complex(B)
    res = res or ResidueComplex(B, x)
    k = len(gallery) - 1
    for c, d in zip(gallery, gallery[1:]):
        if c == d or d not in bc.system.adjacent[c]:
            return None, "not a gallery"
    if k > 0 and bc.system.distance(gallery[0], gallery[-1]) != k:
        return None, "gallery not minimal at infinity"
    germs = [project_pi_x(B, c, x, bc) for c in gallery]
    if any(g is None for g in germs):
        return None, "chamber without x-based representative"
    if k > 0 and res.delta(germs[0].key, germs[-1].key) != k:
        return None, "projection not minimal at x"
    for g in sorted(B.charts_containing(x)):
        if all(bc.in_boundary(c, g) for c in gallery):
            return g, "ok"
    return None, "absent"
