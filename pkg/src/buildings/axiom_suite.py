"""Windowed verification of the axiom families on a building instance.

Universally quantified statements are checked on a finite surface: a
systematic grid of points (integer coordinates up to ``R`` plus small
fractions near the origin) and ``N`` seeded random samples.  Statements that
only involve finitely many objects (chamber directions, apartment triples,
the exchange closure) are checked exhaustively.  Every failure carries a
witness that :func:`replay` can re-check.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

from gmpy2 import mpq

from .atlas import BPoint, BuildingInstance, ClosureError, _exchange_chart, ec_closure, replay_validation, \
    validate_atlas
from .at_infinity import BoundaryComplex, triple_intersection
from .coxeter import format_word, parse_word
from .lambda_core import Scalar
from .local_structure import ResidueComplex, canonical_germ, germ_charts
from .model_space import METRICS, Point, WeylSimplex, cone_in_region, metric, \
    region_contains_cone
from .reports import FAIL, NOT_APPLICABLE, PASS, CheckReport, merge
from .retraction import Retraction, check_nonexpansive, check_well_defined, distance

__all__ = [
    "SampleWindow",
    "AXIOMS",
    "BUNDLES",
    "Suite",
    "check_axiom",
    "mainthm_matrix",
    "check_metric_independence",
    "find_witness",
    "fc_cover",
    "replay",
]

AXIOMS = ("A1", "A2", "A3", "A3'", "A3''", "A4", "A5", "A6", "EC", "GG", "CO", "FC''")
METRIC_DEPENDENT = {"A5", "FC''"}
BUNDLES = {
    "1": ("A4", "A5", "A6"),
    "2": ("A4", "A5", "EC"),
    "3": ("A4", "A6"),
    "4": ("GG", "CO"),
    "5": ("A3'", "CO"),
    "6": ("A3''", "A4", "FC''", "EC"),
}
BASE = ("A1", "A2", "A3")


@dataclass(frozen=True)
class SampleWindow:
    """Finite verification surface: grid bound ``R``, denominators up to ``q``,
    ``N`` random samples from ``seed``, ``fc_configs`` segment configurations."""

    R: int = 8
    q: int = 4
    N: int = 1000
    seed: int = 0
    fc_configs: int = 200

    def describe(self) -> dict:
        return {"R": self.R, "q": self.q, "N": self.N, "seed": self.seed, "fc_configs": self.fc_configs}

    def rng(self, tag: str) -> random.Random:
        return random.Random(f"{self.seed}:{tag}")

    def grid_values(self, spec):
        """Integers in ``[-R, R]`` and, for divisible groups, ``p/d`` in ``(-1, 1)``
        with ``d <= q``; the lexicographic group adds infinitesimal offsets."""
        vals = {mpq(v) for v in range(-self.R, self.R + 1)}
        if spec.divisible:
            for d in range(2, self.q + 1):
                for p in range(-d + 1, d):
                    vals.add(mpq(p, d))
        out = [spec(v) for v in sorted(vals)]
        if spec.is_lex:
            out += [spec(v, e) for v in (-1, 0, 1) for e in (-1, 1)]
        return sorted(out, key=lambda s: (s.a, s.b))

    def anchor_values(self, spec):
        vals = [-self.R, -2, -1, 0, 1, 2, self.R]
        if spec.divisible:
            vals += [mpq(-1, 2), mpq(1, 2)]
        out = {spec(v) for v in vals}
        if spec.is_lex:
            out |= {spec(0, 1), spec(0, -1)}
        return sorted(out, key=lambda s: (s.a, s.b))

    def coarse_values(self, spec):
        out = {spec(v) for v in (-self.R, -1, 0, 1, self.R)}
        if spec.is_lex:
            out.add(spec(0, 1))
        return sorted(out, key=lambda s: (s.a, s.b))

    def random_scalar(self, rng, spec) -> Scalar:
        if not spec.divisible:
            return spec(rng.randint(-self.R, self.R))
        d = rng.randint(1, self.q)
        v = mpq(rng.randint(-self.R * d, self.R * d), d)
        if spec.is_lex and rng.random() < 0.5:
            return spec(v, rng.randint(-2, 2))
        return spec(v)


def _points(values, rank, spec):
    if rank == 1:
        return [Point([v], spec) for v in values]
    return [Point([a, b], spec) for a in values for b in values]


def _germ_wit(B, p: BPoint, w: int):
    return {"at": str(p), "w": format_word(B.phi.elements[w].word)}


def _germ_from_wit(B, d):
    return BPoint.parse(d["at"], B.spec), B.phi.element_from_word(parse_word(d["w"]))


class Suite:
    """All checks for one instance and window; caches shared structures."""

    def __init__(self, B: BuildingInstance, window: SampleWindow = SampleWindow()):
        self.B = B
        self.window = window
        self._cache = {}

    # -- sample surfaces ------------------------------------------------------
    @cached_property
    def grid(self):
        return _points(self.window.grid_values(self.B.spec), self.B.rank, self.B.spec)

    def _dedupe(self, pts):
        seen, out = set(), []
        for p in pts:
            c = self.B.canonical(p)
            if c not in seen:
                seen.add(c)
                out.append(c)
        return out

    @cached_property
    def anchors(self):
        """Distinct anchor points of the glued space, from every chart."""
        vals = self.window.anchor_values(self.B.spec)
        return self._dedupe(BPoint(c, p) for c in range(self.B.n) for p in _points(vals, self.B.rank, self.B.spec))

    @cached_property
    def coarse(self):
        vals = self.window.coarse_values(self.B.spec)
        return self._dedupe(BPoint(c, p) for c in range(self.B.n) for p in _points(vals, self.B.rank, self.B.spec))

    def random_point(self, rng, chart=None) -> BPoint:
        B = self.B
        c = rng.randrange(B.n) if chart is None else chart
        return BPoint(c, Point([self.window.random_scalar(rng, B.spec) for _ in range(B.rank)], B.spec))

    def random_points(self, tag, count):
        rng = self.window.rng(tag)
        return [self.random_point(rng) for _ in range(count)]

    @cached_property
    def boundary(self) -> BoundaryComplex:
        return BoundaryComplex(self.B)

    def residue(self, x: BPoint) -> ResidueComplex:
        key = ("res", self.B.canonical(x))
        r = self._cache.get(key)
        if r is None:
            r = self._cache[key] = ResidueComplex(self.B, x)
        return r

    def germ_charts(self, p: BPoint, w: int):
        key = ("germ", p, w)
        r = self._cache.get(key)
        if r is None:
            r = self._cache[key] = set(germ_charts(self.B, p, w))
        return r

    # -- dispatch -------------------------------------------------------------
    def check(self, name: str, which: str = "d1") -> CheckReport:
        if name not in AXIOMS:
            raise ValueError(f"unknown axiom {name!r}; choose from {AXIOMS}")
        key = (name, which if name in METRIC_DEPENDENT else None)
        if key not in self._cache:
            fn = getattr(self, "check_" + name.replace("''", "_pp").replace("'", "_p"))
            rep = fn(which) if name in METRIC_DEPENDENT else fn()
            rep.name = name
            self._cache[key] = rep
        return self._cache[key]

    # -- individual axioms ----------------------------------------------------
    def check_A1(self):
        return CheckReport("A1", NOT_APPLICABLE, detail="charts are stored modulo affine Weyl reparametrisation")

    def check_A2(self):
        B = self.B
        rep = validate_atlas(B)
        rep.name = "A2"
        if not rep.passed:
            return rep
        rng = self.window.rng("A2")
        for (i, j) in B.pairs():
            inside = [p.local for p in self.anchors if p.chart == i and B.region(i, j).contains(p.local)]
            inside += [BPoint(i, q.local).local for q in self.coarse if q.chart == i]
            inside = [p for p in inside if j in B.charts_containing(BPoint(i, p))]
            for _ in range(min(20, len(inside) ** 2)):
                p, q = rng.choice(inside), rng.choice(inside)
                t = mpq(rng.randint(1, 3), 4)
                z = Point._raw(B.spec, [a.a + (b.a - a.a) * t for a, b in zip(p.coords, q.coords)],
                               [a.b + (b.b - a.b) * t for a, b in zip(p.coords, q.coords)])
                rep.count("convexity_samples")
                if j not in B.charts_containing(BPoint(i, z)):
                    return rep.fail({"kind": "overlap_not_convex", "pair": [i, j], "p": str(p), "q": str(q),
                                     "z": str(z)}, "overlap of two apartments is not convex")
        return rep

    def check_A3(self):
        rep = CheckReport("A3")
        B = self.B
        pairs = list(combinations(self.anchors, 2)) + [(self.anchors[0], self.anchors[0])]
        rng = self.window.rng("A3")
        pairs += [(self.random_point(rng), self.random_point(rng)) for _ in range(self.window.N)]
        for x, y in pairs:
            rep.count("pairs")
            if not B.common_charts(x, y):
                return rep.fail({"kind": "no_common_chart", "x": str(x), "y": str(y)},
                                "no apartment contains both points")
        return rep

    def _random_germ(self, rng):
        p = self.random_point(rng)
        return p, rng.randrange(self.B.phi.order)

    def check_A3_pp(self):
        rep = CheckReport("A3''")
        B = self.B
        rng = self.window.rng("A3''")
        cases = [(x, (y, w)) for x in self.coarse for y in self.coarse for w in range(B.phi.order)]
        cases += [(self.random_point(rng), self._random_germ(rng)) for _ in range(self.window.N)]
        for x, (y, w) in cases:
            rep.count("cases")
            if not set(B.charts_containing(x)) & self.germ_charts(y, w):
                return rep.fail({"kind": "point_germ", "x": str(x), "germ": _germ_wit(B, y, w)},
                                "no apartment contains the point and the germ")
        return rep

    def check_A3_p(self):
        rep = CheckReport("A3'")
        B = self.B
        rng = self.window.rng("A3'")
        germs = [(y, w) for y in self.coarse for w in range(B.phi.order)]
        cases = list(combinations(germs, 2))
        cases += [(self._random_germ(rng), self._random_germ(rng)) for _ in range(self.window.N)]
        for (x, v), (y, w) in cases:
            rep.count("cases")
            if not self.germ_charts(x, v) & self.germ_charts(y, w):
                return rep.fail({"kind": "germ_germ", "germs": [_germ_wit(B, x, v), _germ_wit(B, y, w)]},
                                "no apartment contains both germs")
        return rep

    def _local_points(self):
        extra = self._dedupe(self.random_points("local", max(1, self.window.N // 20)))
        return self._dedupe(self.anchors + extra)

    def check_GG(self):
        rep = CheckReport("GG")
        for x in self._local_points():
            rep.count("points")
            r = self.residue(x).check()
            for k, v in r.stats.items():
                rep.count(k, v)
            if not r.passed:
                return rep.fail(dict(r.witness, at=str(self.B.canonical(x))), "residue is not a building: " + r.detail)
        return rep

    def based_chambers(self, x: BPoint):
        """Distinct full ``x``-based Weyl chambers as ``{key: (chart, base, w)}``."""
        B = self.B
        here = B.charts_containing(x)
        out = {}
        for c, y in sorted(here.items()):
            for w in range(B.phi.order):
                s = WeylSimplex(y, w)
                key = (c, w)
                for d in sorted(here):
                    if d >= c:
                        break
                    g = B.gluing(c, d)
                    if g is not None and cone_in_region(g.region, s):
                        key = (d, B.phi.mul[g.map.weyl][w])
                        break
                if key == (c, w):
                    out[key] = (c, y, w)
        return out

    def charts_containing_chamber(self, c, y, w):
        B = self.B
        s = WeylSimplex(y, w)
        return [g for g in range(B.n) if g == c or (B.gluing(c, g) is not None and cone_in_region(B.region(c, g), s))]

    def check_CO(self):
        rep = CheckReport("CO")
        B = self.B
        for x in self._local_points():
            rep.count("points")
            res = self.residue(x)
            ch = self.based_chambers(x)
            items = sorted(ch.items())
            for (k1, (c1, y1, w1)), (k2, (c2, y2, w2)) in combinations(items, 2):
                g1 = canonical_germ(B, BPoint(c1, y1), w1).key
                g2 = canonical_germ(B, BPoint(c2, y2), w2).key
                if res.delta(g1, g2) != B.phi.diameter:
                    continue
                rep.count("opposite_pairs")
                both = sorted(set(self.charts_containing_chamber(c1, y1, w1)) &
                              set(self.charts_containing_chamber(c2, y2, w2)))
                wit = {"at": str(B.canonical(x)), "chambers": [_germ_wit(B, BPoint(c1, y1), w1),
                                                             _germ_wit(B, BPoint(c2, y2), w2)]}
                if not both:
                    return rep.fail(dict(wit, kind="co_none"), "opposite chambers lie in no common apartment")
                for a in both[1:]:
                    if not B.same_apartment(both[0], a):
                        return rep.fail(dict(wit, kind="co_not_unique", charts=[both[0], a]),
                                        "opposite chambers lie in two different apartments")
        return rep

    @cached_property
    def _cone_charts(self):
        """``{(chart, w): charts containing a sub-chamber of that direction}``."""
        B = self.B
        origin = Point.origin(B.spec, B.rank)
        out = {}
        for c in range(B.n):
            for w in range(B.phi.order):
                s = WeylSimplex(origin, w)
                out[(c, w)] = {g for g in range(B.n)
                               if g == c or (B.region(c, g) is not None and region_contains_cone(B.region(c, g), s)[0])}
        return out

    def check_A4(self):
        """Exhaustive over chamber directions: translates inside one chart are
        nested, so only the direction of a Weyl chamber matters."""
        rep = CheckReport("A4")
        cc = self._cone_charts
        keys = sorted(cc)
        for a, b in combinations(keys, 2):
            rep.count("direction_pairs")
            if not cc[a] & cc[b]:
                return rep.fail({"kind": "a4", "directions": [list(a), list(b)]},
                                "no apartment contains sub-chambers of both")
        return rep

    def centers(self):
        """Chamber germs at anchor points with a target chart containing each."""
        B = self.B
        out = []
        seen = set()
        for x in self.anchors:
            for w in range(B.phi.order):
                g = canonical_germ(B, x, w)
                if g.key in seen:
                    continue
                seen.add(g.key)
                for t in sorted(germ_charts(B, g.at, g.w)):
                    out.append((t, g))
        return out

    def check_A5(self, which="d1"):
        rep = CheckReport("A5")
        B = self.B
        retractions = []
        ys = self.coarse
        for t, g in self.centers():
            r = Retraction(B, t, g)
            retractions.append(r)
            sub = check_well_defined(r, ys)
            rep.count("centers")
            rep.count("well_defined_points", sub.stats.get("points", 0))
            rep.count("chart_pairs", sub.stats.get("chart_pairs", 0))
            if not sub.passed:
                return rep.fail(sub.witness, sub.detail)
        rng = self.window.rng(f"A5:{which}")
        for _ in range(self.window.N):
            r = rng.choice(retractions)
            x, y = self.random_point(rng), self.random_point(rng)
            rep.count("pairs")
            sub = check_nonexpansive(r, [(x, y)], which)
            if not sub.passed:
                return rep.fail(sub.witness, sub.detail)
            rx = r(x)
            if r(rx) != rx:
                return rep.fail({"kind": "retraction_not_idempotent", "center": {"target": r.target, "at": str(r.center.at),
                                                                                 "w": r.center.w}, "y": str(x)},
                                "retraction is not idempotent")
        return rep

    def check_A6(self):
        rep = CheckReport("A6")
        B = self.B
        for a, b, c in combinations(range(B.n), 3):
            kinds = [B.region(x, y).classify() if B.region(x, y) is not None else "empty"
                     for x, y in ((a, b), (a, c), (b, c))]
            if any(k != "half-apartment" for k in kinds):
                continue
            rep.count("triples")
            _, kind = triple_intersection(B, a, b, c)
            if kind == "empty":
                return rep.fail({"kind": "a6", "triple": [a, b, c]},
                                "three apartments meet pairwise in half-apartments but not together")
        return rep

    def check_EC(self):
        rep = CheckReport("EC")
        B = self.B
        for a, b in combinations(range(B.n), 2):
            r = B.region(a, b)
            if r is None or r.classify() != "half-apartment":
                continue
            rep.count("half_apartment_pairs")
            (beta, k), = r.tight.items()
            try:
                new = _exchange_chart(B, a, b, beta, k)
            except ClosureError as exc:
                return rep.fail({"kind": "ec", "pair": [a, b]}, str(exc))
            if not any(reg.is_whole() for reg, _ in new.values()):
                return rep.fail({"kind": "ec", "pair": [a, b]}, "exchange apartment is missing from the atlas")
        return rep

    # -- covering -------------------------------------------------------------
    def fc_configurations(self, which="d1"):
        """The seeded ``(A, x, y, z, mu_w)`` samples used by the FC'' check."""
        B = self.B
        rng = self.window.rng(f"FC:{which}")
        for _ in range(self.window.fc_configs):
            a = rng.randrange(B.n)
            x, y = self.random_point(rng, a), self.random_point(rng, a)
            z = self.random_point(rng)
            yield a, x.local, y.local, z, rng.randrange(B.phi.order)

    def check_FC_pp(self, which="d1"):
        rep = CheckReport("FC''")
        for a, x, y, z, mu_w in self.fc_configurations(which):
            res = fc_cover(self, a, x, y, z, mu_w, which)
            rep.count("configs")
            rep.count("segment_points", res["segment_points"])
            if res["status"] != "ok":
                return rep.fail(dict(res["witness"], kind=res["status"]), res["status"])
        return rep


def fc_cover(suite: Suite, a: int, x: Point, y: Point, z: BPoint, mu_w: int, which="d1"):
    """Cover the windowed segment ``seg_A(x, y)`` by ``z``-based chambers and
    by apartments containing the germ ``mu`` of direction ``mu_w`` at ``z``.

    The chambers are the ``z``-based representatives of the chambers at
    infinity of ``A``; for each one an apartment containing it and ``mu`` is
    built from a chamber with opposite germ.
    """
    B = suite.B
    phi = B.phi
    bc = suite.boundary
    zc = B.charts_containing(z)
    wit = {"A": a, "x": str(x), "y": str(y), "z": str(z), "mu_w": mu_w, "metric": which}
    family = {}
    for cls in sorted(set(bc.apartments[a])):
        for g in sorted(zc):
            ws = bc.directions(cls, g)
            if ws:
                family[cls] = (g, zc[g], ws[0])
                break
        else:
            return {"status": "fc_no_representative", "witness": dict(wit, chamber=cls.ident(phi)),
                    "segment_points": 0}
    if len(family) > len(set(bc.apartments[a])):
        return {"status": "fc_family_too_large", "witness": wit, "segment_points": 0}
    dxy = metric(phi, x, y, which)
    seg = [p for p in suite.grid if metric(phi, x, p, which) + metric(phi, p, y, which) == dxy]
    # cover by z-based chambers
    covering = {}
    for p in seg:
        here = B.charts_containing(BPoint(a, p))
        hit = None
        for cls, (g, zg, v) in family.items():
            if g in here and WeylSimplex(zg, v).contains(phi, here[g]):
                hit = cls
                break
        if hit is None:
            return {"status": "fc_uncovered", "witness": dict(wit, p=str(p)), "segment_points": len(seg)}
        covering.setdefault(hit, []).append(p)
    # apartments containing mu, one per family member that is used
    z0 = BPoint(min(zc), zc[min(zc)])
    mu_charts = germ_charts(B, z0, mu_w)
    cover = []
    for cls in sorted(covering):
        g, zg, v = family[cls]
        s_charts = germ_charts(B, BPoint(g, zg), v)
        tilde = sorted(set(mu_charts) & set(s_charts))
        if not tilde:
            return {"status": "fc_no_germ_apartment", "witness": dict(wit, chamber=cls.ident(phi)),
                    "segment_points": len(seg)}
        t = tilde[0]
        u = s_charts[t][1]
        opp = phi.mul[u][phi.longest]
        full_s = set(suite.charts_containing_chamber(g, zg, v))
        full_o = set(suite.charts_containing_chamber(t, zc[t], opp))
        both = sorted(full_s & full_o)
        if not both:
            return {"status": "fc_no_apartment", "witness": dict(wit, chamber=cls.ident(phi)),
                    "segment_points": len(seg)}
        ai = both[0]
        if ai not in mu_charts:
            return {"status": "fc_apartment_misses_germ", "witness": dict(wit, chamber=cls.ident(phi), chart=ai),
                    "segment_points": len(seg)}
        for p in covering[cls]:
            if ai not in B.charts_containing(BPoint(a, p)):
                return {"status": "fc_uncovered_by_apartment", "witness": dict(wit, p=str(p), chart=ai),
                        "segment_points": len(seg)}
        cover.append({"chamber": cls.ident(phi), "z_chart": g, "germ_chart": t, "apartment": ai,
                      "points": len(covering[cls])})
    return {"status": "ok", "family": {c.ident(phi): [g, format_word(phi.elements[v].word)]
                                       for c, (g, _, v) in family.items()},
            "cover": cover, "segment_points": len(seg), "witness": wit}


# ---------------------------------------------------------------------------

def check_axiom(B: BuildingInstance, name: str, window: SampleWindow = SampleWindow(), which="d1",
                suite: Suite | None = None) -> CheckReport:
    return (suite or Suite(B, window)).check(name, which)


def mainthm_matrix(B: BuildingInstance, window: SampleWindow = SampleWindow(), which="d1",
                   suite: Suite | None = None) -> dict:
    """Verdicts of the six equivalent bundles plus the common base axioms."""
    suite = suite or Suite(B, window)
    out = {"base": merge("base", [suite.check(a, which) for a in BASE])}
    for k, names in BUNDLES.items():
        out[k] = merge(f"bundle{k}", [suite.check(a, which) for a in names])
    return out


def check_metric_independence(B: BuildingInstance, window: SampleWindow = SampleWindow(),
                              suite: Suite | None = None) -> CheckReport:
    """Both metrics induce well defined distances on the glued space that
    satisfy the triangle inequality on cross-apartment triples."""
    suite = suite or Suite(B, window)
    rep = CheckReport("metric")
    for which in METRICS:
        rng = window.rng(f"metric:{which}")
        for _ in range(window.N):
            charts = rng.sample(range(B.n), min(3, B.n)) if B.n >= 3 else [rng.randrange(B.n) for _ in range(3)]
            x, y, z = (suite.random_point(rng, c) for c in charts)
            rep.count("triples")
            d = {}
            for name, (p, q) in {"xy": (x, y), "xz": (x, z), "zy": (z, y)}.items():
                val, ok = distance(B, p, q, which)
                if not ok:
                    return rep.fail({"kind": "metric_inconsistent", "x": str(p), "y": str(q), "metric": which},
                                    "common charts disagree on a distance")
                d[name] = val
            if any(v is None for v in d.values()):
                continue
            if d["xz"] + d["zy"] < d["xy"]:
                return rep.fail({"kind": "triangle", "x": str(x), "y": str(y), "z": str(z), "metric": which},
                                "triangle inequality fails")
    return rep


def find_witness(B: BuildingInstance, kind: str, **args):
    """Search for the apartment (or classification) a structural statement asserts.

    kinds and arguments:

    * ``germ_and_chamber_at_infinity``: ``germ=(BPoint, w)``, ``chamber=ParallelClass``
    * ``chamber_and_germ``: ``chamber=(BPoint, w)``, ``germ=(BPoint, w)``
    * ``germ_and_subchamber``: ``germ=(BPoint, w)``, ``chamber=(BPoint, w)``
    * ``triple_intersection``: ``apartments=(a, b, c)``
    """
    if kind == "triple_intersection":
        a, b, c = args["apartments"]
        region, cls = triple_intersection(B, a, b, c)
        return {"region": str(region), "class": cls} if cls in ("half-apartment", "hyperplane") else None
    germ = args.get("germ")
    if germ is None:
        raise ValueError(f"{kind} needs a germ argument")
    gcharts = set(germ_charts(B, *germ))
    if kind == "germ_and_chamber_at_infinity":
        bc = BoundaryComplex(B)
        hits = [g for g in sorted(gcharts) if bc.in_boundary(args["chamber"], g)]
    elif kind == "chamber_and_germ":
        p, w = args["chamber"]
        s = WeylSimplex(p.local, w)
        hits = [g for g in sorted(gcharts)
                if g == p.chart or (B.region(p.chart, g) is not None and cone_in_region(B.region(p.chart, g), s))]
    elif kind == "germ_and_subchamber":
        p, w = args["chamber"]
        s = WeylSimplex(p.local, w)
        hits = [g for g in sorted(gcharts)
                if g == p.chart or (B.region(p.chart, g) is not None and region_contains_cone(B.region(p.chart, g), s)[0])]
    else:
        raise ValueError(f"unknown witness kind {kind!r}")
    return hits[0] if hits else None


# ---------------------------------------------------------------------------

def replay(B: BuildingInstance, witness: dict, window: SampleWindow = SampleWindow()) -> bool:
    """Re-check a failure witness; True when the violation is reproduced."""
    kind = witness["kind"]
    P = lambda s: BPoint.parse(s, B.spec)  # noqa: E731
    if kind in ("empty_region", "non_weyl_map", "translation", "asymmetric", "cocycle"):
        return replay_validation(B, witness)
    if kind == "overlap_not_convex":
        i, j = witness["pair"]
        z = Point.parse(witness["z"], B.spec)
        ok = [j in B.charts_containing(BPoint(i, Point.parse(witness[k], B.spec))) for k in ("p", "q")]
        return all(ok) and j not in B.charts_containing(BPoint(i, z))
    if kind == "no_common_chart":
        return not B.common_charts(P(witness["x"]), P(witness["y"]))
    if kind == "point_germ":
        return not set(B.charts_containing(P(witness["x"]))) & set(germ_charts(B, *_germ_from_wit(B, witness["germ"])))
    if kind == "germ_germ":
        g1, g2 = (set(germ_charts(B, *_germ_from_wit(B, g))) for g in witness["germs"])
        return not g1 & g2
    if kind.startswith("apartment_") or kind in ("no_common_apartment", "intersection_not_fixed"):
        return not ResidueComplex(B, P(witness["at"])).check().passed
    if kind in ("co_none", "co_not_unique"):
        s = Suite(B, window)
        (p1, w1), (p2, w2) = (_germ_from_wit(B, g) for g in witness["chambers"])
        both = sorted(set(s.charts_containing_chamber(p1.chart, p1.local, w1)) &
                      set(s.charts_containing_chamber(p2.chart, p2.local, w2)))
        if kind == "co_none":
            return not both
        return any(not B.same_apartment(both[0], a) for a in both[1:])
    if kind == "a4":
        cc = Suite(B, window)._cone_charts
        a, b = (tuple(d) for d in witness["directions"])
        return not cc[a] & cc[b]
    if kind == "a6":
        return triple_intersection(B, *witness["triple"])[1] == "empty"
    if kind == "ec":
        a, b = witness["pair"]
        (beta, k), = B.region(a, b).tight.items()
        try:
            new = _exchange_chart(B, a, b, beta, k)
        except ClosureError:
            return True
        return not any(reg.is_whole() for reg, _ in new.values())
    if kind.startswith("retraction_"):
        c = witness["center"]
        g = canonical_germ(B, P(c["at"]), c["w"])
        try:
            r = Retraction(B, c["target"], g)
        except ValueError:
            return True
        if kind == "retraction_expands":
            return not check_nonexpansive(r, [(P(witness["x"]), P(witness["y"]))], witness["metric"]).passed
        if kind == "retraction_fiber":
            y = P(witness["y"])
            return r(y) == r.base and not B.same_point(y, r.base)
        if kind == "retraction_not_idempotent":
            rx = r(P(witness["y"]))
            return r(rx) != rx
        return not check_well_defined(r, [P(witness["y"])] if "y" in witness else []).passed
    if kind.startswith("fc_"):
        s = Suite(B, window)
        res = fc_cover(s, witness["A"], Point.parse(witness["x"], B.spec), Point.parse(witness["y"], B.spec),
                       P(witness["z"]), witness["mu_w"], witness["metric"])
        return res["status"] != "ok"
    if kind == "metric_inconsistent":
        return not distance(B, P(witness["x"]), P(witness["y"]), witness["metric"])[1]
    if kind == "triangle":
        x, y, z = P(witness["x"]), P(witness["y"]), P(witness["z"])
        m = witness["metric"]
        return distance(B, x, z, m)[0] + distance(B, z, y, m)[0] < distance(B, x, y, m)[0]
    raise ValueError(f"unknown witness kind {kind!r}")


__all__ += ["PASS", "FAIL", "NOT_APPLICABLE", "ec_closure"]
