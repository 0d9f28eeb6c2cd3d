"""Finite atlases: apartments glued along convex regions by affine Weyl maps.

A building instance has ``m`` charts, each a copy of the model space.  The
gluing ``(i, j)`` records the overlap of apartments ``i`` and ``j`` as a
region in chart-``i`` coordinates together with the affine map that sends
chart-``i`` coordinates of a shared point to its chart-``j`` coordinates.
Charts are only ever compared through these maps, so reparametrising a chart
by an affine Weyl element changes nothing observable.
"""
from __future__ import annotations

import json
import re
from collections import deque
from dataclasses import dataclass
from itertools import combinations, permutations

from gmpy2 import mpq

from .coxeter import RootSystem, build_root_system, parse_word
from .lambda_core import LambdaSpec, Scalar
from .model_space import AffineMap, ConvexRegion, HalfSpace, Point
from .reports import CheckReport

__all__ = [
    "Gluing",
    "BuildingInstance",
    "BPoint",
    "LoadError",
    "validate_atlas",
    "replay_validation",
    "same_point",
    "transport",
    "ec_closure",
    "generate",
    "thin",
    "star",
    "star_seed",
    "save",
    "load",
    "dumps_instance",
    "loads_instance",
]

T_MODES = ("full", "lattice")


@dataclass(frozen=True)
class Gluing:
    i: int
    j: int
    region: ConvexRegion  # in chart-i coordinates
    map: AffineMap  # chart i -> chart j


@dataclass(frozen=True)
class BPoint:
    """A point of the glued space, given by a chart and local coordinates."""

    chart: int
    local: Point

    def __str__(self):
        return f"{self.chart}:{self.local}"

    @classmethod
    def parse(cls, text: str, spec: LambdaSpec) -> "BPoint":
        chart, _, rest = text.partition(":")
        return cls(int(chart), Point.parse(rest, spec))


class BuildingInstance:
    """An atlas of ``n_apartments`` charts with symmetric gluing data."""

    def __init__(self, name, phi: RootSystem, spec: LambdaSpec, t_mode: str, n_apartments: int,
                 gluings=(), metadata=None, synthesize=True):
        if t_mode not in T_MODES:
            raise ValueError(f"t_mode must be one of {T_MODES}")
        self.name = name
        self.phi = phi
        self.spec = spec
        self.t_mode = t_mode
        self.n = n_apartments
        self.metadata = dict(metadata or {})
        self._glue = {}
        for g in gluings:
            if not (0 <= g.i < self.n and 0 <= g.j < self.n) or g.i == g.j:
                raise ValueError(f"bad gluing indices ({g.i}, {g.j})")
            self._glue[(g.i, g.j)] = g
        if synthesize:
            for (i, j), g in list(self._glue.items()):
                if (j, i) not in self._glue:
                    self._glue[(j, i)] = Gluing(j, i, g.region.image(g.map), g.map.inverse())
        self._identity = AffineMap.identity(phi, spec)
        self._whole = ConvexRegion.whole(phi, spec)
        self._neighbours = {i: sorted(j for (a, j) in self._glue if a == i) for i in range(self.n)}
        self._contain_cache = {}

    # -- gluing data --------------------------------------------------------
    @property
    def rank(self):
        return self.phi.rank

    def labels(self):
        return self.metadata.get("charts") or [f"A{i}" for i in range(self.n)]

    def gluing(self, i, j):
        if i == j:
            return Gluing(i, i, self._whole, self._identity)
        return self._glue.get((i, j))

    def region(self, i, j) -> ConvexRegion | None:
        g = self.gluing(i, j)
        return None if g is None else g.region

    def map(self, i, j) -> AffineMap | None:
        g = self.gluing(i, j)
        return None if g is None else g.map

    def pairs(self):
        return sorted(self._glue)

    def neighbours(self, i):
        return self._neighbours[i]

    # -- points -------------------------------------------------------------
    def charts_containing(self, p: BPoint) -> dict:
        """``{chart: local coordinates}`` for every chart containing ``p``.

        Breadth-first over the gluing graph, so the first path found to each
        chart is a shortest one.
        """
        key = (p.chart, p.local)
        hit = self._contain_cache.get(key)
        if hit is not None:
            return hit
        found = {p.chart: p.local}
        queue = deque([p.chart])
        while queue:
            c = queue.popleft()
            y = found[c]
            for d in self._neighbours[c]:
                if d in found:
                    continue
                g = self._glue[(c, d)]
                if g.region.contains(y):
                    found[d] = g.map(y)
                    queue.append(d)
        if len(self._contain_cache) > 200000:
            self._contain_cache.clear()
        self._contain_cache[key] = found
        return found

    def transport(self, p: BPoint, target: int) -> Point | None:
        return self.charts_containing(p).get(target)

    def same_point(self, p: BPoint, q: BPoint) -> bool:
        return self.transport(p, q.chart) == q.local

    def canonical(self, p: BPoint) -> BPoint:
        found = self.charts_containing(p)
        c = min(found)
        return BPoint(c, found[c])

    def common_charts(self, p: BPoint, q: BPoint):
        a, b = self.charts_containing(p), self.charts_containing(q)
        return sorted(set(a) & set(b))

    # -- derived instances ----------------------------------------------------
    def same_apartment(self, i, j) -> bool:
        if i == j:
            return True
        r = self.region(i, j)
        return r is not None and r.is_whole()

    def without_charts(self, drop, name=None) -> "BuildingInstance":
        """Remove charts and renumber the rest in order."""
        drop = set(drop)
        keep = [i for i in range(self.n) if i not in drop]
        new = {old: k for k, old in enumerate(keep)}
        gl = [Gluing(new[g.i], new[g.j], g.region, g.map) for g in self._glue.values()
              if g.i in new and g.j in new]
        meta = dict(self.metadata)
        if "charts" in meta:
            meta["charts"] = [meta["charts"][i] for i in keep]
        meta["derived"] = f"removed charts {sorted(drop)}"
        return BuildingInstance(name or self.name, self.phi, self.spec, self.t_mode, len(keep), gl,
                                meta, synthesize=False)

    def with_map(self, i, j, m: AffineMap, name=None) -> "BuildingInstance":
        """Replace the transition map ``i -> j`` (and its reverse)."""
        g = self._glue[(i, j)]
        gl = [x for k, x in self._glue.items() if k not in ((i, j), (j, i))]
        gl.append(Gluing(i, j, g.region, m))
        meta = dict(self.metadata, derived=f"replaced map {i}->{j}")
        return BuildingInstance(name or self.name, self.phi, self.spec, self.t_mode, self.n, gl, meta)

    def __repr__(self):
        return (f"BuildingInstance({self.name!r}, {self.phi.type_name}, {self.spec.tag}, "
                f"{self.t_mode}, apartments={self.n})")


# ---------------------------------------------------------------------------
# validation

def validate_atlas(B: BuildingInstance) -> CheckReport:
    """Structural checks on the atlas; the first violation becomes the witness."""
    rep = CheckReport("atlas")
    for (i, j) in B.pairs():
        g = B.gluing(i, j)
        rep.count("gluings")
        if g.region.is_empty():
            return rep.fail({"kind": "empty_region", "pair": [i, j]}, f"gluing {i}->{j} has an empty region")
        if g.map.weyl is None:
            return rep.fail({"kind": "non_weyl_map", "pair": [i, j]},
                            f"linear part of map {i}->{j} is not a Weyl group element")
        if not g.map.in_translation_group(B.t_mode):
            return rep.fail({"kind": "translation", "pair": [i, j]},
                            f"translation of map {i}->{j} is outside the lattice")
        back = B.gluing(j, i)
        if back is None or back.region != g.region.image(g.map) or back.map.compose(g.map) != B._identity:
            return rep.fail({"kind": "asymmetric", "pair": [i, j]}, f"gluings {i}->{j} and {j}->{i} disagree")
    for i, j, k in permutations(range(B.n), 3):
        gij, gjk = B.gluing(i, j), B.gluing(j, k)
        if gij is None or gjk is None:
            continue
        rep.count("triples")
        q = gij.region.intersect(gjk.region.preimage(gij.map))
        if q.is_empty():
            continue
        gik = B.gluing(i, k)
        direct = gik.region if gik is not None else None
        if direct is None or not direct.contains_region(q):
            pt = _point_outside(q, direct)
            return rep.fail({"kind": "cocycle", "triple": [i, j, k], "point": str(pt)},
                            f"point of chart {i} reaches chart {k} through {j} but not directly")
        composed = gjk.map.compose(gij.map)
        if not q.maps_agree(composed, gik.map):
            pt = next(p for p in _spanning_points(q) if composed(p) != gik.map(p))
            return rep.fail({"kind": "cocycle", "triple": [i, j, k], "point": str(pt)},
                            f"maps {i}->{j}->{k} and {i}->{k} disagree on the triple overlap")
        rep.count("overlap_points")
    return rep


def _point_outside(q: ConvexRegion, r: ConvexRegion | None) -> Point:
    """A point of ``q`` outside ``r`` (``q`` not contained in ``r``)."""
    if r is None:
        return q.point
    phi, spec = q.phi, q.spec
    for h in r.halves:
        v = q.minimize(h.beta)
        if v is None:
            v = h.k - spec(1)
        if v < h.k:
            return q.intersect(ConvexRegion.half(phi, spec, phi.negate(h.beta), -v)).point
    raise ValueError("region is contained")


def _spanning_points(q: ConvexRegion):
    """Points of ``q`` whose affine hull is the affine hull of ``q``."""
    phi, spec = q.phi, q.spec
    p = q.point
    yield p
    for beta in range(len(phi.roots)):
        v = ConvexRegion.half(phi, spec, beta, phi_value(phi, beta, p) + spec(1))
        x = q.intersect(v).point
        if x is not None:
            yield x


def phi_value(phi, beta, p: Point):
    return HalfSpace(beta, p.spec.zero()).value(phi, p)


def replay_validation(B: BuildingInstance, witness: dict) -> bool:
    """True when the witness still exhibits a violation on ``B``."""
    kind = witness["kind"]
    if kind in ("empty_region", "non_weyl_map", "translation", "asymmetric"):
        i, j = witness["pair"]
        g = B.gluing(i, j)
        if kind == "empty_region":
            return g.region.is_empty()
        if kind == "non_weyl_map":
            return g.map.weyl is None
        if kind == "translation":
            return not g.map.in_translation_group(B.t_mode)
        back = B.gluing(j, i)
        return back is None or back.map.compose(g.map) != B._identity
    if kind == "cocycle":
        i, j, k = witness["triple"]
        x = Point.parse(witness["point"], B.spec)
        gij, gjk, gik = B.gluing(i, j), B.gluing(j, k), B.gluing(i, k)
        if not (gij.region.contains(x) and gjk.region.contains(gij.map(x))):
            return False
        if gik is None or not gik.region.contains(x):
            return True
        q = gij.region.intersect(gjk.region.preimage(gij.map))
        return gjk.map(gij.map(x)) != gik.map(x) or not q.maps_agree(gjk.map.compose(gij.map), gik.map)
    raise ValueError(f"unknown witness kind {kind!r}")


def same_point(B: BuildingInstance, p: BPoint, q: BPoint) -> bool:
    return B.same_point(p, q)


def transport(B: BuildingInstance, p: BPoint, target: int) -> Point | None:
    return B.transport(p, target)


# ---------------------------------------------------------------------------
# exchange closure

class ClosureError(RuntimeError):
    pass


def _combine(phi, spec, beta, k, p1, m1, p2, m2):
    """Glue two pieces of an overlap split by the wall ``beta = k``."""
    e1, e2 = p1.is_empty(), p2.is_empty()
    if e1 and e2:
        return None
    if e2:
        return p1, m1
    if e1:
        return p2, m2
    if p1.contains_region(p2) and p2.maps_agree(m1, m2):
        return p1, m1
    if p2.contains_region(p1) and p1.maps_agree(m1, m2):
        return p2, m2
    t1, t2 = p1.tight, p2.tight
    hull = ConvexRegion(phi, spec, [HalfSpace(b, min(t1[b], t2[b])) for b in t1 if b in t2])
    low = ConvexRegion.half(phi, spec, phi.negate(beta), -k)
    high = ConvexRegion.half(phi, spec, beta, k)
    if hull.intersect(low) != p1 or hull.intersect(high) != p2:
        raise ClosureError("overlap with the new apartment is not convex")
    if not hull.maps_agree(m1, m2):
        raise ClosureError("transition maps of the two halves disagree on the wall")
    return hull, m1


def _exchange_chart(B, a, b, beta, k):
    """Gluings of the apartment (A xor B) cup H as a new chart, ``H: beta = k``.

    Its chart agrees with ``a`` on ``beta <= k`` and with ``b`` (after
    reflecting in H) on ``beta >= k``.
    """
    phi, spec = B.phi, B.spec
    refl = AffineMap.wall_reflection(phi, beta, k)
    s = B.map(a, b).compose(refl)
    low = ConvexRegion.half(phi, spec, phi.negate(beta), -k)
    high = ConvexRegion.half(phi, spec, beta, k)
    out = {}
    for d in range(B.n):
        ra, rb = B.region(a, d), B.region(b, d)
        p1 = low.intersect(ra) if ra is not None else None
        p2 = high.intersect(rb.preimage(s)) if rb is not None else None
        m1 = B.map(a, d) if ra is not None else None
        m2 = B.map(b, d).compose(s) if rb is not None else None
        empty = ConvexRegion(phi, spec, [HalfSpace(beta, k), HalfSpace(phi.negate(beta), -k - spec(1))])
        res = _combine(phi, spec, beta, k, p1 if p1 is not None else empty, m1,
                       p2 if p2 is not None else empty, m2)
        if res is not None:
            out[d] = res
    return out


def ec_closure(B: BuildingInstance, max_charts: int = 64) -> BuildingInstance:
    """Add exchange apartments until every half-apartment overlap is closed.

    For charts ``a < b`` meeting in a half-apartment ``M`` with wall ``H``
    the apartment ``(A xor B) cup H`` is added unless it is already present.
    """
    gluings = {k: v for k, v in B._glue.items()}
    cur = B
    labels = list(B.labels())
    changed = True
    while changed:
        changed = False
        for a, b in combinations(range(cur.n), 2):
            r = cur.region(a, b)
            if r is None or r.classify() != "half-apartment":
                continue
            (beta, k), = r.tight.items()
            new = _exchange_chart(cur, a, b, beta, k)
            if any(reg.is_whole() for reg, _ in new.values()):
                continue
            if cur.n >= max_charts:
                raise ClosureError(f"exchange closure exceeded {max_charts} charts "
                                   f"(last pair {a},{b}, {len(gluings)} gluings)")
            c = cur.n
            for d, (reg, m) in new.items():
                gluings[(c, d)] = Gluing(c, d, reg, m)
            labels.append(f"{labels[a]}^{labels[b]}")
            meta = dict(B.metadata, charts=labels)
            cur = BuildingInstance(B.name, B.phi, B.spec, B.t_mode, c + 1, gluings.values(), meta)
            gluings = dict(cur._glue)
            changed = True
            break
    if cur is not B:
        meta = dict(cur.metadata)
        meta["closure_added"] = cur.n - B.n
        cur = BuildingInstance(B.name, B.phi, B.spec, B.t_mode, cur.n, cur._glue.values(), meta,
                               synthesize=False)
    return cur


# ---------------------------------------------------------------------------
# generators

def thin(type_name="A2", lam="Q", t_mode="full") -> BuildingInstance:
    phi = build_root_system(type_name)
    spec = LambdaSpec.from_tag(lam)
    return BuildingInstance(f"thin-{type_name}-{spec.tag}", phi, spec, t_mode, 1, (),
                            {"generator": "thin", "charts": ["A"]})


def _star_pairs(k):
    return list(combinations(range(k), 2))


def star(type_name="A1", lam="Z", branches=3, root=1, t_mode="full") -> BuildingInstance:
    """``branches`` half-apartments sharing the wall of a positive root.

    Chart ``A_ij`` (``i < j``) shows half ``i`` on the side ``alpha >= 0`` in
    its own coordinates and half ``j`` on ``alpha <= 0`` via the reflection
    in the wall.  Every pair of halves is an apartment, so the atlas is
    exchange closed.
    """
    if branches < 2:
        raise ValueError("a star needs at least two branches")
    phi = build_root_system(type_name)
    spec = LambdaSpec.from_tag(lam)
    if not 1 <= root <= phi.n_positive:
        raise ValueError(f"wall root index must be in 1..{phi.n_positive}")
    alpha = root - 1
    zero = spec.zero()
    plus = ConvexRegion.half(phi, spec, alpha, zero)
    minus = ConvexRegion.half(phi, spec, phi.negate(alpha), zero)
    wall = ConvexRegion.wall(phi, spec, alpha, zero)
    ident = AffineMap.identity(phi, spec)
    refl = AffineMap.wall_reflection(phi, alpha, zero)
    pairs = _star_pairs(branches)
    gl = []
    for a, pa in enumerate(pairs):
        for b, pb in enumerate(pairs):
            if a >= b:
                continue
            common = set(pa) & set(pb)
            if not common:
                gl.append(Gluing(a, b, wall, ident))
                continue
            t, = common
            side_a = pa.index(t) == 0
            side_b = pb.index(t) == 0
            gl.append(Gluing(a, b, plus if side_a else minus, ident if side_a == side_b else refl))
    labels = [f"A{i}{j}" for i, j in pairs]
    meta = {"generator": "star", "branches": branches, "root": root, "charts": labels}
    return BuildingInstance(f"star-{type_name}-{spec.tag}-{branches}", phi, spec, t_mode, len(pairs), gl, meta)


def star_seed(type_name="A1", lam="Z", branches=3, root=1, t_mode="full") -> BuildingInstance:
    """Only the apartments through branch 0, glued by the identity on it."""
    phi = build_root_system(type_name)
    spec = LambdaSpec.from_tag(lam)
    alpha = root - 1
    plus = ConvexRegion.half(phi, spec, alpha, spec.zero())
    ident = AffineMap.identity(phi, spec)
    n = branches - 1
    gl = [Gluing(a, b, plus, ident) for a, b in combinations(range(n), 2)]
    labels = [f"A0{j}" for j in range(1, branches)]
    meta = {"generator": "star-seed", "branches": branches, "root": root, "charts": labels}
    return BuildingInstance(f"seed-{type_name}-{spec.tag}-{branches}", phi, spec, t_mode, n, gl, meta)


GENERATORS = {"thin": thin, "star": star, "star-seed": star_seed}


def generate(kind: str, **params) -> BuildingInstance:
    if kind not in GENERATORS:
        raise ValueError(f"unknown generator {kind!r}; choose from {sorted(GENERATORS)}")
    B = GENERATORS[kind](**params)
    rep = validate_atlas(B)
    if not rep.passed:
        raise AssertionError(f"generator produced an invalid atlas: {rep.detail}")
    return B


# ---------------------------------------------------------------------------
# file format

class LoadError(ValueError):
    def __init__(self, message, line=None, col=None):
        where = f" (line {line}, column {col})" if line is not None else ""
        super().__init__(message + where)
        self.line, self.col = line, col


def _encode_map(phi, m: AffineMap):
    out = {"translation": [str(c) for c in m.translation.coords]}
    if m.weyl is not None:
        out["word"] = [s + 1 for s in phi.elements[m.weyl].word]
    else:
        out["matrix"] = [[str(v) if v.denominator != 1 else int(v) for v in row] for row in m.matrix]
    return out


def instance_to_dict(B: BuildingInstance) -> dict:
    gl = []
    for (i, j) in B.pairs():
        if i > j:
            continue
        g = B.gluing(i, j)
        gl.append({"i": i, "j": j, "region": g.region.encode(), "map": _encode_map(B.phi, g.map)})
    return {
        "name": B.name,
        "root_system": B.phi.type_name,
        "lambda": B.spec.tag,
        "t_mode": B.t_mode,
        "apartments": B.n,
        "metadata": B.metadata,
        "gluings": gl,
    }


def dumps_instance(B: BuildingInstance) -> str:
    return json.dumps(instance_to_dict(B), indent=1, sort_keys=True) + "\n"


def save(B: BuildingInstance, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_instance(B))


def _locate(text, needle):
    idx = text.find(needle)
    if idx < 0:
        return None, None
    line = text.count("\n", 0, idx) + 1
    col = idx - (text.rfind("\n", 0, idx) + 1) + 1
    return line, col


def loads_instance(text: str) -> BuildingInstance:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise LoadError(exc.msg, exc.lineno, exc.colno) from None

    def err(msg, needle):
        raise LoadError(msg, *_locate(text, needle))

    if not isinstance(data, dict):
        raise LoadError("instance must be a JSON object", 1, 1)
    for key in ("root_system", "lambda", "apartments"):
        if key not in data:
            raise LoadError(f"missing header field {key!r}", 1, 1)
    try:
        phi = build_root_system(data["root_system"])
    except ValueError as exc:
        err(str(exc), '"root_system"')
    try:
        spec = LambdaSpec.from_tag(data["lambda"])
    except ValueError as exc:
        err(str(exc), '"lambda"')
    t_mode = data.get("t_mode", "full")
    if t_mode not in T_MODES:
        err(f"t_mode must be one of {T_MODES}", '"t_mode"')
    n = data["apartments"]
    if not isinstance(n, int) or n < 1:
        err("apartments must be a positive integer", '"apartments"')
    gl = []
    for idx, rec in enumerate(data.get("gluings", [])):
        try:
            i, j = int(rec["i"]), int(rec["j"])
            if not (0 <= i < n and 0 <= j < n) or i == j:
                raise ValueError(f"gluing indices ({i}, {j}) out of range")
            region = ConvexRegion(phi, spec, [HalfSpace.decode(phi, spec, h) for h in rec["region"]])
            mp = rec["map"]
            t = Point([Scalar.parse(str(c), spec) for c in mp["translation"]], spec)
            if len(t.coords) != phi.rank:
                raise ValueError("translation has the wrong length")
            if "matrix" in mp:
                mat = [[mpq(str(v)) if isinstance(v, str) else mpq(v) for v in row] for row in mp["matrix"]]
                m = AffineMap(phi, mat, t)
            else:
                word = mp.get("word", [])
                if isinstance(word, str):
                    word = [s + 1 for s in parse_word(word)]
                w = phi.element_from_word([int(s) - 1 for s in word])
                m = AffineMap.from_weyl(phi, w, t)
        except (KeyError, ValueError, TypeError) as exc:
            line, col = _locate_record(text, idx)
            raise LoadError(f"gluing #{idx}: {exc}", line, col) from None
        gl.append(Gluing(i, j, region, m))
    return BuildingInstance(data.get("name", "unnamed"), phi, spec, t_mode, n, gl, data.get("metadata"))


def _locate_record(text, idx):
    starts = [m.start() for m in re.finditer(r'"i"\s*:', text)]
    if idx < len(starts):
        pos = starts[idx]
        return text.count("\n", 0, pos) + 1, pos - (text.rfind("\n", 0, pos) + 1) + 1
    return None, None


def load(path) -> BuildingInstance:
    with open(path, encoding="utf-8") as fh:
        return loads_instance(fh.read())
