"""The model apartment: points, affine Weyl maps, half-apartments, convex
regions, Weyl simplices and two invariant metrics.

Regions are intersections of half-spaces whose normals are roots.  All
polyhedral questions (emptiness, minimising a root functional, finding a
point) are answered by exact Fourier-Motzkin elimination.  Constraint
constants live in the value group while coefficients are rational, so the
elimination only ever scales group elements by positive rationals and works
unchanged over the lexicographic group.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from gmpy2 import mpq

from .coxeter import RootSystem
from .lambda_core import LambdaSpec, Scalar, SpecMismatchError

__all__ = [
    "Point",
    "AffineMap",
    "HalfSpace",
    "ConvexRegion",
    "WeylSimplex",
    "apply",
    "metric",
    "segment_membership",
    "region_contains_cone",
    "germ_in_region",
    "cone_in_region",
    "METRICS",
]

METRICS = ("d1", "dinf")
_ZERO = mpq(0)


def _pair(f, coords, spec):
    """Evaluate the rational functional ``f`` on scalar coordinates."""
    a = _ZERO
    b = _ZERO
    for fk, x in zip(f, coords):
        if fk:
            a += fk * x.a
            b += fk * x.b
    return Scalar._make(spec, a, b)


class Point:
    """A point of the model space in simple-coroot coordinates."""

    __slots__ = ("coords", "spec", "_hash")

    def __init__(self, coords, spec: LambdaSpec | None = None):
        coords = tuple(coords)
        if spec is None:
            spec = coords[0].spec
        conv = []
        for c in coords:
            if isinstance(c, Scalar):
                if c.spec != spec:
                    raise SpecMismatchError("point coordinates from different value groups")
                conv.append(c)
            else:
                conv.append(spec(c))
        self.coords = tuple(conv)
        self.spec = spec
        self._hash = None

    @classmethod
    def _raw(cls, spec, avals, bvals):
        p = object.__new__(cls)
        p.coords = tuple(Scalar._make(spec, a, b) for a, b in zip(avals, bvals))
        p.spec = spec
        p._hash = None
        return p

    @classmethod
    def origin(cls, spec, rank):
        return cls._raw(spec, (_ZERO,) * rank, (_ZERO,) * rank)

    @classmethod
    def parse(cls, text: str, spec: LambdaSpec) -> "Point":
        t = text.strip()
        if not (t.startswith("(") and t.endswith(")")):
            raise ValueError(f"point must be parenthesised: {text!r}")
        return cls([Scalar.parse(part, spec) for part in split_top_level(t[1:-1])], spec)

    @property
    def rank(self):
        return len(self.coords)

    def __add__(self, other):
        return Point._raw(self.spec, [x.a + y.a for x, y in zip(self.coords, other.coords)],
                          [x.b + y.b for x, y in zip(self.coords, other.coords)])

    def __sub__(self, other):
        return Point._raw(self.spec, [x.a - y.a for x, y in zip(self.coords, other.coords)],
                          [x.b - y.b for x, y in zip(self.coords, other.coords)])

    def scale(self, r):
        return Point._raw(self.spec, [x.a * r for x in self.coords], [x.b * r for x in self.coords])

    def plus_vector(self, v, t=1):
        """``self + t * v`` for a rational vector ``v`` and rational or scalar ``t``."""
        if isinstance(t, Scalar):
            return Point._raw(self.spec, [x.a + vk * t.a for x, vk in zip(self.coords, v)],
                              [x.b + vk * t.b for x, vk in zip(self.coords, v)])
        return Point._raw(self.spec, [x.a + vk * t for x, vk in zip(self.coords, v)],
                          [x.b for x in self.coords])

    def __eq__(self, other):
        return isinstance(other, Point) and self.coords == other.coords

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.coords)
        return self._hash

    def __str__(self):
        return "(" + ",".join(str(c) for c in self.coords) + ")"

    def __repr__(self):
        return f"Point{self}"

    def sort_key(self):
        return tuple((c.a, c.b) for c in self.coords)


def split_top_level(text: str):
    """Split on commas that are not inside parentheses."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p for p in (s.strip() for s in parts) if p]


class AffineMap:
    """``x -> L x + t`` with ``L`` a rational matrix (normally a Weyl element)."""

    __slots__ = ("phi", "matrix", "translation", "weyl")

    def __init__(self, phi: RootSystem, matrix, translation: Point):
        self.phi = phi
        self.matrix = tuple(tuple(mpq(v) for v in row) for row in matrix)
        self.translation = translation
        self.weyl = phi.element_of_matrix(self.matrix)

    @classmethod
    def from_weyl(cls, phi, w: int, translation: Point):
        return cls(phi, phi.elements[w].matrix, translation)

    @classmethod
    def identity(cls, phi, spec):
        return cls.from_weyl(phi, 0, Point.origin(spec, phi.rank))

    @classmethod
    def wall_reflection(cls, phi, beta: int, k: Scalar):
        """Reflection in the affine wall ``beta(x) = k``."""
        w = phi.reflection_element(beta)
        cor = phi.coroots[beta]
        t = Point._raw(k.spec, [k.a * c for c in cor], [k.b * c for c in cor])
        return cls.from_weyl(phi, w, t)

    @property
    def spec(self):
        return self.translation.spec

    @property
    def word(self):
        return None if self.weyl is None else self.phi.elements[self.weyl].word

    def __call__(self, x: Point) -> Point:
        if x.spec != self.translation.spec:
            raise SpecMismatchError("map and point use different value groups")
        m, t = self.matrix, self.translation.coords
        xs = x.coords
        return Point._raw(
            x.spec,
            [sum((row[k] * xs[k].a for k in range(len(xs)) if row[k]), t[i].a) for i, row in enumerate(m)],
            [sum((row[k] * xs[k].b for k in range(len(xs)) if row[k]), t[i].b) for i, row in enumerate(m)],
        )

    def linear(self, v):
        return self.phi.mat_vec(self.matrix, v)

    def compose(self, other: "AffineMap") -> "AffineMap":
        """``self o other``."""
        m = tuple(
            tuple(sum((self.matrix[i][k] * other.matrix[k][j] for k in range(len(self.matrix))), _ZERO)
                  for j in range(len(self.matrix)))
            for i in range(len(self.matrix))
        )
        return AffineMap(self.phi, m, self(other.translation))

    def inverse(self) -> "AffineMap":
        inv = self.phi.matrix_inverse(self.matrix)
        minus_t = self.translation.scale(-1)
        m0 = AffineMap(self.phi, inv, Point.origin(self.spec, self.phi.rank))
        return AffineMap(self.phi, inv, m0(minus_t))

    def is_identity(self):
        return self.weyl == 0 and all(c.is_zero() for c in self.translation.coords)

    def in_translation_group(self, t_mode: str) -> bool:
        if t_mode == "full":
            return True
        return all(self.spec.is_member(c) for c in self.translation.coords)

    def __eq__(self, other):
        return (isinstance(other, AffineMap) and self.matrix == other.matrix
                and self.translation == other.translation)

    def __hash__(self):
        return hash((self.matrix, self.translation))

    def __repr__(self):
        w = "?" if self.weyl is None else (".".join(str(i + 1) for i in self.word) or "e")
        return f"AffineMap(w={w}, t={self.translation})"


@dataclass(frozen=True)
class HalfSpace:
    """``{x : beta(x) >= k}`` for a root ``beta`` given by its index in ``phi.roots``.

    ``{alpha(x) <= k}`` for a positive root is stored as ``(-alpha) >= -k``;
    :meth:`encode` recovers the (positive root, sense, constant) form used in
    instance files.
    """

    beta: int
    k: Scalar

    def contains(self, phi, x: Point) -> bool:
        return _pair(phi.roots[self.beta], x.coords, x.spec) >= self.k

    def value(self, phi, x: Point) -> Scalar:
        return _pair(phi.roots[self.beta], x.coords, x.spec)

    def encode(self, phi):
        p, sign = phi.positive_index(self.beta)
        if sign > 0:
            return {"root": p + 1, "sense": ">=", "k": str(self.k)}
        return {"root": p + 1, "sense": "<=", "k": str(-self.k)}

    @classmethod
    def decode(cls, phi, spec, data) -> "HalfSpace":
        r = int(data["root"])
        if r == 0 or abs(r) > phi.n_positive:
            raise ValueError(f"root index {r} out of range for {phi.type_name}")
        beta = abs(r) - 1 if r > 0 else phi.negate(abs(r) - 1)
        k = Scalar.parse(str(data["k"]), spec)
        sense = data.get("sense", ">=")
        if sense == ">=":
            return cls(beta, k)
        if sense == "<=":
            return cls(phi.negate(beta), -k)
        raise ValueError(f"sense must be '>=' or '<=', got {sense!r}")

    def sort_key(self, phi):
        p, sign = phi.positive_index(self.beta)
        k = self.k if sign > 0 else -self.k
        return (p, 0 if sign > 0 else 1, k.a, k.b)


# ---------------------------------------------------------------------------
# Fourier-Motzkin over rational coefficients and value-group constants.
# A constraint is (coeffs, k) meaning coeffs . x >= k.

def _normalise(coeffs, k):
    lead = next((abs(c) for c in coeffs if c), None)
    if lead is None or lead == 1:
        return tuple(coeffs), k
    return tuple(c / lead for c in coeffs), k / lead


def _prune(cons):
    """Keep the tightest constraint per direction; None if trivially infeasible."""
    best = {}
    for coeffs, k in cons:
        if not any(coeffs):
            if k.sign() > 0:
                return None
            continue
        c, kk = _normalise(coeffs, k)
        old = best.get(c)
        if old is None or kk > old:
            best[c] = kk
    return list(best.items())


def _eliminate(cons, j):
    pos, neg, rest = [], [], []
    for c in cons:
        s = c[0][j]
        (pos if s > 0 else neg if s < 0 else rest).append(c)
    out = list(rest)
    for pc, pk in pos:
        for nc, nk in neg:
            a, b = -nc[j], pc[j]
            out.append((tuple(a * x + b * y for x, y in zip(pc, nc)), pk * a + nk * b))
    return _prune(out)


def _interval(cons, j):
    """Bounds on variable ``j`` from constraints mentioning only ``j``."""
    lo = hi = None
    for coeffs, k in cons:
        g = coeffs[j]
        if g > 0:
            v = k / g
            if lo is None or v > lo:
                lo = v
        elif g < 0:
            v = k / g
            if hi is None or v < hi:
                hi = v
    return lo, hi


def _feasible_point(cons, n, spec):
    cons = _prune(cons)
    if cons is None:
        return None
    stages = [cons]
    for j in range(n - 1, 0, -1):
        cons = _eliminate(cons, j)
        if cons is None:
            return None
        stages.append(cons)
    values = []
    for j in range(n):
        system = stages[n - 1 - j]
        # substitute the already chosen values
        sub = []
        for coeffs, k in system:
            kk = k
            for i, v in enumerate(values):
                if coeffs[i]:
                    kk = kk - v * coeffs[i]
            sub.append((tuple(_ZERO if i < j else c for i, c in enumerate(coeffs)), kk))
        sub = _prune(sub)
        if sub is None:
            return None
        lo, hi = _interval(sub, j)
        if lo is not None and hi is not None and lo > hi:
            return None
        zero = spec.zero()
        if (lo is None or lo <= zero) and (hi is None or hi >= zero):
            v = zero
        elif lo is not None and lo > zero:
            v = lo
        else:
            v = hi
        values.append(v)
    return Point(values, spec)


def _minimize(cons, c, n, spec):
    """Return ("empty", None), ("unbounded", None) or ("ok", min of c.x)."""
    if not any(c):
        return ("ok", spec.zero()) if _feasible_point(cons, n, spec) is not None else ("empty", None)
    j = next(i for i, v in enumerate(c) if v)
    cj = c[j]
    # variables: x_o for o != j, then u = c.x in slot j
    sub = []
    for coeffs, k in cons:
        aj = coeffs[j]
        row = [coeffs[o] - aj * c[o] / cj if o != j else aj / cj for o in range(n)]
        sub.append((tuple(row), k))
    sub = _prune(sub)
    if sub is None:
        return ("empty", None)
    for o in range(n):
        if o != j:
            sub = _eliminate(sub, o)
            if sub is None:
                return ("empty", None)
    lo, hi = _interval(sub, j)
    if lo is not None and hi is not None and lo > hi:
        return ("empty", None)
    if lo is None:
        return ("unbounded", None)
    return ("ok", lo)


class ConvexRegion:
    """Intersection of finitely many root half-spaces of the model space.

    ``halves`` is the irredundant, sorted constraint list; two regions are
    equal when their tight descriptions (the minimum of every root over the
    region) agree, which is representation independent.
    """

    def __init__(self, phi: RootSystem, spec: LambdaSpec, halves=(), canonical=True):
        self.phi = phi
        self.spec = spec
        halves = list(halves)
        merged = {}
        for h in halves:
            if h.k.spec != spec:
                raise SpecMismatchError("half-space constant from another value group")
            old = merged.get(h.beta)
            if old is None or h.k > old.k:
                merged[h.beta] = h
        self._raw = sorted(merged.values(), key=lambda h: h.sort_key(phi))
        self.halves = self._irredundant() if canonical else tuple(self._raw)

    # -- construction helpers ----------------------------------------------
    @classmethod
    def whole(cls, phi, spec):
        return cls(phi, spec, ())

    @classmethod
    def half(cls, phi, spec, beta, k):
        return cls(phi, spec, [HalfSpace(beta, k)])

    @classmethod
    def wall(cls, phi, spec, beta, k):
        return cls(phi, spec, [HalfSpace(beta, k), HalfSpace(phi.negate(beta), -k)])

    def _cons(self, halves=None):
        halves = self._raw if halves is None else halves
        return [(self.phi.roots[h.beta], h.k) for h in halves]

    def _irredundant(self):
        if self._feasible() is None:
            return tuple(self._raw)
        keep = list(self._raw)
        i = 0
        while i < len(keep):
            h = keep[i]
            others = keep[:i] + keep[i + 1:]
            status, val = _minimize(self._cons(others), self.phi.roots[h.beta], self.phi.rank, self.spec)
            if status == "ok" and val >= h.k:
                keep.pop(i)
            else:
                i += 1
        return tuple(keep)

    # -- queries ------------------------------------------------------------
    def _feasible(self):
        return _feasible_point(self._cons(), self.phi.rank, self.spec)

    @cached_property
    def point(self):
        """Some point of the region, or None when empty."""
        return self._feasible()

    def is_empty(self) -> bool:
        return self.point is None

    def contains(self, x: Point) -> bool:
        roots = self.phi.roots
        for h in self.halves:
            if _pair(roots[h.beta], x.coords, x.spec) < h.k:
                return False
        return True

    def minimize(self, beta: int):
        """Minimum of root ``beta`` over the region; None when unbounded below.

        Raises ValueError on an empty region.
        """
        status, val = _minimize(self._cons(), self.phi.roots[beta], self.phi.rank, self.spec)
        if status == "empty":
            raise ValueError("minimising over an empty region")
        return val if status == "ok" else None

    @cached_property
    def tight(self):
        """``{beta: min beta over region}`` for the roots bounded below."""
        if self.is_empty():
            return None
        out = {}
        for beta in range(len(self.phi.roots)):
            v = self.minimize(beta)
            if v is not None:
                out[beta] = v
        return out

    def intersect(self, *others) -> "ConvexRegion":
        halves = list(self._raw)
        for o in others:
            halves.extend(o._raw)
        return ConvexRegion(self.phi, self.spec, halves)

    def image(self, m: AffineMap) -> "ConvexRegion":
        """``m(self)``; ``m`` must map root directions to root directions."""
        inv = m.inverse()
        phi = self.phi
        out = []
        for h in self._raw:
            f = phi.roots[h.beta]
            # beta(inv(y)) >= k  <=>  (beta o L^-1)(y) >= k - beta(L^-1 t)
            newf = tuple(sum((f[k] * inv.matrix[k][c] for k in range(phi.rank)), _ZERO)
                         for c in range(phi.rank))
            shift = _pair(f, inv.translation.coords, self.spec)
            beta2, scale = _root_multiple(phi, newf)
            out.append(HalfSpace(beta2, (h.k - shift) / scale))
        return ConvexRegion(phi, self.spec, out)

    def preimage(self, m: AffineMap) -> "ConvexRegion":
        return self.image(m.inverse())

    def contains_region(self, other: "ConvexRegion") -> bool:
        if other.is_empty():
            return True
        if self.is_empty():
            return False
        for h in self.halves:
            v = other.minimize(h.beta)
            if v is None or v < h.k:
                return False
        return True

    def __eq__(self, other):
        if not isinstance(other, ConvexRegion):
            return NotImplemented
        return self.tight == other.tight

    def __hash__(self):
        t = self.tight
        return hash(None if t is None else tuple(sorted(t.items())))

    def is_whole(self) -> bool:
        return not self.is_empty() and not self.tight

    def classify(self) -> str:
        """One of "empty", "whole", "half-apartment", "hyperplane", "other"."""
        if self.is_empty():
            return "empty"
        t = self.tight
        if not t:
            return "whole"
        if len(t) == 1:
            return "half-apartment"
        if len(t) == 2:
            (b1, k1), (b2, k2) = sorted(t.items())
            if b2 == self.phi.negate(b1) and k1 == -k2:
                return "hyperplane"
        return "other"

    def implicit_equalities(self):
        """Constraints that hold with equality on the whole region."""
        out = []
        for h in self.halves:
            neg = self.phi.negate(h.beta)
            v = self.minimize(neg)
            if v is not None and -v == h.k:
                out.append(h.beta)
        return out

    def direction_basis(self):
        """Rational basis of the linear space parallel to the affine hull."""
        n = self.phi.rank
        eqs = [self.phi.roots[b] for b in self.implicit_equalities()]
        # independent rows
        rows = []
        for e in eqs:
            if not rows:
                rows.append(e)
            elif n == 2 and rows[0][0] * e[1] - rows[0][1] * e[0] != 0:
                rows.append(e)
        if not rows:
            return [tuple(mpq(1) if i == j else _ZERO for i in range(n)) for j in range(n)]
        if len(rows) >= n:
            return []
        a = rows[0]
        return [(a[1], -a[0])]

    def maps_agree(self, m1: AffineMap, m2: AffineMap) -> bool:
        """Do two affine maps coincide on the affine hull of the region?"""
        p = self.point
        if p is None:
            return True
        if m1(p) != m2(p):
            return False
        return all(m1.linear(v) == m2.linear(v) for v in self.direction_basis())

    def encode(self):
        return [h.encode(self.phi) for h in self.halves]

    def __str__(self):
        if self.is_empty():
            return "{}"
        if not self.halves:
            return "A"
        parts = []
        for h in self.halves:
            e = h.encode(self.phi)
            parts.append(f"a{e['root']} {e['sense']} {e['k']}")
        return "{" + ", ".join(parts) + "}"

    __repr__ = __str__


def _root_multiple(phi, func):
    for beta, f in enumerate(phi.roots):
        # func = scale * f with scale > 0
        ratio = None
        ok = True
        for a, b in zip(func, f):
            if b == 0:
                if a != 0:
                    ok = False
                    break
                continue
            r = a / b
            if ratio is None:
                ratio = r
            elif r != ratio:
                ok = False
                break
        if ok and ratio is not None and ratio > 0:
            return beta, ratio
    raise ValueError("map does not send root directions to root directions")


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WeylSimplex:
    """``base + w . (face of the fundamental chamber)``.

    ``face`` is the set of simple-root indices that vanish on the face: the
    empty set gives the full chamber, all indices give the base point.
    """

    base: Point
    w: int
    face: frozenset = frozenset()

    def rays(self, phi):
        return phi.face_rays(self.w, self.face)

    def canonical(self, phi) -> "WeylSimplex":
        return WeylSimplex(self.base, phi.coset_rep(self.w, self.face), self.face)

    def contains(self, phi, x: Point) -> bool:
        v = x - self.base
        walls = phi.chamber_walls[self.w]
        for i, beta in enumerate(walls):
            s = _pair(phi.roots[beta], v.coords, v.spec).sign()
            if s < 0 or (i in self.face and s != 0):
                return False
        return True


def apply(m: AffineMap, x: Point) -> Point:
    return m(x)


def metric(phi: RootSystem, x: Point, y: Point, which: str = "d1") -> Scalar:
    """``d1`` sums and ``dinf`` maximises ``|alpha(x - y)|`` over positive roots."""
    if x.spec != y.spec:
        raise SpecMismatchError("points from different value groups")
    spec = x.spec
    diff_a = [p.a - q.a for p, q in zip(x.coords, y.coords)]
    diff_b = [p.b - q.b for p, q in zip(x.coords, y.coords)]
    if which == "d1":
        ta = tb = _ZERO
        for f in phi.positive_roots:
            a = sum((fk * d for fk, d in zip(f, diff_a) if fk), _ZERO)
            b = sum((fk * d for fk, d in zip(f, diff_b) if fk), _ZERO)
            if a < 0 or (a == 0 and b < 0):
                a, b = -a, -b
            ta += a
            tb += b
        return Scalar._make(spec, ta, tb)
    if which == "dinf":
        best = (_ZERO, _ZERO)
        for f in phi.positive_roots:
            a = sum((fk * d for fk, d in zip(f, diff_a) if fk), _ZERO)
            b = sum((fk * d for fk, d in zip(f, diff_b) if fk), _ZERO)
            if a < 0 or (a == 0 and b < 0):
                a, b = -a, -b
            if (a, b) > best:
                best = (a, b)
        return Scalar._make(spec, *best)
    raise ValueError(f"unknown metric {which!r}; choose from {METRICS}")


def segment_membership(phi, x: Point, y: Point, z: Point, which: str = "d1") -> bool:
    return metric(phi, x, z, which) + metric(phi, z, y, which) == metric(phi, x, y, which)


def region_contains_cone(region: ConvexRegion, simplex: WeylSimplex):
    """Does ``region`` contain a translate of the simplex's direction cone?

    Returns ``(True, apex)`` with an apex whose translate lies in the region,
    or ``(False, None)``.
    """
    phi = region.phi
    if region.is_empty():
        return False, None
    rays = simplex.rays(phi)
    for h in region.halves:
        f = phi.roots[h.beta]
        for v in rays:
            if phi_pair(f, v) < 0:
                return False, None
    return True, region.point


def phi_pair(f, v):
    return sum((a * b for a, b in zip(f, v)), _ZERO)


def germ_in_region(region: ConvexRegion, simplex: WeylSimplex) -> bool:
    """Is some ``B_eps(base) cap simplex`` inside the region?

    Only constraints that are tight at the base point matter; for those the
    cone's extreme rays must point into the half-space.
    """
    phi = region.phi
    x = simplex.base
    rays = None
    for h in region.halves:
        f = phi.roots[h.beta]
        val = _pair(f, x.coords, x.spec)
        c = val._cmp(h.k)
        if c < 0:
            return False
        if c == 0:
            if rays is None:
                rays = simplex.rays(phi)
            for v in rays:
                if phi_pair(f, v) < 0:
                    return False
    return True


def cone_in_region(region: ConvexRegion, simplex: WeylSimplex) -> bool:
    """Is the whole simplex (base plus cone) inside the region?"""
    phi = region.phi
    if not region.contains(simplex.base):
        return False
    rays = simplex.rays(phi)
    for h in region.halves:
        f = phi.roots[h.beta]
        for v in rays:
            if phi_pair(f, v) < 0:
                return False
    return True
