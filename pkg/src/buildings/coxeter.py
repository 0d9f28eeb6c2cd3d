"""Finite root systems of rank <= 2 and their spherical Weyl groups.

Points of the model space are written in the basis of simple coroots,
``x = sum_i x_i * alpha_i^vee``.  A root ``beta`` is then the rational
linear functional ``beta(x) = sum_i beta_i x_i`` with
``beta_i = <alpha_i^vee, beta>``, and every Weyl group element acts by a
rational matrix.

Normalisations (``cartan[i][j] = <alpha_i^vee, alpha_j>``)::

    A1  [[2]]
    A2  [[2, -1], [-1, 2]]
    B2  [[2, -2], [-1, 2]]     alpha_1 short, alpha_2 long

so the positive roots of B2 are alpha_1, alpha_2, alpha_1+alpha_2 and
2alpha_1+alpha_2.  Adding G2 only needs another Cartan matrix here.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache

from gmpy2 import mpq

__all__ = [
    "CARTAN",
    "RootSystem",
    "WeylElement",
    "build_root_system",
    "reflect",
    "enumerate_weyl_group",
    "gallery_distance",
    "solve",
    "format_word",
    "parse_word",
]

CARTAN = {
    "A1": ((2,),),
    "A2": ((2, -1), (-1, 2)),
    "B2": ((2, -2), (-1, 2)),
}

Matrix = tuple  # tuple of row tuples of mpq


def _mat_mul(a, b):
    n = len(a)
    return tuple(
        tuple(sum((a[i][k] * b[k][j] for k in range(n)), mpq(0)) for j in range(n))
        for i in range(n)
    )


def _identity(n):
    return tuple(tuple(mpq(1) if i == j else mpq(0) for j in range(n)) for i in range(n))


def solve(m, rhs):
    """Solve ``m @ x = rhs`` over the rationals (``m`` square, invertible)."""
    n = len(m)
    aug = [[mpq(v) for v in row] + [mpq(r)] for row, r in zip(m, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [v / p for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [v - f * w for v, w in zip(aug[r], aug[col])]
    return tuple(aug[r][n] for r in range(n))


def format_word(word) -> str:
    """``(0, 1)`` -> ``"1.2"``; the empty word is ``"e"``."""
    return ".".join(str(i + 1) for i in word) if word else "e"


def parse_word(text: str) -> tuple:
    text = text.strip()
    if text in ("", "e"):
        return ()
    return tuple(int(t) - 1 for t in text.split("."))


@dataclass(frozen=True)
class WeylElement:
    index: int
    word: tuple
    matrix: Matrix = field(repr=False)

    @property
    def length(self) -> int:
        return len(self.word)

    def __str__(self):
        return format_word(self.word)


class RootSystem:
    """Root data, Weyl group tables and chamber geometry for one type."""

    def __init__(self, type_name: str):
        if type_name not in CARTAN:
            raise ValueError(f"unsupported root system {type_name!r}; choose from {sorted(CARTAN)}")
        self.type_name = type_name
        cartan = CARTAN[type_name]
        self.cartan = cartan
        n = self.rank = len(cartan)
        # alpha_j as a functional on coroot coordinates: column j of the Cartan matrix
        self.simple_roots = tuple(tuple(mpq(cartan[k][j]) for k in range(n)) for j in range(n))
        self.simple_matrices = tuple(self._simple_reflection(i) for i in range(n))

        self._enumerate_group()
        self._build_roots()
        self._build_tables()

    # -- construction -------------------------------------------------------
    def _simple_reflection(self, i):
        n = self.rank
        alpha = self.simple_roots[i]
        rows = []
        for r in range(n):
            row = []
            for c in range(n):
                v = mpq(1) if r == c else mpq(0)
                if r == i:
                    v -= alpha[c]
                row.append(v)
            rows.append(tuple(row))
        return tuple(rows)

    def _enumerate_group(self):
        n = self.rank
        ident = _identity(n)
        found = {ident: ()}
        order = [ident]
        queue = deque([ident])
        while queue:
            m = queue.popleft()
            word = found[m]
            for s in range(n):
                m2 = _mat_mul(m, self.simple_matrices[s])
                if m2 not in found:
                    found[m2] = word + (s,)
                    order.append(m2)
                    queue.append(m2)
        self.elements = tuple(WeylElement(i, found[m], m) for i, m in enumerate(order))
        self._index_of_matrix = {e.matrix: e.index for e in self.elements}
        self.order = len(self.elements)
        self.diameter = max(e.length for e in self.elements)
        self.longest = max(self.elements, key=lambda e: e.length).index

    def _build_roots(self):
        n = self.rank
        seen = {}
        for e in self.elements:
            inv = self.matrix_inverse(e.matrix)
            for j in range(n):
                beta = self.simple_roots[j]
                func = tuple(sum((beta[k] * inv[k][c] for k in range(n)), mpq(0)) for c in range(n))
                cor = tuple(e.matrix[r][j] for r in range(n))
                seen.setdefault(func, cor)
        simple_t = tuple(tuple(self.simple_roots[j][k] for j in range(n)) for k in range(n))
        pos = []
        for func, cor in seen.items():
            coeffs = solve(simple_t, func)
            if all(c >= 0 for c in coeffs):
                pos.append((sum(coeffs), tuple(-c for c in coeffs), func, cor, coeffs))
        pos.sort()
        self.n_positive = len(pos)
        self.positive_coefficients = tuple(p[4] for p in pos)
        funcs = [p[2] for p in pos] + [tuple(-v for v in p[2]) for p in pos]
        cors = [p[3] for p in pos] + [tuple(-v for v in p[3]) for p in pos]
        if len(funcs) != len(seen):
            raise AssertionError("root system is not the disjoint union of positive and negative roots")
        self.roots = tuple(funcs)
        self.coroots = tuple(cors)
        self._root_index = {f: i for i, f in enumerate(funcs)}

    def _build_tables(self):
        n, N = self.rank, self.order
        self.mul = tuple(
            tuple(self._index_of_matrix[_mat_mul(a.matrix, b.matrix)] for b in self.elements)
            for a in self.elements
        )
        self.inverse = tuple(next(j for j in range(N) if self.mul[i][j] == 0) for i in range(N))
        # w . beta for every element and root
        self.root_action = tuple(
            tuple(self._act_on_root(e.index, b) for b in range(len(self.roots))) for e in self.elements
        )
        self.coweights = tuple(
            solve(tuple(tuple(mpq(self.cartan[k][j]) for k in range(n)) for j in range(n)),
                  tuple(mpq(1) if i == j else mpq(0) for j in range(n)))
            for i in range(n)
        )
        self.chamber_walls = tuple(
            tuple(self.root_action[e.index][j] for j in range(n)) for e in self.elements
        )
        self.chamber_rays = tuple(
            tuple(self.mat_vec(e.matrix, self.coweights[i]) for i in range(n)) for e in self.elements
        )

    def _act_on_root(self, w, beta):
        inv = self.elements[self.inverse[w]].matrix
        n = self.rank
        b = self.roots[beta]
        func = tuple(sum((b[k] * inv[k][c] for k in range(n)), mpq(0)) for c in range(n))
        return self._root_index[func]

    # -- queries ------------------------------------------------------------
    def inverse_of(self, w: int) -> int:
        return self.inverse[w]

    @staticmethod
    def matrix_inverse(m):
        n = len(m)
        cols = [solve(m, tuple(mpq(1) if i == j else mpq(0) for i in range(n))) for j in range(n)]
        return tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))

    @staticmethod
    def mat_vec(m, v):
        n = len(m)
        return tuple(sum((m[i][k] * v[k] for k in range(n)), mpq(0)) for i in range(n))

    def element_of_matrix(self, m):
        """Index of the Weyl element with matrix ``m``, or None."""
        return self._index_of_matrix.get(tuple(tuple(mpq(v) for v in row) for row in m))

    def root_index(self, func) -> int | None:
        return self._root_index.get(tuple(mpq(v) for v in func))

    def positive_index(self, beta: int) -> tuple[int, int]:
        """Split a root index into (positive root index, sign)."""
        P = self.n_positive
        return (beta, 1) if beta < P else (beta - P, -1)

    def negate(self, beta: int) -> int:
        P = self.n_positive
        return beta + P if beta < P else beta - P

    def is_positive(self, beta: int) -> bool:
        return beta < self.n_positive

    @property
    def positive_roots(self):
        return self.roots[: self.n_positive]

    def length(self, w: int) -> int:
        return self.elements[w].length

    def element_from_word(self, word) -> int:
        w = 0
        for s in word:
            if not 0 <= s < self.rank:
                raise ValueError(f"simple reflection index {s + 1} out of range for {self.type_name}")
            w = self.mul[w][self._simple_index[s]]
        return w

    @property
    def _simple_index(self):
        return tuple(self._index_of_matrix[m] for m in self.simple_matrices)

    def reflection_element(self, beta: int) -> int:
        """Weyl element index of the reflection in the wall of ``beta``."""
        n = self.rank
        f, c = self.roots[beta], self.coroots[beta]
        m = tuple(
            tuple((mpq(1) if r == k else mpq(0)) - c[r] * f[k] for k in range(n)) for r in range(n)
        )
        return self._index_of_matrix[m]

    @lru_cache(maxsize=None)
    def parabolic(self, face: frozenset) -> tuple:
        """Elements of the parabolic subgroup generated by ``s_j, j in face``."""
        gens = [self._simple_index[j] for j in sorted(face)]
        seen = {0}
        queue = deque([0])
        while queue:
            w = queue.popleft()
            for g in gens:
                v = self.mul[w][g]
                if v not in seen:
                    seen.add(v)
                    queue.append(v)
        return tuple(sorted(seen))

    def coset_rep(self, w: int, face: frozenset) -> int:
        """Least element (shortlex) of the coset ``w W_face``."""
        if not face:
            return w
        return min(self.mul[w][u] for u in self.parabolic(face))

    def face_rays(self, w: int, face: frozenset) -> tuple:
        """Extreme rays of ``w`` applied to the face of the fundamental chamber."""
        return tuple(r for i, r in enumerate(self.chamber_rays[w]) if i not in face)

    def pairing(self, beta: int, vec) -> mpq:
        """``beta(v)`` for a rational vector ``v``."""
        f = self.roots[beta]
        return sum((f[k] * vec[k] for k in range(self.rank)), mpq(0))

    def __repr__(self):
        return f"RootSystem({self.type_name})"


@lru_cache(maxsize=None)
def build_root_system(type_name: str) -> RootSystem:
    return RootSystem(type_name)


def reflect(phi: RootSystem, beta: int, x):
    """Reflect coordinates ``x`` (rationals or scalars) in the wall of root ``beta``."""
    f, c = phi.roots[beta], phi.coroots[beta]
    val = sum((x[k] * f[k] for k in range(phi.rank)), 0)
    return tuple(x[k] - val * c[k] if c[k] else x[k] for k in range(phi.rank))


def enumerate_weyl_group(phi: RootSystem):
    """All Weyl group elements (shortlex order) and the Coxeter diameter."""
    return list(phi.elements), phi.diameter


def gallery_distance(phi: RootSystem, w1: int, w2: int) -> int:
    return phi.length(phi.mul[phi.inverse[w1]][w2])
