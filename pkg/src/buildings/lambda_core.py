"""Exact arithmetic in totally ordered abelian groups.

Three value groups are supported:

* ``Z``       -- the integers,
* ``Q``       -- the rationals,
* ``QxQ_lex`` -- pairs of rationals ordered lexicographically, a
  non-Archimedean group in which ``(0, 1)`` is infinitesimal compared to
  ``(1, 0)``.

All computation happens in the divisible hull, so a scalar can always be
scaled by a rational. Values are stored as a pair ``(a, b)`` of
``gmpy2.mpq``; for the Archimedean kinds ``b`` is always zero, which lets
one comparison routine (tuple order) serve all three kinds.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass

from gmpy2 import mpq

__all__ = [
    "LambdaSpec",
    "Scalar",
    "Ordering",
    "SpecMismatchError",
    "compare",
    "parse_rational",
    "format_rational",
    "Z",
    "Q",
    "LEX",
]

_ZERO = mpq(0)


class SpecMismatchError(TypeError):
    """Raised when scalars from different value groups are combined."""


class Ordering(enum.Enum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


@dataclass(frozen=True)
class LambdaSpec:
    kind: str

    KINDS = ("integers", "rationals", "lex_pair")
    _TAGS = {"integers": "Z", "rationals": "Q", "lex_pair": "QxQ_lex"}

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown value group kind {self.kind!r}")

    @property
    def tag(self) -> str:
        return self._TAGS[self.kind]

    @property
    def is_lex(self) -> bool:
        return self.kind == "lex_pair"

    @property
    def divisible(self) -> bool:
        return self.kind != "integers"

    @classmethod
    def from_tag(cls, tag: str) -> "LambdaSpec":
        for kind, t in cls._TAGS.items():
            if t == tag or kind == tag:
                return _SPECS[kind]
        raise ValueError(f"unknown lambda tag {tag!r}")

    # -- constructors -------------------------------------------------------
    def zero(self) -> "Scalar":
        return Scalar._make(self, _ZERO, _ZERO)

    def __call__(self, value, second=None) -> "Scalar":
        """Build a scalar: ``Q(3, 2)`` is not supported, use ``Q("3/2")``.

        For the lexicographic group ``LEX(a, b)`` gives the pair ``(a, b)``.
        """
        if isinstance(value, Scalar):
            if value.spec != self:
                raise SpecMismatchError(f"{value.spec.tag} scalar given to {self.tag}")
            return value
        if isinstance(value, str):
            if second is not None:
                raise TypeError("string scalars take no second component")
            return Scalar.parse(value, self)
        if isinstance(value, tuple):
            value, second = value
        a = mpq(value)
        if self.is_lex:
            b = mpq(second) if second is not None else _ZERO
        else:
            if second not in (None, 0):
                raise ValueError(f"{self.tag} scalars have a single component")
            b = _ZERO
        return Scalar._make(self, a, b)

    def is_member(self, s: "Scalar") -> bool:
        """True when ``s`` lies in the group itself, not just its divisible hull."""
        if self.kind == "integers":
            return s.a.denominator == 1
        return True


Z = LambdaSpec("integers")
Q = LambdaSpec("rationals")
LEX = LambdaSpec("lex_pair")
_SPECS = {"integers": Z, "rationals": Q, "lex_pair": LEX}


_RAT_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def parse_rational(text: str) -> mpq:
    m = _RAT_RE.match(text)
    if not m:
        raise ValueError(f"not a rational: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) else 1
    if den == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return mpq(num, den)


def format_rational(q) -> str:
    q = mpq(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


class Scalar:
    """An element of the divisible hull of a value group.

    Immutable. Supports ``+ - neg``, multiplication and division by
    rationals, total ordering, hashing and ``abs``.
    """

    __slots__ = ("spec", "a", "b")

    def __init__(self, spec: LambdaSpec, value, second=None):
        s = spec(value, second)
        self.spec, self.a, self.b = s.spec, s.a, s.b

    @classmethod
    def _make(cls, spec, a, b):
        obj = object.__new__(cls)
        obj.spec = spec
        obj.a = a
        obj.b = b
        return obj

    # -- parsing / printing -------------------------------------------------
    @classmethod
    def parse(cls, text: str, spec: LambdaSpec) -> "Scalar":
        t = text.strip()
        if spec.is_lex:
            if not (t.startswith("(") and t.endswith(")")):
                # a bare rational is read as (r, 0)
                return cls._make(spec, parse_rational(t), _ZERO)
            parts = t[1:-1].split(",")
            if len(parts) != 2:
                raise ValueError(f"lex pair needs two components: {text!r}")
            return cls._make(spec, parse_rational(parts[0]), parse_rational(parts[1]))
        if t.startswith("("):
            raise ValueError(f"{spec.tag} scalar cannot be a pair: {text!r}")
        return cls._make(spec, parse_rational(t), _ZERO)

    def __str__(self):
        if self.spec.is_lex:
            return f"({format_rational(self.a)},{format_rational(self.b)})"
        return format_rational(self.a)

    def __repr__(self):
        return f"Scalar({self.spec.tag}, {self})"

    # -- arithmetic ---------------------------------------------------------
    def _check(self, other):
        if other.spec is not self.spec and other.spec != self.spec:
            raise SpecMismatchError(f"cannot combine {self.spec.tag} with {other.spec.tag}")

    def __add__(self, other):
        if not isinstance(other, Scalar):
            if other == 0:
                return self
            return NotImplemented
        self._check(other)
        return Scalar._make(self.spec, self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, Scalar):
            if other == 0:
                return self
            return NotImplemented
        self._check(other)
        return Scalar._make(self.spec, self.a - other.a, self.b - other.b)

    def __neg__(self):
        return Scalar._make(self.spec, -self.a, -self.b)

    def __mul__(self, r):
        if isinstance(r, Scalar):
            raise TypeError("scalars can only be scaled by rationals")
        return Scalar._make(self.spec, self.a * r, self.b * r)

    __rmul__ = __mul__

    def __truediv__(self, r):
        if isinstance(r, Scalar):
            raise TypeError("scalars can only be divided by rationals")
        r = mpq(r)
        return Scalar._make(self.spec, self.a / r, self.b / r)

    def __abs__(self):
        if self.a < 0 or (self.a == 0 and self.b < 0):
            return Scalar._make(self.spec, -self.a, -self.b)
        return self

    # -- order --------------------------------------------------------------
    def sign(self) -> int:
        if self.a:
            return 1 if self.a > 0 else -1
        if self.b:
            return 1 if self.b > 0 else -1
        return 0

    def is_zero(self) -> bool:
        return not self.a and not self.b

    def __bool__(self):
        return not self.is_zero()

    def _cmp(self, other) -> int:
        if not isinstance(other, Scalar):
            if other == 0:
                return self.sign()
            raise TypeError(f"cannot compare Scalar with {type(other).__name__}")
        self._check(other)
        if self.a != other.a:
            return 1 if self.a > other.a else -1
        if self.b != other.b:
            return 1 if self.b > other.b else -1
        return 0

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.spec == other.spec and self.a == other.a and self.b == other.b
        if other == 0:
            return self.is_zero()
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b))

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0


def compare(a: Scalar, b: Scalar) -> Ordering:
    """Total order on a value group; lex pairs compare first coordinates first."""
    return Ordering(a._cmp(b))
