"""Exact scalar arithmetic over a prime field F_p or the rationals.

Field elements are :class:`Scalar` values carrying a reference to their
field.  Everything downstream (incidence tests, span tests, intersections)
is exact; there is no floating point anywhere in the package.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt
from typing import Iterable, Sequence, Union

MAX_PRIME = 2**31


class FieldError(ValueError):
    """Bad field specification or an operation mixing two fields."""


@lru_cache(maxsize=None)
def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for k in range(3, isqrt(n) + 1, 2):
        if n % k == 0:
            return False
    return True


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or not 2 <= self.p < MAX_PRIME:
            raise FieldError(f"prime modulus must satisfy 2 <= p < 2^31, got {self.p!r}")
        if not is_prime(self.p):
            raise FieldError(f"{self.p} is not prime")

    @property
    def spec(self) -> str:
        return f"prime:{self.p}"

    def canonical(self, value) -> int:
        if isinstance(value, Fraction):
            if value.denominator % self.p == 0:
                raise ZeroDivisionError(f"denominator {value.denominator} vanishes mod {self.p}")
            return value.numerator * pow(value.denominator, -1, self.p) % self.p
        if isinstance(value, bool) or not isinstance(value, int):
            raise FieldError(f"cannot embed {value!r} in F_{self.p}")
        return value % self.p

    def parse_value(self, text: str) -> Scalar:
        text = text.strip()
        if "/" in text:
            num, den = text.split("/")
            return self(Fraction(int(num), int(den)))
        return self(int(text))

    def format_value(self, value: int) -> str:
        return str(value)

    def __call__(self, value) -> Scalar:
        return Scalar(self, self.canonical(value))

    def elements(self) -> Iterable[Scalar]:
        for v in range(self.p):
            yield Scalar(self, v)

    def __str__(self):
        return self.spec


@dataclass(frozen=True)
class RationalField:
    @property
    def spec(self) -> str:
        return "rational"

    def canonical(self, value) -> Fraction:
        if isinstance(value, bool) or not isinstance(value, (int, Fraction)):
            raise FieldError(f"cannot embed {value!r} in Q")
        return Fraction(value)

    def parse_value(self, text: str) -> Scalar:
        return self(Fraction(text.strip()))

    def format_value(self, value: Fraction) -> str:
        return str(value)

    def __call__(self, value) -> Scalar:
        return Scalar(self, self.canonical(value))

    def __str__(self):
        return self.spec


Field = Union[PrimeField, RationalField]
QQ = RationalField()


def parse_field(spec: str) -> Field:
    """Parse ``"prime:<p>"`` or ``"rational"``."""
    spec = spec.strip()
    if spec == "rational":
        return QQ
    kind, sep, rest = spec.partition(":")
    if kind == "prime" and sep:
        try:
            p = int(rest)
        except ValueError:
            raise FieldError(f"bad modulus in field spec {spec!r}") from None
        return PrimeField(p)
    raise FieldError(f"unknown field spec {spec!r}")


class Scalar:
    """An element of a :class:`PrimeField` or of the rationals.

    Values are kept in canonical form (residue in ``[0, p)`` or a reduced
    :class:`~fractions.Fraction`), so equality is structural.  Plain ``int``
    operands are coerced into the field; Scalars from different fields
    raise :class:`FieldError`.
    """

    __slots__ = ("field", "value")

    def __init__(self, field: Field, value):
        self.field = field
        self.value = value

    def _coerce(self, other) -> Scalar:
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise FieldError(f"mixed fields: {self.field} and {other.field}")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.field(other)
        return NotImplemented

    def _wrap(self, value) -> Scalar:
        if isinstance(self.field, PrimeField):
            value %= self.field.p
        return Scalar(self.field, value)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._wrap(self.value + other.value)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._wrap(self.value - other.value)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._wrap(self.value * other.value)

    __rmul__ = __mul__

    def __neg__(self):
        return self._wrap(-self.value)

    def inverse(self) -> Scalar:
        if self.value == 0:
            raise ZeroDivisionError("inverse of zero")
        if isinstance(self.field, PrimeField):
            return Scalar(self.field, pow(self.value, -1, self.field.p))
        return Scalar(self.field, 1 / self.value)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __bool__(self):
        return self.value != 0

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.field == other.field and self.value == other.value
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.value))

    def sort_key(self):
        return self.value

    def __repr__(self):
        return f"Scalar({self.field.spec}, {self.field.format_value(self.value)})"

    def __str__(self):
        return self.field.format_value(self.value)


def inv(a: Scalar) -> Scalar:
    return a.inverse()


class Matrix:
    """A dense rows x cols grid of Scalars from one field."""

    def __init__(self, rows: Sequence[Sequence[Scalar]], cols: int | None = None):
        entries = [list(r) for r in rows]
        if cols is None:
            cols = len(entries[0]) if entries else 0
        if any(len(r) != cols for r in entries):
            raise ValueError("ragged matrix: every row needs the same number of entries")
        fields = {x.field for r in entries for x in r}
        if len(fields) > 1:
            raise FieldError(f"matrix mixes fields {sorted(map(str, fields))}")
        self.entries = entries
        self.rows = len(entries)
        self.cols = cols

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def rank(self) -> int:
        return len(row_reduce(self.entries)[1])


def row_reduce(rows: Sequence[Sequence[Scalar]]) -> tuple[list[list[Scalar]], list[int]]:
    """Reduced row echelon form by Gauss-Jordan elimination.

    The pivot for each column is the first remaining row with a nonzero
    entry there.  Returns ``(rref_rows, pivot_columns)``; zero rows are kept
    at the bottom.
    """
    m = [list(r) for r in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == len(m):
            break
        k = next((i for i in range(r, len(m)) if m[i][c]), None)
        if k is None:
            continue
        m[r], m[k] = m[k], m[r]
        lead = m[r][c].inverse()
        m[r] = [x * lead for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(matrix) -> int:
    """Row rank of a :class:`Matrix` or a list of Scalar rows."""
    if isinstance(matrix, Matrix):
        return matrix.rank()
    return len(row_reduce(matrix)[1])
