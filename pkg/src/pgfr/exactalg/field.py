"""Exact arithmetic in the rationals and in real quadratic fields Q(sqrt d)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
import math


def squarefree_decompose(n: int) -> tuple[int, int]:
    """Return ``(s, d)`` with ``n == s*s*d`` and ``d`` square-free (sign kept in ``d``)."""
    if n == 0:
        raise ValueError("cannot decompose 0")
    sign = -1 if n < 0 else 1
    n = abs(n)
    s, d = 1, 1
    p = 2
    while p * p <= n:
        while n % (p * p) == 0:
            n //= p * p
            s *= p
        if n % p == 0:
            n //= p
            d *= p
        p += 1 if p == 2 else 2
    return s, sign * d * n


def is_squarefree(d: int) -> bool:
    return d != 0 and abs(squarefree_decompose(d)[1]) == abs(d)


@dataclass(frozen=True)
class FieldDesc:
    """Base field: the rationals (``d is None``) or Q(sqrt d) with d square-free, d not in {0, 1}."""

    d: int | None = None

    def __post_init__(self) -> None:
        if self.d is not None and (self.d in (0, 1) or not is_squarefree(self.d)):
            raise ValueError(f"d={self.d} must be square-free and different from 0, 1")

    def element(self, a=0, b=0) -> QuadNumber:
        return QuadNumber(a, b, self.d)

    @property
    def sqrt(self) -> QuadNumber:
        if self.d is None:
            raise ValueError("the rationals have no adjoined square root")
        return QuadNumber(0, 1, self.d)

    def join(self, other: FieldDesc) -> FieldDesc:
        if self.d is None:
            return other
        if other.d is None or other.d == self.d:
            return self
        raise ValueError(f"fields Q(sqrt {self.d}) and Q(sqrt {other.d}) are not nested")

    def to_json(self) -> dict:
        return {"d": self.d}


RATIONALS = FieldDesc(None)


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    raise TypeError(f"not an exact rational: {x!r}")


class QuadNumber:
    """``a + b*sqrt(d)`` with rational ``a``, ``b``.

    ``d is None`` marks a plain rational (then ``b`` must be 0). Mixed arithmetic with
    ``int``/``Fraction`` works in both directions; mixing two different radicands raises.
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a=0, b=0, d: int | None = None):
        self.a = _frac(a)
        self.b = _frac(b)
        if d is None and self.b:
            raise ValueError("irrational part needs a radicand d")
        self.d = d

    @classmethod
    def coerce(cls, x, d: int | None = None) -> QuadNumber:
        if isinstance(x, QuadNumber):
            return x
        return cls(x, 0, d)

    def _d_with(self, other: QuadNumber) -> int | None:
        if self.d == other.d or other.d is None:
            return self.d
        if self.d is None:
            return other.d
        if not self.b:
            return other.d
        if not other.b:
            return self.d
        raise ValueError(f"mixing Q(sqrt {self.d}) and Q(sqrt {other.d})")

    def _lift(self, other) -> QuadNumber | None:
        if isinstance(other, QuadNumber):
            return other
        if isinstance(other, (int, Fraction)):
            return QuadNumber(other, 0, None)
        return None

    @property
    def field(self) -> FieldDesc:
        return FieldDesc(self.d)

    @property
    def is_rational(self) -> bool:
        return not self.b

    def conjugate(self) -> QuadNumber:
        return QuadNumber(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        if self.d is None:
            return self.a * self.a
        return self.a * self.a - self.d * self.b * self.b

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return QuadNumber(self.a + o.a, self.b + o.b, self._d_with(o))

    __radd__ = __add__

    def __neg__(self) -> QuadNumber:
        return QuadNumber(-self.a, -self.b, self.d)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return QuadNumber(self.a - o.a, self.b - o.b, self._d_with(o))

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        d = self._d_with(o)
        if not o.b:
            return QuadNumber(self.a * o.a, self.b * o.a, d)
        if not self.b:
            return QuadNumber(self.a * o.a, self.a * o.b, d)
        return QuadNumber(self.a * o.a + d * self.b * o.b, self.a * o.b + self.b * o.a, d)

    __rmul__ = __mul__

    def inverse(self) -> QuadNumber:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        return QuadNumber(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if not o.b:
            if o.a == 0:
                raise ZeroDivisionError("division by zero")
            return QuadNumber(self.a / o.a, self.b / o.a, self._d_with(o))
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, k: int) -> QuadNumber:
        if k < 0:
            return self.inverse() ** (-k)
        out = QuadNumber(1, 0, self.d)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __bool__(self) -> bool:
        return bool(self.a) or bool(self.b)

    def __eq__(self, other) -> bool:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if self.b or o.b:
            if self.d != o.d:
                return False
        return self.a == o.a and self.b == o.b

    def __hash__(self) -> int:
        if not self.b:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __float__(self) -> float:
        if not self.b:
            return float(self.a)
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def __complex__(self) -> complex:
        if self.d is not None and self.d < 0:
            return complex(float(self.a), float(self.b) * math.sqrt(-self.d))
        return complex(float(self))

    def __repr__(self) -> str:
        if not self.b:
            return f"QuadNumber({self.a})"
        return f"QuadNumber({self.a}, {self.b}, d={self.d})"

    def __str__(self) -> str:
        if not self.b:
            return str(self.a)
        if not self.a:
            return f"{self.b}*sqrt({self.d})"
        sign = "+" if self.b > 0 else "-"
        return f"{self.a} {sign} {abs(self.b)}*sqrt({self.d})"

    def to_json(self) -> list:
        """``[a, b, d]`` with fraction strings; ``d`` is ``None`` over the rationals."""
        return [str(self.a), str(self.b), self.d]

    @classmethod
    def from_json(cls, obj) -> QuadNumber:
        a, b, d = obj
        return cls(Fraction(a), Fraction(b), d)


def qn(x, d: int | None = None) -> QuadNumber:
    return QuadNumber.coerce(x, d)


def parse_rational(s) -> Fraction:
    """Parse an exact decimal or fraction string (``"3"``, ``"-1/2"``, ``"0.25"``)."""
    if isinstance(s, bool):
        raise TypeError("bool is not a weight")
    if isinstance(s, float):
        raise TypeError(f"floats are not exact weights: {s!r}")
    return _frac(s.strip() if isinstance(s, str) else s)
