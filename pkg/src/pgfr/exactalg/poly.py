"""Dense univariate and bivariate polynomials over Q or Q(sqrt d).

``UniPoly`` stores coefficients low-to-high. ``BiPoly`` is a polynomial in ``t``
whose coefficients are ``UniPoly`` objects in the indeterminate ``Q``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .field import FieldDesc, QuadNumber, qn

_ZERO = QuadNumber(0)
_ONE = QuadNumber(1)


class NotAFactorError(ArithmeticError):
    """Raised when an exact division leaves a nonzero remainder."""


def _trim(coeffs: list) -> tuple:
    n = len(coeffs)
    while n and not coeffs[n - 1]:
        n -= 1
    return tuple(coeffs[:n])


class UniPoly:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        self.coeffs = _trim([qn(c) for c in coeffs])

    @classmethod
    def constant(cls, c) -> UniPoly:
        return cls([c])

    @classmethod
    def x(cls) -> UniPoly:
        return cls([0, 1])

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> QuadNumber:
        return self.coeffs[-1] if self.coeffs else _ZERO

    def __getitem__(self, i: int) -> QuadNumber:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else _ZERO

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, UniPoly):
            other = UniPoly.constant(other) if isinstance(other, (int, Fraction, QuadNumber)) else None
            if other is None:
                return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other) -> UniPoly:
        other = _as_uni(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly([self[i] + other[i] for i in range(n)])

    __radd__ = __add__

    def __neg__(self) -> UniPoly:
        return UniPoly([-c for c in self.coeffs])

    def __sub__(self, other) -> UniPoly:
        other = _as_uni(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly([self[i] - other[i] for i in range(n)])

    def __rsub__(self, other) -> UniPoly:
        return _as_uni(other) - self

    def __mul__(self, other) -> UniPoly:
        if isinstance(other, (int, Fraction, QuadNumber)):
            return UniPoly([c * other for c in self.coeffs])
        other = _as_uni(other)
        if not self.coeffs or not other.coeffs:
            return UniPoly()
        out = [_ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    out[i + j] = out[i + j] + a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def shift(self, k: int) -> UniPoly:
        """Multiply by x**k."""
        return UniPoly([_ZERO] * k + list(self.coeffs)) if self.coeffs else self

    def divmod(self, other: UniPoly) -> tuple[UniPoly, UniPoly]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        inv = other.lc.inverse()
        quot = [_ZERO] * max(0, len(rem) - dq)
        for i in range(len(rem) - 1, dq - 1, -1):
            c = rem[i]
            if not c:
                continue
            f = c * inv
            quot[i - dq] = f
            for j, b in enumerate(other.coeffs):
                rem[i - dq + j] = rem[i - dq + j] - f * b
        return UniPoly(quot), UniPoly(rem[:dq] if dq > 0 else [])

    def __floordiv__(self, other: UniPoly) -> UniPoly:
        return self.divmod(other)[0]

    def __mod__(self, other: UniPoly) -> UniPoly:
        return self.divmod(other)[1]

    def exact_div(self, other) -> UniPoly:
        q, r = self.divmod(_as_uni(other))
        if r:
            raise NotAFactorError("nonzero remainder")
        return q

    def monic(self) -> UniPoly:
        if self.is_zero():
            return self
        inv = self.lc.inverse()
        return UniPoly([c * inv for c in self.coeffs])

    def derivative(self) -> UniPoly:
        return UniPoly([c * i for i, c in enumerate(self.coeffs)][1:])

    def conjugate(self) -> UniPoly:
        return UniPoly([c.conjugate() for c in self.coeffs])

    def __call__(self, x):
        if not isinstance(x, (int, Fraction, QuadNumber, UniPoly)):
            acc = 0.0
            for c in reversed(self.coeffs):
                acc = acc * x + float(c)
            return acc
        acc = _ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def to_floats(self) -> np.ndarray:
        return np.array([float(c) for c in self.coeffs], dtype=float)

    def __repr__(self) -> str:
        return f"UniPoly({[str(c) for c in self.coeffs]})"

    def render(self, var: str = "x") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
            if not mono:
                parts.append(f"({c})" if c.b else str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"({c})*{mono}")
        return " + ".join(parts)


def _as_uni(x) -> UniPoly:
    if isinstance(x, UniPoly):
        return x
    if isinstance(x, (int, Fraction, QuadNumber)):
        return UniPoly.constant(x)
    raise TypeError(f"cannot treat {type(x).__name__} as a polynomial")


def uni_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic gcd over the coefficient field (zero only if both inputs are zero)."""
    while b:
        a, b = b, a % b
    return a.monic()


class BiPoly:
    """Polynomial in ``t`` with coefficients in F[Q]; ``coeffs[i]`` multiplies ``t**i``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        self.coeffs = _trim([c if isinstance(c, UniPoly) else _as_uni(c) for c in coeffs])

    @classmethod
    def from_terms(cls, terms: dict[tuple[int, int], object]) -> BiPoly:
        """Build from ``{(t_power, q_power): coefficient}``."""
        if not terms:
            return cls()
        nt = max(i for i, _ in terms) + 1
        rows: list[list] = [[] for _ in range(nt)]
        for (i, j), c in terms.items():
            row = rows[i]
            row.extend([0] * (j + 1 - len(row)))
            row[j] = qn(c) + row[j]
        return cls(UniPoly(r) for r in rows)

    @classmethod
    def t(cls) -> BiPoly:
        return cls([UniPoly(), UniPoly.constant(1)])

    @classmethod
    def q(cls) -> BiPoly:
        return cls([UniPoly.x()])

    @classmethod
    def constant(cls, c) -> BiPoly:
        return cls([_as_uni(c)])

    @property
    def t_degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def q_degree(self) -> int:
        return max((c.degree for c in self.coeffs), default=-1)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    @property
    def lc(self) -> UniPoly:
        return self.coeffs[-1] if self.coeffs else UniPoly()

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.lc == UniPoly.constant(1)

    def coefficient(self, i: int) -> UniPoly:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else UniPoly()

    def term(self, i: int, j: int) -> QuadNumber:
        return self.coefficient(i)[j]

    @property
    def field(self) -> FieldDesc:
        d = None
        for c in self.coeffs:
            for e in c.coeffs:
                if e.b:
                    return FieldDesc(e.d)
                d = d or e.d
        return FieldDesc(d) if d is not None else FieldDesc(None)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BiPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other) -> BiPoly:
        other = _as_bi(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return BiPoly(self.coefficient(i) + other.coefficient(i) for i in range(n))

    __radd__ = __add__

    def __neg__(self) -> BiPoly:
        return BiPoly(-c for c in self.coeffs)

    def __sub__(self, other) -> BiPoly:
        other = _as_bi(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return BiPoly(self.coefficient(i) - other.coefficient(i) for i in range(n))

    def __rsub__(self, other) -> BiPoly:
        return _as_bi(other) - self

    def __mul__(self, other) -> BiPoly:
        if isinstance(other, (int, Fraction, QuadNumber, UniPoly)):
            return BiPoly(c * other for c in self.coeffs)
        other = _as_bi(other)
        if not self.coeffs or not other.coeffs:
            return BiPoly()
        out = [UniPoly()] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    out[i + j] = out[i + j] + a * b
        return BiPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> BiPoly:
        out = BiPoly.constant(1)
        for _ in range(k):
            out = out * self
        return out

    def divmod_monic(self, den: BiPoly) -> tuple[BiPoly, BiPoly]:
        """Division by a divisor that is monic in ``t``; stays inside F[Q][t]."""
        if not den.is_monic():
            raise ValueError("divisor must be monic in t")
        rem = list(self.coeffs)
        dd = den.t_degree
        quot = [UniPoly()] * max(0, len(rem) - dd)
        for i in range(len(rem) - 1, dd - 1, -1):
            c = rem[i]
            if not c:
                continue
            quot[i - dd] = c
            for j, b in enumerate(den.coeffs):
                if b:
                    rem[i - dd + j] = rem[i - dd + j] - c * b
        return BiPoly(quot), BiPoly(rem[:dd])

    def derivative_t(self) -> BiPoly:
        return BiPoly([c * i for i, c in enumerate(self.coeffs)][1:])

    def conjugate(self) -> BiPoly:
        return BiPoly(c.conjugate() for c in self.coeffs)

    def substitute_q(self, q) -> UniPoly:
        """Exact specialisation ``Q = q``; returns a polynomial in t."""
        return UniPoly(c(qn(q)) for c in self.coeffs)

    def evaluate_at_q(self, q: float) -> np.ndarray:
        """Float coefficients (low-to-high in t) at ``Q = q``; the t-degree is kept."""
        out = np.zeros(len(self.coeffs), dtype=float)
        for i, c in enumerate(self.coeffs):
            out[i] = c(float(q)) if c else 0.0
        return out

    def roots_at_q(self, q: float) -> np.ndarray:
        coeffs = self.evaluate_at_q(q)
        if len(coeffs) <= 1:
            return np.zeros(0)
        return np.sort_complex(np.roots(coeffs[::-1]))

    def __repr__(self) -> str:
        return f"BiPoly({self.render()})"

    def render(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            body = c.render("Q")
            if not mono:
                parts.append(f"({body})")
            elif body == "1":
                parts.append(mono)
            else:
                parts.append(f"({body})*{mono}")
        return " + ".join(parts)

    def to_json(self) -> dict:
        """Nested arrays, t-major and Q-minor; entries are fraction strings or ``[a, b]`` pairs."""
        d = self.field.d
        rows = []
        for c in self.coeffs:
            if d is None:
                rows.append([str(e.a) for e in c.coeffs])
            else:
                rows.append([[str(e.a), str(e.b)] for e in c.coeffs])
        return {"field": {"d": d}, "order": "t-major,Q-minor", "coeffs": rows}

    @classmethod
    def from_json(cls, obj: dict) -> BiPoly:
        d = obj["field"]["d"]
        rows = []
        for row in obj["coeffs"]:
            if d is None:
                rows.append(UniPoly(Fraction(e) for e in row))
            else:
                rows.append(UniPoly(QuadNumber(Fraction(a), Fraction(b), d) for a, b in row))
        return cls(rows)


def _as_bi(x) -> BiPoly:
    if isinstance(x, BiPoly):
        return x
    return BiPoly.constant(x)


def _content(p: BiPoly) -> UniPoly:
    g = UniPoly()
    for c in p.coeffs:
        g = uni_gcd(g, c)
        if g.degree == 0:
            break
    return g


def _primitive(p: BiPoly) -> BiPoly:
    if p.is_zero():
        return p
    g = _content(p)
    prim = BiPoly(c.exact_div(g) for c in p.coeffs)
    lc = prim.lc.lc
    return prim * lc.inverse()


def _pseudo_rem(a: BiPoly, b: BiPoly) -> BiPoly:
    rem = list(a.coeffs)
    db = b.t_degree
    lb = b.lc
    while len(rem) - 1 >= db and rem:
        c = rem[-1]
        k = len(rem) - 1 - db
        rem = [x * lb for x in rem]
        for j, bj in enumerate(b.coeffs):
            if bj:
                rem[k + j] = rem[k + j] - c * bj
        rem = list(_trim(rem))
    return BiPoly(rem)


def bi_gcd_over_fq(a: BiPoly, b: BiPoly) -> BiPoly:
    """Gcd in F(Q)[t] via the primitive pseudo-remainder sequence; returned primitive."""
    a, b = _primitive(a), _primitive(b)
    if a.t_degree < b.t_degree:
        a, b = b, a
    while b:
        a, b = b, _primitive(_pseudo_rem(a, b))
    return a


def poly_from_roots_float(roots: Sequence[float]) -> np.ndarray:
    return np.poly(np.asarray(roots))[::-1]
