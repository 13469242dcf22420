"""Characteristic and relative minimal polynomials of ``M + Q*D_K`` with ``Q`` symbolic."""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence

import numpy as np

from . import _zring as zr
from .field import FieldDesc, QuadNumber, qn
from .poly import BiPoly, NotAFactorError, UniPoly, bi_gcd_over_fq, uni_gcd

DEFAULT_BIT_BOUND = 16384


class CoefficientGrowthError(ArithmeticError):
    """An exact coefficient exceeded the configured bit bound."""


class InvalidShapeError(ValueError):
    pass


def _as_fraction_matrix(m) -> list[list[Fraction]]:
    rows = [[Fraction(x) if not isinstance(x, Fraction) else x for x in row] for row in m]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise InvalidShapeError("matrix must be square")
    return rows


def _site_K(site) -> list[int]:
    return list(site.K) if hasattr(site, "K") else list(site)


# Dense polynomials in Q with Fraction coefficients, as lists, for the char-poly recurrence.

def _padd(a: list, b: list) -> list:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return out


def _pscale(a: list, s) -> list:
    return [s * c for c in a] if s else []


def char_poly_symbolic(m, site) -> BiPoly:
    """Characteristic polynomial ``det(t*I - M - Q*D_K)`` by the Faddeev-LeVerrier recurrence.

    The matrix is treated as sparse; entries of the iterates are polynomials in Q over the
    rationals and the only divisions are by the integers 1..n.
    """
    rows = _as_fraction_matrix(m)
    n = len(rows)
    K = set(_site_K(site))
    sparse = [[(j, w) for j, w in enumerate(row) if w] for row in rows]

    def apply(X: list[list[list]]) -> list[list[list]]:
        out = []
        for i in range(n):
            acc = [[] for _ in range(n)]
            for j, w in sparse[i]:
                Xj = X[j]
                for c in range(n):
                    if Xj[c]:
                        acc[c] = _padd(acc[c], _pscale(Xj[c], w))
            if i in K:
                Xi = X[i]
                for c in range(n):
                    if Xi[c]:
                        acc[c] = _padd(acc[c], [Fraction(0)] + Xi[c])
            out.append(acc)
        return out

    coeffs: list[list] = [[] for _ in range(n + 1)]
    coeffs[n] = [Fraction(1)]
    Mk = [[[] for _ in range(n)] for _ in range(n)]
    for k in range(1, n + 1):
        AM = apply(Mk)
        # M_k = A M_{k-1} + c_{n-k+1} I
        ck1 = coeffs[n - k + 1]
        Mk = AM
        for i in range(n):
            Mk[i][i] = _padd(Mk[i][i], ck1)
        AMk = apply(Mk)
        tr: list = []
        for i in range(n):
            tr = _padd(tr, AMk[i][i])
        coeffs[n - k] = [-c / k for c in tr]
    return BiPoly(UniPoly(c) for c in coeffs)


def _common_denominator(values) -> int:
    L = 1
    for x in values:
        L = lcm(L, Fraction(x).denominator)
    return L


def _v0_to_ints(v0: Sequence, d: int | None) -> list[tuple[int, int]]:
    els = [qn(x, d) for x in v0]
    L = _common_denominator([e.a for e in els] + [e.b for e in els])
    return [(int(e.a * L), int(e.b * L)) for e in els]


def relative_min_poly_symbolic(
    m,
    site,
    v0: Sequence,
    *,
    bit_bound: int = DEFAULT_BIT_BOUND,
    verify: bool = True,
) -> BiPoly:
    """Least-degree monic ``P(t, Q)`` with ``P(M + Q*D_K) v0_hat = 0`` identically in Q.

    ``v0`` is indexed by K (in the site's order) with entries in Q or Q(sqrt d).
    The Krylov columns are scaled into Z[sqrt d][Q] and eliminated with single-step
    Bareiss updates added one column at a time; the first column without a pivot
    gives the dependency, solved by fraction-free back substitution.
    """
    rows = _as_fraction_matrix(m)
    n = len(rows)
    K = _site_K(site)
    if len(v0) != len(K):
        raise InvalidShapeError("v0 must be indexed by K")
    field = FieldDesc(None)
    for x in v0:
        if isinstance(x, QuadNumber) and x.b:
            field = field.join(FieldDesc(x.d))
    d = field.d
    if all(not qn(x) for x in v0):
        raise ValueError("invalid-vector: v0 must be nonzero")

    # Scale M to an integer matrix; the scaled pencil L*M + (L*Q)*D_K is the same family.
    L = _common_denominator(x for row in rows for x in row)
    sparse = [[(j, int(w * L)) for j, w in enumerate(row) if w] for row in rows]
    kset = set(K)
    w = [zr.ZERO] * n
    for idx, (a, b) in zip(K, _v0_to_ints(v0, d)):
        w[idx] = zr.const(a, b)

    def matvec(vec: list) -> list:
        out = []
        for i in range(n):
            acc = zr.ZERO
            for j, wt in sparse[i]:
                if not zr.is_zero(vec[j]):
                    acc = zr.add(acc, (zr._iscale(vec[j][0], wt), zr._iscale(vec[j][1], wt)))
            if i in kset and not zr.is_zero(vec[i]):
                acc = zr.add(acc, zr.shift(vec[i]))
            out.append(acc)
        return out

    krylov: list[list] = []  # original columns w_0, w_1, ...
    steps: list[tuple[int, object, list]] = []  # (pivot row, pivot value, column at that stage)
    stage_cols: list[list] = []  # each column after full replay, for U entries
    pivot_rows: list[int] = []
    col = w
    while True:
        krylov.append(col)
        cur = list(col)
        prev = zr.const(1)
        used: set[int] = set()
        for prow, pval, mult in steps:
            used.add(prow)
            pr = cur[prow]
            for i in range(n):
                if i in used:
                    continue
                mi = mult[i]
                if zr.is_zero(mi):
                    if zr.is_zero(cur[i]):
                        continue
                    num = zr.mul(pval, cur[i], d)
                else:
                    num = zr.sub(zr.mul(pval, cur[i], d), zr.mul(mi, pr, d))
                cur[i] = zr.exact_div(num, prev, d)
                if zr.bits(cur[i]) > bit_bound:
                    raise CoefficientGrowthError(f"coefficient exceeded {bit_bound} bits")
            prev = pval
        candidates = [i for i in range(n) if i not in used and not zr.is_zero(cur[i])]
        if not candidates:
            break
        prow = min(candidates, key=lambda i: (zr.degree(cur[i]), zr.bits(cur[i]), i))
        steps.append((prow, cur[prow], cur))
        stage_cols.append(cur)
        pivot_rows.append(prow)
        if len(krylov) > n:
            raise ArithmeticError("Krylov sequence failed to terminate")
        col = matvec(col)

    k = len(steps)
    b = [cur[p] for p in pivot_rows]
    D = steps[-1][1] if k else zr.const(1)
    x = [zr.ZERO] * k
    for mrow in range(k - 1, -1, -1):
        acc = zr.mul(D, b[mrow], d)
        for c in range(mrow + 1, k):
            u = stage_cols[c][pivot_rows[mrow]]
            if not zr.is_zero(u) and not zr.is_zero(x[c]):
                acc = zr.sub(acc, zr.mul(u, x[c], d))
        x[mrow] = zr.exact_div(acc, steps[mrow][1], d)

    if verify:
        # D * w_k == sum_m x_m * w_m, exactly
        for i in range(n):
            lhs = zr.mul(D, krylov[k][i], d)
            rhs = zr.ZERO
            for mcol in range(k):
                if not zr.is_zero(x[mcol]) and not zr.is_zero(krylov[mcol][i]):
                    rhs = zr.add(rhs, zr.mul(x[mcol], krylov[mcol][i], d))
            if not zr.is_zero(zr.sub(lhs, rhs)):
                raise ArithmeticError("relative minimal polynomial failed exact substitution")

    # P'(t', Q') = t'^k - sum_m (x_m / D) t'^m for the scaled pencil; undo t' = L t, Q' = L Q.
    Dp = _to_unipoly(D, d)
    coeffs: list[UniPoly] = []
    for mcol in range(k):
        cm = (-_to_unipoly(x[mcol], d)).exact_div(Dp)
        coeffs.append(UniPoly(e * Fraction(L) ** (j + mcol - k) for j, e in enumerate(cm.coeffs)))
    coeffs.append(UniPoly.constant(1))
    return BiPoly(coeffs)


def _to_unipoly(p, d: int | None) -> UniPoly:
    a, b = p
    n = max(len(a), len(b))
    return UniPoly(QuadNumber(a[i] if i < len(a) else 0, b[i] if i < len(b) else 0, d) for i in range(n))


def irreducible_linear_in_q(p: BiPoly) -> bool:
    """For ``p = B(t) + Q*A(t)``: irreducible over F(Q) exactly when gcd(A, B) is constant."""
    if p.q_degree != 1:
        raise InvalidShapeError("invalid-shape: Q-degree must be exactly 1")
    B = UniPoly(c[0] for c in p.coeffs)
    A = UniPoly(c[1] for c in p.coeffs)
    return uni_gcd(A, B).degree == 0


def poly_divide_exact(num: BiPoly, den: BiPoly) -> BiPoly:
    quot, rem = num.divmod_monic(den)
    if rem:
        raise NotAFactorError("not-a-factor: nonzero remainder")
    return quot


def trace_of(p: BiPoly) -> tuple[Fraction, QuadNumber]:
    """Sum of roots, split as ``(coefficient of Q, Q-free part)``."""
    if not p.is_monic() or p.t_degree < 1:
        raise ValueError("trace needs a polynomial monic in t of degree >= 1")
    sub = -p.coefficient(p.t_degree - 1)
    if sub.degree > 1:
        raise InvalidShapeError("trace is not affine in Q")
    qc = sub[1]
    if qc.b:
        raise InvalidShapeError("Q-coefficient of the trace is irrational")
    return qc.a, sub[0]


def evaluate_at_q(p: BiPoly, q: float) -> np.ndarray:
    """Float coefficients of ``p(t, q)``, low-to-high in t."""
    return p.evaluate_at_q(q)


def is_squarefree_in_t(p: BiPoly) -> bool:
    """Square-freeness over F(Q): gcd(p, dp/dt) has t-degree 0."""
    return bi_gcd_over_fq(p, p.derivative_t()).t_degree == 0


def substitute_matrix_poly(p: BiPoly, m, site, q) -> list[list]:
    """Exact ``p(M + q*D_K)`` for a rational or quadratic specialisation ``q`` (dense, small n)."""
    rows = _as_fraction_matrix(m)
    n = len(rows)
    qv = qn(q)
    A = [[qn(rows[i][j]) + (qv if i == j and i in set(_site_K(site)) else 0) for j in range(n)] for i in range(n)]
    spec = p.substitute_q(qv)
    acc = [[QuadNumber(0)] * n for _ in range(n)]
    for c in reversed(spec.coeffs):
        acc = [[sum((acc[i][l] * A[l][j] for l in range(n) if acc[i][l]), QuadNumber(0)) for j in range(n)] for i in range(n)]
        for i in range(n):
            acc[i][i] = acc[i][i] + c
    return acc
