# Polynomials in one variable over Z[sqrt d], stored as a pair of int lists (A, B)
# meaning A(Q) + B(Q)*sqrt(d). Both lists are trimmed; B is empty when d is None.
# Only used internally by the fraction-free Krylov elimination.

from __future__ import annotations

ZPoly = tuple  # (tuple[int, ...], tuple[int, ...])

ZERO: ZPoly = ((), ())


def trim(a: list) -> tuple:
    n = len(a)
    while n and not a[n - 1]:
        n -= 1
    return tuple(a[:n])


def const(a: int, b: int = 0) -> ZPoly:
    return (trim([a]), trim([b]))


def is_zero(p: ZPoly) -> bool:
    return not p[0] and not p[1]


def degree(p: ZPoly) -> int:
    return max(len(p[0]), len(p[1])) - 1


def bits(p: ZPoly) -> int:
    m = 0
    for part in p:
        for c in part:
            b = c.bit_length()
            if b > m:
                m = b
    return m


def _iadd(a, b) -> tuple:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return trim(out)


def _isub(a, b) -> tuple:
    n = max(len(a), len(b))
    out = [0] * n
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] -= c
    return trim(out)


def _imul(a, b) -> tuple:
    if not a or not b:
        return ()
    if len(a) == 1:
        s = a[0]
        return tuple(s * c for c in b)
    if len(b) == 1:
        s = b[0]
        return tuple(s * c for c in a)
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return trim(out)


def _iscale(a, k: int) -> tuple:
    if not k:
        return ()
    return tuple(k * c for c in a)


def add(p: ZPoly, q: ZPoly) -> ZPoly:
    return (_iadd(p[0], q[0]), _iadd(p[1], q[1]))


def sub(p: ZPoly, q: ZPoly) -> ZPoly:
    return (_isub(p[0], q[0]), _isub(p[1], q[1]))


def mul(p: ZPoly, q: ZPoly, d: int | None) -> ZPoly:
    a1, b1 = p
    a2, b2 = q
    if not b1 and not b2:
        return (_imul(a1, a2), ())
    a = _iadd(_imul(a1, a2), _iscale(_imul(b1, b2), d))
    b = _iadd(_imul(a1, b2), _imul(b1, a2))
    return (a, b)


def shift(p: ZPoly) -> ZPoly:
    """Multiply by Q."""
    return (((0,) + p[0]) if p[0] else (), ((0,) + p[1]) if p[1] else ())


def _coef(p: ZPoly, i: int) -> tuple[int, int]:
    a, b = p
    return (a[i] if i < len(a) else 0, b[i] if i < len(b) else 0)


def _div_scalar(x: tuple[int, int], y: tuple[int, int], d: int | None) -> tuple[int, int]:
    a, b = x
    c, e = y
    if d is None or not e:
        qa, ra = divmod(a, c)
        qb, rb = divmod(b, c)
        if ra or rb:
            raise ArithmeticError("inexact division in Z[sqrt d]")
        return qa, qb
    n = c * c - d * e * e
    na = a * c - d * b * e
    nb = b * c - a * e
    qa, ra = divmod(na, n)
    qb, rb = divmod(nb, n)
    if ra or rb:
        raise ArithmeticError("inexact division in Z[sqrt d]")
    return qa, qb


def exact_div(p: ZPoly, q: ZPoly, d: int | None) -> ZPoly:
    """Quotient of an exact division in Z[sqrt d][Q]; raises if the remainder is nonzero."""
    if is_zero(q):
        raise ZeroDivisionError("division by zero polynomial")
    if is_zero(p):
        return ZERO
    dq = degree(q)
    if dq == 0 and not q[1]:
        c = q[0][0]
        if c == 1:
            return p
        out = []
        for part in p:
            res = []
            for x in part:
                y, r = divmod(x, c)
                if r:
                    raise ArithmeticError("inexact division in Z[sqrt d]")
                res.append(y)
            out.append(tuple(res))
        return (out[0], out[1])
    ra = list(p[0])
    rb = list(p[1])
    n = max(len(ra), len(rb))
    ra += [0] * (n - len(ra))
    rb += [0] * (n - len(rb))
    lc = _coef(q, dq)
    qa = [0] * max(0, n - dq)
    qb = [0] * max(0, n - dq)
    qcoefs = [_coef(q, j) for j in range(dq + 1)]
    for i in range(n - 1, dq - 1, -1):
        x = (ra[i], rb[i])
        if not x[0] and not x[1]:
            continue
        fa, fb = _div_scalar(x, lc, d)
        qa[i - dq] = fa
        qb[i - dq] = fb
        for j, (ca, cb) in enumerate(qcoefs):
            if not ca and not cb:
                continue
            k = i - dq + j
            if d is None:
                ra[k] -= fa * ca
            else:
                ra[k] -= fa * ca + d * fb * cb
                rb[k] -= fa * cb + fb * ca
    if any(ra[:dq]) or any(rb[:dq]):
        raise ArithmeticError("nonzero remainder in exact polynomial division")
    return (trim(qa), trim(qb))
