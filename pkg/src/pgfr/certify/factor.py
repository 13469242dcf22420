"""Factoring the characteristic polynomial by relative minimal polynomials."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import pi

import numpy as np

from ..cospectral import HSpec, UnsupportedFieldError, embed, verify_h_cospectrality
from ..exactalg import (
    BiPoly,
    QuadNumber,
    char_poly_symbolic,
    irreducible_linear_in_q,
    poly_divide_exact,
    relative_min_poly_symbolic,
    trace_of,
)
from ..graphs import RevivalSite, WeightedGraph
from ..spectral import krylov_basis

DEFAULT_NUMERIC_Q = pi
RANK_TOL = 1e-9
RANK_TOL_CHECK = 1e-11
ROOT_MATCH_TOL = 1e-8


class PreconditionViolation(ValueError):
    pass


class RankFragileError(ArithmeticError):
    pass


@dataclass
class Factor:
    """One factor P_j. ``trace_f`` is the Q-free part of Tr P_j (exact or float)."""

    label: int
    degree: int
    trace_q: Fraction | float
    trace_f: QuadNumber | float
    roots: np.ndarray  # at the numeric stand-in for Q
    poly: BiPoly | None = None
    q_degree: int | None = None
    irreducible: bool | None = None
    irreducible_basis: str = "gcd"  # "gcd" when checked, "theorem" when taken from the cyclic argument

    @property
    def exact(self) -> bool:
        return self.poly is not None

    def trace_value(self, q: float) -> float:
        return float(self.trace_q) * q + float(self.trace_f)

    def same_polynomial(self, other: Factor, tol: float = 1e-7) -> bool:
        if self.exact and other.exact:
            return self.poly == other.poly
        if self.degree != other.degree:
            return False
        return bool(np.allclose(np.sort(self.roots), np.sort(other.roots), atol=tol, rtol=0))

    def to_json(self) -> dict:
        if isinstance(self.trace_f, QuadNumber):
            tf = self.trace_f.to_json()
            tq = str(self.trace_q)
        else:
            tf = [float(f"{self.trace_f:.15g}"), 0, None]
            tq = float(f"{self.trace_q:.15g}")
        out = {
            "label": self.label,
            "deg": self.degree,
            "trace_q": tq,
            "trace_f": tf,
            "irreducible": self.irreducible,
            "irreducible_basis": self.irreducible_basis,
        }
        if self.poly is not None:
            out["poly"] = self.poly.to_json()
            out["q_degree"] = self.q_degree
        return out


@dataclass
class Factorization:
    factors: list[Factor]
    mode: str  # "exact" | "numeric"
    q_num: float
    p0: BiPoly | None = None
    p0_roots: np.ndarray = field(default_factory=lambda: np.zeros(0))
    char_poly: BiPoly | None = None

    @property
    def p0_degree(self) -> int:
        return len(self.p0_roots)

    def classes(self, tol: float = 1e-7) -> list[list[int]]:
        """Groups of factor positions carrying identical polynomials, in label order."""
        out: list[list[int]] = []
        for i, f in enumerate(self.factors):
            for cls in out:
                if self.factors[cls[0]].same_polynomial(f, tol):
                    cls.append(i)
                    break
            else:
                out.append([i])
        return out


def _match_roots(eigs: np.ndarray, roots: np.ndarray, tol: float) -> np.ndarray:
    """Remove one matching eigenvalue per root; returns the leftover eigenvalues."""
    left = list(np.sort(eigs))
    for x in np.sort(roots):
        if not left:
            raise ArithmeticError("factor roots exceed the spectrum")
        j = int(np.argmin([abs(x - y) for y in left]))
        if abs(left[j] - x) > tol * max(1.0, abs(x)):
            raise ArithmeticError(f"factor root {x} is not an eigenvalue")
        left.pop(j)
    return np.array(left)


def _exact_factorization(g: WeightedGraph, site: RevivalSite, h: HSpec, q_num: float, bit_bound: int | None) -> Factorization:
    a = g.adjacency_exact()
    kwargs = {} if bit_bound is None else {"bit_bound": bit_bound}
    factors = []
    product = BiPoly.constant(1)
    for j, seed in enumerate(h.seeds, start=1):
        p = relative_min_poly_symbolic(a, site, seed, **kwargs)
        product = product * p
        tq, tf = trace_of(p)
        irr = irreducible_linear_in_q(p) if p.q_degree == 1 else False
        factors.append(Factor(j, p.t_degree, tq, tf, np.sort(p.roots_at_q(q_num).real), poly=p, q_degree=p.q_degree, irreducible=irr))
    phi = char_poly_symbolic(a, site)
    p0 = poly_divide_exact(phi, product)
    if p0.q_degree > 0:
        raise ArithmeticError("remainder factor depends on Q")
    p0_roots = np.sort(p0.roots_at_q(q_num).real) if p0.t_degree > 0 else np.zeros(0)
    return Factorization(factors, "exact", q_num, p0=p0, p0_roots=p0_roots, char_poly=phi)


def _krylov_roots(a: np.ndarray, v: np.ndarray) -> np.ndarray:
    B = krylov_basis(a, v, RANK_TOL)
    B2 = krylov_basis(a, v, RANK_TOL_CHECK)
    if B.shape[1] != B2.shape[1]:
        raise RankFragileError("rank-fragile: Krylov dimension depends on the threshold")
    T = B.conj().T @ a @ B
    return np.sort(np.linalg.eigvalsh((T + T.conj().T) / 2))


def _numeric_factorization(g: WeightedGraph, site: RevivalSite, h: HSpec, q_num: float) -> Factorization:
    K = list(site.K)
    base = g.adjacency()
    d = site.indicator(g.n)
    a0, a1 = base + q_num * d, base + (q_num + 1.0) * d
    factors = []
    for j in range(h.size):
        v = embed(h.eigenvectors[:, j], K, g.n)
        r0 = _krylov_roots(a0, v)
        r1 = _krylov_roots(a1, v)
        if len(r0) != len(r1):
            raise RankFragileError("rank-fragile: factor degree changes with Q")
        # trace is affine in Q; the slope is read off from a unit step
        slope = float(r1.sum() - r0.sum())
        tf = float(r0.sum()) - slope * q_num
        factors.append(Factor(j + 1, len(r0), slope, tf, r0, irreducible=True if h.origin == "cyclic" else None,
                              irreducible_basis="theorem" if h.origin == "cyclic" else "unchecked"))
    eigs = np.linalg.eigvalsh(a0)
    left = eigs
    for f in factors:
        left = _match_roots(left, f.roots, ROOT_MATCH_TOL)
    return Factorization(factors, "numeric", q_num, p0_roots=np.sort(left))


def factor_by_minpolys(
    g: WeightedGraph,
    site: RevivalSite,
    h: HSpec,
    mode: str = "exact",
    q_num: float = DEFAULT_NUMERIC_Q,
    *,
    bit_bound: int | None = None,
    check: bool = True,
) -> Factorization:
    """Relative minimal polynomials of the embedded H-eigenvectors and the quotient P_0.

    The exact path needs exact seeds (a pair parameter or a 2-cycle); the numeric
    path reads each factor's roots from the compression of M + q*D_K to its Krylov space.
    """
    if check:
        vmode = "exact" if h.exact_matrix is not None and mode == "exact" else "numeric"
        if not verify_h_cospectrality(g, site, h, vmode):
            raise PreconditionViolation("precondition-violation: K is not H-cospectral")
    if not h.distinct_eigenvalues:
        raise PreconditionViolation("precondition-violation: H has repeated eigenvalues")
    if mode == "exact":
        if h.seeds is None:
            raise UnsupportedFieldError("unsupported-field: H eigenvectors are not over Q(sqrt d)")
        return _exact_factorization(g, site, h, q_num, bit_bound)
    return _numeric_factorization(g, site, h, q_num)
