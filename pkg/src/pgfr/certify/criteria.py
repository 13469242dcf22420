"""Sufficient criteria for pretty good fractional revival and the gates guarding them."""

from __future__ import annotations

from itertools import combinations
from typing import Sequence

import numpy as np

from ..graphs import CyclicAction, WeightedGraph, eccentricity_to_set, verify_automorphism
from .factor import Factor, Factorization

TRACE_TOL = 1e-7
ROOT_SEP = 1e-7


class InvalidOrbitError(ValueError):
    pass


def _traces_differ(a: Factor, b: Factor) -> bool:
    if a.degree != b.degree:
        return True
    if a.exact and b.exact:
        return a.trace_q != b.trace_q or a.trace_f != b.trace_f
    return abs(float(a.trace_q) - float(b.trace_q)) > TRACE_TOL or abs(float(a.trace_f) - float(b.trace_f)) > TRACE_TOL


def trace_degree_criterion(f: Factorization | Sequence[Factor]) -> tuple[bool, tuple[int, int] | None]:
    """First pair (i, j) of factor labels whose degrees or traces differ.

    Comparing degree and trace separately is the same as comparing Tr/deg here,
    because every trace has Q-coefficient 1 (so Tr/deg equal forces equal degrees).
    """
    factors = f.factors if isinstance(f, Factorization) else list(f)
    for a, b in combinations(factors, 2):
        if _traces_differ(a, b):
            return True, (a.label, b.label)
    return False, None


def _separated(x: np.ndarray, y: np.ndarray, tol: float) -> bool:
    if len(x) == 0 or len(y) == 0:
        return True
    return bool(np.abs(x[:, None] - y[None, :]).min() > tol)


def _self_separated(x: np.ndarray, tol: float) -> bool:
    return len(x) < 2 or bool(np.diff(np.sort(x)).min() > tol)


def distinctness_gate(f: Factorization, tol: float = ROOT_SEP) -> bool:
    """All P_j pairwise different with disjoint roots, and P_0 sharing no root with them."""
    fs = f.factors
    if any(a.same_polynomial(b, tol) for a, b in combinations(fs, 2)):
        return False
    if not all(_separated(a.roots, b.roots, tol) for a, b in combinations(fs, 2)):
        return False
    return all(_separated(f.p0_roots, a.roots, tol) for a in fs)


def class_distinctness_gate(f: Factorization, tol: float = ROOT_SEP) -> bool:
    """Distinctness after merging identical factors into one class.

    Identical relative minimal polynomials (forced by extra symmetry, as in the
    diamond cycles where P_k = P_{r-k}) describe the same part of the spectrum;
    what soundness needs is that different classes share no roots, that each
    class has simple roots, and that P_0 is disjoint from all of them.
    """
    reps = [f.factors[c[0]] for c in f.classes(tol)]
    if not all(_self_separated(r.roots, tol) for r in reps):
        return False
    if not all(_separated(a.roots, b.roots, tol) for a, b in combinations(reps, 2)):
        return False
    return all(_separated(f.p0_roots, a.roots, tol) for a in reps)


def orbit_size_criterion(g: WeightedGraph, action: CyclicAction, K: Sequence[int]) -> tuple[bool, int]:
    """``r*(d+1) > n`` where d is the largest distance from K to any vertex."""
    K = list(K)
    if not verify_automorphism(g, action):
        raise InvalidOrbitError("invalid-orbit: the action is not an automorphism of order r")
    if len(K) != action.r or set(action.orbit(K[0])) != set(K):
        raise InvalidOrbitError("invalid-orbit: K is not a single orbit of size r")
    d = eccentricity_to_set(g, K)
    return action.r * (d + 1) > g.n, d
