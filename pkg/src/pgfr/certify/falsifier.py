"""Search for the integer relations that would make a partition degenerate.

A relation for parts (r1, r2) is an integer vector l over the non-vanishing
eigenvalues with |sum l_j theta_j| tiny, part sums -1 on r1, +1 on r2 and 0 on
every other part. Floating eigenvalues make a hit evidence, never proof.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

import numpy as np

from ..spectral import EigenPartition

EXHAUSTIVE_MAX_K = 12
LATTICE_SCALE = 10**12


@dataclass(frozen=True)
class IntegerRelation:
    coefficients: tuple[int, ...]  # aligned with ``indices``
    indices: tuple[int, ...]  # eigenvalue indices the coefficients refer to
    pair: tuple[int, int]
    residual: float
    method: str

    def to_json(self) -> dict:
        return {
            "coefficients": list(self.coefficients),
            "indices": list(self.indices),
            "pair": list(self.pair),
            "residual": float(f"{self.residual:.15g}"),
            "method": self.method,
        }


def _layout(partition: EigenPartition, pair: tuple[int, int]) -> tuple[list[int], np.ndarray, np.ndarray]:
    """Eigenvalue indices in part order, their part numbers (0-based) and per-part targets."""
    idx, owner = [], []
    for r, part in enumerate(partition.parts):
        for i in part:
            idx.append(i)
            owner.append(r)
    target = np.zeros(partition.s, dtype=np.int64)
    target[pair[0] - 1] -= 1
    target[pair[1] - 1] += 1
    return idx, np.array(owner), target


def _enumerate_half(theta: np.ndarray, owner: np.ndarray, s: int, B: int):
    """All coefficient vectors of one half, their weighted sums and per-part sums."""
    k = len(theta)
    if k == 0:
        return np.zeros((1, 0), dtype=np.int8), np.zeros(1), np.zeros((1, s), dtype=np.int64)
    vals = np.arange(-B, B + 1, dtype=np.int8)
    grid = np.stack(np.meshgrid(*([vals] * k), indexing="ij"), axis=-1).reshape(-1, k)
    sums = np.zeros(len(grid))
    parts = np.zeros((len(grid), s), dtype=np.int64)
    for c in range(k):
        col = grid[:, c]
        sums += col * theta[c]
        parts[:, owner[c]] += col
    return grid, sums, parts


def _keys(left_need: np.ndarray, right: np.ndarray, B: int, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Integer labels equal exactly when the part-sum vectors are equal."""
    s = right.shape[1]
    base = 2 * B * k + 3
    if s * np.log2(base) < 62:
        w = base ** np.arange(s, dtype=np.int64)
        return left_need @ w, right @ w
    _, inv = np.unique(np.vstack([left_need, right]), axis=0, return_inverse=True)
    inv = inv.ravel()
    return inv[: len(left_need)], inv[len(left_need):]


def _search_exhaustive(theta: np.ndarray, owner: np.ndarray, target: np.ndarray, B: int, tol: float):
    """Meet in the middle: split the variables, pair halves with complementary part sums."""
    k = len(theta)
    s = len(target)
    h = k // 2
    gl, sl, pl = _enumerate_half(theta[:h], owner[:h], s, B)
    gr, sr, pr = _enumerate_half(theta[h:], owner[h:], s, B)
    want, kr = _keys(target[None, :] - pl, pr, B, k)
    order = np.lexsort((sr, kr))
    kr, sr, gr = kr[order], sr[order], gr[order]
    lo = np.searchsorted(kr, want, "left")
    hi = np.searchsorted(kr, want, "right")
    has = hi > lo
    if not has.any():
        return None
    lo, hi, goal, left_rows = lo[has], hi[has], -sl[has], np.nonzero(has)[0]
    # vectorised binary search for goal inside each matching key block
    a, b = lo.copy(), hi.copy()
    while True:
        active = a < b
        if not active.any():
            break
        mid = (a + b) // 2
        mid_c = np.minimum(mid, len(sr) - 1)
        go_right = active & (sr[mid_c] < goal)
        a = np.where(go_right, mid + 1, a)
        b = np.where(active & ~go_right, mid, b)
    best = None
    for cand in (a - 1, a):
        ok = (cand >= lo) & (cand < hi)
        if not ok.any():
            continue
        c = np.clip(cand, 0, len(sr) - 1)
        res = np.where(ok, np.abs(sr[c] - goal), np.inf)
        j = int(np.argmin(res))
        if res[j] < tol and (best is None or res[j] < best[0]):
            best = (float(res[j]), left_rows[j], int(c[j]))
    if best is None:
        return None
    res, li, ri = best
    coeffs = np.concatenate([gl[li], gr[ri]]).astype(int)
    return tuple(int(x) for x in coeffs), abs(float(coeffs @ theta))


def _search_lattice(theta: np.ndarray, owner: np.ndarray, target: np.ndarray, B: int, tol: float):
    """Embedding of the affine relation lattice, reduced with LLL; short rows are candidates."""
    from sympy import ZZ
    from sympy.polys.matrices import DomainMatrix

    k = len(theta)
    s = len(target)
    firsts = [int(np.nonzero(owner == r)[0][0]) for r in range(s)]
    basis = []
    for j in range(k):
        if j not in firsts:
            v = [0] * k
            v[j] = 1
            v[firsts[owner[j]]] = -1
            basis.append(v)
    l0 = [0] * k
    for r in range(s):
        l0[firsts[r]] = int(target[r])
    scaled = [round(x * LATTICE_SCALE) for x in theta]
    cap = B * max(1, k)  # embedding weight for the affine row
    rows = [v + [sum(a * b for a, b in zip(v, scaled)), 0] for v in basis]
    rows.append(l0 + [sum(a * b for a, b in zip(l0, scaled)), cap])
    dm = DomainMatrix([[ZZ(x) for x in row] for row in rows], (len(rows), k + 2), ZZ)
    reduced = [[int(x) for x in row] for row in dm.lll().to_Matrix().tolist()]
    lat = [r for r in reduced if r[-1] == 0]
    aff = [r if r[-1] == cap else [-x for x in r] for r in reduced if abs(r[-1]) == cap]
    best = None
    for a in aff:
        cands = [a[:k]]
        # a few cheap corrections by short lattice vectors
        for lv in lat[: min(len(lat), 8)]:
            for sign in (1, -1):
                cands.append([x + sign * y for x, y in zip(a[:k], lv[:k])])
        for c in cands:
            if max(abs(x) for x in c) > B:
                continue
            res = abs(float(np.dot(c, theta)))
            if res < tol and (best is None or res < best[1]):
                best = (tuple(int(x) for x in c), res)
    return best


def degeneracy_search(
    eigenvalues: Sequence[float],
    partition: EigenPartition,
    pair: tuple[int, int],
    bound: int = 6,
    tol: float = 1e-9,
) -> IntegerRelation | None:
    """Smallest-residual relation for the 1-based part pair ``pair``, or None.

    Eigenvalues in the vanishing class get coefficient 0 and are left out.
    Up to twelve unknowns the search is exhaustive over |l_j| <= bound;
    beyond that it is lattice-reduction assisted and may miss relations.
    """
    if partition.s < 2:
        return None
    theta_all = np.asarray(eigenvalues, dtype=float)
    idx, owner, target = _layout(partition, pair)
    theta = theta_all[idx]
    if len(idx) <= EXHAUSTIVE_MAX_K:
        hit = _search_exhaustive(theta, owner, target, bound, tol)
        method = "exhaustive"
    else:
        hit = _search_lattice(theta, owner, target, bound, tol)
        method = "lattice"
    if hit is None:
        return None
    coeffs, res = hit
    return IntegerRelation(coeffs, tuple(idx), tuple(pair), res, method)


def brute_force_relation(theta: Sequence[float], parts: Sequence[Sequence[int]], pair: tuple[int, int], bound: int, tol: float):
    """Plain enumeration over all coefficient vectors; only for tiny test oracles."""
    theta = np.asarray(theta, dtype=float)
    owner = {i: r for r, p in enumerate(parts) for i in p}
    idx = sorted(owner)
    best = None
    for coeffs in product(range(-bound, bound + 1), repeat=len(idx)):
        sums = [0] * len(parts)
        for i, c in zip(idx, coeffs):
            sums[owner[i]] += c
        want = [0] * len(parts)
        want[pair[0] - 1] -= 1
        want[pair[1] - 1] += 1
        if sums != want:
            continue
        res = abs(sum(c * theta[i] for i, c in zip(idx, coeffs)))
        if res < tol and (best is None or res < best[1]):
            best = (coeffs, res)
    return best
