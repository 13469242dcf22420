"""Numeric spectral decomposition, eigenvalue support and the induced partition of the spectrum."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

DEFAULT_SUPPORT_TOL = 1e-9


class AsymmetricMatrixError(ValueError):
    pass


@dataclass(frozen=True)
class SpectralDecomposition:
    eigenvalues: np.ndarray  # distinct, ascending (cluster means)
    multiplicities: tuple[int, ...]
    projectors: np.ndarray  # shape (d, n, n)
    cluster_tol: float
    basis: np.ndarray  # orthonormal eigenvectors as columns, ascending
    raw_eigenvalues: np.ndarray
    members: tuple[tuple[int, ...], ...]  # raw indices of each cluster

    @property
    def n(self) -> int:
        return self.basis.shape[0]

    @property
    def d(self) -> int:
        return len(self.eigenvalues)

    def reconstruct(self) -> np.ndarray:
        return np.einsum("i,ijk->jk", self.eigenvalues, self.projectors)


def default_cluster_tol(m: np.ndarray) -> float:
    return 1e-9 * max(1.0, float(np.linalg.norm(m, 2)))


def decompose(m: np.ndarray, cluster_tol: float | None = None) -> SpectralDecomposition:
    """Spectral decomposition with consecutive eigenvalues closer than ``cluster_tol`` merged."""
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise AsymmetricMatrixError("matrix must be square")
    scale = max(1.0, float(np.abs(m).max(initial=0.0)))
    if np.abs(m - m.T).max(initial=0.0) > 1e-12 * scale:
        raise AsymmetricMatrixError("matrix is not symmetric")
    if cluster_tol is None:
        cluster_tol = default_cluster_tol(m)
    w, V = np.linalg.eigh((m + m.T) / 2)
    groups: list[list[int]] = [[0]]
    for i in range(1, len(w)):
        if w[i] - w[i - 1] < cluster_tol:
            groups[-1].append(i)
        else:
            groups.append([i])
    vals = np.array([w[g].mean() for g in groups])
    projs = np.stack([V[:, g] @ V[:, g].T for g in groups])
    return SpectralDecomposition(
        eigenvalues=vals,
        multiplicities=tuple(len(g) for g in groups),
        projectors=projs,
        cluster_tol=float(cluster_tol),
        basis=V,
        raw_eigenvalues=w,
        members=tuple(tuple(g) for g in groups),
    )


def support_strength(dec: SpectralDecomposition, K: Sequence[int]) -> np.ndarray:
    """Matrix of ``||E_r D_K E_s||_F`` over all pairs of eigenvalue indices."""
    K = list(K)
    cols = dec.projectors[:, :, K]  # E_r restricted to columns K
    d = dec.d
    out = np.zeros((d, d))
    for r in range(d):
        for s in range(r, d):
            val = np.linalg.norm(cols[r] @ cols[s].transpose())
            out[r, s] = out[s, r] = val
    return out


def eigenvalue_support(dec: SpectralDecomposition, K: Sequence[int], support_tol: float = DEFAULT_SUPPORT_TOL) -> set[tuple[int, int]]:
    """Pairs ``(r, s)`` (0-based eigenvalue indices) with ``E_r D_K E_s`` numerically nonzero."""
    strength = support_strength(dec, K)
    return {(r, s) for r in range(dec.d) for s in range(dec.d) if strength[r, s] > support_tol}


class UnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


@dataclass(frozen=True)
class EigenPartition:
    pi0: tuple[int, ...]
    parts: tuple[tuple[int, ...], ...]
    eigenvalues: tuple[float, ...]
    tol: float
    fragile: bool = False

    @property
    def s(self) -> int:
        return len(self.parts)

    def part_of(self, i: int) -> int | None:
        """1-based part label of eigenvalue index ``i`` (None for the vanishing class)."""
        for r, part in enumerate(self.parts, start=1):
            if i in part:
                return r
        return None

    def values(self, r: int) -> list[float]:
        return [self.eigenvalues[i] for i in self.parts[r - 1]]

    def same_as(self, other: EigenPartition) -> bool:
        return self.pi0 == other.pi0 and self.parts == other.parts

    def to_json(self) -> dict:
        fmt = lambda x: float(f"{x:.15g}")  # noqa: E731
        return {
            "pi0": list(self.pi0),
            "parts": [list(p) for p in self.parts],
            "values": {
                "pi0": [fmt(self.eigenvalues[i]) for i in self.pi0],
                "parts": [[fmt(self.eigenvalues[i]) for i in p] for p in self.parts],
            },
            "tol": self.tol,
            "fragile": self.fragile,
        }


def _partition_once(dec: SpectralDecomposition, K: Sequence[int], support_tol: float) -> EigenPartition:
    K = list(K)
    strength = support_strength(dec, K)
    kk = [np.linalg.norm(P[np.ix_(K, K)]) for P in dec.projectors]
    pi0 = tuple(i for i in range(dec.d) if kk[i] <= support_tol)
    live = [i for i in range(dec.d) if i not in pi0]
    uf = UnionFind(dec.d)
    for a in live:
        for b in live:
            if b > a and strength[a, b] > support_tol:
                uf.union(a, b)
    groups: dict[int, list[int]] = {}
    for i in live:
        groups.setdefault(uf.find(i), []).append(i)
    parts = tuple(sorted(tuple(sorted(g)) for g in groups.values()))
    return EigenPartition(pi0, parts, tuple(float(x) for x in dec.eigenvalues), float(support_tol))


def partition(dec: SpectralDecomposition, K: Sequence[int], support_tol: float = DEFAULT_SUPPORT_TOL, *, sensitivity: bool = True) -> EigenPartition:
    """Vanishing class plus connected components of the eigenvalue support.

    With ``sensitivity`` the partition is recomputed at ``support_tol*10`` and
    ``support_tol/10``; any disagreement sets ``fragile``.
    """
    base = _partition_once(dec, K, support_tol)
    if not sensitivity:
        return base
    fragile = any(not base.same_as(_partition_once(dec, K, t)) for t in (support_tol * 10, support_tol / 10))
    return EigenPartition(base.pi0, base.parts, base.eigenvalues, base.tol, fragile)


def is_block_diagonal(a: np.ndarray, K: Sequence[int], tol: float) -> bool:
    """True when every entry with exactly one index in K has modulus at most ``tol``."""
    a = np.asarray(a)
    inside = np.zeros(a.shape[0], dtype=bool)
    inside[list(K)] = True
    return bool(np.abs(a[np.ix_(inside, ~inside)]).max(initial=0.0) <= tol and np.abs(a[np.ix_(~inside, inside)]).max(initial=0.0) <= tol)


def krylov_basis(a: np.ndarray, v: np.ndarray, rank_tol: float = 1e-9) -> np.ndarray:
    """Orthonormal basis of span{v, Av, A^2 v, ...} by Arnoldi with re-orthogonalisation.

    A new direction is rejected once its orthogonal residual falls below
    ``rank_tol * max(||A||_2, ||A q||)``.
    """
    a = np.asarray(a)
    v = np.asarray(v, dtype=complex)
    nv = np.linalg.norm(v)
    if nv == 0:
        raise ValueError("zero starting vector")
    scale = max(1.0, float(np.linalg.norm(a, 2)))
    Q = [v / nv]
    for _ in range(a.shape[0]):
        w = a @ Q[-1]
        ref = max(scale, float(np.linalg.norm(w)))
        B = np.array(Q).T
        for _ in range(2):
            w = w - B @ (B.conj().T @ w)
        h = np.linalg.norm(w)
        if h <= rank_tol * ref:
            break
        Q.append(w / h)
    return np.array(Q).T


def kernel_eigenvector_count(m: np.ndarray, K: Sequence[int], theta: float, tol: float = 1e-8) -> int:
    """Dimension of the part of M's theta-eigenspace that vanishes on K."""
    w, V = np.linalg.eigh(m)
    sel = np.abs(w - theta) < tol * max(1.0, abs(theta))
    if not sel.any():
        return 0
    sub = V[:, sel][list(K), :]
    rank = np.linalg.matrix_rank(sub, tol=1e-8) if sub.size else 0
    return int(sel.sum() - rank)


def stationary_eigenvalues(m: np.ndarray, K: Sequence[int], qs: Sequence[float] = (0.0, 0.5, 1.0), tol: float = 1e-8) -> list[tuple[float, int]]:
    """Eigenvalues of ``M + q*D_K`` present with the same multiplicity for every q in ``qs``."""
    d = np.zeros_like(m)
    for k in K:
        d[k, k] = 1.0
    spectra = [np.linalg.eigvalsh(m + q * d) for q in qs]
    out = []
    for theta in np.unique(np.round(spectra[0], 9)):
        counts = [int(np.sum(np.abs(s - theta) < tol)) for s in spectra]
        if counts[0] and len(set(counts)) == 1:
            out.append((float(theta), counts[0]))
    return out
