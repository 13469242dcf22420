"""H-cospectrality of a vertex subset: discovering H and checking the equivalent conditions."""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .exactalg import QuadNumber, squarefree_decompose
from .graphs import RevivalSite, WeightedGraph
from .spectral import decompose, krylov_basis

ANY = "any"
SPOT_CHECK_Q = (1, 7)


class InvalidPairError(ValueError):
    pass


class SizeMismatchError(ValueError):
    pass


class UnsupportedFieldError(ValueError):
    pass


@dataclass(frozen=True)
class HSpec:
    """A normal |K|x|K| matrix with its eigenpairs.

    ``eigenvectors`` holds normalised eigenvectors as columns, ordered like
    ``eigenvalues``; factor label j (1-based) refers to column j-1.
    ``exact_matrix`` and ``seeds`` are present when H and its eigenvectors
    are exact over Q or Q(sqrt d).
    """

    matrix: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    origin: str  # "pair" | "cyclic" | "custom"
    c: Fraction | None = None
    r: int | None = None
    ratio: QuadNumber | None = None  # p/q for the pair origin
    exact_matrix: tuple[tuple[QuadNumber, ...], ...] | None = None
    seeds: tuple[tuple[QuadNumber, ...], ...] | None = None
    extra: dict = field(default_factory=dict, compare=False)

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    @property
    def distinct_eigenvalues(self) -> bool:
        rho = self.eigenvalues
        return all(abs(rho[i] - rho[j]) > 1e-10 for i in range(len(rho)) for j in range(i + 1, len(rho)))

    def idempotent(self, j: int) -> np.ndarray:
        v = self.eigenvectors[:, j]
        return np.outer(v, v.conj())

    def normality_defect(self) -> float:
        h = self.matrix
        return float(np.linalg.norm(h @ h.conj().T - h.conj().T @ h))

    def to_json(self) -> dict:
        fmt = lambda x: float(f"{x:.15g}")  # noqa: E731
        out: dict = {"origin": self.origin, "size": self.size}
        if self.c is not None:
            out["c"] = str(self.c)
            out["c2_plus_4"] = str(self.c * self.c + 4)
            out["d"] = self.ratio.d if self.ratio is not None else None
            out["ratio"] = self.ratio.to_json() if self.ratio is not None else None
        if self.r is not None:
            out["r"] = self.r
        out["eigenpairs"] = [
            {
                "rho": [fmt(complex(self.eigenvalues[j]).real), fmt(complex(self.eigenvalues[j]).imag)],
                "v": [[fmt(complex(x).real), fmt(complex(x).imag)] for x in self.eigenvectors[:, j]],
            }
            for j in range(self.size)
        ]
        out["distinct"] = self.distinct_eigenvalues
        return out


def _exact_matrix(m) -> list[list[Fraction]]:
    if isinstance(m, WeightedGraph):
        return m.adjacency_exact()
    return [[Fraction(x) for x in row] for row in m]


def _k_rows_of_powers(a: list[list], rows: Sequence[int], upto: int) -> list[list[list]]:
    """``[(A^j)[rows, :] for j = 0..upto]`` with exact entries, using sparse row updates."""
    n = len(a)
    nz = [[(l, a[l][k]) for l in range(n) if a[l][k]] for k in range(n)]
    cur = [[Fraction(int(r == k)) for k in range(n)] for r in rows]
    out = [cur]
    for _ in range(upto):
        cur = [[sum((row[l] * w for l, w in nz[k] if row[l]), Fraction(0)) for k in range(n)] for row in cur]
        out.append(cur)
    return out


def find_pair_parameter(m, u: int, v: int) -> Fraction | None | str:
    """The rational c with ``(M^j)_uu - (M^j)_vv == c*(M^j)_uv`` for all j < n.

    Returns ``None`` when no such c exists and ``ANY`` when every diagonal
    difference and every (u, v) entry vanishes.
    """
    if u == v:
        raise InvalidPairError("invalid-pair: u == v")
    a = _exact_matrix(m)
    n = len(a)
    c: Fraction | None = None
    for P in _k_rows_of_powers(a, [u, v], n - 1):
        diff = P[0][u] - P[1][v]
        off = P[0][v]
        if off == 0:
            if diff != 0:
                return None
            continue
        cj = diff / off
        if c is None:
            c = cj
        elif cj != c:
            return None
    return ANY if c is None else c


def _pair_field(c: Fraction) -> QuadNumber:
    """p/q = (c + sqrt(c^2 + 4)) / 2 as an exact element of Q(sqrt d)."""
    a, b = c.numerator, c.denominator
    s, d = squarefree_decompose(a * a + 4 * b * b)
    if d == 1:
        return QuadNumber(Fraction(a, 2 * b) + Fraction(s, 2 * b))
    return QuadNumber(Fraction(a, 2 * b), Fraction(s, 2 * b), d)


def h_from_c(c) -> HSpec:
    """Reflection H whose +1 and -1 eigenvectors are (p/q, 1) and (-q/p, 1)."""
    c = Fraction(c)
    x = _pair_field(c)
    y = -x.inverse()
    seeds = ((x, QuadNumber(1)), (y, QuadNumber(1)))
    # H = 2 v1 v1^T / |v1|^2 - I = [[alpha, beta], [beta, -alpha]]
    den = x * x + 1
    alpha = (x * x - 1) / den
    beta = (x * 2) / den
    exact = ((alpha, beta), (beta, -alpha))
    vecs = np.array([[float(x), float(y)], [1.0, 1.0]])
    vecs = vecs / np.linalg.norm(vecs, axis=0)
    mat = np.array([[float(e) for e in row] for row in exact])
    return HSpec(mat, np.array([1.0, -1.0]), vecs, "pair", c=c, ratio=x, exact_matrix=exact, seeds=seeds)


def h_cyclic(r: int) -> HSpec:
    """Cyclic shift on r points; eigenvector k is (1, rho^k, ..., rho^((r-1)k)) with eigenvalue rho^k."""
    if r < 2:
        raise ValueError("r must be at least 2")
    mat = np.zeros((r, r))
    for i in range(r):
        mat[i, (i + 1) % r] = 1.0
    rho = cmath.exp(2j * cmath.pi / r)
    vecs = np.array([[rho ** (i * k) for k in range(r)] for i in range(r)]) / np.sqrt(r)
    vals = np.array([rho**k for k in range(r)])
    exact = tuple(tuple(QuadNumber(int(j == (i + 1) % r)) for j in range(r)) for i in range(r))
    seeds = None
    if r == 2:
        vals = np.array([1.0, -1.0])
        vecs = vecs.real
        seeds = ((QuadNumber(1), QuadNumber(1)), (QuadNumber(1), QuadNumber(-1)))
    return HSpec(mat, vals, vecs, "cyclic", r=r, exact_matrix=exact, seeds=seeds)


def h_trivial() -> HSpec:
    """H = [1] for a single vertex; exact, with seed (1,)."""
    one = QuadNumber(1)
    return HSpec(np.ones((1, 1)), np.ones(1), np.ones((1, 1)), "custom", exact_matrix=((one,),), seeds=((one,),))


def h_custom(matrix) -> HSpec:
    """Wrap a user-supplied normal matrix; eigenvectors from a Schur form."""
    h = np.asarray(matrix, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise SizeMismatchError("H must be square")
    if np.linalg.norm(h @ h.conj().T - h.conj().T @ h) > 1e-12 * max(1.0, np.linalg.norm(h)):
        raise ValueError("H is not normal")
    from scipy.linalg import schur

    T, Z = schur(h, output="complex")
    vals = np.diag(T)
    if np.allclose(h.imag, 0) and np.allclose(vals.imag, 0):
        h, vals = h.real, vals.real
    return HSpec(h, vals, Z, "custom")


def _commutes_exact(h: Sequence[Sequence[QuadNumber]], x: list[list[Fraction]]) -> bool:
    s = len(h)
    for i in range(s):
        for j in range(s):
            lhs = sum((h[i][l] * x[l][j] for l in range(s)), QuadNumber(0))
            rhs = sum((x[i][l] * h[l][j] for l in range(s)), QuadNumber(0))
            if lhs != rhs:
                return False
    return True


def _exact_check(a: list[list[Fraction]], K: Sequence[int], h: HSpec) -> bool:
    n = len(a)
    for rows in _k_rows_of_powers(a, K, n - 1):
        sub = [[row[k] for k in K] for row in rows]
        if not _commutes_exact(h.exact_matrix, sub):
            return False
    return True


def _numeric_check(a: np.ndarray, K: Sequence[int], h: np.ndarray, tol: float) -> bool:
    n = a.shape[0]
    a = a / max(1.0, float(np.linalg.norm(a, 2)))
    K = list(K)
    rows = np.eye(n)[K, :]
    for _ in range(n):
        sub = rows[:, K]
        if np.linalg.norm(h @ sub - sub @ h) > tol * max(1.0, np.linalg.norm(sub)):
            return False
        rows = rows @ a
    return True


def verify_h_cospectrality(m, site: RevivalSite, h: HSpec, mode: str = "numeric", tol: float = 1e-9) -> bool:
    """H commutes with the K x K block of every power M^k, k < n.

    ``m`` is the unperturbed matrix (a WeightedGraph or exact rows). A symbolic
    site is checked at Q = 0 and spot-checked at Q = 1 and Q = 7; a numeric
    site is checked at its own Q.
    """
    K = list(site.K)
    if h.size != len(K):
        raise SizeMismatchError("size mismatch between H and K")
    base = _exact_matrix(m)
    if mode == "exact":
        if h.exact_matrix is None:
            raise UnsupportedFieldError("H has no exact form")
        qs = [0, *SPOT_CHECK_Q]
        for q in qs:
            a = [list(row) for row in base]
            for k in K:
                a[k][k] += q
            if not _exact_check(a, K, h):
                return False
        return True
    fm = np.array([[float(x) for x in row] for row in base])
    d = site.indicator(len(base))
    qs = [0.0, *map(float, SPOT_CHECK_Q)] if site.symbolic else [float(site.q)]
    return all(_numeric_check(fm + q * d, K, h.matrix, tol) for q in qs)


@dataclass(frozen=True)
class ConditionReport:
    """Outcome of the equivalent characterisations of H-cospectrality."""

    commutes_with_powers: bool  # (2)
    commutes_with_idempotents: bool  # (3)
    idempotents_commute: bool  # (4)
    cross_projections_vanish: bool  # (5)
    krylov_orthogonal: bool  # (7)

    def as_dict(self) -> dict[str, bool]:
        return {
            "2": self.commutes_with_powers,
            "3": self.commutes_with_idempotents,
            "4": self.idempotents_commute,
            "5": self.cross_projections_vanish,
            "7": self.krylov_orthogonal,
        }

    @property
    def unanimous(self) -> bool:
        return len(set(self.as_dict().values())) == 1


def embed(v: np.ndarray, K: Sequence[int], n: int) -> np.ndarray:
    """The vector v-hat: v placed on K, zero elsewhere."""
    out = np.zeros(n, dtype=complex)
    out[list(K)] = v
    return out


def cross_check_conditions(a: np.ndarray, K: Sequence[int], h: HSpec, tol: float = 1e-8) -> ConditionReport:
    """Evaluate the equivalent conditions for the float matrix ``a`` (already perturbed)."""
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    K = list(K)
    if h.size != len(K):
        raise SizeMismatchError("size mismatch between H and K")
    H = h.matrix
    dec = decompose(a)
    blocks = [P[np.ix_(K, K)] for P in dec.projectors]
    c2 = _numeric_check(a, K, H, tol)
    c3 = all(np.linalg.norm(H @ E - E @ H) <= tol for E in blocks)
    F = [h.idempotent(j) for j in range(h.size)]
    c4 = all(np.linalg.norm(Fj @ E - E @ Fj) <= tol for Fj in F for E in blocks)
    vecs = h.eigenvectors
    rho = h.eigenvalues
    pairs = [(j, l) for j in range(h.size) for l in range(h.size) if abs(rho[j] - rho[l]) > 1e-10]
    c5 = all(abs(np.vdot(vecs[:, l], E @ vecs[:, j])) <= tol for E in blocks for j, l in pairs)
    bases = [krylov_basis(a, embed(vecs[:, j], K, n)) for j in range(h.size)]
    c7 = all(np.linalg.norm(bases[l].conj().T @ bases[j]) <= tol * 10 for j, l in pairs)
    return ConditionReport(c2, c3, c4, c5, c7)
