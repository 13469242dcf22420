"""Continuous-time quantum walk on K: evolution submatrices, revival metrics and witness search.

Times are in the units of ``exp(i t M)``; phases are reported in turns
(``t*theta / 2pi`` modulo 1).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import sqrt
from typing import Sequence

import numpy as np

from .spectral import EigenPartition, SpectralDecomposition

GOLDEN = (sqrt(5) - 1) / 2
CHUNK = 1 << 16
TOP = 10


def default_sigma_min(k: int) -> float:
    return 0.05 * sqrt(k)


def _blocks(dec: SpectralDecomposition, K: Sequence[int]) -> np.ndarray:
    K = list(K)
    return dec.projectors[:, K][:, :, K]


def evolve(dec: SpectralDecomposition, t: float) -> np.ndarray:
    """Full ``exp(i t M)`` from the spectral decomposition."""
    return np.einsum("i,ijk->jk", np.exp(1j * t * dec.eigenvalues), dec.projectors)


def evolve_submatrix(dec: SpectralDecomposition, K: Sequence[int], t: float) -> np.ndarray:
    """``sum_i exp(i t theta_i) (E_i)_{K x K}``."""
    return np.einsum("i,ijk->jk", np.exp(1j * t * dec.eigenvalues), _blocks(dec, K))


def unitarity_defect(hhat: np.ndarray) -> float:
    hhat = np.asarray(hhat)
    return float(np.linalg.norm(hhat.conj().T @ hhat - np.eye(hhat.shape[0])))


def scalarity_distance(hhat: np.ndarray) -> float:
    hhat = np.asarray(hhat)
    k = hhat.shape[0]
    return float(np.linalg.norm(hhat - np.trace(hhat) / k * np.eye(k)))


def grid_metrics(dec: SpectralDecomposition, K: Sequence[int], times: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised (delta, sigma) over an array of times, evaluated in chunks."""
    B = _blocks(dec, K)
    k = B.shape[1]
    flat = B.reshape(B.shape[0], k * k)
    eye = np.eye(k)
    times = np.asarray(times, dtype=float)
    delta = np.empty(len(times))
    sigma = np.empty(len(times))
    for start in range(0, len(times), CHUNK):
        ts = times[start : start + CHUNK]
        H = (np.exp(1j * np.outer(ts, dec.eigenvalues)) @ flat).reshape(len(ts), k, k)
        G = np.einsum("cji,cjl->cil", H.conj(), H)
        delta[start : start + CHUNK] = np.linalg.norm((G - eye).reshape(len(ts), -1), axis=1)
        tr = np.einsum("cii->c", H) / k
        sigma[start : start + CHUNK] = np.linalg.norm((H - tr[:, None, None] * eye).reshape(len(ts), -1), axis=1)
    return delta, sigma


@dataclass(frozen=True)
class PhaseEstimate:
    phases: tuple[float, ...]  # one per part, in turns
    residuals: tuple[float, ...]
    nonconstancy: float

    @property
    def residual(self) -> float:
        return max(self.residuals, default=0.0)

    def to_json(self) -> dict:
        fmt = lambda x: float(f"{x:.15g}")  # noqa: E731
        return {"phases": [fmt(x) for x in self.phases], "residual": fmt(self.residual), "nonconstancy": fmt(self.nonconstancy)}


@dataclass(frozen=True)
class RevivalMetrics:
    t: float
    delta: float
    sigma: float
    phases: PhaseEstimate | None = None

    def to_json(self) -> dict:
        fmt = lambda x: float(f"{x:.15g}")  # noqa: E731
        out = {"t": fmt(self.t), "delta": fmt(self.delta), "sigma": fmt(self.sigma)}
        if self.phases is not None:
            out["phases"] = self.phases.to_json()
        return out


def _frac_dist(x: np.ndarray) -> np.ndarray:
    """Distance to the nearest integer."""
    return np.abs(x - np.round(x))


def phase_estimate(dec: SpectralDecomposition, partition: EigenPartition, t: float) -> PhaseEstimate:
    """Circular-mean phase of ``t*theta_j`` over each part and the worst deviation from it."""
    turns = t * dec.eigenvalues / (2 * np.pi)
    phases, residuals = [], []
    for part in partition.parts:
        x = turns[list(part)]
        mean = np.angle(np.exp(2j * np.pi * x).sum()) / (2 * np.pi)
        rho = float(mean % 1.0)
        phases.append(rho)
        residuals.append(float(_frac_dist(x - rho).max()))
    spread = 0.0
    for i in range(len(phases)):
        for j in range(i + 1, len(phases)):
            spread = max(spread, float(_frac_dist(np.array(phases[i] - phases[j]))))
    return PhaseEstimate(tuple(phases), tuple(residuals), spread)


def _feasible_delta(ds: tuple[float, float], sigma_min: float) -> float:
    """Delta where sigma clears the threshold, infinity elsewhere."""
    return ds[0] if ds[1] >= sigma_min else np.inf


def _golden_min(f, a: float, b: float, iters: int) -> float:
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = f(d)
    return c if fc < fd else d


def witness_search(
    dec: SpectralDecomposition,
    K: Sequence[int],
    horizon: float,
    grid_points: int,
    refine_iters: int = 60,
    sigma_min: float | None = None,
    partition: EigenPartition | None = None,
    candidates: int = 50,
) -> list[RevivalMetrics]:
    """Best near-unitary, far-from-scalar times in ``[0, horizon]``.

    Grid local minima of delta (among points with sigma >= sigma_min) are
    refined by golden-section search over two grid cells, treating points below
    sigma_min as infeasible; a refinement that ends worse than its grid point
    falls back to the grid point.
    """
    if horizon <= 0 or grid_points < 2:
        raise ValueError("need horizon > 0 and at least two grid points")
    K = list(K)
    if sigma_min is None:
        sigma_min = default_sigma_min(len(K))
    times = np.linspace(0.0, horizon, grid_points)
    delta, sigma = grid_metrics(dec, K, times)
    masked = np.where(sigma >= sigma_min, delta, np.inf)
    left = np.concatenate([[np.inf], masked[:-1]])
    right = np.concatenate([masked[1:], [np.inf]])
    is_min = np.isfinite(masked) & (masked <= left) & (masked <= right)
    idx = np.nonzero(is_min)[0]
    idx = idx[np.argsort(masked[idx], kind="stable")][:candidates]
    step = times[1] - times[0]

    def metric(t: float) -> tuple[float, float]:
        d, s = grid_metrics(dec, K, np.array([t]))
        return float(d[0]), float(s[0])

    found = []
    for i in idx:
        t0 = float(times[i])
        a, b = max(0.0, t0 - step), min(horizon, t0 + step)
        t = _golden_min(lambda x: _feasible_delta(metric(x), sigma_min), a, b, refine_iters)
        d, s = metric(t)
        if s < sigma_min or d > delta[i]:
            t, d, s = t0, float(delta[i]), float(sigma[i])
        found.append((d, t, s))
    found.sort()
    out = []
    for d, t, s in found[:TOP]:
        ph = phase_estimate(dec, partition, t) if partition is not None else None
        out.append(RevivalMetrics(t, d, s, ph))
    return out
