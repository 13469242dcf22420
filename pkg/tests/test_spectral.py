from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pgfr.graphs import WeightedGraph, build_t_family, path_graph
from pgfr.spectral import (
    AsymmetricMatrixError,
    UnionFind,
    decompose,
    eigenvalue_support,
    is_block_diagonal,
    kernel_eigenvector_count,
    krylov_basis,
    partition,
    stationary_eigenvalues,
)

from corpus import corpus

CORPUS = corpus(seed=11, size=60)
EDGE_PLUS_ISOLATED = WeightedGraph(3, ((0, 1, 1),)).adjacency()


def instance_matrix(inst) -> np.ndarray:
    return inst.site.perturbed(inst.graph, inst.q)


# --- decompose -----------------------------------------------------------------------------------

def test_decompose_identity():
    dec = decompose(np.eye(2))
    assert dec.d == 1 and list(dec.multiplicities) == [2]
    assert np.allclose(dec.projectors[0], np.eye(2))


def test_decompose_path3():
    dec = decompose(path_graph(3).adjacency())
    assert np.allclose(dec.eigenvalues, [-2**0.5, 0, 2**0.5])


def test_decompose_merges_close_eigenvalues():
    assert decompose(np.diag([0.0, 1e-14]), cluster_tol=1e-10).d == 1
    assert decompose(np.diag([0.0, 1e-6]), cluster_tol=1e-10).d == 2


def test_decompose_rejects_asymmetric():
    with pytest.raises(AsymmetricMatrixError):
        decompose(np.array([[0.0, 1.0], [0.0, 0.0]]))


@pytest.mark.parametrize("idx", range(0, 60, 6))
def test_decomposition_invariants(idx):
    m = instance_matrix(CORPUS[idx])
    dec = decompose(m)
    tol = dec.cluster_tol
    E = dec.projectors
    assert np.linalg.norm(E.sum(axis=0) - np.eye(dec.n)) <= 10 * tol
    for i in range(dec.d):
        for j in range(dec.d):
            if i != j:
                assert np.linalg.norm(E[i] @ E[j]) <= 10 * tol
    assert np.linalg.norm(dec.reconstruct() - m) <= 10 * tol * np.linalg.norm(m)
    assert list(dec.eigenvalues) == sorted(dec.eigenvalues)


# --- support and partition -----------------------------------------------------------------------

def direct_support(m: np.ndarray, K) -> set[tuple[int, int]]:
    """Oracle for simple spectra: (r, s) is supported iff psi_r^T D_K psi_s != 0."""
    w, V = np.linalg.eigh(m)
    K = list(K)
    G = V[K, :].T @ V[K, :]
    return {(r, s) for r in range(len(w)) for s in range(len(w)) if abs(G[r, s]) > 1e-9}


def test_support_single_edge():
    # K is the whole vertex set, so D_K = I and distinct projectors annihilate each other
    a = path_graph(2).adjacency()
    dec = decompose(a)
    assert eigenvalue_support(dec, [0, 1]) == {(0, 0), (1, 1)} == direct_support(a, [0, 1])
    assert partition(dec, [0, 1]).s == 2


def test_support_ignores_isolated_vertex():
    dec = decompose(EDGE_PLUS_ISOLATED)
    zero = int(np.argmin(np.abs(dec.eigenvalues)))
    assert all(zero not in pair for pair in eigenvalue_support(dec, [0, 1]))
    p = partition(dec, [0, 1])
    assert p.pi0 == (zero,) and p.s == 2


def test_partition_path3():
    # the eigenvalue-0 eigenvector (1, 0, -1) is orthogonal on K to the other two
    a = path_graph(3).adjacency()
    assert direct_support(a, [0, 2]) == {(0, 0), (0, 2), (2, 0), (2, 2), (1, 1)}
    p = partition(decompose(a), [0, 2])
    assert p.pi0 == () and p.parts == ((0, 2), (1,))
    m = a + np.pi * np.diag([1.0, 0.0, 1.0])
    p = partition(decompose(m), [0, 2])
    assert sorted(len(part) for part in p.parts) == [1, 2]
    assert not p.fragile


@pytest.mark.parametrize("idx", range(0, 60, 4))
def test_support_matches_direct_oracle(idx):
    m = instance_matrix(CORPUS[idx])
    dec = decompose(m)
    if dec.d == dec.n:
        assert eigenvalue_support(dec, CORPUS[idx].site.K) == direct_support(m, CORPUS[idx].site.K)


def test_partition_json():
    p = partition(decompose(EDGE_PLUS_ISOLATED), [0, 1])
    obj = p.to_json()
    assert set(obj) >= {"pi0", "parts", "tol"}
    assert obj["values"]["pi0"] == [0.0]


def test_t2_support_matches_exact_root_clusters():
    g, site = build_t_family(2)
    m = site.perturbed(g, np.pi)
    dec = decompose(m)
    p = partition(dec, site.K)
    # exact factors of T_2 at Q = pi, roots computed from the annihilating polynomials
    s2 = 2**0.5
    seeds = [np.array([1 + s2, 1.0]), np.array([1 - s2, 1.0])]
    clusters = []
    for seed in seeds:
        v = np.zeros(g.n)
        v[list(site.K)] = seed
        basis = krylov_basis(m, v)
        ritz = np.linalg.eigvalsh((basis.conj().T @ m @ basis).real)
        clusters.append(tuple(sorted(int(np.argmin(np.abs(dec.eigenvalues - x))) for x in ritz)))
    assert sorted(clusters) == sorted(p.parts)


def test_union_find():
    uf = UnionFind(5)
    uf.union(0, 3)
    uf.union(3, 4)
    assert uf.find(4) == uf.find(0) != uf.find(1)


@pytest.mark.parametrize("idx", range(60))
def test_partition_covers_and_is_disjoint(idx):
    inst = CORPUS[idx]
    dec = decompose(instance_matrix(inst))
    p = partition(dec, inst.site.K)
    members = list(p.pi0) + [i for part in p.parts for i in part]
    assert sorted(members) == list(range(dec.d))
    assert all(part for part in p.parts)


@pytest.mark.parametrize("idx", range(0, 60, 3))
def test_refinement_monotone(idx):
    inst = CORPUS[idx]
    dec = decompose(instance_matrix(inst))
    tols = [1e-4, 1e-6, 1e-9, 1e-12]
    parts = [partition(dec, inst.site.K, t, sensitivity=False) for t in tols]
    for coarse, fine in zip(parts[1:], parts[:-1]):
        # a smaller tolerance sees more support, so it can only merge, never split
        for part in fine.parts:
            labels = {coarse.part_of(i) for i in part}
            assert len(labels) == 1


# --- block diagonality (both directions) ---------------------------------------------------------

def test_block_diagonal_examples():
    assert is_block_diagonal(np.eye(4), [1, 2], 1e-12)
    assert not is_block_diagonal(np.ones((3, 3)), [0], 1e-12)


def _combination(dec, coeffs):
    return np.einsum("i,ijk->jk", coeffs, dec.projectors)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 59), st.integers(0, 2**31))
def test_block_diagonal_iff_constant_on_parts(idx, seed):
    inst = CORPUS[idx]
    dec = decompose(instance_matrix(inst))
    K = inst.site.K
    p = partition(dec, K)
    rng = np.random.default_rng(seed)
    c = np.exp(2j * np.pi * rng.random(dec.d))
    for part in p.parts:
        c[list(part)] = c[part[0]]
    assert is_block_diagonal(_combination(dec, c), K, 1e-9)
    splittable = [part for part in p.parts if len(part) > 1]
    if splittable:
        part = splittable[int(rng.integers(len(splittable)))]
        c2 = c.copy()
        c2[part[-1]] *= np.exp(2j * np.pi * rng.uniform(0.2, 0.8))
        assert not is_block_diagonal(_combination(dec, c2), K, 1e-9)


# --- appendix lemmas -----------------------------------------------------------------------------

@pytest.mark.parametrize("idx", range(0, 60, 2))
def test_k_rows_span_equals_kk_block(idx):
    inst = CORPUS[idx]
    dec = decompose(instance_matrix(inst))
    K = list(inst.site.K)
    for E in dec.projectors:
        rows, block = E[K, :], E[np.ix_(K, K)]
        r1 = np.linalg.matrix_rank(rows, tol=1e-8)
        r2 = np.linalg.matrix_rank(block, tol=1e-8)
        r12 = np.linalg.matrix_rank(np.hstack([rows, block]), tol=1e-8)
        assert r1 == r2 == r12


@pytest.mark.parametrize("idx", range(60))
def test_stationary_eigenvalues_come_from_kernel(idx):
    inst = CORPUS[idx]
    m = inst.graph.adjacency()
    for theta, mult in stationary_eigenvalues(m, inst.site.K):
        assert kernel_eigenvector_count(m, inst.site.K, theta) == mult


def test_stationary_example():
    # the isolated vertex eigenvalue 0 does not move when K = {0, 1} is perturbed
    assert stationary_eigenvalues(EDGE_PLUS_ISOLATED, [0, 1], qs=(0.0, 0.5, 3.0)) == [(0.0, 1)]
    assert kernel_eigenvector_count(EDGE_PLUS_ISOLATED, [0, 1], 0.0) == 1


def test_krylov_basis_dimension():
    a = path_graph(3).adjacency()
    assert krylov_basis(a, np.array([1.0, 0, -1])).shape[1] == 1
    assert krylov_basis(a, np.array([1.0, 0, 0])).shape[1] == 3
    with pytest.raises(ValueError):
        krylov_basis(a, np.zeros(3))
