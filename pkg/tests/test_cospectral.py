from __future__ import annotations

import cmath
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pgfr.cospectral import (
    ANY,
    InvalidPairError,
    SizeMismatchError,
    cross_check_conditions,
    embed,
    find_pair_parameter,
    h_custom,
    h_cyclic,
    h_from_c,
    verify_h_cospectrality,
)
from pgfr.exactalg import QuadNumber
from pgfr.graphs import RevivalSite, WeightedGraph, build_s_family, build_t_family, path_graph
from pgfr.spectral import decompose

from corpus import corpus

CORPUS = corpus(seed=0, size=200)


# --- pair parameter ------------------------------------------------------------------------------

def test_pair_parameter_examples():
    g, site = build_t_family(2)
    assert find_pair_parameter(g, *site.K) == 2
    g, site = build_s_family(2, 3)
    assert find_pair_parameter(g, *site.K) == 3
    assert find_pair_parameter(path_graph(3), 0, 2) == 0
    assert find_pair_parameter(path_graph(4), 0, 1) is None


def test_pair_parameter_disconnected():
    assert find_pair_parameter(WeightedGraph(4, ((0, 1, 1), (2, 3, 1))), 0, 2) == ANY


def test_pair_parameter_invalid():
    with pytest.raises(InvalidPairError):
        find_pair_parameter(path_graph(3), 1, 1)


def test_pair_parameter_accepts_rows():
    assert find_pair_parameter(path_graph(3).adjacency_exact(), 0, 2) == 0


@pytest.mark.parametrize("idx", range(0, 200, 7))
def test_pair_parameter_swap_negates(idx):
    inst = CORPUS[idx]
    u, v = inst.site.K
    c = find_pair_parameter(inst.graph, u, v)
    c_swapped = find_pair_parameter(inst.graph, v, u)
    if c is None or c == ANY:
        assert c_swapped == c
    else:
        assert c_swapped == -c


def test_pair_parameter_rational_loop():
    g, site = build_s_family(2, Fraction(1, 2))
    assert find_pair_parameter(g, *site.K) == Fraction(1, 2)


# --- H constructions -----------------------------------------------------------------------------

def test_h_from_c_zero_is_swap():
    h = h_from_c(0)
    assert np.allclose(h.matrix, [[0, 1], [1, 0]])
    assert h.exact_matrix[0][1] == 1 and h.exact_matrix[0][0] == 0


def test_h_from_c_two():
    h = h_from_c(2)
    assert h.ratio == QuadNumber(1, 1, 2)
    assert h.seeds[1][0] == QuadNumber(1, -1, 2)


@given(st.fractions(-20, 20, max_denominator=9))
def test_h_from_c_is_reflection(c):
    h = h_from_c(c)
    assert sorted(np.linalg.eigvalsh(h.matrix)) == pytest.approx([-1, 1])
    assert h.normality_defect() <= 1e-12
    x = h.ratio
    assert x - x.inverse() == c  # p/q - q/p = c
    for j, seed in enumerate(h.seeds):
        v = np.array([float(s) for s in seed])
        assert np.allclose(h.matrix @ v, h.eigenvalues[j] * v)
    assert np.allclose(h.eigenvectors.T @ h.eigenvectors, np.eye(2))


def test_h_json():
    obj = h_from_c(3).to_json()
    assert obj["origin"] == "pair" and obj["c"] == "3" and obj["c2_plus_4"] == "13" and obj["d"] == 13
    assert obj["distinct"] is True


def test_h_cyclic():
    assert np.allclose(h_cyclic(2).matrix, [[0, 1], [1, 0]])
    h3 = h_cyclic(3)
    assert np.allclose(np.sort_complex(h3.eigenvalues), np.sort_complex([cmath.exp(2j * cmath.pi * k / 3) for k in range(3)]))
    h5 = h_cyclic(5)
    V = h5.eigenvectors
    assert np.allclose(V.conj().T @ V, np.eye(5))
    assert h5.distinct_eigenvalues
    for k in range(5):
        assert np.allclose(h5.matrix @ V[:, k], h5.eigenvalues[k] * V[:, k])
        assert np.isclose(V[1, k] / V[0, k], cmath.exp(2j * cmath.pi * k / 5))
    with pytest.raises(ValueError):
        h_cyclic(1)


def test_h_custom():
    h = h_custom([[1]])
    assert h.size == 1
    with pytest.raises(ValueError):
        h_custom([[0, 1], [0, 0]])


# --- verification --------------------------------------------------------------------------------

def test_verify_examples():
    g, site = build_t_family(2)
    assert verify_h_cospectrality(g, site, h_from_c(2))
    assert verify_h_cospectrality(g, site, h_from_c(2), mode="exact")
    assert verify_h_cospectrality(path_graph(4), RevivalSite((0, 3)), h_from_c(0), mode="exact")
    assert not verify_h_cospectrality(g, site, h_from_c(0))


def test_verify_size_mismatch():
    with pytest.raises(SizeMismatchError):
        verify_h_cospectrality(path_graph(4), RevivalSite((0, 1, 2)), h_from_c(0))


def test_random_asymmetric_is_not_cospectral():
    negatives = [inst for inst in CORPUS if inst.kind == "random"]
    assert negatives
    for inst in negatives[:20]:
        assert not verify_h_cospectrality(inst.graph, inst.site, inst.h)


@pytest.mark.parametrize("idx", range(0, 200, 5))
def test_exact_and_numeric_agree(idx):
    inst = CORPUS[idx]
    assert verify_h_cospectrality(inst.graph, inst.site, inst.h, mode="exact") == verify_h_cospectrality(
        inst.graph, inst.site, inst.h
    )


@pytest.mark.parametrize("idx", range(0, 200, 9))
def test_perturbation_preserves_cospectrality(idx):
    """Verification at Q = 0 carries over exactly to random rational Q."""
    inst = CORPUS[idx]
    if not verify_h_cospectrality(inst.graph, inst.site, inst.h, mode="exact"):
        return
    rng = np.random.default_rng(idx)
    for _ in range(5):
        q = Fraction(int(rng.integers(-50, 51)), int(rng.integers(1, 12)))
        a = inst.site.perturbed_exact(inst.graph, q)
        assert verify_h_cospectrality(a, inst.site, inst.h, mode="exact")


def test_glue_property():
    for inst in CORPUS:
        if inst.pieces is None:
            continue
        if all(verify_h_cospectrality(p, s, inst.h) for p, s in zip(inst.pieces, inst.piece_sites)):
            assert verify_h_cospectrality(inst.graph, inst.site, inst.h)


# --- equivalent conditions -----------------------------------------------------------------------

def test_conditions_t2():
    g, site = build_t_family(2)
    report = cross_check_conditions(site.perturbed(g, np.pi), site.K, h_from_c(2))
    assert all(report.as_dict().values())


def test_conditions_negative():
    g, site = build_t_family(2)
    report = cross_check_conditions(site.perturbed(g, np.pi), site.K, h_from_c(0))
    assert not any(report.as_dict().values())


def test_conditions_one_by_one():
    report = cross_check_conditions(np.diag([1.0, 2.0, 3.0]), [1], h_custom([[1]]))
    assert all(report.as_dict().values()) and report.unanimous


@pytest.mark.parametrize("idx", range(0, 200, 4))
def test_conditions_unanimous(idx):
    inst = CORPUS[idx]
    report = cross_check_conditions(inst.site.perturbed(inst.graph, inst.q), inst.site.K, inst.h)
    assert report.unanimous
    assert report.as_dict()["2"] == verify_h_cospectrality(inst.graph, inst.site, inst.h)


@pytest.mark.parametrize("idx", range(0, 200, 3))
def test_restriction_nonzero_iff_vector_nonzero(idx):
    """For H-cospectral K, E_i v-hat vanishes exactly when its K-part does, and the Rayleigh value is positive."""
    inst = CORPUS[idx]
    if not verify_h_cospectrality(inst.graph, inst.site, inst.h):
        return
    m = inst.site.perturbed(inst.graph, inst.q)
    dec = decompose(m)
    K = list(inst.site.K)
    tol = 1e-8
    for j in range(inst.h.size):
        v = inst.h.eigenvectors[:, j]
        vhat = embed(v, K, m.shape[0])
        for E in dec.projectors:
            w = E @ vhat
            full, on_k = np.linalg.norm(w) > tol, np.linalg.norm(w[K]) > tol
            assert full == on_k
            if full:
                assert np.vdot(v, E[np.ix_(K, K)] @ v).real > 0
