from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pgfr.cospectral import verify_h_cospectrality
from pgfr.graphs import (
    CyclicAction,
    GraphError,
    InvalidGluingError,
    InvalidParameterError,
    NotConnectedError,
    RevivalSite,
    WeightedGraph,
    build_diamond_cycle,
    build_s_family,
    build_t_family,
    cycle_graph,
    dump_graph_file,
    eccentricity_to_set,
    glue,
    load_graph_file,
    matrix_power_int,
    pair_identity_holds,
    path_graph,
    verify_automorphism,
    wheel_graph,
)

from corpus import corpus


def t_walk_table(k: int) -> dict[str, list[int]]:
    """Rows (u,y), (v,y), (u,b), (v,b) of M^j for j = 0..k+2."""
    g, site = build_t_family(k)
    a = g.adjacency_int()
    u, v = site.K
    y, b = k, 2 * k + 3
    rows = {"uy": [], "vy": [], "ub": [], "vb": []}
    for j in range(k + 3):
        P = matrix_power_int(a, j)
        rows["uy"].append(P[u][y])
        rows["vy"].append(P[v][y])
        rows["ub"].append(P[u][b])
        rows["vb"].append(P[v][b])
    return rows


def expected_t_walk_table(k: int) -> dict[str, list[int]]:
    uy = [0] * k + [1, 1, k + 3]
    vy = [0] * (k + 1) + [1, 0]
    ub = [0] * (k + 3)
    vb = [0] * k + [1, 0, k + 1]
    return {"uy": uy, "vy": vy, "ub": ub, "vb": vb}


# --- builders ------------------------------------------------------------------------------------

def test_s_family_examples():
    g, site = build_s_family(1, 1)
    assert g.n == 4 and site.K == (0, 3)
    assert g.edges == ((0, 1, 1), (1, 2, 1), (2, 3, 1)) and g.loops == ((1, 1),)
    g, site = build_s_family(2, 3)
    assert g.n == 6 and site.K == (0, 5) and g.loops == ((2, 3),)
    assert g.adjacency()[2, 2] == 3  # loop weight w, not 2w


def test_s_family_rational_loop():
    g, _ = build_s_family(2, Fraction(1, 2))
    assert g.loops == ((2, Fraction(1, 2)),)


@pytest.mark.parametrize("builder", [lambda: build_s_family(0, 1), lambda: build_t_family(0),
                                     lambda: build_diamond_cycle(2), lambda: wheel_graph(2)])
def test_invalid_parameters(builder):
    with pytest.raises(InvalidParameterError):
        builder()


def test_t_family_examples():
    g, site = build_t_family(2)
    nb = g.neighbors()
    assert g.n == 8 and site.K == (0, 5)
    assert sorted(nb[6]) == [1, 2] and nb[7] == [4]
    P2, P4 = matrix_power_int(g.adjacency_int(), 2), matrix_power_int(g.adjacency_int(), 4)
    assert P2[0][2] == 1 and P4[0][2] == 5


def test_t_family_boundary():
    g, site = build_t_family(1)
    assert g.n == 6 and sorted(g.neighbors()[4]) == [0, 1]
    assert pair_identity_holds(g, 0, 3, 2)


@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_t_walk_counts(k):
    assert t_walk_table(k) == expected_t_walk_table(k)


@pytest.mark.parametrize("k", [2, 3, 4])
@pytest.mark.parametrize("m", [1, 2, 3])
def test_s_walk_counts(k, m):
    g, (u, v) = build_s_family(k, m)[0], build_s_family(k, m)[1].K
    a = g.adjacency_int()
    for j in range(2 * k + 1):
        P = matrix_power_int(a, j)
        assert P[u][u] == P[v][v] and P[u][v] == 0
    P = matrix_power_int(a, 2 * k + 1)
    assert P[u][v] == 1 and P[u][u] - P[v][v] == m


def test_diamond_examples():
    g, site, action = build_diamond_cycle(5)
    assert g.n == 15 and site.K == tuple(range(5))
    assert sorted(g.degrees()) == [2] * 5 + [3] * 5 + [5] * 5
    a = g.adjacency()
    R = np.eye(5) + np.roll(np.eye(5), 1, axis=1)
    assert np.array_equal(a[5:10, 0:5], R)
    assert np.array_equal(a[10:15, 5:10], np.eye(5))
    g3, _, _ = build_diamond_cycle(3)
    nb = g3.neighbors()
    assert all(sorted(nb[6 + i]) == sorted([i, 3 + i]) for i in range(3))


@pytest.mark.parametrize("orbit,start", [("d", 4), ("e", 8)])
def test_diamond_orbit_option(orbit, start):
    _, site, _ = build_diamond_cycle(4, orbit)
    assert site.K == tuple(range(start, start + 4))


@pytest.mark.parametrize("r", range(3, 9))
def test_diamond_automorphism(r):
    g, _, action = build_diamond_cycle(r)
    assert verify_automorphism(g, action)


# --- glue ----------------------------------------------------------------------------------------

def test_glue_paths_to_cycle():
    g, _ = glue(path_graph(3), path_graph(4), {0: 0, 3: 2})
    assert g == cycle_graph(5) or sorted(g.degrees()) == [2] * 5
    assert g.n == 5 and all(d == 2 for d in g.degrees())


def test_glue_weights_add():
    e = WeightedGraph(2, ((0, 1, 1),))
    g, _ = glue(e, e, {0: 0, 1: 1})
    assert g.edges == ((0, 1, 2),)


def test_glue_collision():
    with pytest.raises(InvalidGluingError):
        glue(path_graph(3), path_graph(3), {0: 0, 2: 0})


def test_glue_restriction():
    g1, _ = build_t_family(2)
    g2, _ = build_s_family(2, 1)
    g, emb = glue(g1, g2, {0: 0, 5: 5})
    a, a1, a2 = g.adjacency(), g1.adjacency(), g2.adjacency()
    rest1 = [i for i in range(g1.n) if i not in (0, 5)]
    assert np.array_equal(a[np.ix_(rest1, rest1)], a1[np.ix_(rest1, rest1)])
    rest2 = [i for i in range(g2.n) if i not in (0, 5)]
    e2 = [emb[i] for i in rest2]
    assert np.array_equal(a[np.ix_(e2, e2)], a2[np.ix_(rest2, rest2)])


def test_glue_preserves_cospectrality():
    for inst in corpus(seed=3, size=30):
        if inst.pieces is None:
            continue
        for piece, site in zip(inst.pieces, inst.piece_sites):
            assert verify_h_cospectrality(piece, site, inst.h)
        assert verify_h_cospectrality(inst.graph, inst.site, inst.h)


# --- distances, automorphisms --------------------------------------------------------------------

def test_eccentricity_examples():
    g, site, _ = wheel_graph(5)
    assert eccentricity_to_set(g, site.K) == 1
    g, site, _ = build_diamond_cycle(5)
    assert eccentricity_to_set(g, site.K) == 1
    assert eccentricity_to_set(path_graph(3), [0]) == 2
    assert eccentricity_to_set(path_graph(3), [0, 1, 2]) == 0


def test_eccentricity_disconnected():
    with pytest.raises(NotConnectedError):
        eccentricity_to_set(WeightedGraph(3, ((0, 1, 1),)), [0])


def test_automorphism_examples():
    assert not verify_automorphism(path_graph(3), CyclicAction(2, (0, 1, 2)))
    assert verify_automorphism(path_graph(3), CyclicAction(2, (2, 1, 0)))
    assert not verify_automorphism(path_graph(4), CyclicAction(2, (1, 0, 2, 3)))


def test_automorphism_respects_loops():
    g, _ = build_s_family(1, 1)
    assert not verify_automorphism(g, CyclicAction(2, (3, 2, 1, 0)))


# --- validation and file format ------------------------------------------------------------------

@pytest.mark.parametrize("edges,loops", [(((0, 0, 1),), ()), (((0, 3, 1),), ()), (((0, 1, 1), (1, 0, 2)), ()),
                                         ((), ((0, 1), (0, 2)))])
def test_graph_validation(edges, loops):
    with pytest.raises(GraphError):
        WeightedGraph(3, edges, loops)


def test_from_adjacency_requires_symmetry():
    with pytest.raises(GraphError):
        WeightedGraph.from_adjacency([[0, 1], [0, 0]])


def test_site_validation():
    with pytest.raises(GraphError):
        RevivalSite((0, 0))
    with pytest.raises(GraphError):
        RevivalSite((0, 9)).validate(path_graph(3))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_file_roundtrip(seed):
    inst = corpus(seed=seed, size=3)[seed % 3]
    site = RevivalSite(inst.site.K, 1.5) if seed % 2 else inst.site
    obj = dump_graph_file(inst.graph, site)
    g, s, action = load_graph_file(obj)
    assert g == inst.graph and s == site and action is None


def test_file_roundtrip_with_action():
    g, site, action = build_diamond_cycle(4)
    assert load_graph_file(dump_graph_file(g, site, action)) == (g, site, action)


def test_digest_is_structural():
    assert path_graph(4).digest() == WeightedGraph(4, ((2, 3, 1), (1, 0, 1), (1, 2, 1))).digest()
    assert path_graph(4).digest() != cycle_graph(4).digest()
