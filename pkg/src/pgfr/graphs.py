"""Weighted graphs with loops, revival sites (K, Q) and the three example families."""

from __future__ import annotations

import hashlib
import json
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .exactalg.field import parse_rational


class GraphError(ValueError):
    """Base class for graph construction and validation failures."""


class InvalidParameterError(GraphError):
    pass


class InvalidGluingError(GraphError):
    pass


class NotConnectedError(GraphError):
    pass


@dataclass(frozen=True)
class WeightedGraph:
    """Undirected graph on ``0..n-1`` with rational edge and loop weights.

    A loop of weight ``w`` contributes ``w`` (not ``2w``) to the adjacency diagonal.
    Edges are stored canonically as ``(min, max, w)`` sorted, so equality is structural.
    """

    n: int
    edges: tuple[tuple[int, int, Fraction], ...] = ()
    loops: tuple[tuple[int, Fraction], ...] = ()
    labels: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        if self.n < 1:
            raise GraphError("n must be >= 1")
        edges = []
        seen = set()
        for u, v, w in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise GraphError(f"edge ({u},{v}) is a loop; use loops")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"edge ({u},{v}) out of range")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise GraphError(f"duplicate edge {key}")
            seen.add(key)
            edges.append((key[0], key[1], parse_rational(w)))
        loops = []
        seen_loops = set()
        for v, w in self.loops:
            v = int(v)
            if not 0 <= v < self.n:
                raise GraphError(f"loop at {v} out of range")
            if v in seen_loops:
                raise GraphError(f"duplicate loop at {v}")
            seen_loops.add(v)
            loops.append((v, parse_rational(w)))
        if self.labels is not None and len(self.labels) != self.n:
            raise GraphError("labels must have one entry per vertex")
        object.__setattr__(self, "edges", tuple(sorted(edges)))
        object.__setattr__(self, "loops", tuple(sorted(loops)))
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(self.labels))

    def __eq__(self, other) -> bool:
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return (self.n, self.edges, self.loops) == (other.n, other.edges, other.loops)

    def __hash__(self) -> int:
        return hash((self.n, self.edges, self.loops))

    @classmethod
    def from_adjacency(cls, a, labels=None) -> WeightedGraph:
        n = len(a)
        edges = [(i, j, a[i][j]) for i in range(n) for j in range(i + 1, n) if a[i][j]]
        loops = [(i, a[i][i]) for i in range(n) if a[i][i]]
        g = cls(n, tuple(edges), tuple(loops), labels)
        for i in range(n):
            for j in range(n):
                if Fraction(a[i][j]) != Fraction(a[j][i]):
                    raise GraphError("adjacency must be symmetric")
        return g

    def adjacency_exact(self) -> list[list[Fraction]]:
        a = [[Fraction(0)] * self.n for _ in range(self.n)]
        for u, v, w in self.edges:
            a[u][v] += w
            a[v][u] += w
        for v, w in self.loops:
            a[v][v] += w
        return a

    def adjacency(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.adjacency_exact()])

    def adjacency_int(self) -> list[list[int]]:
        """Integer adjacency; raises if any weight is not an integer."""
        out = []
        for row in self.adjacency_exact():
            if any(x.denominator != 1 for x in row):
                raise GraphError("weights are not integral")
            out.append([int(x) for x in row])
        return out

    def neighbors(self) -> list[list[int]]:
        nb: list[list[int]] = [[] for _ in range(self.n)]
        for u, v, _ in self.edges:
            nb[u].append(v)
            nb[v].append(u)
        return [sorted(x) for x in nb]

    def degrees(self) -> list[int]:
        """Number of distinct non-loop neighbours of each vertex."""
        return [len(x) for x in self.neighbors()]

    def to_json(self) -> dict:
        out = {
            "n": self.n,
            "edges": [[u, v, str(w)] for u, v, w in self.edges],
            "loops": [[v, str(w)] for v, w in self.loops],
        }
        if self.labels is not None:
            out["labels"] = list(self.labels)
        return out

    @classmethod
    def from_json(cls, obj: dict) -> WeightedGraph:
        return cls(
            int(obj["n"]),
            tuple((u, v, w) for u, v, w in obj.get("edges", [])),
            tuple((v, w) for v, w in obj.get("loops", [])),
            tuple(obj["labels"]) if obj.get("labels") is not None else None,
        )

    def digest(self) -> str:
        blob = json.dumps({k: v for k, v in self.to_json().items() if k != "labels"}, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


SYMBOLIC = "symbolic"


@dataclass(frozen=True)
class RevivalSite:
    """The subset K (ordered) and how the perturbation Q is treated.

    ``q`` is ``"symbolic"`` or a float value used as the numeric perturbation.
    """

    K: tuple[int, ...]
    q: str | float = SYMBOLIC

    def __post_init__(self) -> None:
        K = tuple(int(k) for k in self.K)
        if not K:
            raise GraphError("K must be nonempty")
        if len(set(K)) != len(K):
            raise GraphError("K has repeated vertices")
        object.__setattr__(self, "K", K)
        if self.q != SYMBOLIC:
            object.__setattr__(self, "q", float(self.q))

    @property
    def symbolic(self) -> bool:
        return self.q == SYMBOLIC

    def validate(self, g: WeightedGraph) -> None:
        if any(not 0 <= k < g.n for k in self.K):
            raise GraphError("K index out of range")

    def indicator(self, n: int) -> np.ndarray:
        """The diagonal 0/1 matrix D_K."""
        d = np.zeros((n, n))
        for k in self.K:
            d[k, k] = 1.0
        return d

    def perturbed(self, g: WeightedGraph, q: float) -> np.ndarray:
        """Float matrix ``M + q*D_K``."""
        self.validate(g)
        return g.adjacency() + q * self.indicator(g.n)

    def perturbed_exact(self, g: WeightedGraph, q) -> list[list[Fraction]]:
        a = g.adjacency_exact()
        for k in self.K:
            a[k][k] += Fraction(q)
        return a


@dataclass(frozen=True)
class CyclicAction:
    r: int
    perm: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "perm", tuple(int(p) for p in self.perm))

    def apply(self, v: int, times: int = 1) -> int:
        for _ in range(times % self.r if self.r else times):
            v = self.perm[v]
        return v

    def orbit(self, v: int) -> list[int]:
        out = [v]
        w = self.perm[v]
        while w != v:
            out.append(w)
            w = self.perm[w]
        return out

    def to_json(self) -> dict:
        return {"r": self.r, "perm": list(self.perm)}

    @classmethod
    def from_json(cls, obj: dict) -> CyclicAction:
        return cls(int(obj["r"]), tuple(obj["perm"]))


def path_graph(n: int) -> WeightedGraph:
    return WeightedGraph(n, tuple((i, i + 1, 1) for i in range(n - 1)))


def cycle_graph(n: int) -> WeightedGraph:
    return WeightedGraph(n, tuple((i, (i + 1) % n, 1) for i in range(n)))


def wheel_graph(r: int) -> tuple[WeightedGraph, RevivalSite, CyclicAction]:
    """Cycle C_r on 0..r-1 plus a hub r adjacent to all; K is the cycle."""
    if r < 3:
        raise InvalidParameterError("wheel needs r >= 3")
    edges = [(i, (i + 1) % r, 1) for i in range(r)] + [(i, r, 1) for i in range(r)]
    g = WeightedGraph(r + 1, tuple(edges), labels=tuple(["c"] * r + ["hub"]))
    perm = tuple([(i + 1) % r for i in range(r)] + [r])
    return g, RevivalSite(tuple(range(r))), CyclicAction(r, perm)


def build_s_family(k: int, m) -> tuple[WeightedGraph, RevivalSite]:
    """Path with 2k+1 edges, loop of weight ``m`` at vertex ``k``; K = the two ends."""
    if k < 1:
        raise InvalidParameterError("k must be >= 1")
    n = 2 * k + 2
    labels = ["" for _ in range(n)]
    labels[0], labels[-1] = "u", "v"
    g = WeightedGraph(n, tuple((i, i + 1, 1) for i in range(n - 1)), ((k, m),), tuple(labels))
    return g, RevivalSite((0, n - 1))


def build_t_family(k: int) -> tuple[WeightedGraph, RevivalSite]:
    """Path 0..2k+1 plus x (2k+2) on path vertices k-1, k and b (2k+3) on vertex k+2."""
    if k < 1:
        raise InvalidParameterError("k must be >= 1")
    p = 2 * k + 2
    x, b = p, p + 1
    edges = [(i, i + 1, 1) for i in range(p - 1)]
    edges += [(x, k - 1, 1), (x, k, 1), (b, k + 2, 1)]
    labels = ["" for _ in range(p + 2)]
    labels[0], labels[p - 1] = "u", "v"
    labels[k - 1] = "z" if k - 1 != 0 else "u"
    labels[k], labels[k + 2] = "y", "a"
    labels[x], labels[b] = "x", "b"
    return WeightedGraph(p + 2, tuple(edges), (), tuple(labels)), RevivalSite((0, p - 1))


def build_diamond_cycle(r: int, orbit: str = "c") -> tuple[WeightedGraph, RevivalSite, CyclicAction]:
    """Cycle c_0..c_{r-1} with a diamond on each edge: d_i ~ c_i, c_{i+1}, e_i and e_i ~ c_i, d_i.

    Vertices are ordered (c, d, e) so c_i = i, d_i = r + i, e_i = 2r + i.
    """
    if r < 3:
        raise InvalidParameterError("r must be >= 3")
    c = lambda i: i % r  # noqa: E731
    dd = lambda i: r + i % r  # noqa: E731
    e = lambda i: 2 * r + i % r  # noqa: E731
    edges = []
    for i in range(r):
        edges += [(c(i), c(i + 1), 1), (dd(i), c(i), 1), (dd(i), c(i + 1), 1), (dd(i), e(i), 1), (e(i), c(i), 1)]
    labels = [f"c{i}" for i in range(r)] + [f"d{i}" for i in range(r)] + [f"e{i}" for i in range(r)]
    g = WeightedGraph(3 * r, tuple(edges), (), tuple(labels))
    perm = tuple([c(i + 1) for i in range(r)] + [dd(i + 1) for i in range(r)] + [e(i + 1) for i in range(r)])
    offset = {"c": 0, "d": r, "e": 2 * r}.get(orbit)
    if offset is None:
        raise InvalidParameterError("orbit must be one of 'c', 'd', 'e'")
    return g, RevivalSite(tuple(offset + i for i in range(r))), CyclicAction(r, perm)


def glue(g1: WeightedGraph, g2: WeightedGraph, identify: dict[int, int]) -> tuple[WeightedGraph, list[int]]:
    """Sum of two graphs sharing the identified vertices.

    ``identify`` maps vertices of ``g2`` onto vertices of ``g1``; every other vertex of
    ``g2`` gets a fresh index after ``g1``'s. Weights of coinciding edges and loops add.
    Returns the glued graph and the embedding of ``g2``'s vertices.
    """
    targets = list(identify.values())
    if len(set(targets)) != len(targets):
        raise InvalidGluingError("identification collides two vertices of g2")
    if any(not 0 <= a < g2.n for a in identify) or any(not 0 <= b < g1.n for b in targets):
        raise InvalidGluingError("identification index out of range")
    emb = []
    nxt = g1.n
    for v in range(g2.n):
        if v in identify:
            emb.append(identify[v])
        else:
            emb.append(nxt)
            nxt += 1
    a = [[Fraction(0)] * nxt for _ in range(nxt)]
    for i, row in enumerate(g1.adjacency_exact()):
        for j, w in enumerate(row):
            a[i][j] += w
    for i, row in enumerate(g2.adjacency_exact()):
        for j, w in enumerate(row):
            a[emb[i]][emb[j]] += w
    return WeightedGraph.from_adjacency(a), emb


def bfs_distances(g: WeightedGraph, sources: Iterable[int]) -> list[int]:
    """Hop distance to the nearest source on the unweighted support; -1 if unreachable."""
    dist = [-1] * g.n
    queue = deque()
    for s in sources:
        if dist[s] < 0:
            dist[s] = 0
            queue.append(s)
    nb = g.neighbors()
    while queue:
        x = queue.popleft()
        for y in nb[x]:
            if dist[y] < 0:
                dist[y] = dist[x] + 1
                queue.append(y)
    return dist


def is_connected(g: WeightedGraph) -> bool:
    return min(bfs_distances(g, [0])) >= 0


def eccentricity_to_set(g: WeightedGraph, K: Sequence[int]) -> int:
    if not is_connected(g):
        raise NotConnectedError("graph is not connected")
    return max(bfs_distances(g, K))


def verify_automorphism(g: WeightedGraph, action: CyclicAction) -> bool:
    perm = action.perm
    if len(perm) != g.n or sorted(perm) != list(range(g.n)) or action.r < 1:
        return False
    # exact order r
    ident = list(range(g.n))
    cur = list(ident)
    for step in range(1, action.r + 1):
        cur = [perm[x] for x in cur]
        if cur == ident and step < action.r:
            return False
    if cur != ident:
        return False
    a = g.adjacency_exact()
    return all(a[perm[i]][perm[j]] == a[i][j] for i in range(g.n) for j in range(g.n))


def matrix_power_int(a: list[list[int]], j: int) -> list[list[int]]:
    n = len(a)
    out = [[int(i == k) for k in range(n)] for i in range(n)]
    for _ in range(j):
        out = [[sum(out[i][l] * a[l][k] for l in range(n) if out[i][l]) for k in range(n)] for i in range(n)]
    return out


def exact_powers(a: list[list], upto: int) -> list[list[list]]:
    """``[A^0, A^1, ..., A^upto]`` with exact (int or Fraction) entries."""
    n = len(a)
    cur = [[Fraction(int(i == k)) for k in range(n)] for i in range(n)]
    out = [cur]
    nz = [[(l, a[l][k]) for l in range(n) if a[l][k]] for k in range(n)]
    for _ in range(upto):
        cur = [[sum((cur[i][l] * w for l, w in nz[k]), Fraction(0)) for k in range(n)] for i in range(n)]
        out.append(cur)
    return out


def pair_identity_holds(g: WeightedGraph, u: int, v: int, c) -> bool:
    """``(M^j)_uu - (M^j)_vv == c*(M^j)_uv`` for j = 0..n-1, exhaustively."""
    for P in exact_powers(g.adjacency_exact(), g.n - 1):
        if P[u][u] - P[v][v] != Fraction(c) * P[u][v]:
            return False
    return True


def load_graph_file(obj: dict) -> tuple[WeightedGraph, RevivalSite, CyclicAction | None]:
    """Parse the graph JSON format (``n``, ``edges``, ``loops``, ``K``, ``q`` and optional ``action``)."""
    g = WeightedGraph.from_json(obj)
    q = obj.get("q", SYMBOLIC)
    site = RevivalSite(tuple(obj["K"]), SYMBOLIC if q == SYMBOLIC else float(q))
    site.validate(g)
    action = CyclicAction.from_json(obj["action"]) if obj.get("action") else None
    return g, site, action


def dump_graph_file(g: WeightedGraph, site: RevivalSite, action: CyclicAction | None = None) -> dict:
    out = g.to_json()
    out["K"] = list(site.K)
    out["q"] = SYMBOLIC if site.symbolic else repr(float(site.q))
    if action is not None:
        out["action"] = action.to_json()
    return out
