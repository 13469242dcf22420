"""End-to-end certification: find H, factor, run the gates and criteria, assemble a certificate."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import pi

import numpy as np

from ..cospectral import ANY, HSpec, find_pair_parameter, h_cyclic, h_from_c, h_trivial, verify_h_cospectrality
from ..exactalg import CoefficientGrowthError
from ..graphs import CyclicAction, RevivalSite, WeightedGraph, verify_automorphism
from ..spectral import DEFAULT_SUPPORT_TOL, EigenPartition, decompose, partition
from .criteria import InvalidOrbitError, class_distinctness_gate, orbit_size_criterion, trace_degree_criterion
from .factor import Factorization, PreconditionViolation, RankFragileError, factor_by_minpolys
from .falsifier import degeneracy_search

CERTIFIED = "PGFR-certified"
NOT_CERTIFIED = "not-certified"
DEGENERATE = "degenerate-evidence"
EXIT_CODES = {CERTIFIED: 0, NOT_CERTIFIED: 2, DEGENERATE: 3}
PARTITION_MATCH_TOL = 1e-8


@dataclass(frozen=True)
class CertifyOptions:
    numeric_q: float = pi
    cluster_tol: float | None = None
    support_tol: float = DEFAULT_SUPPORT_TOL
    bound_B: int = 6
    falsifier_tol: float = 1e-9
    mode: str = "auto"  # "auto" | "exact" | "numeric"
    bit_bound: int | None = None

    def to_json(self) -> dict:
        return {
            "numeric_q": self.numeric_q,
            "cluster_tol": self.cluster_tol,
            "support_tol": self.support_tol,
            "bound_B": self.bound_B,
            "falsifier_tol": self.falsifier_tol,
            "mode": self.mode,
            "bit_bound": self.bit_bound,
        }


@dataclass
class Certificate:
    verdict: str
    criterion: str | None = None
    pair: tuple[int, int] | None = None
    factors: list[dict] = field(default_factory=list)
    partition: dict | None = None
    tolerances: dict = field(default_factory=dict)
    falsifier: dict | None = None
    input_hash: str = ""
    K: tuple[int, ...] = ()
    q_mode: str = "symbolic"
    gates: dict = field(default_factory=dict)
    failed_gate: str | None = None
    flags: list[str] = field(default_factory=list)
    h: dict | None = None
    path: str | None = None
    extra: dict = field(default_factory=dict)

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.verdict]

    @property
    def certified(self) -> bool:
        return self.verdict == CERTIFIED

    def to_json(self) -> dict:
        out = {
            "verdict": self.verdict,
            "criterion": self.criterion,
            "pair": list(self.pair) if self.pair else None,
            "factors": self.factors,
            "partition": self.partition,
            "tolerances": self.tolerances,
            "falsifier": self.falsifier,
            "input_hash": self.input_hash,
            "K": list(self.K),
            "q_mode": self.q_mode,
            "gates": self.gates,
            "failed_gate": self.failed_gate,
            "flags": sorted(self.flags),
            "h": self.h,
            "path": self.path,
        }
        out.update(self.extra)
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2)


def _ordered_orbit(action: CyclicAction, K: tuple[int, ...]) -> tuple[int, ...] | None:
    orbit = action.orbit(K[0])
    if len(orbit) != len(K) or set(orbit) != set(K):
        return None
    return tuple(orbit)


def _obtain_h(g: WeightedGraph, site: RevivalSite, action: CyclicAction | None, cert: Certificate):
    """Pick H (and possibly reorder K along the orbit); records why when impossible."""
    K = site.K
    if len(K) == 2:
        c = find_pair_parameter(g, K[0], K[1])
        if c is None:
            cert.failed_gate = "pair-parameter"
            return None, site
        if c == ANY:
            cert.failed_gate = "pair-disconnected"
            return None, site
        cert.extra["pair_parameter"] = str(c)
        return h_from_c(c), site
    if action is not None:
        if not verify_automorphism(g, action):
            cert.failed_gate = "automorphism"
            return None, site
        orbit = _ordered_orbit(action, K)
        if orbit is None:
            cert.failed_gate = "invalid-orbit"
            return None, site
        return h_cyclic(action.r), RevivalSite(orbit, site.q)
    if len(K) == 1:
        return h_trivial(), site
    cert.failed_gate = "no-H"
    return None, site


def _root_classes(f: Factorization) -> list[tuple[list[int], np.ndarray]]:
    out = []
    for cls in f.classes():
        rep = f.factors[cls[0]]
        out.append(([f.factors[i].label for i in cls], rep.roots))
    return out


def _match_partition(part: EigenPartition, classes, p0_roots: np.ndarray, tol: float) -> tuple[bool, dict[int, int]]:
    """Numeric parts must be exactly the root sets of the factor classes; returns class -> part map."""
    vals = np.array(part.eigenvalues)
    mapping: dict[int, int] = {}
    used: set[int] = set()
    close = lambda a, b: abs(a - b) <= tol * max(1.0, abs(a))  # noqa: E731
    for ci, (_, roots) in enumerate(classes):
        hits = []
        for x in roots:
            idx = [i for i in range(len(vals)) if close(vals[i], x)]
            if len(idx) != 1:
                return False, mapping
            hits.append(idx[0])
        owners = {part.part_of(i) for i in hits}
        if len(owners) != 1 or None in owners:
            return False, mapping
        r = owners.pop()
        if r in used or sorted(part.parts[r - 1]) != sorted(hits):
            return False, mapping
        used.add(r)
        mapping[ci] = r
    if len(used) != part.s:
        return False, mapping
    for i in part.pi0:
        if not any(close(vals[i], x) for x in p0_roots):
            return False, mapping
    return True, mapping


def certify(
    g: WeightedGraph,
    site: RevivalSite,
    action: CyclicAction | None = None,
    h: HSpec | None = None,
    options: CertifyOptions | None = None,
) -> Certificate:
    """Run the whole pipeline; gate failures become a not-certified verdict, never an exception."""
    opts = options or CertifyOptions()
    q_num = opts.numeric_q if site.symbolic else float(site.q)
    cert = Certificate(
        NOT_CERTIFIED,
        input_hash=g.digest(),
        K=site.K,
        q_mode="symbolic" if site.symbolic else "numeric",
        tolerances={
            "cluster": opts.cluster_tol,
            "support": opts.support_tol,
            "falsifier": opts.falsifier_tol,
            "bound_B": opts.bound_B,
            "numeric_q": q_num,
            "root_separation": 1e-7,
            "partition_match": PARTITION_MATCH_TOL,
        },
    )
    try:
        site.validate(g)
    except ValueError as exc:
        cert.failed_gate = f"invalid-site: {exc}"
        return cert

    # (1) H
    if h is None:
        h, site = _obtain_h(g, site, action, cert)
        if h is None:
            return cert
    cert.h = h.to_json()
    cert.K = site.K

    # (2) cospectrality
    exact_h = h.exact_matrix is not None
    ok = verify_h_cospectrality(g, site, h, "exact" if exact_h else "numeric")
    cert.gates["h-cospectral"] = ok
    cert.extra["power_range"] = [0, g.n - 1]
    if not ok:
        cert.failed_gate = "h-cospectral"
        return cert

    # (3) factorization
    mode = opts.mode
    if mode == "auto":
        mode = "exact" if h.seeds is not None else "numeric"
    cert.path = mode
    try:
        f = factor_by_minpolys(g, site, h, mode, q_num, bit_bound=opts.bit_bound, check=False)
    except RankFragileError:
        cert.failed_gate = "rank-fragile"
        cert.flags.append("rank-fragile")
        return cert
    except (PreconditionViolation, CoefficientGrowthError, ArithmeticError, ValueError) as exc:
        cert.failed_gate = f"factorization: {exc}"
        return cert
    cert.factors = [x.to_json() for x in f.factors]
    cert.extra["p0_degree"] = f.p0_degree

    # (4) irreducibility and Q-degree structure
    if mode == "exact":
        cert.gates["q-degree"] = all(x.q_degree == 1 for x in f.factors) and f.p0.q_degree <= 0
        cert.gates["trace-q-coefficient"] = all(x.trace_q == 1 for x in f.factors)
    else:
        cert.gates["trace-q-coefficient"] = all(abs(float(x.trace_q) - 1) < 1e-7 for x in f.factors)
    cert.gates["irreducible"] = all(x.irreducible is True for x in f.factors)
    for gate in ("q-degree", "trace-q-coefficient", "irreducible"):
        if cert.gates.get(gate) is False:
            cert.failed_gate = gate
            return cert

    # (5) distinctness (identical factors merged into classes)
    classes = _root_classes(f)
    cert.extra["factor_classes"] = [labels for labels, _ in classes]
    cert.gates["distinct"] = class_distinctness_gate(f)
    if not cert.gates["distinct"]:
        cert.failed_gate = "distinct"
        return cert

    # (7) numeric partition cross-check
    a = site.perturbed(g, q_num)
    dec = decompose(a, opts.cluster_tol)
    part = partition(dec, site.K, opts.support_tol)
    cert.partition = part.to_json()
    cert.tolerances["cluster"] = dec.cluster_tol
    if part.fragile:
        cert.flags.append("tolerance-fragile")
    matched, class_to_part = _match_partition(part, classes, f.p0_roots, PARTITION_MATCH_TOL)
    cert.gates["partition-match"] = matched
    if not matched:
        cert.flags.append("partition-mismatch")
        cert.failed_gate = "partition-mismatch"
        return cert

    # (6) criteria, over class representatives
    reps = [f.factors[c[0]] for c in f.classes()]
    td_holds, td_pair = trace_degree_criterion(reps)
    cert.gates["trace-degree"] = td_holds
    orbit_holds = False
    if action is not None and len(site.K) == action.r:
        try:
            orbit_holds, ecc = orbit_size_criterion(g, action, site.K)
            cert.extra["orbit"] = {"r": action.r, "eccentricity": ecc, "n": g.n}
        except InvalidOrbitError:
            orbit_holds = False
        cert.gates["orbit-size"] = orbit_holds

    label_to_class = {lab: ci for ci, (labels, _) in enumerate(classes) for lab in labels}
    if td_holds:
        part_pair = (class_to_part[label_to_class[td_pair[0]]], class_to_part[label_to_class[td_pair[1]]])
    else:
        part_pair = (1, 2) if part.s >= 2 else None
    if orbit_holds:
        cert.verdict, cert.criterion = CERTIFIED, "orbit-size"
        cert.pair = td_pair
    elif td_holds:
        cert.verdict, cert.criterion = CERTIFIED, "trace-degree"
        cert.pair = td_pair

    # (8) falsifier: the witness pair when certified, every pair otherwise
    if part.s < 2:
        cert.falsifier = {"skipped": True, "reason": "single part", "degenerate": True}
        if not cert.certified:
            # one part admits no non-constant phases, so the partition is degenerate outright
            cert.verdict = DEGENERATE
            cert.failed_gate = "single-part"
        return cert
    eig = dec.eigenvalues
    pairs = [tuple(sorted(part_pair))] if cert.certified else list(combinations(range(1, part.s + 1), 2))
    results = {}
    for pr in pairs:
        rel = degeneracy_search(eig, part, pr, opts.bound_B, opts.falsifier_tol)
        results[f"{pr[0]},{pr[1]}"] = rel.to_json() if rel else None
    cert.falsifier = {"pairs": results, "bound_B": opts.bound_B, "tol": opts.falsifier_tol}
    if cert.certified:
        if any(v is not None for v in results.values()):
            cert.flags.append("falsifier-conflict")
        return cert
    cert.failed_gate = "criterion"
    if results and all(v is not None for v in results.values()):
        cert.verdict = DEGENERATE
    return cert


def recheck_certificate(obj: dict) -> bool:
    """Re-derive a certified verdict from the certificate's own provenance data."""
    if obj.get("verdict") != CERTIFIED:
        return False
    gates = obj.get("gates", {})
    for gate in ("h-cospectral", "irreducible", "distinct", "partition-match", "trace-q-coefficient"):
        if gates.get(gate) is not True:
            return False
    if gates.get("q-degree") is False:
        return False
    factors = {x["label"]: x for x in obj["factors"]}
    if not all(x["irreducible"] for x in factors.values()):
        return False
    if obj["criterion"] == "orbit-size":
        o = obj["orbit"]
        return o["r"] * (o["eccentricity"] + 1) > o["n"]
    i, j = obj["pair"]
    a, b = factors[i], factors[j]
    if a["deg"] != b["deg"]:
        return True
    if a["trace_f"][2] is None and isinstance(a["trace_f"][0], float):
        return abs(a["trace_f"][0] - b["trace_f"][0]) > 1e-7
    return [str(Fraction(x)) if x is not None else None for x in a["trace_f"][:2]] != [
        str(Fraction(x)) if x is not None else None for x in b["trace_f"][:2]
    ]
