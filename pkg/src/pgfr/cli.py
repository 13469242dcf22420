"""Command-line entry point: generate graphs, certify, partition, search for witnesses, self-test."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from math import cos, pi
from pathlib import Path
from typing import Callable

import numpy as np

from . import graphs as gr
from .certify import Certificate, CertifyOptions, certify, factor_by_minpolys, trace_degree_criterion
from .cospectral import find_pair_parameter, h_cyclic, h_from_c, verify_h_cospectrality
from .dynamics import default_sigma_min, grid_metrics, witness_search
from .exactalg import QuadNumber, parse_rational
from .spectral import DEFAULT_SUPPORT_TOL, decompose, partition

EXIT_OK = 0
EXIT_FAIL = 2
EXIT_USAGE = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit with status 2
        raise UsageError(message)


def _rational(s: str) -> Fraction:
    try:
        return parse_rational(s)
    except (ValueError, TypeError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="pgfr", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = sub.add_parser("gen", help="write a graph JSON file")
    fam = gen.add_subparsers(dest="family", required=True, parser_class=_Parser)
    s = fam.add_parser("s", help="path with a weighted loop")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--m", type=_rational, default=Fraction(1))
    t = fam.add_parser("t", help="path with two pendant attachments")
    t.add_argument("--k", type=int, required=True)
    d = fam.add_parser("diamond", help="cycle with a diamond on every edge")
    d.add_argument("--r", type=int, required=True)
    d.add_argument("--orbit", choices=["c", "d", "e"], default="c")
    w = fam.add_parser("wheel", help="cycle plus a hub")
    w.add_argument("--r", type=int, required=True)
    for q in (s, t, d, w):
        q.add_argument("--out", type=Path)

    def numeric_flags(q: argparse.ArgumentParser) -> None:
        q.add_argument("input", type=Path)
        q.add_argument("--numeric-q", type=float, default=None)
        q.add_argument("--tol-cluster", type=float, default=None)
        q.add_argument("--tol-support", type=float, default=DEFAULT_SUPPORT_TOL)
        q.add_argument("--out", type=Path)
        q.add_argument("--seed", type=int, default=0)

    c = sub.add_parser("certify", help="certify PGFR for the file's K")
    numeric_flags(c)
    c.add_argument("--bound-B", type=int, default=6)
    c.add_argument("--mode", choices=["auto", "exact", "numeric"], default="auto")

    pt = sub.add_parser("partition", help="numeric eigenvalue partition")
    numeric_flags(pt)

    wt = sub.add_parser("witness", help="search for revival witness times")
    numeric_flags(wt)
    wt.add_argument("--horizon", type=float, default=1e3)
    wt.add_argument("--grid", type=int, default=10**5)
    wt.add_argument("--sigma-min", type=float, default=None)
    wt.add_argument("--csv", type=Path, default=None, help="also write the (t, delta, sigma) grid")

    st = sub.add_parser("selftest", help="run the built-in example suite")
    st.add_argument("--out", type=Path)
    st.add_argument("--seed", type=int, default=0)
    return p


def _config(args: argparse.Namespace) -> dict:
    out = {}
    for k, v in sorted(vars(args).items()):
        if isinstance(v, Path):
            v = str(v)
        elif isinstance(v, Fraction):
            v = str(v)
        out[k] = v
    return out


def _emit(obj: dict, out: Path | None) -> None:
    text = json.dumps(obj, sort_keys=True, indent=2)
    if out is None:
        print(text)
    else:
        out.write_text(text + "\n")


def _load(path: Path):
    with open(path) as fh:
        return gr.load_graph_file(json.load(fh))


def _numeric_q(args, site: gr.RevivalSite) -> float:
    if args.numeric_q is not None:
        return args.numeric_q
    return pi if site.symbolic else float(site.q)


def cmd_gen(args) -> int:
    action = None
    if args.family == "s":
        g, site = gr.build_s_family(args.k, args.m)
    elif args.family == "t":
        g, site = gr.build_t_family(args.k)
    elif args.family == "diamond":
        g, site, action = gr.build_diamond_cycle(args.r, args.orbit)
    else:
        g, site, action = gr.wheel_graph(args.r)
    _emit(gr.dump_graph_file(g, site, action), args.out)
    return EXIT_OK


def run_certify(g, site, action, args) -> Certificate:
    opts = CertifyOptions(
        numeric_q=_numeric_q(args, site),
        cluster_tol=args.tol_cluster,
        support_tol=args.tol_support,
        bound_B=args.bound_B,
        mode=args.mode,
    )
    if args.numeric_q is not None and not site.symbolic:
        site = gr.RevivalSite(site.K, args.numeric_q)
    return certify(g, site, action, options=opts)


def cmd_certify(args) -> int:
    g, site, action = _load(args.input)
    cert = run_certify(g, site, action, args)
    _emit({"config": _config(args), "result": cert.to_json()}, args.out)
    return cert.exit_code


def cmd_partition(args) -> int:
    g, site, _ = _load(args.input)
    q = _numeric_q(args, site)
    dec = decompose(site.perturbed(g, q), args.tol_cluster)
    part = partition(dec, site.K, args.tol_support)
    _emit({"config": _config(args), "result": part.to_json()}, args.out)
    return EXIT_OK


def cmd_witness(args) -> int:
    g, site, _ = _load(args.input)
    q = _numeric_q(args, site)
    dec = decompose(site.perturbed(g, q), args.tol_cluster)
    part = partition(dec, site.K, args.tol_support)
    sigma_min = args.sigma_min if args.sigma_min is not None else default_sigma_min(len(site.K))
    found = witness_search(dec, site.K, args.horizon, args.grid, sigma_min=sigma_min, partition=part)
    if args.csv is not None:
        times = np.linspace(0.0, args.horizon, args.grid)
        delta, sigma = grid_metrics(dec, site.K, times)
        np.savetxt(args.csv, np.column_stack([times, delta, sigma]), delimiter=",", header="t,delta,sigma", comments="", fmt="%.15g")
    result = {"sigma_min": sigma_min, "witnesses": [w.to_json() for w in found]}
    _emit({"config": _config(args), "result": result}, args.out)
    return EXIT_OK


# --- self-test: the published example values, each checked once -----------------------------

@dataclass
class Check:
    name: str
    run: Callable[[], bool]


def _walk(g, j, a, b) -> int:
    return gr.matrix_power_int(g.adjacency_int(), j)[a][b]


def _checks() -> list[Check]:
    checks = [
        Check("S_{1,1}: 4-vertex path with loop 1 at vertex 1, K={0,3}", lambda: (lambda g, s: g.n == 4 and dict(g.loops) == {1: 1} and s.K == (0, 3))(*gr.build_s_family(1, 1))),
        Check("S_{2,3}: n=6, loop 3 at vertex 2, K={0,5}", lambda: (lambda g, s: g.n == 6 and dict(g.loops) == {2: 3} and s.K == (0, 5))(*gr.build_s_family(2, 3))),
        Check("T_2: n=8, x~{1,2}, b~{4}", lambda: (lambda g, s: g.n == 8 and g.neighbors()[6] == [1, 2] and g.neighbors()[7] == [4])(*gr.build_t_family(2))),
        Check("T_2 walk counts (M^2)_{u,y}=1, (M^4)_{u,y}=5", lambda: (lambda g: _walk(g, 2, 0, 2) == 1 and _walk(g, 4, 0, 2) == 5)(gr.build_t_family(2)[0])),
        Check("G_5 degree sequence 5x5, 5x3, 5x2", lambda: sorted(gr.build_diamond_cycle(5)[0].degrees()) == [2] * 5 + [3] * 5 + [5] * 5),
        Check("G_5 d-to-c coupling block is the circulant R", lambda: _diamond_block(5)),
        Check("G_5 shift is an automorphism", lambda: gr.verify_automorphism(*(lambda x: (x[0], x[2]))(gr.build_diamond_cycle(5)))),
        Check("pair parameter of T_2 endpoints is 2", lambda: find_pair_parameter(gr.build_t_family(2)[0], 0, 5) == 2),
        Check("pair parameter of S_{2,3} endpoints is 3", lambda: find_pair_parameter(gr.build_s_family(2, 3)[0], 0, 5) == 3),
        Check("c=0 gives H = [[0,1],[1,0]]", lambda: np.allclose(h_from_c(0).matrix, [[0, 1], [1, 0]])),
        Check("c=2 gives p/q = 1+sqrt2 and -q/p = 1-sqrt2", lambda: h_from_c(2).seeds[0][0] == QuadNumber(1, 1, 2) and h_from_c(2).seeds[1][0] == QuadNumber(1, -1, 2)),
        Check("T_2 is H-cospectral for h_from_c(2)", lambda: verify_h_cospectrality(*gr.build_t_family(2), h_from_c(2), "exact")),
        Check("T_2: deg P_1 = deg P_2 = 4, P_0 = 1", lambda: (lambda f: [x.degree for x in f.factors] == [4, 4] and f.p0.t_degree == 0)(factor_by_minpolys(*gr.build_t_family(2), h_from_c(2)))),
        Check("T_2: Tr P_1, Tr P_2 are Q-sqrt2 and Q+sqrt2 (as a set)", lambda: _t_traces(2)),
        Check("T_2 trace/degree criterion holds at (1,2)", lambda: trace_degree_criterion(factor_by_minpolys(*gr.build_t_family(2), h_from_c(2))) == (True, (1, 2))),
        Check("G_5 numeric: five factors of degree 3", lambda: [x.degree for x in _g_factors(5).factors] == [3] * 5),
        Check("G_5 numeric: Tr P_k - pi = 2cos(2 pi k/5)", lambda: all(abs(x.trace_value(pi) - pi - 2 * cos(2 * pi * (x.label - 1) / 5)) < 1e-8 for x in _g_factors(5).factors)),
    ]
    for k in range(2, 6):
        checks.append(Check(f"T_{k} certified via trace-degree", lambda k=k: certify(*gr.build_t_family(k)).criterion == "trace-degree"))
    for k in range(2, 5):
        for m in range(1, 4):
            checks.append(Check(f"S_{{{k},{m}}} certified", lambda k=k, m=m: certify(*gr.build_s_family(k, m)).certified))
    for r in range(3, 9):
        checks.append(Check(f"G_{r} certified (numeric path)", lambda r=r: certify(*gr.build_diamond_cycle(r)).certified))
    return checks


def _diamond_block(r: int) -> bool:
    a = gr.build_diamond_cycle(r)[0].adjacency()
    R = np.eye(r) + np.roll(np.eye(r), 1, axis=1)
    return bool(np.array_equal(a[r : 2 * r, 0:r], R) or np.array_equal(a[0:r, r : 2 * r], R))


def _t_traces(k: int) -> bool:
    f = factor_by_minpolys(*gr.build_t_family(k), h_from_c(2))
    got = {(x.trace_q, x.trace_f) for x in f.factors}
    return got == {(1, QuadNumber(0, -1, 2)), (1, QuadNumber(0, 1, 2))}


def _g_factors(r: int):
    g, s, _ = gr.build_diamond_cycle(r)
    return factor_by_minpolys(g, s, h_cyclic(r), "numeric", pi)


def cmd_selftest(args) -> int:
    np.random.seed(args.seed)
    results = []
    for chk in _checks():
        try:
            ok = bool(chk.run())
        except Exception as exc:  # a crashing check is a failing check
            ok = False
            chk.name += f" (error: {exc})"
        results.append({"name": chk.name, "pass": ok})
        print(f"{'PASS' if ok else 'FAIL'}  {chk.name}", file=sys.stderr)
    if args.out is not None:
        _emit({"config": _config(args), "result": results}, args.out)
    return EXIT_OK if all(r["pass"] for r in results) else EXIT_FAIL


COMMANDS = {"gen": cmd_gen, "certify": cmd_certify, "partition": cmd_partition, "witness": cmd_witness, "selftest": cmd_selftest}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"pgfr: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except (OSError, KeyError, TypeError, ValueError) as exc:  # JSON and graph errors are ValueErrors
        print(f"pgfr: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
