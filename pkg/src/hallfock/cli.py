"""Command-line driver: operator actions, verification suites, fixed-point checks.

Exit codes: 0 success, 1 an identity failed, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass

from . import heisfock, ktheory, shuffle, symm
from .reports import Report

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

DEFAULT_MAX_DEGREE = 6


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    max_degree: int = DEFAULT_MAX_DEGREE
    truncation_bound: int | None = None
    rank: int = 1
    probabilistic_points: int = 0
    seed: int = 0
    output: str = "text"

    def __post_init__(self):
        if self.max_degree < 0:
            raise UsageError("--max-degree must be >= 0")
        if self.rank < 1:
            raise UsageError("--rank must be >= 1")


def _config(args) -> RunConfig:
    cfg = RunConfig(
        max_degree=args.max_degree,
        truncation_bound=args.truncation,
        rank=args.rank,
        seed=args.seed,
        output="json" if args.json else "text",
    )
    random.seed(cfg.seed)
    return cfg


def _emit(cfg: RunConfig, payload_text: str, payload_json):
    if cfg.output == "json":
        print(json.dumps(payload_json, indent=2, sort_keys=True))
    else:
        print(payload_text)


def _emit_report(cfg: RunConfig, report: Report) -> int:
    _emit(cfg, report.text(), report.to_json())
    return EXIT_OK if report.passed else EXIT_FAIL


# commands -------------------------------------------------------------------------

def cmd_act(args) -> int:
    cfg = _config(args)
    word = heisfock.parse_word(args.word)
    f = symm.parse_symfunc(args.symfunc)
    with symm.degree_cap(cfg.max_degree + sum(abs(g.m) for g in word.factors)):
        out = heisfock.apply_word(word, f, cfg.truncation_bound)
    _emit(cfg, str(out), {"word": args.word, "input": f.to_json(), "result": out.to_json()})
    return EXIT_OK


def _suite_heisenberg(cfg, args):
    return heisfock.check_heisenberg(kmax=5, max_degree=max(cfg.max_degree, 0))


def _suite_frobenius(cfg, args):
    return symm.check_frobenius(max_total=cfg.max_degree)


def _suite_need(cfg, args):
    return heisfock.check_need_suite(max_degree=min(cfg.max_degree, 5))


RELATION1_SAMPLES = [
    (0, 1, 0, -1), (0, 2, 0, -2), (0, 3, 0, -3), (0, 1, 0, 2),
    (1, 0, -1, 0), (1, 1, -1, -1), (1, -1, -1, 1), (1, 0, 2, 0),
]
RELATION2_SAMPLES = [
    (1, 0, 0, 1), (1, -1, 0, 1), (0, -1, 1, 0), (-1, 0, 1, -1),
    (-1, 0, 0, -1), (1, 0, 1, 1), (1, -1, 1, 1), (2, -1, 0, 1),
]


def _suite_eha(cfg, args):
    report = Report("eha-relations")
    deg = min(cfg.max_degree, 5)
    for s in RELATION1_SAMPLES:
        report.extend(heisfock.check_relation1(*s, max_degree=deg))
    for s in RELATION2_SAMPLES:
        report.extend(heisfock.check_relation2(*s, max_degree=deg))
    return report


def _suite_vacuum(cfg, args):
    return heisfock.check_vacuum()


def _suite_computation(cfg, args):
    return heisfock.computation_identities_check(order=4, max_degree=min(cfg.max_degree, 3))


def _suite_shuffle(cfg, args):
    report = Report("shuffle")
    cap = min(cfg.max_degree, 4)
    for m in range(-2, 3):
        for m2 in range(-2, 3):
            report.extend(shuffle.star_vs_fock((1, m), (1, m2), cap=cap))
    for m in range(-2, 3):
        for m2 in (0, 1):
            report.extend(shuffle.star_vs_fock((1, m), (2, m2), cap=cap))
    report.extend(shuffle.check_jp_vs_kp(2, range(-2, 3), cap=cap))
    return report


def _suite_trace(cfg, args):
    return symm.check_trace(args.k)


def _suite_weights(cfg, args):
    return ktheory.check_distinct_weights(max_size=min(cfg.max_degree, 5), max_r=3)


def _suite_spanning(cfg, args):
    return ktheory.check_spanning(r=1, max_d=2)


SUITES = {
    "heisenberg": _suite_heisenberg,
    "frobenius": _suite_frobenius,
    "need": _suite_need,
    "eha-relations": _suite_eha,
    "vacuum": _suite_vacuum,
    "computation": _suite_computation,
    "shuffle": _suite_shuffle,
    "trace": _suite_trace,
    "distinct-weights": _suite_weights,
    "spanning": _suite_spanning,
}


def cmd_verify(args) -> int:
    cfg = _config(args)
    if args.suite not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES)}")
    with symm.degree_cap(max(12, cfg.max_degree + 6)):
        report = SUITES[args.suite](cfg, args)
    return _emit_report(cfg, report)


def _parse_gens(text: str) -> list[heisfock.Generator]:
    import re

    pieces = re.findall(r"(?:H|P|Q)\(\s*-?\d+\s*,\s*-?\d+\s*\)|pdag\(\s*\d+\s*\)", text)
    rest = re.sub(r"(?:H|P|Q)\(\s*-?\d+\s*,\s*-?\d+\s*\)|pdag\(\s*\d+\s*\)|[,\s]", "", text)
    if rest or not pieces:
        raise UsageError(f"cannot parse generator list {text!r}")
    return [heisfock.parse_generator(p) for p in pieces]


def cmd_intertwine(args) -> int:
    cfg = _config(args)
    r = args.r if args.r is not None else cfg.rank
    gens = _parse_gens(args.gens)
    for g in gens:
        if g.kind == "H" and g.n != 0 and not heisfock.in_Ar(g.n, g.m, r) and not args.allow_boundary:
            print(
                f"refusing {g}: not in A^({r}), membership needs m > -n r "
                f"(here m = {g.m}, -n r = {-g.n * r}); pass --allow-boundary to see the certificate",
                file=sys.stderr,
            )
            return EXIT_USAGE
    report = Report("intertwine")
    for g in gens:
        inside = g.kind != "H" or g.n == 0 or heisfock.in_Ar(g.n, g.m, r)
        if inside:
            report.extend(ktheory.intertwine_check(r, args.d, g))
        if args.allow_boundary and g.kind == "H" and g.n != 0:
            report.extend(ktheory.boundary_check(r, args.d, g))
    return _emit_report(cfg, report)


def _pair(text: str) -> tuple[int, int]:
    try:
        n, m = (int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"expected 'n,m', got {text!r}") from None
    return n, m


def cmd_shuffle(args) -> int:
    cfg = _config(args)
    A, B = _pair(args.a), _pair(args.b)
    if args.check:
        report = shuffle.star_vs_fock(A, B, cap=min(cfg.max_degree, 4))
        return _emit_report(cfg, report)
    prod_ = shuffle.star(shuffle.R(*A), shuffle.R(*B))
    _emit(cfg, str(prod_), {"A": list(A), "B": list(B), "star": str(prod_)})
    return EXIT_OK


def cmd_localize(args) -> int:
    cfg = _config(args)
    r = args.r if args.r is not None else cfg.rank
    f = symm.parse_symfunc(args.symfunc)
    vec = ktheory.gamma_eval(f, r, args.d)
    _emit(cfg, str(vec), vec.to_json())
    return EXIT_OK


def cmd_trace(args) -> int:
    cfg = _config(args)
    return _emit_report(cfg, symm.check_trace(args.k))


# parser -----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-degree", type=int, default=DEFAULT_MAX_DEGREE)
    common.add_argument("--truncation", type=int, default=None, help="series truncation bound (default: exact)")
    common.add_argument("--rank", type=int, default=1)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--json", action="store_true")

    parser = argparse.ArgumentParser(prog="hallfock", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("act", parents=[common], help="apply an operator word to a symmetric function")
    p.add_argument("word", help="e.g. 'H(1,2);P(0,1)', applied right to left")
    p.add_argument("symfunc", help="e.g. '1', 'p1^2 - q1*p2'")
    p.set_defaults(func=cmd_act)

    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("suite", help=", ".join(SUITES))
    p.add_argument("--k", type=int, default=6)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("intertwine", parents=[common], help="check Gamma Psi = Phi Gamma at fixed points")
    p.add_argument("--r", type=int, default=None)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--gens", required=True)
    p.add_argument("--allow-boundary", action="store_true")
    p.set_defaults(func=cmd_intertwine)

    p = sub.add_parser("shuffle", parents=[common], help="star product of R(n,m) kernels")
    p.add_argument("a", help="n,m of the left factor")
    p.add_argument("b", help="n,m of the right factor")
    p.add_argument("--check", action="store_true", help="compare with Fock composition")
    p.set_defaults(func=cmd_shuffle)

    p = sub.add_parser("localize", parents=[common], help="values of f[U] at fixed points")
    p.add_argument("symfunc")
    p.add_argument("--r", type=int, default=None)
    p.add_argument("--d", type=int, default=1)
    p.set_defaults(func=cmd_localize)

    p = sub.add_parser("trace", parents=[common], help="exterior-algebra trace of a k-cycle")
    p.add_argument("--k", type=int, default=6)
    p.set_defaults(func=cmd_trace)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, SyntaxError, ValueError, NotImplementedError,
            symm.DegreeCapError, heisfock.TruncationError, shuffle.CapabilityError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
