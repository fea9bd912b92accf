"""Acceptance criteria 1-10, each an exact-equality check.

Every test records a ``criterion N: PASS|FAIL`` line; conftest prints them
in the terminal summary.  Running this file directly prints them too.
"""
import sys

import pytest

from hallfock import heisfock, ktheory, shuffle, symm
from hallfock.cli import RELATION1_SAMPLES, RELATION2_SAMPLES
from hallfock.heisfock import Generator
from hallfock.reports import Report
from hallfock.scalar import var

RESULTS: dict[int, bool] = {}


def _record(n: int, report: Report):
    RESULTS[n] = report.passed
    line = f"criterion {n}: {'PASS' if report.passed else 'FAIL'} ({len(report.checks)} checks)"
    print(line)
    if not report.passed:
        print(report.text())
    assert report.passed, line


def test_criterion_1_heisenberg():
    with symm.degree_cap(14):
        _record(1, heisfock.check_heisenberg(kmax=5, max_degree=7))


def test_criterion_2_frobenius():
    _record(2, symm.check_frobenius(max_total=6))


def test_criterion_3_need_identities():
    with symm.degree_cap(14):
        _record(3, heisfock.check_need_suite(max_degree=5, kr=range(-3, 4), mr=range(1, 4)))


def test_criterion_4_eha_relations():
    report = Report("eha-relations")
    with symm.degree_cap(14):
        for s in RELATION1_SAMPLES:
            report.extend(heisfock.check_relation1(*s, max_degree=5))
        for s in RELATION2_SAMPLES:
            report.extend(heisfock.check_relation2(*s, max_degree=5))
    _record(4, report)


def test_criterion_5_vacuum():
    with symm.degree_cap(12):
        _record(5, heisfock.check_vacuum())


def test_criterion_6_shuffle_homomorphism():
    report = Report("shuffle")
    for m in range(-2, 3):
        for m2 in range(-2, 3):
            report.extend(shuffle.star_vs_fock((1, m), (1, m2), cap=4))
    for m in range(-2, 3):
        for m2 in (0, 1):
            report.extend(shuffle.star_vs_fock((1, m), (2, m2), cap=4))
    report.extend(shuffle.check_jp_vs_kp(2, range(-2, 3), cap=4))
    _record(6, report)


def main_theorem_generators(r: int) -> list[Generator]:
    gens = [Generator("P", 0, m) for m in range(1, 4)]
    gens += [Generator("H", 1, m) for m in range(-r + 1, 4)]
    gens += [Generator("H", -1, m) for m in range(r + 1, r + 4)]
    return gens


def test_criterion_7_intertwining():
    report = Report("intertwine")
    for r in (1, 2):
        for g in main_theorem_generators(r):
            report.extend(ktheory.intertwine_check(r, 3, g))
    _record(7, report)


def test_criterion_8_boundary_dichotomy():
    report = Report("boundary")
    for r in (1, 2):
        for g in main_theorem_generators(r):
            report.extend(ktheory.boundary_check(r, 3, g))
        report.extend(ktheory.boundary_check(r, 2, Generator("H", -1, r)))
    # worked case: r = 1, H(-1,1), f = 1 at lambda = (1) has certificate u1
    chi = ktheory.fixed_point_character(ktheory.RPartition.of((1,)))
    cert = ktheory.residue_at_zero(-1, 1, 1, symm.SymFunc.one(), chi)
    report.add("worked certificate equals u1", {"r": 1, "m": 1}, cert == var("u1"), witness=str(cert))
    _record(8, report)


def test_criterion_9_trace():
    _record(9, symm.check_trace(6))


def test_criterion_10_distinct_weights():
    _record(10, ktheory.check_distinct_weights(max_size=5, max_r=3))


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
