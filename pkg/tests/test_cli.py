"""Command-line driver: outputs and exit codes."""
import json
import subprocess
import sys

import pytest

from hallfock.cli import main
from hallfock.reports import Check, Report, parallel_map, thread_count
from hallfock.symm import SymFunc, h_poly, p, p_lambda


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_act_examples(capsys):
    code, out, _ = run(capsys, "act", "H(1,2)", "1", "--json")
    assert code == 0
    assert SymFunc.from_json(json.loads(out)["result"]) == h_poly(2)
    code, out, _ = run(capsys, "act", "P(0,1);P(0,1)", "1", "--json")
    assert SymFunc.from_json(json.loads(out)["result"]) == p_lambda((1, 1))
    code, out, _ = run(capsys, "act", "H(-1,1)", "1", "--json")
    assert SymFunc.from_json(json.loads(out)["result"]) == p(1)


def test_act_bad_input(capsys):
    code, _, err = run(capsys, "act", "H(1,", "1")
    assert code == 2 and "error" in err
    code, _, _ = run(capsys, "act", "H(1,1)", "p1 +")
    assert code == 2


@pytest.mark.parametrize("suite", ["heisenberg", "trace", "vacuum", "frobenius", "distinct-weights",
                                   "spanning"])
def test_verify_passes(capsys, suite):
    code, out, _ = run(capsys, "verify", suite, "--max-degree", "4")
    assert code == 0, out


def test_verify_eha(capsys):
    code, out, _ = run(capsys, "verify", "eha-relations", "--max-degree", "3", "--json")
    assert code == 0
    report = Report.from_json(json.loads(out))
    assert report.passed and report.checks


def test_verify_unknown_suite(capsys):
    code, _, err = run(capsys, "verify", "nope")
    assert code == 2 and "unknown suite" in err


def test_negative_max_degree(capsys):
    code, _, _ = run(capsys, "verify", "trace", "--max-degree", "-1")
    assert code == 2


def test_intertwine_examples(capsys):
    code, out, _ = run(capsys, "intertwine", "--r", "1", "--d", "2", "--gens", "H(1,0),H(1,1),H(-1,2),P(0,1)")
    assert code == 0, out
    code, _, err = run(capsys, "intertwine", "--r", "1", "--gens", "H(-1,1)")
    assert code == 2 and "m > -n r" in err
    code, out, _ = run(capsys, "intertwine", "--r", "1", "--d", "1", "--gens", "H(-1,1)", "--allow-boundary")
    assert code == 0 and "u1" in out
    code, _, _ = run(capsys, "intertwine", "--gens", "bogus")
    assert code == 2


def test_shuffle_command(capsys):
    code, out, _ = run(capsys, "shuffle", "1,1", "1,0")
    assert code == 0 and "z1" in out
    code, out, _ = run(capsys, "shuffle", "1,1", "1,2", "--check", "--max-degree", "2")
    assert code == 0
    code, _, _ = run(capsys, "shuffle", "1", "1,2")
    assert code == 2


def test_localize(capsys):
    code, out, _ = run(capsys, "localize", "p1", "--r", "1", "--d", "1", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["r"] == 1 and len(data["entries"]) == 1


def test_trace_command(capsys):
    code, out, _ = run(capsys, "trace", "--k", "4")
    assert code == 0


def test_console_script():
    res = subprocess.run([sys.executable, "-m", "hallfock.cli", "verify", "trace", "--k", "3"],
                         capture_output=True, text=True)
    assert res.returncode == 0


def test_report_json_round_trip():
    r = Report("demo")
    r.add("x = x", {"k": 1}, True)
    r.add("y = z", {"k": 2}, False, witness="y - z = 1")
    s = Report.from_json(json.loads(r.dumps()))
    assert s.to_json() == r.to_json()
    assert not s.passed
    assert [c.params for c in s.failures()] == [{"k": 2}]
    assert isinstance(s.checks[0], Check)
    assert "FAIL" in r.text() or "fail" in r.text()


def test_parallel_map_order(monkeypatch):
    monkeypatch.setenv("HALLFOCK_THREADS", "3")
    assert thread_count() == 3
    assert parallel_map(lambda x: x * x, range(20)) == [x * x for x in range(20)]
