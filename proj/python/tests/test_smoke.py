import pathlib

import pytest

import ccx

DATA = pathlib.Path(__file__).resolve().parents[2] / "data" / "problems"

def test_parse_equations():
    p = ccx.parse_equations("f(X, a) = X\n# comment\nf(a, b) = b\n", "toy")
    assert p.name == "toy"
    assert len(p.equations) == 2
    assert ("f", 2) in p.symbols


def test_tptp_roundtrip():
    p = ccx.parse_equations("f(X, a) = X\n", "toy")
    q = ccx.parse_tptp(p.to_tptp())
    assert q.equations == p.equations


def test_parse_error():
    with pytest.raises(ValueError):
        ccx.parse_tptp("cnf(a, axiom, f(X) = ).")


def test_saturate_and_query():
    p = ccx.parse_equations("f(X) = X\nf(a) = a\n", "idem")
    r = ccx.saturate(p, depth=3)
    assert r.completed
    assert r.derived_class_count >= 1
    assert r.equal("f(f(a))", "a")
    assert r.stats["steps"] >= 1
    assert all(isinstance(c, str) for c in r.classes)


def test_queries_agree_with_ground_blocks():
    p = ccx.parse_equations("f(X) = g(X)\nf(a) = b\n", "toy")
    r = ccx.saturate(p, depth=3)
    blocks = r.ground_blocks()
    for block in blocks:
        for t in block[1:]:
            assert r.equal(block[0], t)
    assert not r.equal("a", "b")
    assert r.equal("g(a)", "b")


def test_bad_query_term():
    p = ccx.parse_equations("f(a) = b\n", "toy")
    r = ccx.saturate(p, depth=2)
    with pytest.raises(ValueError):
        r.equal("q(a)", "b")


def test_run_row():
    p = ccx.load(str(DATA / "absorb3.p"))
    row = ccx.run(p, mode="both", depth=3, timeout_secs=30)
    assert row["status_ccx"] == "done"
    assert row["status_cc"] == "done"
    assert row["classes_ccx"] <= row["classes_cc"]
    assert ccx.CSV_HEADER.startswith("problem,")


def test_ground_cc():
    p = ccx.parse_equations("f(X) = g(X)\nf(a) = b\n", "toy")
    d = ccx.ground_cc(p, depth=3)
    assert d["completed"]
    assert d["nonsingleton"] >= 1
