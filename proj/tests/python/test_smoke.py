from fractions import Fraction
from math import comb

import pytest

import proppwalk as pw


def test_walk_distribution():
    for t in range(12):
        row = [pw.H(x, t) for x in range(-t, t + 1)]
        assert sum(row) == 1
        for x in range(-t, t + 1, 2):
            assert pw.H(x, t) == Fraction(comb(t, (t + x) // 2), 2**t)


def test_influence():
    assert pw.inf(1, 1) == Fraction(-1, 2)
    for y in range(1, 8):
        t = pw.t_max(y)
        assert abs(pw.inf(y, t)) == Fraction(y * comb(t, (t + y) // 2), t * 2**t)
    assert pw.t_max(5) == 9
    assert 0.976 < pw.inf_time_partial_sum(3, 10**4) < 0.977


def test_c1_small():
    lo, hi = pw.c1_bracket(1)
    assert lo == 1
    lo10, hi10 = pw.c1_bracket(10)
    assert lo <= lo10 <= hi10 <= hi


def test_single_chip():
    c = pw.Configuration({0: 1})
    assert pw.disc_vertex(c, 1, 1) == Fraction(1, 2)
    assert pw.disc_via_splits(c, 1, 1) == Fraction(1, 2)
    run = pw.simulate(c, 10)
    assert run["final"].chips(10) == 1
    assert len(run["splits"]) == 10
    assert run["splits"][0] == (0, 0, "R")


def test_text_round_trip():
    c = pw.Configuration({-3: 5, 1: 2**70}, {4: "L"}, parity="odd")
    assert pw.Configuration.from_text(c.to_text()) == c
    assert c.chips(1) == 2**70


def test_errors():
    with pytest.raises(pw.ConfigError):
        pw.Configuration({0: 1, 1: 1})
    with pytest.raises(pw.ParseError):
        pw.Configuration.from_text("propp-config v1 parity=even\n0 x R\n")


def test_vertex_construction():
    lb = pw.gen_vertex_lb(4)
    assert lb["predicted"] == Fraction(15, 8)
    assert pw.disc_vertex(lb["config"], 0, lb["t0"]) == Fraction(15, 8)


def test_time_construction():
    lb = pw.gen_time_lb(16)
    t0, length = lb["S"]
    assert pw.disc_time(lb["config"], 0, t0, length) == lb["predicted"]


def test_force_text():
    text = "propp-prescription v1 kind=parity parity=even t_hi=1\n0 -2 2 0.1.0\n1 -1 1 1.0\n"
    c = pw.force(text)
    assert c.chips(0) % 2 == 1


def test_cli():
    code, out, _ = pw.run_cli(["c1", "--ycut", "1"])
    assert code == 0
    assert "lower 1.0" in out
    code, _, err = pw.run_cli(["force", "--lowerbound", "nope"])
    assert code == 2
    assert "unknown generator" in err
