import time
from fractions import Fraction

import pytest
from mpmath import mp, mpf

from zetabounds.errors import FixtureError
from zetabounds.numerics import CONSTANTS, PrecisionContext
from zetabounds.tables import (
    TABLE_IDS,
    find_row,
    load_fixture,
    parse_fixture,
    parse_value,
    q_ladder,
    reproduce_row,
    reproduce_table,
    row_tolerance,
    table_rows,
)


def test_parse_value_forms():
    assert parse_value("7.59*10^31") == Fraction(759, 100) * 10**31
    assert parse_value("10^12") == 10**12
    assert parse_value("2/3") == Fraction(2, 3)
    assert parse_value("0.030648") == Fraction(30648, 10**6)
    assert parse_value("H") == CONSTANTS.H
    assert parse_value("1/W0") == 1 / CONSTANTS.W0
    ee = parse_value("e^e")
    with mp.workdps(80):
        assert ee.contains(mp.e ** mp.e)
        assert parse_value("2exp(e^2)").contains(2 * mp.exp(mp.e**2))
    with pytest.raises(FixtureError):
        parse_value("abc")


def test_parse_fixture_errors(tmp_path):
    with pytest.raises(FixtureError, match="line 1"):
        parse_fixture("Q; W=1; d=1")
    with pytest.raises(FixtureError, match="unknown table"):
        parse_fixture("Z; W=1; d=1; 3")
    with pytest.raises(FixtureError, match="bad parameter"):
        parse_fixture("Q; W=1; d; 3")
    with pytest.raises(FixtureError, match="not found"):
        load_fixture(tmp_path / "missing.txt")
    with pytest.raises(FixtureError):
        table_rows("nope")


def test_fixture_contents():
    rows = load_fixture()
    counts = {t: len(table_rows(t, rows)) for t in TABLE_IDS}
    assert counts["Q"] == 38 and counts["QRH"] == 11 and counts["Y"] == 9 and counts["Yprime"] == 9
    assert counts["B1"] == 3
    r = find_row("Y", "W=13.0", rows)
    assert r.published_value == 1719 and row_tolerance(r) == 1e-3
    assert row_tolerance(find_row("Q", "W=10", rows)) == 1e-2
    with pytest.raises(FixtureError):
        find_row("Q", "W=4", rows)


def test_custom_fixture(tmp_path):
    p = tmp_path / "f.txt"
    p.write_text("# one row\nQRH; sigma0=1; epsilon=0.037999 sigma1=1.889284 eta=3.054339 t0=13; 8.101\n")
    rep = reproduce_table("QRH", PrecisionContext(30), fixture=p)
    assert len(rep.rows) == 1 and rep.passed


def test_q_ladder():
    lad = q_ladder()
    ws = [w for w, _ in lad.entries]
    assert ws == sorted(ws) and ws[0] == Fraction("5.559") and ws[-1] == 13
    sub = lad.restrict(10)
    assert sub.entries[0] == (10, Fraction("71.220")) and len(sub.entries) == 4
    qs = [q for _, q in lad.entries]
    assert qs == sorted(qs, reverse=True)


@pytest.mark.parametrize("tid,key,published", [
    ("Q", "W=12", "56.653"),
    ("QRH", "sigma0=0.51", "31447"),
    ("Yprime", "W=6", "6.99e9"),
    ("B1", "t0=3", "2.1173"),
])
def test_spot_rows(tid, key, published):
    r = reproduce_row(find_row(tid, key), PrecisionContext(40))
    assert r.passed
    with mp.workdps(30):
        assert abs(r.recomputed.mid / mpf(published) - 1) <= r.tolerance


def test_w13_y_row_tight():
    r = reproduce_row(find_row("Y", "W=13"), PrecisionContext(40))
    assert r.passed and r.rel_diff <= 1e-3


@pytest.mark.parametrize("tid,limit", [("Q", 10), ("QRH", 5), ("Y", 5), ("Yprime", 5), ("B1", 5)])
def test_tables_reproduce(tid, limit):
    t = time.perf_counter()
    rep = reproduce_table(tid)
    elapsed = time.perf_counter() - t
    assert rep.passed, [(r.key, r.rel_diff, r.failed_conditions) for r in rep.failures()]
    assert elapsed < limit


def test_sigma1_table():
    t = time.perf_counter()
    rep = reproduce_table("SIGMA1", starts=8)
    assert rep.passed, [(r.key, r.rel_diff) for r in rep.failures()]
    assert time.perf_counter() - t < 60


def test_tolerance_zero_fails():
    rep = reproduce_table("QRH", tolerance=0.0)
    assert not rep.passed
