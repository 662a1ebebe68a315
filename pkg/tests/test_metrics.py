import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import haar
from seqgap.metrics import (
    GapReport,
    csv_rows,
    frobenius_cost,
    gap_frobenius,
    gap_frobenius_renormalized,
    gap_pnorm,
    pnorm_cost,
    reports_to_csv,
    restart_stats,
)


def test_costs_match_direct_norms():
    rng = np.random.default_rng(0)
    t, s = haar(8, rng), haar(8, rng)
    assert np.isclose(frobenius_cost(t, s), np.linalg.norm(t - s) ** 2)
    assert np.isclose(frobenius_cost(t, s, overlap=np.vdot(t, s)), np.linalg.norm(t - s) ** 2)
    assert np.isclose(pnorm_cost(t, s), np.linalg.norm(t - s, 2) ** 2)


def test_identical_operators_have_zero_gap():
    u = haar(4, np.random.default_rng(1))
    assert gap_frobenius(frobenius_cost(u, u), u, u) == pytest.approx(0, abs=1e-14)
    assert gap_pnorm(u, u) == pytest.approx(0, abs=1e-14)


def test_opposite_unitaries():
    # the renormalized and spectral gaps reach 1; the plain Frobenius gap is
    # only bounded by 1 at an optimum (a global phase flip is always available)
    u = haar(4, np.random.default_rng(2))
    c = frobenius_cost(u, -u)
    assert np.isclose(gap_frobenius_renormalized(c, u, -u), 1.0)
    assert np.isclose(gap_pnorm(u, -u), 1.0)
    assert np.isclose(gap_frobenius(c, u, -u), 2.0)


def test_renormalized_gap_is_half_for_unitaries():
    rng = np.random.default_rng(3)
    t, s = haar(8, rng), haar(8, rng)
    c = frobenius_cost(t, s)
    assert abs(gap_frobenius_renormalized(c, t, s) - gap_frobenius(c, t, s) / 2) < 1e-12


def test_zero_denominator_and_shape_errors():
    z = np.zeros((2, 2))
    for f in (lambda: gap_frobenius(0.0, z, z), lambda: gap_pnorm(z, z),
              lambda: gap_frobenius_renormalized(0.0, z, z)):
        with pytest.raises(ValueError):
            f()
    with pytest.raises(ValueError):
        frobenius_cost(np.eye(2), np.eye(3))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 8), st.integers(0, 2**31 - 1))
def test_gap_bounds_for_arbitrary_pairs(n, seed):
    rng = np.random.default_rng(seed)
    t = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    s = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    c = frobenius_cost(t, s)
    for g in (gap_frobenius_renormalized(c, t, s), gap_pnorm(t, s)):
        assert -1e-12 <= g <= 1 + 1e-12
    assert -1e-12 <= gap_frobenius(c, t, s) <= 2 + 1e-12
    assert gap_frobenius_renormalized(c, t, s) <= gap_frobenius(c, t, s) + 1e-12


def test_restart_stats():
    st_ = restart_stats([0.3, 0.1, float("nan"), 0.2])
    assert st_["n"] == 3 and st_["best"] == 0.1 and np.isclose(st_["mean"], 0.2)
    assert restart_stats([])["best"] is None


def test_report_check_and_round_trip():
    r = GapReport("CNOT", 2, 4, 2, cost_frobenius=9.37, gap_frobenius=0.29,
                  gap_frobenius_renorm=0.145, restart_stats={"frobenius": restart_stats([0.29])})
    assert r.check() == []
    back = GapReport.from_json(r.to_json())
    assert back == r
    assert json.loads(r.to_json())["gate"] == "CNOT"
    bad = GapReport("X", 2, 2, 2, gap_frobenius=0.1, gap_frobenius_renorm=0.2, gap_pnorm=1.5)
    assert len(bad.check()) == 2


def test_csv_has_row_per_metric():
    r = GapReport("CNOT", 2, 4, 2, gap_frobenius=0.29, gap_pnorm=0.15, cost_pnorm=0.6)
    rows = csv_rows(r)
    assert [x["metric"] for x in rows] == ["FROBENIUS", "PNORM2"]
    text = reports_to_csv([r])
    lines = text.strip().splitlines()
    assert lines[0].startswith("gate,n_qubits") and len(lines) == 3
    failed = GapReport("CNOT", 2, 4, 2, status="failed", error="boom")
    assert csv_rows(failed)[0]["status"] == "failed"
