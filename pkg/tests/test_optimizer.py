import numpy as np
import pytest

from oracles import haar, haar_batch
from seqgap.gatelib import GateSpec, SystemShape, build_gate, build_isometry, embed_with_ancilla
from seqgap.numerics import spectral_norm
from seqgap.optimizer import (
    GeneratorMoves,
    InitMode,
    LocalSpectralCost,
    Metric,
    OptimizationFailed,
    OptimizerConfig,
    coordinate_search,
    local_polar_update,
    optimize_frobenius,
    optimize_isometry,
    optimize_pnorm,
    partial_trace_env,
    schatten_norm,
    sweep_order,
)
from seqgap.numerics import generalized_gell_mann, product_basis
from seqgap.seqmpo import SequentialMPO, contract_to_dense, environment

FAST = OptimizerConfig(restarts=3, max_sweeps=300)


def target(kind, n, d=2, **kw):
    return embed_with_ancilla(build_gate(GateSpec(kind, SystemShape(n), **kw)), d)


def test_config_validation():
    with pytest.raises(ValueError):
        OptimizerConfig(rel_tol=0)
    with pytest.raises(ValueError):
        OptimizerConfig(restarts=0)
    with pytest.raises(ValueError):
        OptimizerConfig(pnorm_step=1e-5, pnorm_min_step=1e-4)
    with pytest.raises(ValueError):
        OptimizerConfig(metric="L1")
    assert OptimizerConfig(seed=5, restarts=3).restart_seeds() == [5, 6, 7]


def test_sweep_order():
    assert sweep_order(1) == [0]
    assert sweep_order(4) == [0, 1, 2, 3, 2, 1, 0]


def test_partial_trace_env_matches_environment():
    shape = SystemShape(3, 2)
    mpo = SequentialMPO.random(shape, 1)
    t = haar(16, np.random.default_rng(2))
    # with sites 2, 3 fixed, M_1 = W_2^dag W_3^dag T and E_1 = Tr_rest M_1
    m = contract_to_dense([np.eye(4), *mpo.matrices[1:]]).conj().T @ t
    assert np.allclose(partial_trace_env(m, 0, 3, 2), environment(mpo, t, 1))


def test_polar_update_maximises_overlap():
    rng = np.random.default_rng(0)
    env = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
    w = local_polar_update(env)
    best = np.vdot(env, w).real
    assert np.isclose(best, np.linalg.svd(env, compute_uv=False).sum())
    us = haar_batch(2000, 6, rng)
    assert np.all(np.einsum("ij,kij->k", env.conj(), us).real <= best + 1e-12)


@pytest.mark.parametrize("kind,n,gap", [
    ("CNOT", 2, 1 - 1 / np.sqrt(2)),
    ("CZ", 2, 1 - 1 / np.sqrt(2)),
    ("SWAP", 2, 0.5),
    ("FREDKIN", 3, 0.25),
])
def test_frobenius_closed_form_gaps(kind, n, gap):
    t = target(kind, n)
    res = optimize_frobenius(t, SystemShape(n, 2), FAST)
    assert abs(res.cost / (2 * t.shape[0]) - gap) < 1e-6


def test_cphase_gap_closed_form():
    # for CPHASE(phi) the optimum is 1 - cos(phi / 4)
    for phi in (np.pi / 2, 1.0):
        t = target("CPHASE", 2, phase=phi)
        res = optimize_frobenius(t, SystemShape(2, 2), FAST)
        assert abs(res.cost / 16 - (1 - np.cos(phi / 4))) < 1e-6


def test_frobenius_trace_monotone_and_reported():
    t = target("RANDOM_UNITARY", 3, seed=4)
    res = optimize_frobenius(t, SystemShape(3, 2), FAST)
    c = np.array(res.trace.costs)
    assert np.all(np.diff(c) <= 1e-10 * t.shape[0])
    assert res.trace.sweeps_used == len(c) - 1
    assert len(res.restarts) == 3 and res.costs.min() == res.cost
    mpo, trace = res
    assert np.isclose(np.linalg.norm(t - contract_to_dense(mpo)) ** 2, res.cost)
    assert trace.to_csv().startswith("sweep,cost\n0,")


def test_identity_init_is_single_restart():
    res = optimize_frobenius(target("CNOT", 2), SystemShape(2, 2),
                             OptimizerConfig(init_mode=InitMode.IDENTITY, restarts=5))
    assert len(res.restarts) == 1


def test_seeded_runs_are_reproducible():
    t = target("RANDOM_UNITARY", 3, seed=1)
    a = optimize_frobenius(t, SystemShape(3, 2), FAST)
    b = optimize_frobenius(t, SystemShape(3, 2), FAST)
    assert a.trace.costs == b.trace.costs
    for x, y in zip(a.mpo.matrices, b.mpo.matrices):
        assert np.array_equal(x, y)


def test_plant_and_recover():
    shape = SystemShape(3, 3)
    t = contract_to_dense(SequentialMPO.random(shape, 9))
    res = optimize_frobenius(t, shape, OptimizerConfig(restarts=3, max_sweeps=2000, rel_tol=1e-12))
    assert res.cost < 1e-8


def test_target_shape_checked():
    with pytest.raises(ValueError):
        optimize_frobenius(np.eye(7), SystemShape(2, 2))
    with pytest.raises(ValueError):
        optimize_frobenius(np.full((8, 8), np.nan), SystemShape(2, 2))


def test_all_restarts_failing_raises(monkeypatch):
    from seqgap import optimizer

    def boom(*a, **k):
        raise FloatingPointError("boom")

    monkeypatch.setattr(optimizer, "frobenius_run", boom)
    with pytest.raises(OptimizationFailed):
        optimize_frobenius(target("CNOT", 2), SystemShape(2, 2), FAST)


def test_failed_restart_is_skipped(monkeypatch):
    from seqgap import optimizer
    real = optimizer.frobenius_run
    calls = []

    def flaky(*a, **k):
        calls.append(1)
        if len(calls) == 1:
            raise FloatingPointError("first restart diverged")
        return real(*a, **k)

    monkeypatch.setattr(optimizer, "frobenius_run", flaky)
    res = optimize_frobenius(target("CNOT", 2), SystemShape(2, 2), FAST)
    assert not res.restarts[0].ok and len(res.costs) == 2


def test_isometry_toffoli_one_to_three_gapless():
    shape = SystemShape(3, 2, 1)
    v = build_isometry(GateSpec("TOFFOLI", shape))
    res = optimize_isometry(v, shape, cfg=FAST)
    assert res.cost < 1e-8


def test_isometry_toffoli_two_to_three_depends_on_fixed_state():
    shape = SystemShape(3, 4, 2)
    plus = [np.array([1, 1]) / np.sqrt(2)]
    v_plus = build_isometry(GateSpec("TOFFOLI", shape), plus)
    assert optimize_isometry(v_plus, shape, plus, cfg=FAST).cost < 1e-8
    v0 = build_isometry(GateSpec("TOFFOLI", shape))
    gap = optimize_isometry(v0, shape, cfg=FAST).cost / 8
    assert abs(gap - (1 - np.cos(np.pi / 8))) < 1e-6


def test_isometry_rejects_pnorm():
    shape = SystemShape(3, 2, 1)
    with pytest.raises(ValueError):
        optimize_isometry(build_isometry(GateSpec("TOFFOLI", shape)), shape,
                          cfg=OptimizerConfig(metric=Metric.PNORM2))


def test_schatten_norm_limits():
    s = np.array([3.0, 2.0, 1.0])
    assert schatten_norm(s, np.inf) == 3.0
    assert np.isclose(schatten_norm(s, 2), np.sqrt(14))
    assert schatten_norm(np.zeros(3), 4) == 0.0
    assert 3.0 <= schatten_norm(s, 128) < 3.0 + 1e-12


def test_local_spectral_cost_matches_dense():
    n, d = 3, 2
    rng = np.random.default_rng(3)
    m = rng.standard_normal((16, 16)) + 1j * rng.standard_normal((16, 16))
    w = haar(4, rng)
    from seqgap.seqmpo import embed_site
    for k in range(n):
        f = LocalSpectralCost(m, k, n, d)
        assert np.isclose(f(w), spectral_norm(m - embed_site(w, k, n, d)))


def test_coordinate_search_descends_to_target():
    basis = product_basis(generalized_gell_mann(2), generalized_gell_mann(2))
    moves = GeneratorMoves(basis)
    goal = haar(4, np.random.default_rng(1))
    f = lambda w: spectral_norm(w - goal)
    w, best, used, evals = coordinate_search(f, np.eye(4, dtype=complex), moves, 0.3, 1e-6, 5000)
    assert best < f(np.eye(4))
    assert best < 1e-3 and used > 0 and evals > 1
    assert np.allclose(w.conj().T @ w, np.eye(4))


def test_pnorm_cnot_and_best_bound():
    t = target("CNOT", 2, d=2)
    cfg = OptimizerConfig(metric=Metric.PNORM2, init_mode=InitMode.FROBENIUS, restarts=2,
                          max_sweeps=10, rel_tol=1e-6)
    res = optimize_pnorm(t, SystemShape(2, 2), cfg)
    v = contract_to_dense(res.mpo)
    assert np.isclose(spectral_norm(t - v) ** 2, res.cost)
    assert abs(res.cost / 4 - (1 - 1 / np.sqrt(2)) / 2) < 1e-3
    for s in res.mpo.sites:
        assert s.h_coeffs is not None and s.h_coeffs.size == 16
    # the spectral-norm cost never exceeds that of the Frobenius start
    assert res.trace.costs[-1] <= res.trace.costs[0] + 1e-12


def test_polar_update_simple_cases():
    u = haar(4, np.random.default_rng(5))
    assert np.allclose(local_polar_update(u), u)
    assert np.allclose(local_polar_update(np.diag([3.0, 0.5])), np.eye(2))


def test_identity_target_converges_immediately():
    shape = SystemShape(3, 2)
    res = optimize_frobenius(np.eye(shape.dim), shape,
                             OptimizerConfig(init_mode=InitMode.IDENTITY))
    assert res.cost < 1e-12 and res.trace.sweeps_used == 1
