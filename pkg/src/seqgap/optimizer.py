"""Variational sweeps over the sites of a sequential decomposition.

Both metrics share the same bookkeeping. With the chain written as
``V = A_k W_k B_k`` (``B_k`` the sites before k, ``A_k`` those after), the
matrix ``M_k = A_k^dagger T B_k^dagger`` carries everything site k sees:

* Frobenius: ``Re Tr[T^dagger V] = Re Tr[E_k^dagger W_k]`` with ``E_k`` the
  partial trace of ``M_k`` over all qubits but k, so the best site is the
  unitary polar factor of ``E_k``;
* spectral norm: ``||T - V||_2 = ||M_k - (1 (x) W_k)||_2`` because ``A_k`` and
  ``B_k`` are unitary.

Moving the hole one site to the right is ``M_{k+1} = W_{k+1} M_k W_k^dagger``.
"""

from __future__ import annotations

import enum
import logging
import time
from dataclasses import dataclass, field, replace

import numpy as np

from .gatelib import SystemShape
from .numerics import (
    SVDConvergenceError,
    frobenius_norm_sq,
    generalized_gell_mann,
    generator_coefficients,
    haar_random_unitary,
    product_basis,
    svd,
)
from .seqmpo import SequentialMPO, apply_site, isometry_effective_target

log = logging.getLogger(__name__)


class Metric(str, enum.Enum):
    FROBENIUS = "FROBENIUS"
    PNORM2 = "PNORM2"


class InitMode(str, enum.Enum):
    IDENTITY = "IDENTITY"
    HAAR_RANDOM = "HAAR_RANDOM"
    # Haar start followed by polar-update sweeps on the Frobenius cost
    FROBENIUS = "FROBENIUS"


class OptimizationFailed(RuntimeError):
    """Every restart of an optimization aborted."""


@dataclass(frozen=True)
class OptimizerConfig:
    metric: Metric = Metric.FROBENIUS
    max_sweeps: int = 500
    rel_tol: float = 1e-9
    restarts: int = 10
    init_mode: InitMode = InitMode.HAAR_RANDOM
    seed: int = 0
    pnorm_step: float = 0.3
    pnorm_min_step: float = 1e-4
    pnorm_max_iters_per_site: int = 200

    def __post_init__(self):
        object.__setattr__(self, "metric", Metric(self.metric))
        object.__setattr__(self, "init_mode", InitMode(self.init_mode))
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if self.restarts < 1 or self.max_sweeps < 1 or self.pnorm_max_iters_per_site < 1:
            raise ValueError("restarts, max_sweeps and pnorm_max_iters_per_site must be >= 1")
        if not 0 < self.pnorm_min_step <= self.pnorm_step:
            raise ValueError("need 0 < pnorm_min_step <= pnorm_step")

    def restart_seeds(self) -> list[int]:
        """Seeds of the individual restarts; restart r uses ``seed + r``."""
        return [self.seed + r for r in range(self.restarts)]


@dataclass
class ConvergenceTrace:
    costs: list[float] = field(default_factory=list)
    converged: bool = False
    sweeps_used: int = 0
    wall_time: float = 0.0

    def to_csv(self) -> str:
        lines = ["sweep,cost"]
        lines += [f"{i},{c!r}" for i, c in enumerate(self.costs)]
        return "\n".join(lines) + "\n"


@dataclass
class RestartResult:
    seed: int
    mpo: SequentialMPO | None
    cost: float
    trace: ConvergenceTrace
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


@dataclass
class OptimizationResult:
    """Best chain plus the per-restart record."""

    mpo: SequentialMPO
    trace: ConvergenceTrace
    cost: float
    restarts: list[RestartResult]

    @property
    def costs(self) -> np.ndarray:
        return np.array([r.cost for r in self.restarts if r.ok])

    def __iter__(self):
        # allows ``mpo, trace = optimize_frobenius(...)``
        return iter((self.mpo, self.trace))


# ---------------------------------------------------------------------------
# hole-matrix bookkeeping


def _right_mul_adj(m, w, k, n, d):
    """``m @ embed(w)^dagger``."""
    return apply_site(w, m.conj().T, k, n, d).conj().T


def _right_mul(m, w, k, n, d):
    """``m @ embed(w)``."""
    return apply_site(w.conj().T, m.conj().T, k, n, d).conj().T


def _initial_hole(target, mats, n, d):
    """``M_1 = W_2^dagger ... W_N^dagger T``."""
    m = target
    for k in range(n - 1, 0, -1):
        m = apply_site(mats[k].conj().T, m, k, n, d)
    return m


def partial_trace_env(m, k, n, d):
    """Partial trace of ``m`` over every qubit except ``k`` (0-based)."""
    t = m.reshape(2**k, 2, 2 ** (n - k - 1), d, 2**k, 2, 2 ** (n - k - 1), d)
    return np.einsum("liraljrb->iajb", t).reshape(2 * d, 2 * d)


def local_polar_update(env) -> np.ndarray:
    """Unitary ``W`` maximising ``Re Tr[env^dagger W]``: the polar factor of ``env``."""
    u, _, v = svd(env)
    return u @ v.conj().T


def sweep_order(n: int) -> list[int]:
    """Sites visited in one sweep (0-based): right then back left."""
    return list(range(n)) + list(range(n - 2, -1, -1)) if n > 1 else [0]


def _init_mats(shape: SystemShape, mode: InitMode, seed) -> list[np.ndarray]:
    """Starting sites; FROBENIUS mode starts from Haar sites and is refined later."""
    d2 = 2 * shape.ancilla_dim
    if mode is InitMode.IDENTITY:
        return [np.eye(d2, dtype=np.complex128) for _ in range(shape.n_qubits)]
    rng = np.random.default_rng(seed)
    return [haar_random_unitary(d2, rng) for _ in range(shape.n_qubits)]


def _check_target(target, shape: SystemShape) -> np.ndarray:
    t = np.asarray(target, dtype=np.complex128)
    if t.shape != (shape.dim, shape.dim):
        raise ValueError(f"target must be {shape.dim}x{shape.dim} for {shape}, got {t.shape}")
    if not np.all(np.isfinite(t)):
        raise ValueError("target has non-finite entries")
    return t


def _converged(prev: float, cur: float, scale: float, rel_tol: float) -> bool:
    return abs(prev - cur) <= rel_tol * max(abs(cur), 1e-12 * scale)


# ---------------------------------------------------------------------------
# Frobenius metric


def frobenius_run(target, shape: SystemShape, mats, cfg: OptimizerConfig,
                  seq_norm_sq: float | None = None):
    """One restart of polar-update sweeps starting from ``mats``.

    ``seq_norm_sq`` is the squared Frobenius norm of the sequential operator
    as it enters the cost (``2^N D`` for unitaries, ``2^M`` for isometries).
    Returns ``(mats, cost, trace)``; ``trace.costs[0]`` is the initial cost.
    """
    t0 = time.perf_counter()
    n, d = shape.n_qubits, shape.ancilla_dim
    mats = [np.array(w, dtype=np.complex128) for w in mats]
    const = frobenius_norm_sq(target) + (shape.dim if seq_norm_sq is None else seq_norm_sq)
    trace = ConvergenceTrace()

    m = _initial_hole(target, mats, n, d)
    env = partial_trace_env(m, 0, n, d)
    cost = const - 2 * np.vdot(env, mats[0]).real
    trace.costs.append(float(cost))
    order = sweep_order(n)
    for sweep in range(cfg.max_sweeps):
        pos = 0
        for step, k in enumerate(order):
            if step > 0:
                if k > pos:
                    m = _right_mul_adj(apply_site(mats[k], m, k, n, d), mats[pos], pos, n, d)
                else:
                    m = _right_mul(apply_site(mats[pos].conj().T, m, pos, n, d), mats[k], k, n, d)
                pos = k
            env = partial_trace_env(m, k, n, d)
            mats[k] = local_polar_update(env)
        cost = const - 2 * np.vdot(env, mats[pos]).real
        trace.costs.append(float(cost))
        trace.sweeps_used = sweep + 1
        if not np.isfinite(cost):
            raise FloatingPointError("non-finite Frobenius cost")
        if _converged(trace.costs[-2], cost, const, cfg.rel_tol):
            trace.converged = True
            break
    trace.wall_time = time.perf_counter() - t0
    return mats, max(float(cost), 0.0), trace


def _multi_restart(run_one, shape, cfg: OptimizerConfig, seeds=None,
                   target=None) -> OptimizationResult:
    results = []
    for seed in seeds if seeds is not None else cfg.restart_seeds():
        try:
            init = _init_mats(shape, cfg.init_mode, seed)
            if cfg.init_mode is InitMode.FROBENIUS:
                init, _, _ = frobenius_run(target, shape, init, replace(cfg, max_sweeps=500))
            mats, cost, trace, h = run_one(init)
            mpo = SequentialMPO.from_matrices(shape, mats, h)
            results.append(RestartResult(seed, mpo, cost, trace))
        except (SVDConvergenceError, FloatingPointError, np.linalg.LinAlgError) as exc:
            log.warning("restart with seed %s aborted: %s", seed, exc)
            results.append(RestartResult(seed, None, float("nan"), ConvergenceTrace(), str(exc)))
        if cfg.init_mode is InitMode.IDENTITY:
            break  # identical starts give identical runs
    good = [r for r in results if r.ok]
    if not good:
        raise OptimizationFailed("; ".join(r.error for r in results))
    best = min(good, key=lambda r: r.cost)
    return OptimizationResult(best.mpo, best.trace, best.cost, results)


def optimize_frobenius(target, shape: SystemShape, cfg: OptimizerConfig | None = None,
                       seeds=None) -> OptimizationResult:
    """Minimise ``||T - V||_F^2`` over sequential chains, best of all restarts.

    ``target`` is the ``2^N D`` square operator (typically ``U (x) 1_D``).
    """
    cfg = cfg or OptimizerConfig()
    t = _check_target(target, shape)

    def run(init):
        mats, cost, trace = frobenius_run(t, shape, init, cfg)
        return mats, cost, trace, None

    return _multi_restart(run, shape, cfg, seeds)


def optimize_isometry(target_isometry, shape: SystemShape, psi_initial=None, phi_initial=None,
                      cfg: OptimizerConfig | None = None, seeds=None) -> OptimizationResult:
    """Minimise ``||V_target - V_seq||_F^2`` for an M -> N isometry.

    The chain is fed the same initial states as the target; the first
    ``shape.input_qubits`` qubits stay free.
    """
    cfg = cfg or OptimizerConfig()
    if cfg.metric is not Metric.FROBENIUS:
        raise ValueError("isometry mode supports the Frobenius metric only")
    t = isometry_effective_target(target_isometry, shape, psi_initial, phi_initial)
    seq_norm = float(2**shape.input_qubits)

    def run(init):
        mats, cost, trace = frobenius_run(t, shape, init, cfg, seq_norm_sq=seq_norm)
        return mats, cost, trace, None

    return _multi_restart(run, shape, cfg, seeds)


# ---------------------------------------------------------------------------
# spectral-norm metric


def _block_view(m, k, n, d):
    """Reorder ``m`` so site ``k``'s (qubit, ancilla) pair is the fastest index.

    Returns an ``(O*2d, O*2d)`` array in which ``1 (x) W`` is block diagonal.
    """
    o = 2 ** (n - 1)
    t = m.reshape(2**k, 2, 2 ** (n - k - 1), d, 2**k, 2, 2 ** (n - k - 1), d)
    return t.transpose(0, 2, 1, 3, 4, 6, 5, 7).reshape(o * 2 * d, o * 2 * d)


def schatten_norm(s, q: float) -> float:
    """``(sum s_i^q)^(1/q)`` of singular values ``s``; ``q = inf`` is the largest."""
    top = s[0]
    if np.isinf(q) or top == 0.0:
        return float(top)
    return float(top * np.sum((s / top) ** q) ** (1.0 / q))


class LocalSpectralCost:
    """``W -> ||M - 1 (x) W||`` for one site, in the spectral or a Schatten-q norm."""

    def __init__(self, m, k, n, d, q=np.inf):
        self.blocks = _block_view(m, k, n, d)
        self.n_blocks = 2 ** (n - 1)
        self.d2 = 2 * d
        self.q = q
        self._diag = np.arange(self.n_blocks)

    def __call__(self, w) -> float:
        x = self.blocks.copy()
        xv = x.reshape(self.n_blocks, self.d2, self.n_blocks, self.d2)
        xv[self._diag, :, self._diag, :] -= w
        return schatten_norm(np.linalg.svd(x, compute_uv=False), self.q)


class GeneratorMoves:
    """Cached ``exp(-/+ i s G_l)`` for every element ``G_l`` of a generator basis."""

    def __init__(self, generators):
        self.eigvals, self.eigvecs = np.linalg.eigh(generators)
        self._cache = {}

    def __len__(self):
        return len(self.eigvals)

    def steps(self, s: float) -> np.ndarray:
        """Array ``E[l, 0] = exp(-i s G_l)``, ``E[l, 1] = exp(+i s G_l)``."""
        if s not in self._cache:
            ph = np.exp(-1j * np.array([s, -s])[None, :, None] * self.eigvals[:, None, :])
            v = self.eigvecs
            self._cache[s] = np.einsum("lij,lsj,lkj->lsik", v, ph, v.conj())
        return self._cache[s]


def coordinate_search(f, w0, moves: GeneratorMoves, step: float, min_step: float,
                      max_iters: int):
    """Derivative-free descent of ``f`` over unitaries ``W``.

    The coordinates are the generator directions: a trial move is
    ``W exp(-/+ i step G_l)``, re-centred on every accepted move. A pass over
    all directions without improvement halves ``step``; the search ends once
    ``step < min_step`` or after ``max_iters`` passes. Returns
    ``(W, f(W), largest step that improved f, n_evals)``.
    """
    w = w0
    best = f(w)
    evals = 1
    used = 0.0
    for _ in range(max_iters):
        e = moves.steps(step)
        improved = False
        for l in range(len(moves)):
            for sgn in (0, 1):
                cand = w @ e[l, sgn]
                val = f(cand)
                evals += 1
                if val < best:
                    w, best, improved = cand, val, True
                    used = max(used, step)
                    break
        if not improved:
            step *= 0.5
            if step < min_step:
                break
    return w, best, used, evals


PNORM_SMOOTHING = (8.0, 32.0, 128.0)


def pnorm_run(target, shape: SystemShape, mats, cfg: OptimizerConfig,
              smoothing=PNORM_SMOOTHING):
    """One restart of spectral-norm sweeps; returns ``(mats, cost, trace, h)``.

    Sweeps first minimise Schatten-q norms for the increasing exponents in
    ``smoothing`` (a continuation that steers the search away from the kinks
    of the spectral norm), then the spectral norm itself. Each stage stops
    on ``cfg.rel_tol`` or after ``cfg.max_sweeps`` sweeps. The returned cost
    is ``||T - V||_2^2``; ``trace.costs`` records it after every sweep.
    """
    t0 = time.perf_counter()
    n, d = shape.n_qubits, shape.ancilla_dim
    basis_q, basis_a = generalized_gell_mann(2), generalized_gell_mann(d)
    moves = GeneratorMoves(product_basis(basis_q, basis_a))
    mats = [np.array(w, dtype=np.complex128) for w in mats]
    trace = ConvergenceTrace()
    order = sweep_order(n)

    m = _initial_hole(target, mats, n, d)
    trace.costs.append(LocalSpectralCost(m, 0, n, d)(mats[0]) ** 2)
    # each site restarts its search at twice the last step that helped it
    steps = [cfg.pnorm_step] * n
    all_converged = True
    for q in tuple(smoothing) + (np.inf,):
        stage_prev = np.inf
        stage_converged = False
        for _ in range(cfg.max_sweeps):
            pos = 0
            for step, k in enumerate(order):
                if step > 0:
                    if k > pos:
                        m = _right_mul_adj(apply_site(mats[k], m, k, n, d), mats[pos], pos, n, d)
                    else:
                        m = _right_mul(apply_site(mats[pos].conj().T, m, pos, n, d), mats[k], k, n, d)
                    pos = k
                f = LocalSpectralCost(m, k, n, d, q)
                mats[k], val, used, _ = coordinate_search(
                    f, mats[k], moves, steps[k], cfg.pnorm_min_step, cfg.pnorm_max_iters_per_site)
                steps[k] = min(cfg.pnorm_step, max(2.0 * used, 4.0 * cfg.pnorm_min_step))
            if not np.isfinite(val):
                raise FloatingPointError("non-finite spectral-norm cost")
            trace.costs.append(LocalSpectralCost(m, pos, n, d)(mats[pos]) ** 2)
            trace.sweeps_used += 1
            if _converged(stage_prev, val, 2.0, cfg.rel_tol):
                stage_converged = True
                break
            stage_prev = val
        all_converged &= stage_converged
    trace.converged = all_converged
    trace.wall_time = time.perf_counter() - t0
    hs = [generator_coefficients(w, basis_q, basis_a) for w in mats]
    return mats, float(trace.costs[-1]), trace, hs


def optimize_pnorm(target, shape: SystemShape, cfg: OptimizerConfig | None = None,
                   seeds=None) -> OptimizationResult:
    """Minimise ``||T - V||_2^2`` by coordinate search over each site's generators.

    Restarts are warm-started from the Frobenius optimum of the same seed when
    ``cfg.init_mode`` is ``FROBENIUS``.
    """
    cfg = cfg or OptimizerConfig(metric=Metric.PNORM2, init_mode=InitMode.FROBENIUS,
                                 restarts=5, max_sweeps=20, rel_tol=1e-6)
    t = _check_target(target, shape)
    return _multi_restart(lambda init: pnorm_run(t, shape, init, cfg), shape, cfg, seeds,
                          target=t)
