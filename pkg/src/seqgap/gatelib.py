"""Target operators: named gates, generalized CNOT families, random targets.

Conventions used throughout the package:

* qubit 1 is the most significant tensor factor of the computational basis;
* the ancilla is the trailing (least significant) factor.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import reduce

import numpy as np

from .numerics import as_matrix, haar_random_unitary


@dataclass(frozen=True)
class SystemShape:
    """Problem size: ``n_qubits`` N, ``ancilla_dim`` D, ``input_qubits`` M."""

    n_qubits: int
    ancilla_dim: int = 2
    input_qubits: int | None = None

    def __post_init__(self):
        if self.input_qubits is None:
            object.__setattr__(self, "input_qubits", self.n_qubits)
        if self.n_qubits < 1:
            raise ValueError(f"n_qubits must be >= 1, got {self.n_qubits}")
        if self.ancilla_dim < 2:
            raise ValueError(f"ancilla_dim must be >= 2, got {self.ancilla_dim}")
        if not 1 <= self.input_qubits <= self.n_qubits:
            raise ValueError(
                f"input_qubits must lie in 1..{self.n_qubits}, got {self.input_qubits}"
            )

    @property
    def qubit_dim(self) -> int:
        return 2**self.n_qubits

    @property
    def dim(self) -> int:
        """Dimension of the joint qubits+ancilla space."""
        return 2**self.n_qubits * self.ancilla_dim

    @property
    def is_isometry(self) -> bool:
        return self.input_qubits < self.n_qubits


class GateKind(str, enum.Enum):
    CNOT = "CNOT"
    CZ = "CZ"
    CPHASE = "CPHASE"
    SWAP = "SWAP"
    TOFFOLI = "TOFFOLI"
    FREDKIN = "FREDKIN"
    GEN_CNOT_1 = "GEN_CNOT_1"
    GEN_CNOT_2 = "GEN_CNOT_2"
    RANDOM_UNITARY = "RANDOM_UNITARY"
    RANDOM_ISOMETRY = "RANDOM_ISOMETRY"
    CUSTOM = "CUSTOM"


_FIXED_QUBITS = {
    GateKind.CNOT: 2,
    GateKind.CZ: 2,
    GateKind.CPHASE: 2,
    GateKind.SWAP: 2,
    GateKind.TOFFOLI: 3,
    GateKind.FREDKIN: 3,
}

DEFAULT_CPHASE = np.pi / 2


@dataclass(frozen=True)
class GateSpec:
    """A target operator request.

    ``phase`` is only used by CPHASE, ``seed`` by the random kinds and
    ``matrix`` by CUSTOM.
    """

    kind: GateKind
    shape: SystemShape
    phase: float = DEFAULT_CPHASE
    seed: int = 0
    matrix: np.ndarray | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "kind", GateKind(self.kind))
        n = self.shape.n_qubits
        want = _FIXED_QUBITS.get(self.kind)
        if want is not None and n != want:
            raise ValueError(f"{self.kind.value} acts on {want} qubits, shape has N={n}")
        if self.kind in (GateKind.GEN_CNOT_1, GateKind.GEN_CNOT_2) and n < 2:
            raise ValueError(f"{self.kind.value} needs N >= 2")
        if self.kind is GateKind.CUSTOM:
            if self.matrix is None:
                raise ValueError("CUSTOM gate needs a matrix")
            m = as_matrix(self.matrix, "custom matrix")
            if m.shape != (2**n, 2**n):
                raise ValueError(f"custom matrix has shape {m.shape}, expected {(2**n, 2**n)}")
            object.__setattr__(self, "matrix", m)
        elif self.matrix is not None:
            raise ValueError("matrix is only accepted for CUSTOM gates")

    @property
    def name(self) -> str:
        if self.kind is GateKind.CPHASE:
            return f"CPHASE({self.phase:.6g})"
        if self.kind in (GateKind.RANDOM_UNITARY, GateKind.RANDOM_ISOMETRY):
            return f"{self.kind.value}(seed={self.seed})"
        return self.kind.value


def permutation_matrix(perm) -> np.ndarray:
    """Unitary mapping basis state ``x`` to ``perm[x]``."""
    perm = np.asarray(perm)
    p = np.zeros((perm.size, perm.size), dtype=np.complex128)
    p[perm, np.arange(perm.size)] = 1.0
    return p


def _bits(n: int) -> np.ndarray:
    """Row ``x`` holds the bits of ``x``, qubit 1 first."""
    x = np.arange(2**n)
    return (x[:, None] >> np.arange(n - 1, -1, -1)) & 1


def _from_bits(b: np.ndarray) -> np.ndarray:
    n = b.shape[1]
    return b @ (1 << np.arange(n - 1, -1, -1))


def multi_controlled_not(n: int, controls, target: int) -> np.ndarray:
    """NOT on ``target`` iff all ``controls`` are 1 (0-based qubit indices)."""
    b = _bits(n)
    fire = np.all(b[:, list(controls)] == 1, axis=1) if len(controls) else np.ones(len(b), bool)
    b = b.copy()
    b[fire, target] ^= 1
    return permutation_matrix(_from_bits(b))


def build_gen_cnot_1(n: int) -> np.ndarray:
    """C^(N-1)-NOT: flip qubit N iff qubits 1..N-1 are all set."""
    if n < 2:
        raise ValueError("generalized CNOT needs N >= 2")
    return multi_controlled_not(n, range(n - 1), n - 1)


def build_gen_cnot_2(n: int) -> np.ndarray:
    """Ladder ``C^(1)-NOT . C^(2)-NOT . ... . C^(N-1)-NOT`` (matrix product order).

    ``C^(k)-NOT`` is controlled by qubits ``1..k`` and targets qubit ``k+1``;
    it is padded with identities on qubits ``k+2..N``. The ``k = 1`` factor is
    the leftmost one, so it acts last on a state.
    """
    if n < 2:
        raise ValueError("generalized CNOT needs N >= 2")
    factors = [multi_controlled_not(n, range(k), k) for k in range(1, n)]
    return reduce(np.matmul, factors)


def build_gate(spec: GateSpec) -> np.ndarray:
    """Return the ``2^N x 2^N`` unitary of ``spec`` (no ancilla)."""
    n = spec.shape.n_qubits
    k = spec.kind
    if k is GateKind.CNOT:
        return multi_controlled_not(2, [0], 1)
    if k is GateKind.CZ:
        return np.diag([1, 1, 1, -1]).astype(np.complex128)
    if k is GateKind.CPHASE:
        return np.diag([1, 1, 1, np.exp(1j * spec.phase)]).astype(np.complex128)
    if k is GateKind.SWAP:
        return permutation_matrix([0, 2, 1, 3])
    if k is GateKind.TOFFOLI:
        return multi_controlled_not(3, [0, 1], 2)
    if k is GateKind.FREDKIN:
        return permutation_matrix([0, 1, 2, 3, 4, 6, 5, 7])
    if k is GateKind.GEN_CNOT_1:
        return build_gen_cnot_1(n)
    if k is GateKind.GEN_CNOT_2:
        return build_gen_cnot_2(n)
    if k in (GateKind.RANDOM_UNITARY, GateKind.RANDOM_ISOMETRY):
        return haar_random_unitary(2**n, spec.seed)
    if k is GateKind.CUSTOM:
        return spec.matrix.copy()
    raise ValueError(f"unknown gate kind {k!r}")


def embed_with_ancilla(gate, ancilla_dim: int) -> np.ndarray:
    """``gate (x) 1_D`` with the ancilla as trailing factor."""
    g = np.asarray(gate, dtype=np.complex128)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise ValueError("gate must be square")
    return np.kron(g, np.eye(ancilla_dim))


def _normalized_state(v, dim: int, what: str) -> np.ndarray:
    v = np.asarray(v, dtype=np.complex128).ravel()
    if v.size != dim:
        raise ValueError(f"{what} must have {dim} amplitudes, got {v.size}")
    if abs(np.linalg.norm(v) - 1.0) > 1e-10:
        raise ValueError(f"{what} is not normalized (norm {np.linalg.norm(v):.3g})")
    return v


def default_initial_states(shape: SystemShape):
    """``|0>`` for every fixed qubit and basis state 0 for the ancilla."""
    zero = np.array([1.0, 0.0], dtype=np.complex128)
    anc = np.zeros(shape.ancilla_dim, dtype=np.complex128)
    anc[0] = 1.0
    return [zero] * (shape.n_qubits - shape.input_qubits), anc


def input_embedding(shape: SystemShape, psi_initial=None, phi_initial=None) -> np.ndarray:
    """Isometry ``|x> -> |x> (x) |psi_{M+1}> ... |psi_N> (x) |phi>``.

    Shape ``(2^N * D, 2^M)``: the first M qubits stay free, the rest and the
    ancilla are fed their initial states.
    """
    dpsi, dphi = default_initial_states(shape)
    psi_initial = dpsi if psi_initial is None else list(psi_initial)
    phi_initial = dphi if phi_initial is None else phi_initial
    n_fixed = shape.n_qubits - shape.input_qubits
    if len(psi_initial) != n_fixed:
        raise ValueError(f"need {n_fixed} fixed-qubit initial states, got {len(psi_initial)}")
    col = np.ones(1, dtype=np.complex128)
    for i, s in enumerate(psi_initial):
        col = np.kron(col, _normalized_state(s, 2, f"qubit state {shape.input_qubits + i + 1}"))
    col = np.kron(col, _normalized_state(phi_initial, shape.ancilla_dim, "ancilla state"))
    return np.kron(np.eye(2**shape.input_qubits), col[:, None])


def build_isometry(spec: GateSpec, psi_initial=None, phi_initial=None) -> np.ndarray:
    """Target ``(U (x) 1_D)`` restricted to the given initial states.

    Returns the ``2^N D x 2^M`` isometry whose columns are indexed by the free
    qubits ``1..M``.
    """
    shape = spec.shape
    emb = input_embedding(shape, psi_initial, phi_initial)
    return embed_with_ancilla(build_gate(spec), shape.ancilla_dim) @ emb
