"""Sequential ancilla-qubit decomposition stored as a matrix product operator.

A chain of N bipartite unitaries ``W_k`` acting on (qubit k, ancilla). The
ancilla meets qubit 1 first and qubit N last, so as a matrix on the full
space the sequential operator is ``W_N ... W_2 W_1`` (each factor padded with
identities on the other qubits).

Inside a site matrix rows/columns are ordered (qubit, ancilla): entry
``W[i*D + a, j*D + b]``. Splitting off the qubit indices gives the D x D
ancilla blocks ``W^{ij}``; in these blocks the chain is an MPO of bond
dimension D::

    V[(i_1..i_N, a), (j_1..j_N, b)] = (W_N^{i_N j_N} ... W_1^{i_1 j_1})[a, b]
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .gatelib import SystemShape, input_embedding
from .numerics import haar_random_unitary, unitarity_error

FORMAT_NAME = "seqgap.SequentialMPO"
FORMAT_VERSION = 1


@dataclass(frozen=True)
class BipartiteUnitary:
    """One ancilla-qubit unitary, a ``2D x 2D`` matrix."""

    site_index: int
    matrix: np.ndarray = field(repr=False)
    h_coeffs: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] % 2:
            raise ValueError(f"site matrix must be 2D x 2D, got {m.shape}")
        err = unitarity_error(m)
        if err > 1e-10:
            raise ValueError(f"site {self.site_index} matrix is not unitary (err {err:.2e})")
        object.__setattr__(self, "matrix", m)
        if self.h_coeffs is not None:
            h = np.asarray(self.h_coeffs, dtype=float).ravel()
            if h.size != 4 * self.ancilla_dim**2:
                raise ValueError("h_coeffs must have 4*D^2 entries")
            object.__setattr__(self, "h_coeffs", h)

    @property
    def ancilla_dim(self) -> int:
        return self.matrix.shape[0] // 2

    @property
    def ancilla_blocks(self) -> np.ndarray:
        """Array ``B[i, j]`` of the D x D blocks ``W^{ij}``, shape (2, 2, D, D)."""
        d = self.ancilla_dim
        return self.matrix.reshape(2, d, 2, d).transpose(0, 2, 1, 3)


@dataclass(frozen=True)
class SequentialMPO:
    shape: SystemShape
    sites: tuple[BipartiteUnitary, ...]

    def __post_init__(self):
        object.__setattr__(self, "sites", tuple(self.sites))
        if len(self.sites) != self.shape.n_qubits:
            raise ValueError(f"need {self.shape.n_qubits} sites, got {len(self.sites)}")
        for s in self.sites:
            if s.ancilla_dim != self.shape.ancilla_dim:
                raise ValueError("all sites must share the ancilla dimension")

    @property
    def matrices(self) -> list[np.ndarray]:
        return [s.matrix for s in self.sites]

    @classmethod
    def from_matrices(cls, shape: SystemShape, matrices, h_coeffs=None) -> "SequentialMPO":
        h_coeffs = h_coeffs if h_coeffs is not None else [None] * len(matrices)
        return cls(shape, tuple(BipartiteUnitary(k + 1, m, h)
                                for k, (m, h) in enumerate(zip(matrices, h_coeffs))))

    @classmethod
    def identity(cls, shape: SystemShape) -> "SequentialMPO":
        eye = np.eye(2 * shape.ancilla_dim, dtype=np.complex128)
        return cls.from_matrices(shape, [eye] * shape.n_qubits)

    @classmethod
    def random(cls, shape: SystemShape, seed=None) -> "SequentialMPO":
        rng = np.random.default_rng(seed)
        return cls.from_matrices(
            shape, [haar_random_unitary(2 * shape.ancilla_dim, rng) for _ in range(shape.n_qubits)]
        )

    def replace(self, k: int, matrix, h_coeffs=None) -> "SequentialMPO":
        """Copy with the site of 1-based index ``k`` swapped for ``matrix``."""
        sites = list(self.sites)
        sites[k - 1] = BipartiteUnitary(k, matrix, h_coeffs)
        return SequentialMPO(self.shape, tuple(sites))

    # -- persistence -------------------------------------------------------
    def to_dict(self) -> dict:
        sites = []
        for s in self.sites:
            rec = {"site_index": s.site_index,
                   "re": s.matrix.real.tolist(), "im": s.matrix.imag.tolist()}
            if s.h_coeffs is not None:
                rec["h_coeffs"] = s.h_coeffs.tolist()
            sites.append(rec)
        return {
            "format": FORMAT_NAME,
            "version": FORMAT_VERSION,
            "shape": {"n_qubits": self.shape.n_qubits,
                      "ancilla_dim": self.shape.ancilla_dim,
                      "input_qubits": self.shape.input_qubits},
            "sites": sites,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SequentialMPO":
        if d.get("format") != FORMAT_NAME:
            raise ValueError(f"not a {FORMAT_NAME} record")
        if d.get("version") != FORMAT_VERSION:
            raise ValueError(f"unsupported {FORMAT_NAME} version {d.get('version')!r}")
        shape = SystemShape(**d["shape"])
        recs = sorted(d["sites"], key=lambda r: r["site_index"])
        mats = [np.array(r["re"]) + 1j * np.array(r["im"]) for r in recs]
        return cls.from_matrices(shape, mats, [r.get("h_coeffs") for r in recs])

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict()))

    @classmethod
    def load(cls, path) -> "SequentialMPO":
        return cls.from_dict(json.loads(Path(path).read_text()))


def _split(mpo_or_mats, n=None, d=None):
    if isinstance(mpo_or_mats, SequentialMPO):
        return mpo_or_mats.matrices, mpo_or_mats.shape.n_qubits, mpo_or_mats.shape.ancilla_dim
    mats = [np.asarray(m, dtype=np.complex128) for m in mpo_or_mats]
    return mats, len(mats), mats[0].shape[0] // 2


def apply_site(w: np.ndarray, x: np.ndarray, k: int, n: int, d: int) -> np.ndarray:
    """Left-multiply ``x`` by site matrix ``w`` embedded at qubit ``k`` (0-based).

    ``x`` has ``2^n * d`` rows and any number of columns.
    """
    cols = x.shape[1]
    xt = x.reshape(2**k, 2, 2 ** (n - k - 1), d, cols)
    y = np.einsum("iajb,ljrbc->lirac", w.reshape(2, d, 2, d), xt, optimize=True)
    return y.reshape(x.shape)


def embed_site(w: np.ndarray, k: int, n: int, d: int) -> np.ndarray:
    """Dense ``2^n d`` square matrix of site ``w`` at qubit ``k`` (0-based)."""
    return apply_site(w, np.eye(2**n * d, dtype=np.complex128), k, n, d)


def contract_to_dense(mpo) -> np.ndarray:
    """Full matrix ``W_N ... W_1`` of the chain."""
    mats, n, d = _split(mpo)
    x = np.eye(2**n * d, dtype=np.complex128)
    for k, w in enumerate(mats):
        x = apply_site(w, x, k, n, d)
    return x


def apply_to(mpo, x: np.ndarray) -> np.ndarray:
    """``contract_to_dense(mpo) @ x`` without forming the dense operator."""
    mats, n, d = _split(mpo)
    x = np.asarray(x, dtype=np.complex128)
    for k, w in enumerate(mats):
        x = apply_site(w, x, k, n, d)
    return x


def _target_tensor(target, n, d) -> np.ndarray:
    t = np.asarray(target, dtype=np.complex128)
    dim = 2**n * d
    if t.shape != (dim, dim):
        raise ValueError(f"target must be {dim}x{dim}, got {t.shape}")
    return t


def _absorb_right(r, w, d):
    """Contract the leading qubit pair of ``r`` with ``w`` on the right ancilla leg.

    ``r`` has legs (i, rest_i, a, j, rest_j, b) with ``i, j`` the leading
    qubit. Returns legs (rest_i, a, rest_j, g) where g replaces b via
    ``W^{ij}[g, b]``.
    """
    w4 = w.reshape(2, d, 2, d)
    return np.einsum("iraJsb,igJb->rasg", r, w4, optimize=True)


def _absorb_left(r, w, d):
    """Contract the trailing qubit pair of ``r`` with ``w`` on the left ancilla leg.

    ``r`` has legs (rest_i, i, a, rest_j, j, b); returns (rest_i, g, rest_j, b)
    via ``W^{ij}[a, g]``.
    """
    w4 = w.reshape(2, d, 2, d)
    return np.einsum("riasJb,iaJg->rgsb", r, w4, optimize=True)


def _hole(mats, target, n, d, k):
    """Tensor ``R[i, a, j, b]`` with overlap = sum R * W_k[(i,a),(j,b)]."""
    r = _target_tensor(target, n, d).conj()
    # legs: (q_1..q_n, a, q'_1..q'_n, b) flattened; peel sites 1..k-1 from the front
    for s in range(k):
        rest = 2 ** (n - s - 1)
        r = _absorb_right(r.reshape(2, rest, d, 2, rest, d), mats[s], d)
    # remaining qubits k..n-1; peel from the back down to k
    for s in range(n - 1, k, -1):
        front = 2 ** (s - k)
        r = r.reshape(front, 2, d, front, 2, d)
        r = _absorb_left(r, mats[s], d)
    return r.reshape(2, d, 2, d)


def overlap_with_target(mpo, target) -> complex:
    """``Tr[target^dagger V]`` by contracting ancilla chains against the target.

    Each site is absorbed in turn into the conjugated target tensor, so the
    dense ``V`` is never formed.
    """
    mats, n, d = _split(mpo)
    r = _target_tensor(target, n, d).conj()
    for s in range(n):
        rest = 2 ** (n - s - 1)
        r = _absorb_right(r.reshape(2, rest, d, 2, rest, d), mats[s], d)
    return complex(np.trace(r.reshape(d, d)))


def environment(mpo, target, k: int) -> np.ndarray:
    """Linear-form matrix ``E_k`` of site ``k`` (1-based).

    For any replacement ``W`` of site k,
    ``overlap_with_target(mpo with W at k, target) == Tr[E_k^dagger W]``.
    """
    mats, n, d = _split(mpo)
    if not 1 <= k <= n:
        raise ValueError(f"site index {k} outside 1..{n}")
    return _hole(mats, target, n, d, k - 1).reshape(2 * d, 2 * d).conj()


def overlap_isometry(mpo, target_isometry, psi_initial=None, phi_initial=None) -> complex:
    """``Tr[V_target^dagger V_seq]`` with ``V_seq`` the chain fed the same initial states."""
    mats, n, d = _split(mpo)
    shape = mpo.shape if isinstance(mpo, SequentialMPO) else None
    if shape is None:
        m = int(round(np.log2(np.asarray(target_isometry).shape[1])))
        shape = SystemShape(n, d, m)
    emb = input_embedding(shape, psi_initial, phi_initial)
    v = np.asarray(target_isometry, dtype=np.complex128)
    if v.shape != emb.shape:
        raise ValueError(f"target isometry must be {emb.shape}, got {v.shape}")
    return complex(np.vdot(v, apply_to(mats, emb)))


def isometry_effective_target(target_isometry, shape: SystemShape,
                              psi_initial=None, phi_initial=None) -> np.ndarray:
    """Square matrix ``T`` with ``Tr[T^dagger U] == Tr[V^dagger U P]`` for every U.

    ``P`` is the initial-state embedding, so the unitary machinery (overlaps,
    environments, polar updates) applies unchanged to isometry targets.
    """
    emb = input_embedding(shape, psi_initial, phi_initial)
    v = np.asarray(target_isometry, dtype=np.complex128)
    if v.shape != emb.shape:
        raise ValueError(f"target isometry must be {emb.shape}, got {v.shape}")
    return v @ emb.conj().T

