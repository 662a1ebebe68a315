"""Dense complex linear-algebra kernels and Hermitian generator bases.

Everything here is a pure function of numpy arrays. Matrices are plain
``complex128`` ndarrays; no wrapper type is used.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np
import scipy.linalg


class SVDConvergenceError(ArithmeticError):
    """Raised when the iterative SVD kernel fails to converge."""


def as_matrix(m, name: str = "matrix") -> np.ndarray:
    """Return ``m`` as a finite 2D complex array or raise ``ValueError``."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2:
        raise ValueError(f"{name} must be 2D, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} contains NaN or Inf entries")
    return a


def svd(m) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Thin SVD ``m = U @ diag(S) @ V.conj().T``.

    Returns ``(U, S, V)`` with ``S`` sorted descending. Note ``V`` (not its
    adjoint) is returned.
    """
    a = as_matrix(m)
    try:
        u, s, vh = np.linalg.svd(a, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        # gesdd occasionally fails on nasty inputs; gesvd is slower but sturdier
        try:
            u, s, vh = scipy.linalg.svd(a, full_matrices=False, lapack_driver="gesvd")
        except np.linalg.LinAlgError:
            raise SVDConvergenceError(str(exc)) from exc
    return u, s, vh.conj().T


def spectral_norm(m) -> float:
    """Largest singular value of ``m``."""
    a = as_matrix(m)
    if a.size == 0:
        return 0.0
    try:
        s = np.linalg.svd(a, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise SVDConvergenceError(str(exc)) from exc
    return float(s[0])


def frobenius_norm_sq(m) -> float:
    a = np.asarray(m)
    return float(np.vdot(a, a).real)


def unitarity_error(m) -> float:
    """Frobenius norm of ``m^dagger m - 1``."""
    a = np.asarray(m)
    return float(np.linalg.norm(a.conj().T @ a - np.eye(a.shape[1])))


def generalized_gell_mann(dim: int) -> list[np.ndarray]:
    """Identity followed by the ``dim**2 - 1`` generalized Gell-Mann matrices.

    The traceless elements are ordered as the classic Gell-Mann set: for each
    column ``k = 1..dim-1`` the symmetric and antisymmetric pairs ``(j, k)``
    with ``j < k`` come first, then the diagonal generator of level ``k``.
    For ``dim = 2`` this yields ``[1, sigma_x, sigma_y, sigma_z]`` and for
    ``dim = 3`` the standard ``lambda_1 ... lambda_8``. All traceless elements
    are normalised to ``Tr(g_a g_b) = 2 delta_ab``.
    """
    if int(dim) != dim or dim < 2:
        raise ValueError(f"generator basis needs dim >= 2, got {dim}")
    dim = int(dim)
    basis = [np.eye(dim, dtype=np.complex128)]
    for k in range(1, dim):
        for j in range(k):
            sym = np.zeros((dim, dim), dtype=np.complex128)
            sym[j, k] = sym[k, j] = 1.0
            anti = np.zeros((dim, dim), dtype=np.complex128)
            anti[j, k] = -1j
            anti[k, j] = 1j
            basis.extend([sym, anti])
        diag = np.zeros(dim)
        diag[:k] = 1.0
        diag[k] = -k
        basis.append(np.diag(np.sqrt(2.0 / (k * (k + 1))) * diag).astype(np.complex128))
    return basis


def product_basis(basis_a: Sequence[np.ndarray], basis_b: Sequence[np.ndarray]) -> np.ndarray:
    """Stack of ``kron(a, b)`` for all pairs, shape ``(len(a)*len(b), n, n)``.

    The flat index of pair ``(l, l')`` is ``l * len(basis_b) + l'``.
    """
    return np.array([np.kron(a, b) for a in basis_a for b in basis_b])


def hermitian_from_coefficients(h, basis_a, basis_b) -> np.ndarray:
    """``sum_{l,l'} h[l, l'] kron(basis_a[l], basis_b[l'])``."""
    h = np.asarray(h, dtype=float).ravel()
    n = len(basis_a) * len(basis_b)
    if h.size != n:
        raise ValueError(f"expected {n} generator coefficients, got {h.size}")
    return np.tensordot(h, product_basis(basis_a, basis_b), axes=1)


def exp_minus_i_hermitian(hmat: np.ndarray) -> np.ndarray:
    """``exp(-i H)`` for Hermitian ``H`` via its eigendecomposition."""
    w, v = np.linalg.eigh(hmat)
    return (v * np.exp(-1j * w)) @ v.conj().T


def matrix_exp_hermitian_generator(h, basis_a, basis_b) -> np.ndarray:
    """Unitary ``exp(-i sum h[l,l'] a_l (x) b_l')`` from real coefficients."""
    return exp_minus_i_hermitian(hermitian_from_coefficients(h, basis_a, basis_b))


def generator_coefficients(w, basis_a, basis_b) -> np.ndarray:
    """Real coefficients ``h`` with ``matrix_exp_hermitian_generator(h) == w``.

    Uses the principal branch of the logarithm (eigenphases in ``(-pi, pi]``).
    The inverse of :func:`matrix_exp_hermitian_generator` for unitary ``w``.
    """
    w = as_matrix(w)
    t, z = scipy.linalg.schur(w, output="complex")
    theta = -np.angle(np.diag(t))
    hmat = (z * theta) @ z.conj().T
    hmat = 0.5 * (hmat + hmat.conj().T)
    g = product_basis(basis_a, basis_b)
    norms = np.einsum("kij,kji->k", g, g).real
    return np.einsum("kij,ji->k", g, hmat).real / norms


def haar_random_unitary(dim: int, seed=None) -> np.ndarray:
    """Haar-distributed unitary from the QR of a complex Ginibre matrix.

    ``seed`` may be an int, ``None`` or a ``numpy.random.Generator``.
    """
    if dim < 1:
        raise ValueError("dim must be >= 1")
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))
