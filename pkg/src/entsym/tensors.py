"""Dense complex linear algebra and graphical-calculus primitives.

Everything downstream compiles string diagrams on based Hilbert spaces to
plain 2-D complex numpy arrays.  Column vectors are ``(n, 1)`` matrices and
scalars are ordinary Python complex numbers, so composition is always matrix
multiplication.  The fixed computational basis of each dimension supplies the
self-duality: ``cup(d)`` is the unnormalised maximally entangled column
``sum_i e_i (x) e_i`` and ``cap(d)`` is its adjoint row.

All functions are pure; nothing here mutates its arguments.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "Tolerance",
    "DEFAULT_TOL",
    "as_matrix",
    "tensor",
    "dagger",
    "cup",
    "cap",
    "swap",
    "trace",
    "partial_trace",
    "residual",
    "hermitian_eigenvalues",
    "is_psd",
]


@dataclass(frozen=True)
class Tolerance:
    """Numerical tolerance contract for residual and positivity checks.

    ``norm`` selects how residual matrices are collapsed to a number:
    ``"max"`` is the max-abs-entry norm, ``"operator"`` the spectral norm.
    """

    epsilon: float = 1e-10
    norm: str = "max"

    def __post_init__(self) -> None:
        if self.epsilon < 0:
            raise ValueError("tolerance epsilon must be nonnegative")
        if self.norm not in ("max", "operator"):
            raise ValueError(f"unknown norm selector {self.norm!r}")


DEFAULT_TOL = Tolerance()


def as_matrix(a) -> np.ndarray:
    """Coerce input to a 2-D complex array; scalars become 1x1, vectors columns."""
    m = np.asarray(a, dtype=complex)
    if m.ndim == 0:
        return m.reshape(1, 1)
    if m.ndim == 1:
        return m.reshape(-1, 1)
    if m.ndim != 2:
        raise ValueError(f"expected at most 2 dimensions, got shape {m.shape}")
    return m


def tensor(a, b, *rest) -> np.ndarray:
    """Kronecker product of matrices; dimensions multiply."""
    out = np.kron(as_matrix(a), as_matrix(b))
    for r in rest:
        out = np.kron(out, as_matrix(r))
    return out


def dagger(a) -> np.ndarray:
    """Conjugate transpose (reflection of a diagram in a horizontal axis)."""
    return as_matrix(a).conj().T


def cup(d: int) -> np.ndarray:
    """Column vector ``sum_i e_i (x) e_i`` of shape (d*d, 1)."""
    if d < 1:
        raise ValueError("cup dimension must be >= 1")
    return np.eye(d, dtype=complex).reshape(d * d, 1)


def cap(d: int) -> np.ndarray:
    """Row vector of shape (1, d*d); the dagger of :func:`cup`."""
    return dagger(cup(d))


def swap(d1: int, d2: int) -> np.ndarray:
    """Permutation matrix exchanging tensor factors of dimensions d1 and d2."""
    if d1 < 1 or d2 < 1:
        raise ValueError("swap dimensions must be >= 1")
    s = np.zeros((d1 * d2, d1 * d2), dtype=complex)
    for i in range(d1):
        for j in range(d2):
            s[j * d1 + i, i * d2 + j] = 1.0
    return s


def trace(a) -> complex:
    """Trace of a square matrix."""
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"trace requires a square matrix, got {m.shape}")
    return complex(np.trace(m))


def partial_trace(a, dims: tuple[int, int], which_factor: int) -> np.ndarray:
    """Trace out one tensor factor of an endomorphism of a two-factor space.

    ``dims = (d1, d2)`` gives the factor dimensions, ``which_factor`` is 1 or 2
    (the factor being traced out, which must be square by construction).
    """
    d1, d2 = dims
    m = as_matrix(a)
    if m.shape != (d1 * d2, d1 * d2):
        raise ValueError(f"matrix shape {m.shape} does not match dims {dims}")
    t = m.reshape(d1, d2, d1, d2)
    if which_factor == 1:
        return np.einsum("ijik->jk", t)
    if which_factor == 2:
        return np.einsum("ijkj->ik", t)
    raise ValueError("which_factor must be 1 or 2")


def residual(a, tol: Tolerance = DEFAULT_TOL) -> float:
    """Size of a residual matrix under the tolerance's norm selector."""
    m = as_matrix(a)
    if m.size == 0:
        return 0.0
    if tol.norm == "operator":
        return float(np.linalg.norm(m, 2))
    return float(np.abs(m).max())


def _jacobi_sweep(a: np.ndarray) -> None:
    """One cyclic sweep of complex Jacobi rotations, in place.

    Deterministic row-major pivot order (p < q) so repeated runs agree bit
    for bit.  ``a`` must be Hermitian.
    """
    n = a.shape[0]
    scale = max(float(np.abs(a).max()), np.finfo(float).tiny)
    for p in range(n - 1):
        for q in range(p + 1, n):
            apq = a[p, q]
            if abs(apq) <= 1e-16 * scale:
                continue
            app = a[p, p].real
            aqq = a[q, q].real
            # Unitarily diagonalise the 2x2 block [[app, apq], [apq*, aqq]]
            # with U = diag(1, conj(phase)) . [[c, s], [-s, c]].
            phase = apq / abs(apq)
            tau = (aqq - app) / (2.0 * abs(apq))
            t = np.sign(tau) / (abs(tau) + np.hypot(1.0, tau)) if tau != 0 else 1.0
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            rp = a[p, :].copy()
            rq = a[q, :].copy()
            a[p, :] = c * rp - s * phase * rq
            a[q, :] = s * rp + c * phase * rq
            cp = a[:, p].copy()
            cq = a[:, q].copy()
            a[:, p] = c * cp - s * np.conj(phase) * cq
            a[:, q] = s * cp + c * np.conj(phase) * cq
            a[p, q] = 0.0
            a[q, p] = 0.0


def hermitian_eigenvalues(a, max_sweeps: int = 60, off_tol: float = 1e-14) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix by cyclic Jacobi rotations, ascending.

    Self-contained (no LAPACK) so positivity verdicts have an in-house route
    independent of the numpy-based oracles used in tests.
    """
    m = as_matrix(a)
    n = m.shape[0]
    if n != m.shape[1]:
        raise ValueError("eigenvalues require a square matrix")
    w = (m + dagger(m)) / 2.0
    scale = max(float(np.abs(w).max()), 1.0)
    for _ in range(max_sweeps):
        off = w - np.diag(np.diag(w))
        if np.abs(off).max() <= off_tol * scale:
            break
        _jacobi_sweep(w)
    return np.sort(np.real(np.diag(w)))


def is_psd(a, tol: Tolerance = DEFAULT_TOL) -> tuple[bool, float]:
    """Positive-semidefiniteness with the minimal eigenvalue as witness.

    Returns ``(verdict, min_eigenvalue)``.  The verdict also requires the
    matrix to be Hermitian within the tolerance; the witness is always the
    minimal eigenvalue of the Hermitian part.
    """
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise ValueError("is_psd requires a square matrix")
    herm_res = residual(m - dagger(m), tol) / 2.0
    eigs = hermitian_eigenvalues(m)
    min_eig = float(eigs[0]) if eigs.size else 0.0
    verdict = herm_res <= tol.epsilon and min_eig >= -tol.epsilon
    return verdict, min_eig
