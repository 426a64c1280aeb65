"""Dense Hermitian linear algebra kernels.

Everything downstream (corner points, precoders, power allocation) reduces to
a handful of primitives on small complex matrices: Hermitian eigendecomposition,
PSD square roots, a definite generalized eigendecomposition, orthogonal
projectors, and log-determinants.  They are collected here with explicit
tolerance contracts so the rest of the package never touches raw LAPACK calls.

Conventions
-----------
* Eigenvalues are always returned in descending order; ties keep the
  ascending-solver index order, so results are deterministic.
* Tolerances are relative to the matrix scale unless stated otherwise.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatchError,
    NoConvergenceError,
    NonHermitianError,
    NotPositiveDefiniteError,
    NotPositiveSemidefiniteError,
    RankDeficientError,
    ZeroMatrixError,
)

# Relative tolerances shared across the package.
HERM_TOL = 1e-12     # Hermitian symmetry, scaled by 1 + max|entry|
PSD_TOL = 1e-10      # admissible negative eigenvalue, scaled by spectral norm
RANK_TOL = 1e-10     # eigenvalues below RANK_TOL * lambda_max count as zero
COND_LIMIT = 1e12    # largest Gram-matrix condition number projector() accepts

LN2 = float(np.log(2.0))


def herm(a: np.ndarray) -> np.ndarray:
    """Hermitian part (A + A^H)/2."""
    return 0.5 * (a + a.conj().T)


def _check_square(a: np.ndarray, name: str = "matrix") -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(f"{name} must be square, got shape {a.shape}")
    return a


def _check_hermitian(a: np.ndarray, name: str = "matrix") -> np.ndarray:
    a = _check_square(a, name)
    scale = 1.0 + (np.abs(a).max() if a.size else 0.0)
    dev = np.abs(a - a.conj().T).max() if a.size else 0.0
    if dev > HERM_TOL * scale:
        raise NonHermitianError(
            f"{name} deviates from Hermitian symmetry by {dev:.3e} "
            f"(tolerance {HERM_TOL * scale:.3e})"
        )
    return herm(a)


def herm_eig(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending.

    Parameters
    ----------
    a : ndarray
        Square matrix, Hermitian within ``HERM_TOL`` relative tolerance.

    Returns
    -------
    w : ndarray
        Real eigenvalues sorted in descending order.
    v : ndarray
        Unitary matrix whose columns are the matching eigenvectors.
    """
    a = _check_hermitian(a)
    try:
        w, v = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:
        raise NoConvergenceError(f"eigh failed to converge: {exc}") from exc
    order = np.argsort(-w, kind="stable")
    return w[order], v[:, order]


def psd_sqrt(a: np.ndarray) -> np.ndarray:
    """Hermitian PSD square root, flooring eigenvalues at zero.

    Eigenvalues more negative than ``-PSD_TOL`` times the spectral norm are
    rejected; smaller negatives are treated as rounding noise.
    """
    w, v = herm_eig(a)
    scale = np.abs(w).max() if w.size else 0.0
    if w.size and w.min() < -PSD_TOL * scale:
        raise NotPositiveSemidefiniteError(
            f"matrix has eigenvalue {w.min():.3e} below -{PSD_TOL:.0e} * {scale:.3e}"
        )
    w = np.clip(w, 0.0, None)
    return herm((v * np.sqrt(w)) @ v.conj().T)


def psd_inv_sqrt(a: np.ndarray, rank_tol: float = RANK_TOL) -> np.ndarray:
    """Pseudo inverse square root of a Hermitian PSD matrix.

    Eigenvalues at or below ``rank_tol * lambda_max`` are excluded, so the
    result maps onto range(A):  W A W equals the orthogonal projector onto
    that range.

    Raises
    ------
    ZeroMatrixError
        If every eigenvalue falls below the rank tolerance.
    """
    w, v = herm_eig(a)
    scale = np.abs(w).max() if w.size else 0.0
    if w.size and w.min() < -PSD_TOL * scale:
        raise NotPositiveSemidefiniteError(
            f"matrix has eigenvalue {w.min():.3e} below -{PSD_TOL:.0e} * {scale:.3e}"
        )
    live = w > rank_tol * scale
    if not np.any(live):
        raise ZeroMatrixError("all eigenvalues fall below the rank tolerance")
    vl = v[:, live]
    return herm((vl / np.sqrt(w[live])) @ vl.conj().T)


@dataclass
class GevdResult:
    """Definite generalized eigendecomposition C^H A C = diag(eigvals), C^H B C = I.

    ``b`` counts eigenvalues exceeding one (with a relative tie tolerance);
    the leading ``b`` columns of ``eigvecs`` span the block where A dominates B.
    """

    eigvecs: np.ndarray
    eigvals: np.ndarray
    b: int

    @property
    def upper_vecs(self) -> np.ndarray:
        """Columns with eigenvalue above one."""
        return self.eigvecs[:, : self.b]

    @property
    def lower_vecs(self) -> np.ndarray:
        """Columns with eigenvalue at most one."""
        return self.eigvecs[:, self.b:]


def gevd_definite(a: np.ndarray, b: np.ndarray, rank_tol: float = RANK_TOL) -> GevdResult:
    """Generalized eigendecomposition of a Hermitian positive definite pencil.

    Solves A c = lambda B c for Hermitian positive definite A and B by
    congruence: with W = B^{-1/2}, the eigenvectors Phi of W A W give
    C = W Phi, which satisfies C^H A C = diag(lambda) and C^H B C = I.

    Parameters
    ----------
    a, b : ndarray
        Hermitian positive definite matrices of equal size.
    rank_tol : float
        Relative threshold below which an eigenvalue counts as zero.

    Returns
    -------
    GevdResult
        Eigenvalues descending (all positive), eigenvector matrix C, and the
        split index ``b`` = number of eigenvalues above 1 + 1e-9 * (1 + lambda_1).
    """
    a = _check_hermitian(a, "pencil component A")
    b = _check_hermitian(b, "pencil component B")
    if a.shape != b.shape:
        raise DimensionMismatchError(
            f"pencil components differ in shape: {a.shape} vs {b.shape}"
        )
    try:
        wb, vb = np.linalg.eigh(b)
    except np.linalg.LinAlgError as exc:
        raise NoConvergenceError(f"eigh failed on pencil component B: {exc}") from exc
    if wb.size == 0:
        return GevdResult(np.zeros((0, 0), dtype=complex), np.zeros(0), 0)
    if wb.min() <= rank_tol * max(wb.max(), 0.0):
        raise NotPositiveDefiniteError(
            f"pencil component B has eigenvalue {wb.min():.3e}, not positive definite"
        )
    w_inv_half = (vb / np.sqrt(wb)) @ vb.conj().T
    m = herm(w_inv_half @ a @ w_inv_half)
    try:
        wm, vm = np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:
        raise NoConvergenceError(f"eigh failed on reduced pencil: {exc}") from exc
    if wm.min() <= rank_tol * max(wm.max(), 0.0):
        raise NotPositiveDefiniteError(
            f"pencil component A has eigenvalue {wm.min():.3e} along the pencil, "
            "not positive definite"
        )
    order = np.argsort(-wm, kind="stable")
    eigvals = wm[order]
    eigvecs = w_inv_half @ vm[:, order]
    eps = 1e-9 * (1.0 + eigvals[0])
    split = int(np.count_nonzero(eigvals > 1.0 + eps))
    return GevdResult(eigvecs, eigvals, split)


def projector(c: np.ndarray) -> np.ndarray:
    """Orthogonal projector onto the column span of ``c``.

    ``c`` must have full column rank: the Gram matrix condition number must
    stay below ``COND_LIMIT``.  An empty block projects onto nothing.
    """
    c = np.asarray(c, dtype=complex)
    if c.ndim != 2:
        raise DimensionMismatchError(f"expected a matrix of columns, got shape {c.shape}")
    n, k = c.shape
    if k == 0:
        return np.zeros((n, n), dtype=complex)
    s = np.linalg.svd(c, compute_uv=False)
    # cond(C^H C) = (s_max / s_min)^2
    if s[-1] <= 0.0 or (s[0] / s[-1]) ** 2 >= COND_LIMIT:
        raise RankDeficientError(
            f"columns are numerically dependent (Gram condition >= {COND_LIMIT:.0e})"
        )
    q, _ = np.linalg.qr(c)
    return herm(q @ q.conj().T)


def logdet(a: np.ndarray) -> float:
    """Natural-log determinant of a Hermitian positive definite matrix."""
    a = _check_hermitian(a)
    if a.size == 0:
        return 0.0
    try:
        chol = np.linalg.cholesky(a)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefiniteError(f"Cholesky failed, matrix not PD: {exc}") from exc
    return float(2.0 * np.sum(np.log(np.real(np.diag(chol)))))


def rate_logdet(h: np.ndarray, k: np.ndarray) -> float:
    """ln det(I + H K H^H) for a PSD input covariance ``k``, in nats.

    Evaluated on the receive side so the argument stays Hermitian positive
    definite even when ``k`` is singular.
    """
    h = np.asarray(h, dtype=complex)
    m = h.shape[0]
    return logdet(np.eye(m) + herm(h @ k @ h.conj().T))
