"""Corner points of the secrecy capacity region under a matrix power constraint.

For a two-user Gaussian MIMO broadcast channel (receivers H and G, transmit
covariance capped by a PSD matrix S) the region is a rectangle, so it is fully
described by one corner.  The corner falls out of the definite pencil

    (S^{1/2} H^H H S^{1/2} + I,  S^{1/2} G^H G S^{1/2} + I):

with generalized eigenvalues lambda_1 >= ... >= lambda_n and b of them above
one, user 1's rate is sum(ln lambda_i, i <= b) and user 2's is
-sum(ln lambda_i, i > b).  The optimal input covariance for user 1 is
K = S^{1/2} P S^{1/2} with P the projector onto the leading eigenvector block.

Rank-deficient S is handled by restricting the channel to range(S) and lifting
the covariance back, never by regularizing.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatchError, NotPositiveSemidefiniteError
from .linalg import (
    LN2,
    PSD_TOL,
    RANK_TOL,
    GevdResult,
    gevd_definite,
    herm,
    herm_eig,
    projector,
)


@dataclass
class Channel:
    """Pair of complex channel matrices with a common transmit dimension."""

    H: np.ndarray
    G: np.ndarray

    def __post_init__(self):
        self.H = np.atleast_2d(np.asarray(self.H, dtype=complex))
        self.G = np.atleast_2d(np.asarray(self.G, dtype=complex))
        if self.H.ndim != 2 or self.G.ndim != 2:
            raise DimensionMismatchError("channel matrices must be 2-D")
        if self.H.shape[1] != self.G.shape[1]:
            raise DimensionMismatchError(
                f"channel matrices disagree on transmit antennas: "
                f"{self.H.shape[1]} vs {self.G.shape[1]}"
            )

    @property
    def n_t(self) -> int:
        return self.H.shape[1]

    @property
    def m1(self) -> int:
        return self.H.shape[0]

    @property
    def m2(self) -> int:
        return self.G.shape[0]

    def gram_h(self) -> np.ndarray:
        """H^H H."""
        return herm(self.H.conj().T @ self.H)

    def gram_g(self) -> np.ndarray:
        """G^H G."""
        return herm(self.G.conj().T @ self.G)

    def swapped(self) -> "Channel":
        """The same channel with the user roles exchanged."""
        return Channel(self.G, self.H)


@dataclass
class CornerPoint:
    """One rate pair, in bits.  ``alpha`` is the power split that produced it,
    when one exists."""

    R1: float
    R2: float
    alpha: float | None = None
    provenance: str = ""

    def nats(self) -> tuple[float, float]:
        return self.R1 * LN2, self.R2 * LN2


@dataclass
class SdpcSolution:
    """Corner-point solution for one (channel, matrix constraint) pair.

    ``gevd`` lives in the working space: the full transmit space when S has
    full rank, otherwise range(S) with ``u_r`` holding the orthonormal basis
    used for the reduction.  ``kt_star`` and ``corner`` are always expressed
    for the original channel.
    """

    channel: Channel
    s: np.ndarray
    gevd: GevdResult
    kt_star: np.ndarray
    corner: CornerPoint
    s_reduced: bool
    u_r: np.ndarray | None = field(default=None, repr=False)
    s_sqrt: np.ndarray | None = field(default=None, repr=False)

    def lift(self, a: np.ndarray) -> np.ndarray:
        """Map a working-space matrix back to the full transmit space."""
        if self.u_r is None:
            return a
        return self.u_r @ a @ self.u_r.conj().T


def validate_constraint(s: np.ndarray, n_t: int | None = None) -> np.ndarray:
    """Check that ``s`` is a Hermitian PSD matrix (of size ``n_t`` if given)."""
    s = np.asarray(s, dtype=complex)
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise DimensionMismatchError(f"constraint must be square, got {s.shape}")
    if n_t is not None and s.shape[0] != n_t:
        raise DimensionMismatchError(
            f"constraint is {s.shape[0]}x{s.shape[0]} but the channel has {n_t} antennas"
        )
    w, _ = herm_eig(s)
    scale = np.abs(w).max() if w.size else 0.0
    if w.size and w.min() < -PSD_TOL * scale:
        raise NotPositiveSemidefiniteError(
            f"constraint has eigenvalue {w.min():.3e}, not PSD"
        )
    return herm(s)


def build_pencil(ch: Channel, s: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Both components of the definite pencil for constraint ``s``.

    Returns (S^{1/2} H^H H S^{1/2} + I, S^{1/2} G^H G S^{1/2} + I); each is
    Hermitian with every eigenvalue >= 1, so the pencil is always definite.
    """
    from .linalg import psd_sqrt

    s = validate_constraint(s, ch.n_t)
    r = psd_sqrt(s)
    eye = np.eye(ch.n_t)
    a = herm(r @ ch.gram_h() @ r) + eye
    b = herm(r @ ch.gram_g() @ r) + eye
    return a, b


def solve_matrix_constraint(ch: Channel, s: np.ndarray) -> SdpcSolution:
    """Corner point and optimal covariance under the matrix constraint ``s``.

    The constraint is reduced to its range when rank-deficient, the pencil is
    solved there, and the covariance split is lifted back.  Both rates come
    out non-negative; ``b = 0`` or ``b = n`` collapse to (0, R2) and (R1, 0)
    corners with covariance 0 and S respectively.
    """
    s = validate_constraint(s, ch.n_t)
    w, v = herm_eig(s)
    scale = np.abs(w).max() if w.size else 0.0
    live = w > RANK_TOL * scale
    reduced = bool(not np.all(live))

    if not np.any(live):
        # Zero constraint: nothing can be sent.
        gevd = GevdResult(np.zeros((0, 0), dtype=complex), np.zeros(0), 0)
        corner = CornerPoint(0.0, 0.0, provenance="sdpc")
        return SdpcSolution(
            ch, s, gevd, np.zeros((ch.n_t, ch.n_t), dtype=complex), corner,
            s_reduced=True, u_r=v[:, :0], s_sqrt=np.zeros((0, 0), dtype=complex),
        )

    if reduced:
        u_r = v[:, live]
        h_r = ch.H @ u_r
        g_r = ch.G @ u_r
        s_sqrt = np.diag(np.sqrt(w[live])).astype(complex)
    else:
        u_r = None
        h_r, g_r = ch.H, ch.G
        s_sqrt = herm((v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T)

    n = s_sqrt.shape[0]
    eye = np.eye(n)
    a = herm(s_sqrt @ (h_r.conj().T @ h_r) @ s_sqrt) + eye
    b = herm(s_sqrt @ (g_r.conj().T @ g_r) @ s_sqrt) + eye
    gevd = gevd_definite(a, b)

    lam = gevd.eigvals
    split = gevd.b
    r1_nats = max(0.0, float(np.sum(np.log(lam[:split]))))
    r2_nats = max(0.0, float(-np.sum(np.log(lam[split:]))))

    if split == 0:
        kt_work = np.zeros((n, n), dtype=complex)
    elif split == n:
        kt_work = herm(s_sqrt @ s_sqrt)
    else:
        kt_work = herm(s_sqrt @ projector(gevd.upper_vecs) @ s_sqrt)

    sol = SdpcSolution(
        ch, s, gevd,
        np.zeros((ch.n_t, ch.n_t), dtype=complex),
        CornerPoint(r1_nats / LN2, r2_nats / LN2, provenance="sdpc"),
        s_reduced=reduced, u_r=u_r, s_sqrt=s_sqrt,
    )
    sol.kt_star = sol.lift(kt_work)
    return sol


def orthogonality_defect(sol: SdpcSolution) -> float:
    """Normalized coupling between the two eigenvector blocks.

    ||C1^H C2||_F / (||C1||_F ||C2||_F); zero exactly when linear precoding
    achieves the corner, and zero by convention for degenerate splits.
    """
    c1 = sol.gevd.upper_vecs
    c2 = sol.gevd.lower_vecs
    if c1.shape[1] == 0 or c2.shape[1] == 0:
        return 0.0
    num = np.linalg.norm(c1.conj().T @ c2)
    den = np.linalg.norm(c1) * np.linalg.norm(c2)
    return float(num / den)


@dataclass
class RankBoundReport:
    """Eigenvalue-count bounds tying the pencil split to the channel difference.

    The split ``b`` can never exceed the number of positive eigenvalues of
    H^H H - G^H G, and symmetrically the count of pencil eigenvalues below one
    can never exceed the number of negative ones.
    """

    b: int
    m: int
    holds: bool
    below_one: int
    m_negative: int
    lower_holds: bool


def rank_bound_check(ch: Channel, sol: SdpcSolution) -> RankBoundReport:
    """Verify both eigenvalue-count bounds for a solved instance."""
    diff = herm(ch.gram_h() - ch.gram_g())
    w, _ = herm_eig(diff)
    scale = np.abs(w).max() if w.size else 0.0
    m = int(np.count_nonzero(w > RANK_TOL * scale))
    m_neg = int(np.count_nonzero(w < -RANK_TOL * scale))
    lam = sol.gevd.eigvals
    if lam.size:
        eps = 1e-9 * (1.0 + lam[0])
        below = int(np.count_nonzero(lam < 1.0 - eps))
    else:
        below = 0
    return RankBoundReport(
        b=sol.gevd.b, m=m, holds=sol.gevd.b <= m,
        below_one=below, m_negative=m_neg, lower_holds=below <= m_neg,
    )


@dataclass
class BlockDiagReport:
    """Outcome of the simultaneous block-diagonalization test."""

    is_block_diag: bool
    split: int
    ordering_ok: bool


def _off_block_mass(m: np.ndarray, split: int) -> float:
    off = m[:split, split:]
    return float(np.sqrt(2.0) * np.linalg.norm(off))


def _ordering_holds(kh: np.ndarray, kg: np.ndarray, split: int, tol: float) -> bool:
    scale = 1.0 + max(
        np.abs(kh).max() if kh.size else 0.0,
        np.abs(kg).max() if kg.size else 0.0,
    )
    d1 = herm(kh[:split, :split] - kg[:split, :split])
    d2 = herm(kg[split:, split:] - kh[split:, split:])
    ok1 = d1.size == 0 or np.linalg.eigvalsh(d1).min() >= -tol * scale
    ok2 = d2.size == 0 or np.linalg.eigvalsh(d2).min() >= -tol * scale
    return bool(ok1 and ok2)


def block_diag_test(ch: Channel, t: np.ndarray, tol: float = 1e-8) -> BlockDiagReport:
    """Test whether ``t`` simultaneously block-diagonalizes both channel Grams.

    A transmit factor T (with S = T T^H) supports exact linear precoding when
    T^H H^H H T and T^H G^H G T share a common 2x2 block structure whose first
    block favors user 1 and second favors user 2.  The search tries every
    split, preferring the smallest one where both the off-block mass (relative
    Frobenius) and the ordering conditions hold; splits 0 and n count as block
    diagonal only together with their ordering, since they are vacuously
    block structured.
    """
    t = np.asarray(t, dtype=complex)
    if t.ndim != 2 or t.shape[0] != ch.n_t:
        raise DimensionMismatchError(
            f"transmit factor must have {ch.n_t} rows, got shape {t.shape}"
        )
    kh = herm(t.conj().T @ ch.gram_h() @ t)
    kg = herm(t.conj().T @ ch.gram_g() @ t)
    n = t.shape[1]
    nh = max(np.linalg.norm(kh), 1e-300)
    ng = max(np.linalg.norm(kg), 1e-300)

    def block_ok(split: int) -> bool:
        return (
            _off_block_mass(kh, split) <= tol * nh
            and _off_block_mass(kg, split) <= tol * ng
        )

    for split in range(n + 1):
        if block_ok(split) and _ordering_holds(kh, kg, split, tol):
            return BlockDiagReport(True, split, True)

    interior = [s for s in range(1, n) if block_ok(s)]
    if interior:
        return BlockDiagReport(True, interior[0], False)

    if n >= 2:
        best = min(
            range(1, n),
            key=lambda s: _off_block_mass(kh, s) / nh + _off_block_mass(kg, s) / ng,
        )
    else:
        best = 0
    return BlockDiagReport(False, best, _ordering_holds(kh, kg, best, tol))
