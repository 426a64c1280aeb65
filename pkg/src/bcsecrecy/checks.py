"""Randomized invariant battery shared by the test suite and the CLI.

Every check draws fresh instances from one seeded generator, pushes them
through the public API, and records the worst residual it sees.  A residual
above its tolerance marks the invariant as violated; the CLI maps that to a
nonzero exit code.  ``inject_fault="gevd"`` corrupts the recovered pencil
basis on purpose so the violation path itself stays tested.
"""

from dataclasses import dataclass

import numpy as np

from .avgpower import SIGMA_TIE_TOL, allocate, corner_rates, diagonalize, make_matrix_constraint
from .linalg import LN2, gevd_definite, herm, projector, psd_sqrt, rate_logdet
from .precoding import loss_bounded_precoders, optimal_precoders, rate_evaluate
from .sdpc import (
    Channel,
    build_pencil,
    orthogonality_defect,
    rank_bound_check,
    solve_matrix_constraint,
)

# Report order; values are the pass thresholds on the max residual.
TOLERANCES = {
    "gevd_diagonalizes": 1e-8,
    "gevd_eigenvalues": 1e-8,
    "sqrt_roundtrip": 1e-10,
    "projector": 1e-10,
    "corner_identity": 1e-8,
    "corner_optimality": 1e-8,
    "swap_symmetry": 1e-8,
    "rank_bound": 0.0,
    "loss_identity": 1e-7,
    "sigma_sum": 1e-9,
    "pencil_range": 1e-9,
    "kkt_stationarity": 1e-8,
    "budget_equality": 1e-10,
    "sw_defect": 1e-8,
    "sw_corner_match": 1e-8,
    "sw_linear_match": 1e-8,
}

FAULTS = ("gevd",)


@dataclass
class InvariantResult:
    """Worst residual observed for one invariant across all trials."""

    name: str
    max_residual: float
    tolerance: float

    @property
    def ok(self) -> bool:
        return self.max_residual <= self.tolerance


@dataclass
class CheckReport:
    """Outcome of one battery run."""

    trials: int
    dim: int
    seed: int
    results: list[InvariantResult]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def as_dict(self) -> dict:
        return {
            "trials": self.trials,
            "dim": self.dim,
            "seed": self.seed,
            "ok": self.ok,
            "invariants": [
                {
                    "name": r.name,
                    "max_residual": r.max_residual,
                    "tolerance": r.tolerance,
                    "ok": r.ok,
                }
                for r in self.results
            ],
        }


def random_channel(rng: np.random.Generator, dim: int) -> Channel:
    """Complex Gaussian channel pair with random receiver counts."""
    m1 = int(rng.integers(1, dim + 1))
    m2 = int(rng.integers(1, dim + 1))
    h = rng.standard_normal((m1, dim)) + 1j * rng.standard_normal((m1, dim))
    g = rng.standard_normal((m2, dim)) + 1j * rng.standard_normal((m2, dim))
    return Channel(h, g)


def random_constraint(rng: np.random.Generator, dim: int, trace: float) -> np.ndarray:
    """Full-rank Wishart matrix normalized to the given trace."""
    f = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    s = herm(f @ f.conj().T)
    return s * (trace / float(np.trace(s).real))


def random_dominated(rng: np.random.Generator, s_sqrt: np.ndarray) -> np.ndarray:
    """Random covariance K with 0 <= K <= S, from S^1/2 U diag(u) U^H S^1/2."""
    n = s_sqrt.shape[0]
    f = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, _ = np.linalg.qr(f)
    d = rng.uniform(0.0, 1.0, n)
    return herm(s_sqrt @ ((q * d) @ q.conj().T) @ s_sqrt)


def _rel(x: np.ndarray, ref: float) -> float:
    return float(np.linalg.norm(x) / (1.0 + ref))


def _objective(ch: Channel, k: np.ndarray) -> float:
    return rate_logdet(ch.H, k) - rate_logdet(ch.G, k)


def _gevd_residuals(ch, s, res, fault):
    c, lam = res.eigvecs, res.eigvals
    if fault == "gevd":
        c = c + 1e-3
    a, b = build_pencil(ch, s)
    diag = _rel(c.conj().T @ a @ c - np.diag(lam), float(np.linalg.norm(a)))
    unit = _rel(c.conj().T @ b @ c - np.eye(len(lam)), float(np.linalg.norm(b)))
    brute = np.sort(np.linalg.eigvals(np.linalg.solve(b, a)).real)[::-1]
    eig = float(np.max(np.abs(brute - lam) / (1.0 + np.abs(brute))))
    return max(diag, unit), eig


def _waterfill_residuals(dc, alloc, pt):
    kkt = budget = 0.0
    blocks = (
        (alloc.p1, alloc.mu1, dc.sigma1[: dc.rho], dc.sigma2[: dc.rho],
         dc.a[: dc.rho], alloc.alpha * pt),
        (alloc.p2, alloc.mu2, dc.sigma2[dc.rho:], dc.sigma1[dc.rho:],
         dc.a[dc.rho:], (1.0 - alloc.alpha) * pt),
    )
    for p, mu, strong, weak, cost, share in blocks:
        live = (strong - weak) > SIGMA_TIE_TOL
        if not np.any(live) or share <= 0 or not np.isfinite(mu):
            continue
        budget = max(budget, abs(float(p @ cost) - share) / share)
        on = live & (p > 0)
        if np.any(on):
            slope = strong[on] / (1.0 + strong[on] * p[on]) - weak[on] / (
                1.0 + weak[on] * p[on]
            )
            kkt = max(kkt, float(np.max(np.abs(slope - mu * cost[on]) / (mu * cost[on]))))
        off = live & (p == 0)
        if np.any(off):
            kkt = max(kkt, float(np.max((strong - weak)[off] - mu * cost[off])), 0.0)
    return kkt, budget


def run_battery(
    trials: int, dim: int, seed: int, inject_fault: str | None = None
) -> CheckReport:
    """Run every invariant on ``trials`` random instances of width ``dim``."""
    if inject_fault is not None and inject_fault not in FAULTS:
        raise ValueError(f"unknown fault {inject_fault!r}, expected one of {FAULTS}")
    if dim < 1:
        raise ValueError("dim must be at least 1")
    rng = np.random.default_rng(seed)
    worst = dict.fromkeys(TOLERANCES, 0.0)

    def note(name: str, value: float) -> None:
        worst[name] = max(worst[name], float(value))

    pt = float(dim)
    for _ in range(max(0, trials)):
        ch = random_channel(rng, dim)
        s = random_constraint(rng, dim, pt)
        sol = solve_matrix_constraint(ch, s)

        diag, eig = _gevd_residuals(ch, s, sol.gevd, inject_fault)
        note("gevd_diagonalizes", diag)
        note("gevd_eigenvalues", eig)

        s_sqrt = psd_sqrt(s)
        note("sqrt_roundtrip", _rel(s_sqrt @ s_sqrt - s, float(np.linalg.norm(s))))

        c1 = sol.gevd.upper_vecs if sol.gevd.b else sol.gevd.eigvecs
        p1 = projector(c1)
        note("projector", _rel(p1 @ p1 - p1, 1.0))
        note("projector", _rel(p1 @ c1 - c1, float(np.linalg.norm(c1))))

        r1, r2 = sol.corner.nats()
        direct1 = _objective(ch, sol.kt_star)
        direct2 = (
            rate_logdet(ch.G, s) - rate_logdet(ch.G, sol.kt_star)
            - rate_logdet(ch.H, s) + rate_logdet(ch.H, sol.kt_star)
        )
        note("corner_identity", abs(r1 - direct1))
        note("corner_identity", abs(r2 - direct2))

        for _ in range(5):
            k = random_dominated(rng, s_sqrt)
            note("corner_optimality", max(0.0, _objective(ch, k) - direct1))

        swapped = solve_matrix_constraint(ch.swapped(), s)
        note("swap_symmetry", abs(sol.corner.R1 - swapped.corner.R2))
        note("swap_symmetry", abs(sol.corner.R2 - swapped.corner.R1))

        bound = rank_bound_check(ch, sol)
        note("rank_bound", 0.0 if bound.holds and bound.lower_holds else 1.0)

        loss = loss_bounded_precoders(sol)
        note("loss_identity", abs(loss.exact.R1 - loss.guaranteed.R1))
        note("loss_identity", abs(loss.exact.R2 - loss.guaranteed.R2))

        dc = diagonalize(ch)
        note("sigma_sum", float(np.max(np.abs(dc.sigma1 + dc.sigma2 - 1.0))))

        gh = herm(dc.w @ Channel(ch.H @ dc.u_p, ch.G @ dc.u_p).gram_h() @ dc.w)
        gg = herm(dc.w @ Channel(ch.H @ dc.u_p, ch.G @ dc.u_p).gram_g() @ dc.w)
        eye = np.eye(dc.n)
        lam = np.linalg.eigvals(np.linalg.solve(gg + eye, gh + eye)).real
        note("pencil_range", max(0.0, float(lam.max()) - 2.0))
        note("pencil_range", max(0.0, 0.5 - float(lam.min())))

        alloc = allocate(dc, float(rng.uniform(0.05, 0.95)), pt)
        kkt, budget = _waterfill_residuals(dc, alloc, pt)
        note("kkt_stationarity", kkt)
        note("budget_equality", budget)

        p = alloc.full_vector()
        if p.sum() > 0:
            s_w = make_matrix_constraint(dc, p)
            sol_w = solve_matrix_constraint(ch, s_w)
            note("sw_defect", orthogonality_defect(sol_w))
            want = corner_rates(dc, alloc)
            note("sw_corner_match", abs(sol_w.corner.R1 - want.R1))
            note("sw_corner_match", abs(sol_w.corner.R2 - want.R2))
            got = rate_evaluate(ch, optimal_precoders(sol_w))
            note("sw_linear_match", abs(got.R1 - sol_w.corner.R1))
            note("sw_linear_match", abs(got.R2 - sol_w.corner.R2))

    results = [InvariantResult(k, worst[k], tol) for k, tol in TOLERANCES.items()]
    return CheckReport(trials, dim, seed, results)
