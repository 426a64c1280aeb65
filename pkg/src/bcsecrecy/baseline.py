"""Randomized reference search over matrix power constraints.

Independent of the structured algorithms, corners are collected for many
random trace-Pt covariance caps (Wishart directions, occasionally rank
deficient to probe the boundary) and, optionally, for the structured
water-filling family itself.  The Pareto hull of everything found is a lower
estimate of the true region that the fast algorithms must essentially match.

Sampling is deterministic per seed and per sample index: sample i draws from
its own spawned substream, so results do not depend on evaluation order and a
longer run strictly extends a shorter one with the same seed.
"""

from dataclasses import dataclass, replace

import numpy as np

from .avgpower import allocate, corner_rates, diagonalize
from .hull import RegionEstimate, estimate_region
from .linalg import herm
from .sdpc import Channel, CornerPoint, solve_matrix_constraint


@dataclass
class SearchConfig:
    """Knobs of the randomized search."""

    samples: int
    seed: int
    pt: float
    include_sw_family: bool = True
    alpha_grid: int = 101


def sample_constraint(n: int, pt: float, rng: np.random.Generator) -> np.ndarray:
    """One random PSD matrix with trace exactly ``pt``.

    S = pt * A A^H / tr(A A^H) for a complex Gaussian A; with probability 1/3
    A gets fewer than n columns (rank chosen uniformly) so singular
    constraints are exercised too.
    """
    k = n
    if n > 1 and rng.random() < 1.0 / 3.0:
        k = int(rng.integers(1, n))
    a = (rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))) / np.sqrt(2.0)
    b = herm(a @ a.conj().T)
    return pt * b / float(np.real(np.trace(b)))


def search_region(ch: Channel, cfg: SearchConfig) -> RegionEstimate:
    """Collect corners for sampled constraints (plus the structured family)."""
    children = np.random.SeedSequence(cfg.seed).spawn(cfg.samples)
    points: list[CornerPoint] = []
    for child in children:
        rng = np.random.default_rng(child)
        s = sample_constraint(ch.n_t, cfg.pt, rng)
        sol = solve_matrix_constraint(ch, s)
        points.append(replace(sol.corner, provenance="baseline-sample"))
    if cfg.include_sw_family:
        dc = diagonalize(ch)
        for alpha in np.linspace(0.0, 1.0, cfg.alpha_grid):
            corner = corner_rates(dc, allocate(dc, float(alpha), cfg.pt))
            points.append(replace(corner, provenance="sw-family"))
    return estimate_region(points)
