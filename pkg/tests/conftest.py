"""Shared fixtures: the worked 2x2 channel pair and random-instance helpers."""

import numpy as np
import pytest

from bcsecrecy import Channel

FIG_H = np.array([[0.3, 2.5], [2.2, 1.8]], dtype=complex)
FIG_G = np.array([[1.3, 1.2], [1.5, 3.9]], dtype=complex)
FIG_PT = 12.0


@pytest.fixture
def fig_channel() -> Channel:
    return Channel(FIG_H.copy(), FIG_G.copy())


def cgauss(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def rand_psd(rng: np.random.Generator, n: int, trace: float | None = None) -> np.ndarray:
    f = cgauss(rng, (n, n))
    s = f @ f.conj().T
    s = 0.5 * (s + s.conj().T)
    if trace is not None:
        s *= trace / float(np.trace(s).real)
    return s


def rand_channel(rng: np.random.Generator, n: int, m1=None, m2=None) -> Channel:
    m1 = int(rng.integers(1, n + 1)) if m1 is None else m1
    m2 = int(rng.integers(1, n + 1)) if m2 is None else m2
    return Channel(cgauss(rng, (m1, n)), cgauss(rng, (m2, n)))
