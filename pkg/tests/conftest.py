"""Shared fixtures.  Solves are cached per session because several test
modules (and the acceptance suite) look at the same converged orbitals."""

from functools import lru_cache

import numpy as np
import pytest

from cci_ring import ModelParams, RingGrid, SolveConfig, solve_cci, solve_gp

ACCEPTANCE_LINES: list = []


@lru_cache(maxsize=None)
def cci_solution(N: int, gamma: float, M: int = 256, tol: float | None = None):
    config = SolveConfig() if tol is None else SolveConfig(tol_grad=tol)
    return solve_cci(RingGrid(M), ModelParams(N, gamma), config)


@lru_cache(maxsize=None)
def gp_solution(N: int, gamma: float, M: int = 256):
    return solve_gp(RingGrid(M), ModelParams(N, gamma))


@pytest.fixture
def grid():
    return RingGrid(256)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_orbital(grid, rng, bandwidth=None):
    """Normalized random complex orbital, optionally band-limited."""
    phi = rng.standard_normal(grid.M) + 1j * rng.standard_normal(grid.M)
    if bandwidth is not None:
        spec = np.fft.fft(phi)
        spec[np.abs(grid.wavenumbers) > bandwidth] = 0.0
        phi = np.fft.ifft(spec)
    return grid.normalize(phi)


def smooth_orbital(grid, rng, modes=6):
    """Normalized smooth random orbital with a few low modes and a bump."""
    phi = np.exp(np.cos(grid.nodes)).astype(complex)
    for n in range(1, modes + 1):
        c = (rng.standard_normal() + 1j * rng.standard_normal()) * 0.3 / n
        phi = phi + c * np.exp(1j * n * grid.nodes)
    return grid.normalize(phi)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
