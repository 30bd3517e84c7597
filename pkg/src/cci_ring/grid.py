"""Uniform periodic grid on the ring angle in [-pi, pi).

Functions on the grid are plain complex ``numpy`` arrays of length ``M``.
Shift profiles (functions of the shift ``r0``) are arrays of the same length
indexed by the shift node ``k``, i.e. ``r0 = k * delta`` taken mod ``2 pi``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, GridMismatchError


@dataclass(frozen=True)
class RingGrid:
    """Fourier pseudospectral grid with ``M`` nodes ``-pi + j * delta``."""

    M: int
    delta: float = field(init=False)
    nodes: np.ndarray = field(init=False, repr=False)
    wavenumbers: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if isinstance(self.M, bool) or not isinstance(self.M, (int, np.integer)):
            raise ConfigError(f"grid size must be an integer, got {self.M!r}")
        if self.M < 8 or self.M % 2:
            raise ConfigError(f"grid size must be even and >= 8, got {self.M}")
        M = int(self.M)
        delta = 2.0 * np.pi / M
        nodes = -np.pi + delta * np.arange(M)
        wavenumbers = np.fft.fftfreq(M, d=1.0 / M).astype(np.int64)
        nodes.flags.writeable = False
        wavenumbers.flags.writeable = False
        object.__setattr__(self, "M", M)
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "wavenumbers", wavenumbers)

    # -- helpers -----------------------------------------------------------

    @property
    def center(self) -> int:
        """Index of the node at angle 0."""
        return self.M // 2

    @property
    def shifts(self) -> np.ndarray:
        """Shift values ``r0`` for shift index ``k``, wrapped into [-pi, pi)."""
        k = np.arange(self.M)
        return np.where(k < self.M // 2, k, k - self.M) * self.delta

    def check(self, f) -> np.ndarray:
        f = np.asarray(f)
        if f.shape != (self.M,):
            raise GridMismatchError(
                f"expected samples of shape ({self.M},), got {f.shape}")
        return f

    def sample(self, func) -> np.ndarray:
        """Sample a callable at the grid nodes as a complex array."""
        return np.asarray(func(self.nodes), dtype=complex) * np.ones(self.M)

    # -- quadrature and operators -----------------------------------------

    def inner(self, f, g) -> complex:
        """Quadrature inner product ``sum conj(f) g * delta``."""
        f, g = self.check(f), self.check(g)
        return complex(np.vdot(f, g) * self.delta)

    def norm(self, f) -> float:
        f = self.check(f)
        return float(np.sqrt(np.sum(np.abs(f) ** 2) * self.delta))

    def normalize(self, f) -> np.ndarray:
        return np.asarray(f, dtype=complex) / self.norm(f)

    def kinetic(self, f) -> np.ndarray:
        """Apply ``-d^2/dphi^2`` spectrally (mode ``n`` times ``n**2``)."""
        f = self.check(f)
        return np.fft.ifft(self.wavenumbers.astype(float) ** 2 * np.fft.fft(f))

    apply_kinetic = kinetic

    def crosscorr(self, f, g) -> np.ndarray:
        """Shift profile ``h[k] = sum_j conj(f[j]) g[j - k] * delta``.

        ``h[0]`` equals ``inner(f, g)``. Computed with FFTs in O(M log M).
        """
        f, g = self.check(f), self.check(g)
        spec = np.conj(np.fft.fft(f)) * np.fft.fft(g)
        return np.fft.fft(spec) * (self.delta / self.M)

    def convolve(self, a, f) -> np.ndarray:
        """Circular convolution ``sum_k a[k] f[j - k]`` (no quadrature weight)."""
        a, f = self.check(a), self.check(f)
        return np.fft.ifft(np.fft.fft(a) * np.fft.fft(f))

    def shift(self, f, j: int) -> np.ndarray:
        """Rotate samples so that ``out[i] == f[i - j]`` (periodic)."""
        return np.roll(self.check(f), int(j) % self.M)

    def shift_matrix(self, f) -> np.ndarray:
        """Circulant matrix ``C[i, k] = f[i - k]`` used by direct O(M^2) sums."""
        f = self.check(f)
        idx = (np.arange(self.M)[:, None] - np.arange(self.M)[None, :]) % self.M
        return f[idx]


def make_grid(M: int) -> RingGrid:
    return RingGrid(M)
