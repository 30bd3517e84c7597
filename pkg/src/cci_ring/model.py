from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConfigError


@dataclass(frozen=True)
class ModelParams:
    """N bosons on a ring with contact coupling.

    ``gamma = u_tilde * (N - 1) / (2 pi)`` is the dimensionless coupling;
    negative values are attractive.
    """

    N: int
    gamma: float
    p0: int = 0

    def __post_init__(self):
        if isinstance(self.N, bool) or not isinstance(self.N, int) or self.N < 2:
            raise ConfigError(f"particle number must be an integer >= 2, got {self.N!r}")
        if not math.isfinite(self.gamma):
            raise ConfigError(f"gamma must be finite, got {self.gamma!r}")
        if self.p0 != 0:
            raise ConfigError("only the zero-momentum sector is supported")
        object.__setattr__(self, "gamma", float(self.gamma))

    @classmethod
    def from_u_tilde(cls, N: int, u_tilde: float) -> "ModelParams":
        return cls(N, u_tilde * (N - 1) / (2.0 * math.pi))

    @property
    def u_tilde(self) -> float:
        return 2.0 * math.pi * self.gamma / (self.N - 1)

    def with_n(self, N: int) -> "ModelParams":
        """Same contact strength, different particle number."""
        return ModelParams.from_u_tilde(N, self.u_tilde)
