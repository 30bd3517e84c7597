from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

import numpy as np

from .functional import (cci_residual, energy_and_gradient, energy_change, energy_per_particle,
                         project_tangent)
from .grid import RingGrid
from .model import ModelParams
from .optimize import SolveConfig, fix_gauge, initial_orbital, minimize_on_sphere


@dataclass
class CciResult:
    """Optimized symmetry-broken orbital and its projected energy."""

    orbital: np.ndarray
    energy_per_particle: float
    iterations: int
    grad_norm: float
    residual_norm: float
    converged: bool
    energy_trace: list = field(default_factory=list)
    message: str = ""
    max_imag: float = 0.0

    @property
    def density(self) -> np.ndarray:
        return np.abs(self.orbital) ** 2


def solve_cci(grid: RingGrid, params: ModelParams, config: SolveConfig | None = None,
              phi0=None) -> CciResult:
    """Minimize the projected energy over unit-norm orbitals.

    The returned orbital has its density peak at angle 0 (when
    ``config.recenter``) and a real positive value there.  A non-converged
    run returns the last (lowest) iterate with ``converged=False``.

    Attractive ground states are real up to a global phase, but the
    imaginary part is an extremely soft direction and relaxes much more
    slowly than the gradient.  For ``gamma < 0`` a converged run is
    therefore continued with a tenfold tighter gradient tolerance, down
    to ``config.polish_floor``, until ``max|Im phi| <= config.imag_tol``.
    ``max_imag`` reports the final value; nothing is discarded.
    """
    config = config or SolveConfig()
    if phi0 is None:
        phi0 = initial_orbital(grid, config)

    def fun(phi):
        return energy_and_gradient(grid, phi, params)

    def change(phi, d, t):
        return energy_change(grid, phi, d, t, params)

    res = minimize_on_sphere(grid, fun, change, phi0, config)
    iterations, trace = res.iterations, list(res.energy_trace)
    tol = config.tol_grad
    while (params.gamma < 0 and res.converged and _max_imag(res.orbital) > config.imag_tol
           and tol > config.polish_floor and iterations < config.max_iter):
        tol = max(tol / 10.0, config.polish_floor)
        stage = dataclasses.replace(config, tol_grad=tol, max_iter=config.max_iter - iterations)
        res = minimize_on_sphere(grid, fun, change, res.orbital, stage, energy0=res.energy)
        iterations += res.iterations
        trace += res.energy_trace[1:]
        # a stalled polish stage still satisfies the caller's tolerance
        res.converged = res.grad_norm <= config.tol_grad
    orbital, grad_norm = res.orbital, res.grad_norm
    if params.N == 2 and config.recenter and res.converged:
        # the gradient norm is not invariant within the degenerate family, so
        # refine from the canonical point until it meets the tolerance there
        for _ in range(PAIR_GAUGE_ROUNDS):
            orbital, grad_norm = _canonical_pair_gauge(grid, params, res.orbital, res.grad_norm)
            if grad_norm <= config.tol_grad or iterations >= config.max_iter:
                break
            stage = dataclasses.replace(config, tol_grad=config.tol_grad / 10.0,
                                        max_iter=config.max_iter - iterations)
            res = minimize_on_sphere(grid, fun, change, orbital, stage, energy0=trace[-1])
            iterations += res.iterations
            trace += res.energy_trace[1:]
        res.converged = grad_norm <= config.tol_grad
    _, rnorm = cci_residual(grid, orbital, params)
    return CciResult(
        orbital=orbital,
        energy_per_particle=energy_per_particle(grid, orbital, params),
        iterations=iterations,
        grad_norm=grad_norm,
        residual_norm=rnorm,
        converged=res.converged,
        energy_trace=trace,
        message=res.message,
        max_imag=_max_imag(orbital),
    )


# the pair gauge is accepted only if it leaves the energy unchanged to this level
PAIR_GAUGE_TOL = 1e-12
PAIR_GAUGE_ROUNDS = 4


def _canonical_pair_gauge(grid: RingGrid, params: ModelParams, phi, grad_norm):
    """Representative of the N = 2 degenerate family with equal +/-n coefficients.

    For two particles the projected energy depends on the Fourier
    coefficients only through ``|a_n|`` and the pair products ``a_n a_-n``,
    so the relative phase of every +/-n pair is a free gauge.  At a
    minimizer the moduli agree and all products share one phase; replacing
    each pair by the principal root of its (phase-aligned) product gives the
    even orbital built from the relative-motion coefficients.  The
    replacement is kept only if the energy is unchanged.
    """
    n = grid.wavenumbers
    sign = np.where(n % 2 == 0, 1.0, -1.0)  # FFT phases refer to nodes starting at -pi
    a = np.fft.fft(phi) * sign
    prod = a * a[(-np.arange(grid.M)) % grid.M]
    ref = np.sum(prod)
    if abs(ref) == 0:
        return phi, grad_norm
    b = np.sqrt(prod * (abs(ref) / ref))
    candidate = grid.normalize(np.fft.ifft(b * sign))
    candidate = fix_gauge(grid, candidate, True)
    e_old = energy_per_particle(grid, phi, params)
    e_new, g = energy_and_gradient(grid, candidate, params)
    if abs(e_new - e_old) > PAIR_GAUGE_TOL * max(1.0, abs(e_old)):
        return phi, grad_norm
    g = project_tangent(grid, candidate, g)
    return candidate, float(np.max(np.abs(g)))


def _max_imag(phi) -> float:
    return float(np.max(np.abs(np.imag(phi))))


def cci_energy_of(grid: RingGrid, phi, params: ModelParams) -> float:
    """Projected energy of a fixed (not optimized) orbital, e.g. the GP one."""
    return energy_per_particle(grid, phi, params)
