"""Momentum-projected Hartree energy of N bosons on the ring.

For a single orbital ``phi`` the projected state is the integral over all
rigid translations of the Hartree product.  Every matrix element reduces to
three shift profiles of the orbital:

* ``S[k] = <phi | phi(. - r0_k)>``               (overlap)
* ``K[k] = <phi | T phi(. - r0_k)>``             (kinetic, ``T = -d^2/dphi^2``)
* ``W[k] = <phi^2 | phi^2(. - r0_k)>``           (contact, left factor conjugated)

and the energy per particle is the ratio of shift sums

    eps = sum_k S^(N-2) [S K + c W] / sum_k S^N,   c = u_tilde (N - 1) / 2.

The discrete shifts are the grid nodes, so all shift integrals are exact
circular sums and the functional is exactly invariant under grid shifts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateOrbitalError, NormalizationError
from .grid import RingGrid
from .model import ModelParams

# |S| below this is treated as an exact zero in overlap powers
UNDERFLOW = 1e-250
NORM_TOL = 1e-8


@dataclass(frozen=True)
class Profiles:
    S: np.ndarray
    K: np.ndarray
    W: np.ndarray


def overlap_power(S: np.ndarray, p: int) -> np.ndarray:
    """``S**p`` for integer ``p >= 0`` computed as ``exp(p log S)``.

    Entries with ``|S| < 1e-250`` contribute exactly zero (for ``p > 0``), so
    large particle numbers underflow cleanly instead of producing nan.
    """
    S = np.asarray(S, dtype=complex)
    if p < 0:
        raise ValueError(f"negative overlap power {p}")
    if p == 0:
        return np.ones_like(S)
    if p <= 4:
        return S ** p
    out = np.zeros_like(S)
    keep = np.abs(S) >= UNDERFLOW
    out[keep] = np.exp(p * np.log(S[keep]))
    return out


def _check_unit(grid: RingGrid, phi) -> np.ndarray:
    phi = np.asarray(grid.check(phi), dtype=complex)
    n = grid.norm(phi)
    if abs(n - 1.0) > NORM_TOL:
        raise NormalizationError(f"orbital norm {n!r} deviates from 1")
    return phi


def compute_profiles(grid: RingGrid, phi, params: ModelParams | None = None) -> Profiles:
    """Overlap, kinetic and contact shift profiles of a unit-norm orbital."""
    phi = _check_unit(grid, phi)
    return _profiles(grid, phi)


def _profiles(grid: RingGrid, phi: np.ndarray) -> Profiles:
    sq = phi * phi
    return Profiles(
        S=grid.crosscorr(phi, phi),
        K=grid.crosscorr(phi, grid.kinetic(phi)),
        W=grid.crosscorr(sq, sq),
    )


def energy_density(profiles: Profiles, params: ModelParams, k=None, n: int | None = None):
    """``S K + u_tilde (n - 1)/2 W`` at shift index ``k`` (all shifts if None).

    ``n`` defaults to ``params.N``; the chemical potential needs ``n = N - 1``
    at the same contact strength.
    """
    n = params.N if n is None else n
    c = 0.5 * params.u_tilde * (n - 1)
    S, K, W = profiles.S, profiles.K, profiles.W
    if k is not None:
        return complex(S[k] * K[k] + c * W[k])
    return S * K + c * W


def _sums(profiles: Profiles, params: ModelParams):
    N = params.N
    num = np.sum(overlap_power(profiles.S, N - 2) * energy_density(profiles, params))
    den = np.sum(overlap_power(profiles.S, N))
    if not abs(den) >= UNDERFLOW:
        raise DegenerateOrbitalError(f"projected norm {den!r} vanished")
    return num, den


def energy_per_particle(grid: RingGrid, phi, params: ModelParams) -> float:
    """Projected Hartree energy per particle (scale and shift invariant)."""
    phi = np.asarray(grid.check(phi), dtype=complex)
    n = grid.norm(phi)
    if not n > 0:
        raise DegenerateOrbitalError("zero orbital")
    num, den = _sums(_profiles(grid, phi / n), params)
    value = num / den
    if abs(value.imag) > 1e-10 * max(1.0, abs(value.real)):
        raise ArithmeticError(f"energy has imaginary residue {value.imag!r}")
    return float(value.real)


def energy_and_gradient(grid: RingGrid, phi, params: ModelParams):
    """Energy per particle and its gradient with respect to the samples.

    The gradient is returned as ``dE/dRe(phi_j) + 1j * dE/dIm(phi_j)``, which
    equals twice the Wirtinger derivative ``dE/dconj(phi_j)``.  The steepest
    descent direction is its negative.  Because the energy is homogeneous of
    degree zero the gradient satisfies ``Re <grad, phi> = 0``.
    """
    phi = np.asarray(grid.check(phi), dtype=complex)
    N, c = params.N, 0.5 * params.u_tilde * (params.N - 1)
    pr = _profiles(grid, phi)
    num, den = _sums(pr, params)
    eps = num / den
    S = pr.S
    s_n1 = overlap_power(S, N - 1)
    s_n2 = overlap_power(S, N - 2)
    # derivative of num/den with respect to S[k], K[k], W[k]
    dS = (N - 1) * s_n2 * pr.K - eps * N * s_n1
    if N > 2:
        dS = dS + c * (N - 2) * overlap_power(S, N - 3) * pr.W
    dS /= den
    dK = s_n1 / den
    dW = c * s_n2 / den
    # dS[k]/dconj(phi_m) = delta phi[m-k], likewise for K and W
    wirt = grid.delta * (
        grid.convolve(dS, phi)
        + grid.convolve(dK, grid.kinetic(phi))
        + 2.0 * np.conj(phi) * grid.convolve(dW, phi * phi)
    )
    if abs(eps.imag) > 1e-10 * max(1.0, abs(eps.real)):
        raise ArithmeticError(f"energy has imaginary residue {eps.imag!r}")
    return float(eps.real), 2.0 * wirt


def cci_gradient(grid: RingGrid, phi, params: ModelParams) -> np.ndarray:
    return energy_and_gradient(grid, phi, params)[1]


def _log1p(z: np.ndarray) -> np.ndarray:
    # numpy's complex log1p loses digits for small |z|
    x, y = z.real, z.imag
    return 0.5 * np.log1p(x * (2.0 + x) + y * y) + 1j * np.arctan2(y, 1.0 + x)


def power_change(S: np.ndarray, dS: np.ndarray, p: int) -> np.ndarray:
    """``(S + dS)**p - S**p`` without cancellation for small ``dS``."""
    if p == 0:
        return np.zeros_like(S)
    out = overlap_power(S + dS, p) - overlap_power(S, p)
    keep = np.abs(S) >= UNDERFLOW
    ratio = dS[keep] / S[keep]
    w = np.full(ratio.shape, np.inf, dtype=complex)
    near = np.abs(ratio) < 0.5
    w[near] = p * _log1p(ratio[near])
    small = np.abs(w) < 1.0
    sub = out[keep]
    sub[small] = overlap_power(S[keep][small], p) * np.expm1(w[small])
    out[keep] = sub
    return out


def energy_change(grid: RingGrid, phi, direction, t: float, params: ModelParams) -> float:
    """``E(phi + t d) - E(phi)`` evaluated from the increments of the profiles.

    Near a minimizer the change is far below the rounding error of ``E``
    itself; expanding each profile in ``t`` keeps it accurate to relative
    working precision, which is what the line search needs.
    """
    x = np.asarray(phi, dtype=complex)
    d = np.asarray(direction, dtype=complex)
    N, c = params.N, 0.5 * params.u_tilde * (params.N - 1)
    cc = grid.crosscorr
    tx, td = grid.kinetic(x), grid.kinetic(d)
    x2 = x * x
    q = t * (2.0 * x * d + t * d * d)  # (x + t d)^2 - x^2
    S = cc(x, x)
    K = cc(x, tx)
    W = cc(x2, x2)
    dS = t * (cc(x, d) + cc(d, x) + t * cc(d, d))
    dK = t * (cc(x, td) + cc(d, tx) + t * cc(d, td))
    dW = cc(x2, q) + cc(q, x2) + cc(q, q)

    num = np.sum(overlap_power(S, N - 1) * K + c * overlap_power(S, N - 2) * W)
    den = np.sum(overlap_power(S, N))
    with np.errstate(over="ignore", invalid="ignore"):
        # a wild trial step can push |S + dS| far above |S(0)|; report +inf
        d_num = np.sum(overlap_power(S + dS, N - 1) * dK
                       + power_change(S, dS, N - 1) * K
                       + c * (overlap_power(S + dS, N - 2) * dW
                              + power_change(S, dS, N - 2) * W))
        d_den = np.sum(power_change(S, dS, N))
        change = (d_num * den - num * d_den) / (den * (den + d_den))
    if not np.isfinite(change):
        return float("inf")
    return float(change.real)


def project_tangent(grid: RingGrid, phi, v) -> np.ndarray:
    """Remove the component of ``v`` along ``phi`` (real inner product)."""
    return v - (grid.inner(phi, v).real / grid.inner(phi, phi).real) * phi


def chemical_potential_density(profiles: Profiles, params: ModelParams, eps_N: float, k=None):
    """``S^2 N eps(N) - (N - 1) eps(N - 1; r0)`` at shift index ``k``.

    ``eps(N - 1; r0)`` keeps the contact strength and lowers the pair count,
    so for ``N = 2`` its contact part vanishes.
    """
    N = params.N
    S = profiles.S if k is None else profiles.S[k]
    mu = S * S * N * eps_N - (N - 1) * energy_density(profiles, params, k, n=N - 1)
    return complex(mu) if k is not None else mu


def direct_profiles(grid: RingGrid, phi) -> Profiles:
    """Shift profiles by explicit O(M^2) sums, independent of the FFT path."""
    phi = np.asarray(grid.check(phi), dtype=complex)
    d = grid.delta
    shifted = grid.shift_matrix(phi)  # shifted[j, k] = phi[j - k]
    t_shifted = grid.shift_matrix(grid.kinetic(phi))
    sq_shifted = grid.shift_matrix(phi * phi)
    return Profiles(
        S=d * np.conj(phi) @ shifted,
        K=d * np.conj(phi) @ t_shifted,
        W=d * np.conj(phi * phi) @ sq_shifted,
    )


def cci_residual(grid: RingGrid, phi, params: ModelParams):
    """Pointwise residual of the stationarity (CCI) equation and its norm.

    residual = sum_k d S^(N-2) [S T + (N-1) u phi* phi(.-r0)] phi(.-r0)
             - sum_k d S^(N-3) mu(r0) phi(.-r0)

    assembled with direct O(M^2) shift sums.  For ``N = 2`` the right-hand
    weight ``S^-1 mu`` is simplified to ``2 S eps - K`` before evaluation.
    """
    phi = _check_unit(grid, phi)
    N, u, d = params.N, params.u_tilde, grid.delta
    pr = direct_profiles(grid, phi)
    num = np.sum(overlap_power(pr.S, N - 2) * energy_density(pr, params))
    den = np.sum(overlap_power(pr.S, N))
    if not abs(den) >= UNDERFLOW:
        raise DegenerateOrbitalError(f"projected norm {den!r} vanished")
    eps = (num / den).real

    shifted = grid.shift_matrix(phi)
    t_shifted = grid.shift_matrix(grid.kinetic(phi))
    sq_shifted = grid.shift_matrix(phi * phi)
    lhs = d * (t_shifted @ overlap_power(pr.S, N - 1)
               + (N - 1) * u * np.conj(phi) * (sq_shifted @ overlap_power(pr.S, N - 2)))
    if N == 2:
        weight = 2.0 * pr.S * eps - pr.K
    else:
        mu = chemical_potential_density(pr, params, eps)
        weight = overlap_power(pr.S, N - 3) * mu
    rhs = d * (shifted @ weight)
    res = lhs - rhs
    return res, grid.norm(res)
