"""Exact two-body solutions and their symmetry-broken orbital decompositions.

Two particles on the ring separate into centre-of-mass and relative motion.
Every eigenstate with total momentum ``P0`` can be written as an integral
over translations of a Hartree (bosons) or Hartree-Fock (fermions) product
built from one or two orbitals whose Fourier coefficients are square roots of
the relative-motion coefficients.  This module solves the relative problem,
builds those orbitals on a grid, reconstructs the two-body wavefunction from
them and compares it with the direct expansion.

A small Fock-space diagonalizer for up to four bosons provides the exact
ground state against which the CCI and GP energies are bracketed.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.linalg import eigh
from scipy.optimize import brentq
from scipy.sparse import coo_matrix
from scipy.sparse.linalg import eigsh

from .errors import BasisTooLargeError, ConfigError
from .grid import RingGrid
from .model import ModelParams

SECTORS = ("even", "odd", "general")
# above this Fock dimension the Lanczos path replaces dense diagonalization
DENSE_LIMIT = 1500
SYMMETRIC, ANTISYMMETRIC = "symmetric", "antisymmetric"


@dataclass(frozen=True)
class InteractionSpec:
    """Pair interaction ``U(theta)`` with ``theta = phi_1 - phi_2``.

    ``contact``: ``strength * delta(theta)``.
    ``fourier``: ``sum_m coeffs[m] * cos(m theta)``.
    """

    kind: str
    strength: float = 0.0
    coeffs: tuple = ()

    def __post_init__(self):
        if self.kind not in ("contact", "fourier"):
            raise ConfigError(f"unknown interaction kind {self.kind!r}")
        object.__setattr__(self, "coeffs", tuple(float(u) for u in self.coeffs))

    @classmethod
    def contact(cls, strength: float) -> "InteractionSpec":
        return cls("contact", strength=float(strength))

    @classmethod
    def fourier(cls, coeffs: Sequence[float]) -> "InteractionSpec":
        return cls("fourier", coeffs=tuple(coeffs))

    def plane_wave(self, m: np.ndarray) -> np.ndarray:
        """Plane-wave components ``U_m`` with ``U(theta) = sum_m U_m e^{i m theta}``."""
        m = np.abs(np.asarray(m))
        if self.kind == "contact":
            return np.full(m.shape, self.strength / (2.0 * np.pi))
        u = np.zeros(m.shape)
        for order, coeff in enumerate(self.coeffs):
            u[m == order] += coeff if order == 0 else 0.5 * coeff
        return u


@dataclass
class RelativeSolution:
    """One eigenstate of the two-body problem in a fixed symmetry sector.

    For ``p0 == 0`` in the ``even``/``odd`` sectors, ``coefficients[k]`` are
    the real amplitudes ``A_k`` (``k = 0..n_max``) in

        even:  Psi = A_0 + 1/2 sum_{k>0} A_k cos(k theta)
        odd:   Psi =       sum_{k>0} A_k sin(k theta)

    For the ``general`` sector ``coefficients[i]`` is ``A_p`` for particle-1
    momentum ``p = momenta[i]`` and

        Psi = sum_p (A_p +/- A_{P0-p}) e^{i p phi_1} e^{i (P0-p) phi_2}.

    Either way ``Psi`` has unit norm on the torus ``[-pi, pi)^2``.
    """

    sector: str
    p0: int
    n_max: int
    statistics: str
    level_index: int
    energy: float
    coefficients: np.ndarray
    momenta: np.ndarray = field(repr=False)


def _even_odd_hamiltonian(interaction: InteractionSpec, sector: str, n_max: int) -> np.ndarray:
    n = np.arange(n_max + 1) if sector == "even" else np.arange(1, n_max + 1)
    kinetic = np.diag(2.0 * n.astype(float) ** 2)
    if interaction.kind == "contact":
        if sector == "odd":
            return kinetic
        vals = np.full(n.shape, 1.0 / np.sqrt(np.pi))
        vals[n == 0] = 1.0 / np.sqrt(2.0 * np.pi)
        return kinetic + interaction.strength * np.outer(vals, vals)
    # exact quadrature for trigonometric polynomials of degree < L
    L = 2 * (2 * n_max + len(interaction.coeffs) + 1)
    theta = -np.pi + 2.0 * np.pi * np.arange(L) / L
    pot = sum(u * np.cos(m * theta) for m, u in enumerate(interaction.coeffs))
    if sector == "even":
        basis = np.cos(np.outer(n, theta)) / np.sqrt(np.pi)
        basis[n == 0] = 1.0 / np.sqrt(2.0 * np.pi)
    else:
        basis = np.sin(np.outer(n, theta)) / np.sqrt(np.pi)
    return kinetic + (basis * pot) @ basis.T * (2.0 * np.pi / L)


def _momentum_window(p0: int, n_max: int) -> np.ndarray:
    """Particle-1 momenta ``p`` with relative momentum ``|p - p0/2| <= n_max``."""
    lo = math.ceil(p0 / 2 - n_max)
    hi = math.floor(p0 / 2 + n_max)
    return np.arange(lo, hi + 1)


def _general_hamiltonian(interaction: InteractionSpec, p0: int, n_max: int, statistics: str):
    p = _momentum_window(p0, n_max)
    kinetic = p.astype(float) ** 2 + (p0 - p).astype(float) ** 2
    H = np.diag(kinetic) + interaction.plane_wave(p[:, None] - p[None, :])
    # orthonormal (anti)symmetrized pair states (e_p +/- e_{p0-p}) / sqrt(2)
    index = {int(q): i for i, q in enumerate(p)}
    sign = 1.0 if statistics == SYMMETRIC else -1.0
    cols = []
    for i, q in enumerate(p):
        partner = p0 - int(q)
        if partner < q:
            continue
        v = np.zeros(len(p))
        if partner == q:
            if statistics == ANTISYMMETRIC:
                continue
            v[i] = 1.0
        else:
            v[i] = 1.0 / np.sqrt(2.0)
            v[index[partner]] = sign / np.sqrt(2.0)
        cols.append(v)
    V = np.array(cols).T
    return p, H, V


def solve_relative(interaction: InteractionSpec, sector: str = "even", p0: int = 0,
                   n_max: int = 64, level: int = 0,
                   statistics: str | None = None) -> RelativeSolution:
    """Eigenstate ``level`` of two particles on the ring in a symmetry sector.

    ``even``/``odd`` solve the ``P0 = 0`` relative problem ``-2 d^2/dtheta^2 +
    U(theta)`` in the cosine/sine basis with ``|k| <= n_max``.  ``general``
    diagonalizes the pair Hamiltonian in the plane-wave basis of total
    momentum ``p0`` restricted to ``statistics``.
    """
    if sector not in SECTORS:
        raise ConfigError(f"sector must be one of {SECTORS}, got {sector!r}")
    if n_max < 8:
        raise ConfigError(f"n_max must be >= 8, got {n_max}")
    if sector != "general" and p0 != 0:
        raise ConfigError("even/odd sectors describe p0 = 0; use sector='general'")
    if statistics is None:
        statistics = ANTISYMMETRIC if sector == "odd" else SYMMETRIC
    if statistics not in (SYMMETRIC, ANTISYMMETRIC):
        raise ConfigError(f"unknown statistics {statistics!r}")

    if sector == "general":
        p, H, V = _general_hamiltonian(interaction, p0, n_max, statistics)
        Hs = V.T @ H @ V
        assert np.allclose(Hs, Hs.conj().T, atol=1e-12), "non-Hermitian assembly"
        if not 0 <= level < Hs.shape[0]:
            raise ConfigError(f"level {level} outside basis of size {Hs.shape[0]}")
        w, vecs = eigh(Hs)
        b = V @ vecs[:, level]
        # Psi = sum_p b_p e^{i p phi1} e^{i (p0-p) phi2} / (2 pi), unit norm
        coeffs = (b / (4.0 * np.pi)).astype(complex)
        return RelativeSolution(sector, p0, n_max, statistics, level, float(w[level]),
                                coeffs, p)

    H = _even_odd_hamiltonian(interaction, sector, n_max)
    assert np.allclose(H, H.T, atol=1e-12), "non-Hermitian assembly"
    if not 0 <= level < H.shape[0]:
        raise ConfigError(f"level {level} outside basis of size {H.shape[0]}")
    w, vecs = eigh(H)
    v = vecs[:, level]
    # fix the sign so the largest component is positive (deterministic output)
    v = v * np.sign(v[np.argmax(np.abs(v))])
    coeffs = np.zeros(n_max + 1)
    if sector == "even":
        # psi(theta)/sqrt(2 pi) = v_0/(2 pi) + sum v_k cos(k theta)/(pi sqrt 2)
        coeffs[0] = v[0] / (2.0 * np.pi)
        coeffs[1:] = v[1:] * np.sqrt(2.0) / np.pi
    else:
        coeffs[1:] = v / (np.pi * np.sqrt(2.0))
    return RelativeSolution(sector, 0, n_max, statistics, level, float(w[level]),
                            coeffs, np.arange(n_max + 1))


def contact_bound_state_energy(u_tilde: float) -> float:
    """Exact ground energy of two particles with attractive contact coupling.

    The relative wavefunction ``cosh(kappa (pi - |theta|))`` satisfies the
    contact matching condition ``kappa tanh(pi kappa) = |u|/4``; the energy
    is ``-2 kappa^2``.
    """
    if not u_tilde < 0:
        raise ConfigError("bound state requires attractive coupling")
    target = abs(u_tilde) / 4.0
    hi = max(1.0, 2.0 * target)
    kappa = brentq(lambda k: k * np.tanh(np.pi * k) - target, 1e-300, hi, xtol=1e-15, rtol=1e-15)
    return -2.0 * kappa**2


def extrapolated_relative_energy(interaction: InteractionSpec, n_max: int = 512,
                                 levels: int = 5, level: int = 0, sector: str = "even"):
    """Cutoff-extrapolated relative energy from a halving ladder of diagonalizations.

    A contact interaction converges only algebraically in the cutoff
    (``E(n) ~ E + a/n + b/n^2 + ...``).  The energies at ``n_max, n_max/2, ...``
    are fitted by a polynomial in ``1/n`` and evaluated at ``1/n = 0``.
    Returns ``(extrapolated, raw_energies_by_cutoff)``.
    """
    cutoffs = [n_max // 2**i for i in range(levels)][::-1]
    if cutoffs[0] < 8:
        raise ConfigError(f"ladder from n_max={n_max} with {levels} levels drops below 8")
    energies = {n: solve_relative(interaction, sector, 0, n, level).energy for n in cutoffs}
    inv = 1.0 / np.array(cutoffs, dtype=float)
    A = np.vander(inv, levels, increasing=True)
    coeffs = np.linalg.solve(A, np.array([energies[n] for n in cutoffs]))
    return float(coeffs[0]), energies


@dataclass
class OrbitalPair:
    """Two grid orbitals; ``negative_modes`` counts coefficients with ``A < 0``."""

    phi1: np.ndarray
    phi2: np.ndarray
    grid: RingGrid = field(repr=False)
    negative_modes: int = 0

    @property
    def is_real(self) -> bool:
        return bool(np.all(np.isreal(self.phi1)) and np.all(np.isreal(self.phi2)))


def principal_sqrt(a) -> np.ndarray:
    """Principal square root; negative reals map to ``+1j * sqrt(|a|)``."""
    return np.sqrt(np.asarray(a, dtype=complex))


def build_orbitals(solution: RelativeSolution, grid: RingGrid) -> OrbitalPair:
    """Sample the two symmetry-broken orbitals of a two-body eigenstate.

    ``p0 = 0``: ``phi1 = sum_{k>=0} sqrt(A_k) cos(k r) / sqrt(2 pi)`` and
    ``phi2 = sum_{k>0} sqrt(A_k) sin(k r) / sqrt(2 pi)``.
    ``general``: ``phi1 = sum_p sqrt(A_p) e^{i p r}``, ``phi2`` uses
    ``sqrt(A_{P0 - p})`` (both divided by ``sqrt(2 pi)``).
    """
    r = grid.nodes
    A = solution.coefficients
    # positivity is checked, not assumed: negative (or complex) A_k take the
    # complex-orbital path through the principal root
    negative = int(np.sum(np.iscomplex(A) | (np.real(A) < 0)))
    root = principal_sqrt(A)
    if negative == 0:
        root = root.real
    norm = 1.0 / np.sqrt(2.0 * np.pi)
    if solution.sector == "general":
        p = solution.momenta
        lookup = dict(zip(p.tolist(), root))
        partner = np.array([lookup.get(solution.p0 - int(q), 0.0) for q in p])
        waves = np.exp(1j * np.outer(r, p))
        return OrbitalPair(norm * waves @ root, norm * waves @ partner, grid, negative)
    k = solution.momenta
    phi1 = norm * np.cos(np.outer(r, k)) @ root
    phi2 = norm * np.sin(np.outer(r, k[1:])) @ root[1:]
    return OrbitalPair(phi1, phi2, grid, negative)


@dataclass
class TwoBodyWavefunction:
    """Samples ``values[i1, i2] = Psi(phi_i1, phi_i2)`` on a grid."""

    values: np.ndarray
    statistics: str
    p0: int
    grid: RingGrid = field(repr=False)

    def normalized(self) -> "TwoBodyWavefunction":
        n = np.sqrt(np.sum(np.abs(self.values) ** 2)) * self.grid.delta
        return TwoBodyWavefunction(self.values / n, self.statistics, self.p0, self.grid)


def reconstruct(pair: OrbitalPair, p0: int = 0, statistics: str = SYMMETRIC,
                normalize: bool = True) -> TwoBodyWavefunction:
    """Translation integral of the Hartree or Hartree-Fock product.

    Psi(r1, r2) = sum_j delta e^{i p0 r0_j}
                  [phi1(r1 - r0_j) phi2(r2 - r0_j) +/- phi2(r1 - r0_j) phi1(r2 - r0_j)]

    For ``p0 = 0`` and symmetric statistics the Hartree product of ``phi1``
    alone is used (``phi2`` is ignored).  Unnormalized, the ``p0 != 0`` result
    equals the coefficient expansion; the ``p0 = 0`` determinant equals
    minus the sine expansion.
    """
    if statistics not in (SYMMETRIC, ANTISYMMETRIC):
        raise ConfigError(f"unknown statistics {statistics!r}")
    grid = pair.grid
    A1 = grid.shift_matrix(grid.check(pair.phi1))  # A1[i, j] = phi1(r_i - r0_j)
    weight = grid.delta * np.exp(1j * p0 * grid.delta * np.arange(grid.M))
    if p0 == 0 and statistics == SYMMETRIC:
        psi = (A1 * weight) @ A1.T
    else:
        A2 = grid.shift_matrix(grid.check(pair.phi2))
        first = (A1 * weight) @ A2.T
        psi = first + first.T if statistics == SYMMETRIC else first - first.T
    out = TwoBodyWavefunction(psi, statistics, p0, grid)
    return out.normalized() if normalize else out


def direct_wavefunction(solution: RelativeSolution, grid: RingGrid) -> TwoBodyWavefunction:
    """Two-body wavefunction sampled directly from the coefficient expansion."""
    r = grid.nodes
    theta = r[:, None] - r[None, :]
    A = solution.coefficients
    if solution.sector == "even":
        k = solution.momenta
        psi = A[0] + 0.5 * sum(A[i] * np.cos(k[i] * theta) for i in range(1, len(k)))
        stats = SYMMETRIC
    elif solution.sector == "odd":
        k = solution.momenta
        psi = sum(A[i] * np.sin(k[i] * theta) for i in range(1, len(k)))
        stats = ANTISYMMETRIC
    else:
        p, p0 = solution.momenta, solution.p0
        lookup = dict(zip(p.tolist(), A))
        sign = 1.0 if solution.statistics == SYMMETRIC else -1.0
        b = np.array([lookup[int(q)] + sign * lookup.get(p0 - int(q), 0.0) for q in p])
        e1 = np.exp(1j * np.outer(r, p))
        e2 = np.exp(1j * np.outer(r, p0 - p))
        psi = (e1 * b) @ e2.T
        stats = solution.statistics
    return TwoBodyWavefunction(np.asarray(psi, dtype=complex), stats, solution.p0, grid)


def aligned_error(a: TwoBodyWavefunction, b: TwoBodyWavefunction) -> float:
    """Max pointwise difference after normalizing both and matching global phase."""
    x, y = a.normalized().values, b.normalized().values
    overlap = np.vdot(x, y)
    phase = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    return float(np.max(np.abs(x * phase - y)))


def momentum_check(psi: TwoBodyWavefunction):
    """Expectation and variance of the total momentum ``-i (d1 + d2)``."""
    spec = np.fft.fft2(psi.values)
    n = psi.grid.wavenumbers.astype(float)
    total = n[:, None] + n[None, :]
    w = np.abs(spec) ** 2
    w /= w.sum()
    mean = float(np.sum(w * total))
    var = float(np.sum(w * (total - mean) ** 2))
    return mean, var


# -- Fock-space diagonalization --------------------------------------------


def fock_basis(N: int, n_max: int, total_momentum: int = 0) -> list:
    """Sorted momentum multisets of ``N`` bosons with ``|n| <= n_max``."""
    modes = range(-n_max, n_max + 1)
    return [s for s in itertools.combinations_with_replacement(modes, N)
            if sum(s) == total_momentum]


def fock_hamiltonian(N: int, u_tilde: float, n_max: int, max_dim: int = 20000,
                     sparse: bool = False):
    """Hamiltonian of ``N`` bosons with contact coupling, zero total momentum.

    H = sum_n n^2 a_n^+ a_n + u/(4 pi) sum a_{k1}^+ a_{k2}^+ a_{k3} a_{k4},
    with ``k1 + k2 = k3 + k4`` and all modes inside the cutoff.  Returns a
    dense array, or CSR when ``sparse``.
    """
    basis = fock_basis(N, n_max)
    dim = len(basis)
    if dim > max_dim:
        raise BasisTooLargeError(f"Fock basis of dimension {dim} exceeds cap {max_dim}")
    index = {s: i for i, s in enumerate(basis)}
    g = u_tilde / (4.0 * np.pi)
    rows, cols, vals = [], [], []
    for col, state in enumerate(basis):
        rows.append(col)
        cols.append(col)
        vals.append(float(sum(n * n for n in state)))
        occ = _occupations(state)
        # annihilate an ordered pair (k3, k4), then create (k1, k2)
        for k3 in occ:
            occ3 = dict(occ)
            occ3[k3] -= 1
            for k4 in occ3:
                if occ3[k4] == 0:
                    continue
                amp = math.sqrt(occ[k3]) * math.sqrt(occ3[k4])
                occ4 = dict(occ3)
                occ4[k4] -= 1
                total = k3 + k4
                for k1 in range(max(-n_max, total - n_max), min(n_max, total + n_max) + 1):
                    k2 = total - k1
                    new = dict(occ4)
                    new[k2] = new.get(k2, 0) + 1
                    a2 = math.sqrt(new[k2])
                    new[k1] = new.get(k1, 0) + 1
                    rows.append(index[_state_of(new)])
                    cols.append(col)
                    vals.append(g * amp * math.sqrt(new[k1]) * a2)
    H = coo_matrix((vals, (rows, cols)), shape=(dim, dim)).tocsr()
    return (H if sparse else H.toarray()), basis


def _occupations(state) -> dict:
    occ: dict = {}
    for n in state:
        occ[n] = occ.get(n, 0) + 1
    return occ


def _state_of(occ: dict) -> tuple:
    return tuple(sorted(itertools.chain.from_iterable([n] * c for n, c in occ.items() if c)))


def fock_diagonalize(N: int, params: ModelParams, n_max: int, max_dim: int = 20000) -> float:
    """Ground-state energy (total, not per particle) of the truncated Fock problem."""
    if not 2 <= N <= 4:
        raise ConfigError(f"Fock diagonalization supports 2 <= N <= 4, got {N}")
    if n_max < 1:
        raise ConfigError("n_max must be >= 1")
    dim = len(fock_basis(N, n_max))
    if dim > max_dim:
        raise BasisTooLargeError(f"Fock basis of dimension {dim} exceeds cap {max_dim}")
    sparse = dim > DENSE_LIMIT
    H, _ = fock_hamiltonian(N, params.u_tilde, n_max, max_dim, sparse=sparse)
    if sparse:
        assert abs(H - H.T).max() < 1e-12, "non-Hermitian assembly"
        v0 = np.ones(dim) / np.sqrt(dim)
        w = eigsh(H, k=1, which="SA", v0=v0, tol=1e-14)[0]
        return float(w[0])
    assert np.allclose(H, H.T, atol=1e-12), "non-Hermitian assembly"
    return float(eigh(H, eigvals_only=True, subset_by_index=[0, 0])[0])
