import numpy as np
import pytest

from cci_ring import (BasisTooLargeError, ConfigError, InteractionSpec, ModelParams, RingGrid,
                      build_orbitals, contact_bound_state_energy, direct_wavefunction,
                      extrapolated_relative_energy, fock_diagonalize, momentum_check,
                      reconstruct, solve_relative)
from cci_ring.exact import (ANTISYMMETRIC, SYMMETRIC, RelativeSolution, TwoBodyWavefunction,
                            aligned_error, principal_sqrt)

CONTACT = InteractionSpec.contact(-0.4 * np.pi)  # N = 2, gamma = -0.2
FINITE = InteractionSpec.fourier([0.0, -0.3])
# frozen from the bound-state condition kappa tanh(pi kappa) = 0.1 pi, E = -2 kappa^2
E_BOUND = -0.2863878812154705


@pytest.fixture(scope="module")
def grid():
    return RingGrid(256)


def test_interaction_spec():
    np.testing.assert_allclose(CONTACT.plane_wave(np.arange(-3, 4)), -0.2, atol=1e-15)
    np.testing.assert_allclose(FINITE.plane_wave(np.array([0, 1, -1, 2])), [0, -0.15, -0.15, 0])
    with pytest.raises(ConfigError):
        InteractionSpec("yukawa")


def test_odd_contact_spectrum_is_free():
    levels = [solve_relative(CONTACT, "odd", n_max=16, level=k).energy for k in range(6)]
    np.testing.assert_allclose(levels, [2 * n * n for n in range(1, 7)], atol=1e-12)


def test_free_even_ground_state():
    sol = solve_relative(InteractionSpec.contact(0.0), "even", n_max=16)
    assert sol.energy == pytest.approx(0.0, abs=1e-14)
    assert np.abs(sol.coefficients[1:]).max() < 1e-14
    assert sol.coefficients[0] > 0


def test_bound_state_oracles_agree():
    assert contact_bound_state_energy(-0.4 * np.pi) == pytest.approx(E_BOUND, abs=1e-14)
    extrap, raw = extrapolated_relative_energy(CONTACT, n_max=512)
    assert abs(extrap - E_BOUND) < 1e-8
    # the plain diagonalization converges only like 1/n_max
    assert 1e-4 < raw[512] - E_BOUND < 2e-4


def test_bound_state_strong_coupling():
    u = -2 * np.pi  # N = 2, gamma = -1
    extrap, _ = extrapolated_relative_energy(InteractionSpec.contact(u))
    assert abs(extrap - contact_bound_state_energy(u)) < 1e-8


def test_bound_state_requires_attraction():
    with pytest.raises(ConfigError):
        contact_bound_state_energy(0.5)


@pytest.mark.parametrize("kwargs", [dict(n_max=4), dict(level=10**6), dict(sector="mixed"),
                                    dict(p0=2), dict(statistics="boltzmann")])
def test_solve_relative_validation(kwargs):
    args = dict(interaction=CONTACT, sector="even", n_max=16)
    args.update(kwargs)
    with pytest.raises(ConfigError):
        solve_relative(**args)


@pytest.mark.parametrize("sector,inter", [("even", CONTACT), ("odd", FINITE), ("even", FINITE)])
def test_cutoff_monotone(sector, inter):
    e = [solve_relative(inter, sector, n_max=n).energy for n in (8, 16, 32, 64)]
    assert all(b <= a + 1e-13 for a, b in zip(e, e[1:]))


def test_finite_range_shifts_both_sectors():
    assert solve_relative(FINITE, "even").energy < -1e-3
    assert solve_relative(FINITE, "odd").energy < 2.0 - 1e-3


def test_single_mode_orbitals():
    grid = RingGrid(16)
    sol = RelativeSolution("even", 0, 8, SYMMETRIC, 0, 0.0, np.eye(9)[0], np.arange(9))
    pair = build_orbitals(sol, grid)
    np.testing.assert_allclose(pair.phi1, 1 / np.sqrt(2 * np.pi), atol=1e-15)
    np.testing.assert_array_equal(pair.phi2, 0)


def test_attractive_ground_state_real_orthogonal(grid):
    sol = solve_relative(CONTACT, "even", n_max=64)
    assert np.all(sol.coefficients > 0)
    pair = build_orbitals(sol, grid)
    assert pair.negative_modes == 0 and pair.is_real
    assert abs(grid.inner(pair.phi1, pair.phi2)) < 1e-10


def test_excited_level_takes_complex_path(grid):
    sol = solve_relative(CONTACT, "even", n_max=64, level=1)
    assert np.any(sol.coefficients < 0)
    pair = build_orbitals(sol, grid)
    assert pair.negative_modes > 0 and np.abs(pair.phi1.imag).max() > 1e-3
    psi = reconstruct(pair, 0, SYMMETRIC)
    assert np.abs(psi.values.imag).max() < 1e-12 * np.abs(psi.values).max()
    assert aligned_error(psi, direct_wavefunction(sol, grid)) < 1e-8


def test_principal_branch_round_trip():
    a = np.array([2.0, -3.0, 0.0, 1e-30, -1e-30, 1 + 2j])
    r = principal_sqrt(a)
    assert np.all(r.real >= 0)
    assert r[1] == pytest.approx(1j * np.sqrt(3.0))
    np.testing.assert_allclose(r ** 2, a, rtol=1e-15, atol=0)


def test_ground_state_reconstruction(grid):
    sol = solve_relative(CONTACT, "even", n_max=64)
    psi = reconstruct(build_orbitals(sol, grid), 0, SYMMETRIC)
    assert aligned_error(psi, direct_wavefunction(sol, grid)) < 1e-8
    np.testing.assert_allclose(psi.values, psi.values.T, atol=1e-12)
    assert np.sum(np.abs(psi.values) ** 2) * grid.delta ** 2 == pytest.approx(1.0, abs=1e-12)


def test_direct_expansion_normalized(grid):
    for sector, inter in [("even", CONTACT), ("odd", FINITE)]:
        psi = direct_wavefunction(solve_relative(inter, sector, n_max=64), grid)
        assert np.sum(np.abs(psi.values) ** 2) * grid.delta ** 2 == pytest.approx(1.0, abs=1e-10)
    sol = solve_relative(CONTACT, "general", p0=2, n_max=64)
    psi = direct_wavefunction(sol, grid)
    assert np.sum(np.abs(psi.values) ** 2) * grid.delta ** 2 == pytest.approx(1.0, abs=1e-10)


def test_pauli_node(grid):
    sol = solve_relative(FINITE, "odd", n_max=64)
    psi = reconstruct(build_orbitals(sol, grid), 0, ANTISYMMETRIC)
    assert np.abs(np.diag(psi.values)).max() < 1e-12
    np.testing.assert_allclose(psi.values, -psi.values.T, atol=1e-12)


def test_p0_translation_covariance(grid):
    sol = solve_relative(CONTACT, "general", p0=2, n_max=64)
    psi = reconstruct(build_orbitals(sol, grid), 2, SYMMETRIC).values
    for a in (1, 7, 100):
        moved = np.roll(np.roll(psi, -a, axis=0), -a, axis=1)  # Psi(phi1 + a d, phi2 + a d)
        np.testing.assert_allclose(moved, np.exp(2j * a * grid.delta) * psi, atol=1e-10)


def test_momentum_check(grid):
    sol0 = solve_relative(CONTACT, "even", n_max=64)
    mean, var = momentum_check(reconstruct(build_orbitals(sol0, grid), 0, SYMMETRIC))
    assert abs(mean) < 1e-10 and var < 1e-10
    sol2 = solve_relative(CONTACT, "general", p0=2, n_max=64)
    mean, var = momentum_check(reconstruct(build_orbitals(sol2, grid), 2, SYMMETRIC))
    assert mean == pytest.approx(2.0, abs=1e-10) and var < 1e-10
    # an unprojected Hartree product of a localized orbital mixes momenta
    phi = grid.normalize(np.exp(3 * np.cos(grid.nodes)))
    hartree = TwoBodyWavefunction(np.outer(phi, phi), SYMMETRIC, 0, grid).normalized()
    assert momentum_check(hartree)[1] > 0.1


@pytest.mark.parametrize("level", range(5))
@pytest.mark.parametrize("inter", [CONTACT, FINITE], ids=["contact", "finite"])
def test_even_decomposition(grid, inter, level):
    sol = solve_relative(inter, "even", n_max=64, level=level)
    psi = reconstruct(build_orbitals(sol, grid), 0, SYMMETRIC)
    assert aligned_error(psi, direct_wavefunction(sol, grid)) < 1e-8


@pytest.mark.parametrize("level", range(5))
def test_odd_decomposition(grid, level):
    sol = solve_relative(FINITE, "odd", n_max=64, level=level)
    pair = build_orbitals(sol, grid)
    psi = reconstruct(pair, 0, ANTISYMMETRIC)
    assert aligned_error(psi, direct_wavefunction(sol, grid)) < 1e-8


@pytest.mark.parametrize("level", range(3))
@pytest.mark.parametrize("inter,stats", [(CONTACT, SYMMETRIC), (FINITE, SYMMETRIC),
                                         (FINITE, ANTISYMMETRIC)])
def test_p0_2_decomposition(grid, inter, stats, level):
    sol = solve_relative(inter, "general", p0=2, n_max=64, level=level, statistics=stats)
    psi = reconstruct(build_orbitals(sol, grid), 2, stats)
    assert aligned_error(psi, direct_wavefunction(sol, grid)) < 1e-8
    assert momentum_check(psi)[1] < 1e-10


def test_general_sector_at_p0_zero_matches_even():
    e_even = solve_relative(FINITE, "even", n_max=32).energy
    e_gen = solve_relative(FINITE, "general", p0=0, n_max=32).energy
    assert e_gen == pytest.approx(e_even, abs=1e-12)


def test_fock_matches_relative_at_matched_cutoff():
    p = ModelParams(2, -0.2)
    for n in (8, 12, 20):
        assert fock_diagonalize(2, p, n) == pytest.approx(
            solve_relative(CONTACT, "even", n_max=n).energy, abs=1e-8)


def test_fock_free_and_monotone():
    assert fock_diagonalize(3, ModelParams(3, 0.0), 6) == pytest.approx(0.0, abs=1e-12)
    p = ModelParams(3, -0.2)
    e = [fock_diagonalize(3, p, n) for n in (4, 8, 12, 16)]
    assert all(b <= a + 1e-12 for a, b in zip(e, e[1:]))
    p4 = ModelParams(4, -0.2)
    e4 = [fock_diagonalize(4, p4, n) for n in (4, 6)]
    assert e4[1] <= e4[0] + 1e-12


def test_fock_sparse_path_agrees(monkeypatch):
    import cci_ring.exact as exact_module
    p = ModelParams(3, -0.2)
    dense = fock_diagonalize(3, p, 16)
    monkeypatch.setattr(exact_module, "DENSE_LIMIT", 10)
    assert fock_diagonalize(3, p, 16) == pytest.approx(dense, abs=1e-10)


def test_fock_validation():
    with pytest.raises(ConfigError):
        fock_diagonalize(5, ModelParams(5, -0.2), 4)
    with pytest.raises(BasisTooLargeError):
        fock_diagonalize(4, ModelParams(4, -0.2), 40, max_dim=1000)
