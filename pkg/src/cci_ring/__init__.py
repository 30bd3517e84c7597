"""Projected Hartree (CCI) ground states of bosons on a ring, with GP and exact references."""

from .cci import CciResult, cci_energy_of, solve_cci
from .config import RunConfig, load_config, parse_config
from .errors import (BasisTooLargeError, CciRingError, ConfigError, DegenerateOrbitalError,
                     GridMismatchError, NormalizationError)
from .exact import (InteractionSpec, OrbitalPair, RelativeSolution, TwoBodyWavefunction,
                    build_orbitals, contact_bound_state_energy, direct_wavefunction,
                    extrapolated_relative_energy, fock_diagonalize, momentum_check,
                    reconstruct, solve_relative)
from .functional import (Profiles, cci_gradient, cci_residual, chemical_potential_density,
                         compute_profiles, energy_and_gradient, energy_density,
                         energy_per_particle)
from .gp import GpResult, gp_chemical_potential, gp_energy, solve_gp
from .grid import RingGrid, make_grid
from .model import ModelParams
from .optimize import CciSolveConfig, SolveConfig
from .runner import RunManifest, run, sweep

__version__ = "0.1.0"

__all__ = [
    "BasisTooLargeError", "CciResult", "CciRingError", "CciSolveConfig", "ConfigError",
    "DegenerateOrbitalError", "GpResult", "GridMismatchError", "InteractionSpec",
    "ModelParams", "NormalizationError", "OrbitalPair", "Profiles", "RelativeSolution",
    "RingGrid", "RunConfig", "RunManifest", "SolveConfig", "TwoBodyWavefunction",
    "build_orbitals", "cci_energy_of", "cci_gradient", "cci_residual",
    "chemical_potential_density", "compute_profiles", "contact_bound_state_energy",
    "direct_wavefunction", "energy_and_gradient", "energy_density", "energy_per_particle",
    "extrapolated_relative_energy", "fock_diagonalize", "gp_chemical_potential", "gp_energy",
    "load_config", "make_grid", "momentum_check", "parse_config", "reconstruct", "run",
    "solve_cci", "solve_gp", "solve_relative", "sweep",
]
