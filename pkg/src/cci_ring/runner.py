"""Mode execution: single solves, exact references, sweeps and figure data."""

from __future__ import annotations

import csv
import dataclasses
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import exact
from .cci import solve_cci
from .config import RunConfig
from .errors import CciRingError
from .functional import energy_per_particle
from .gp import solve_gp
from .grid import RingGrid
from .model import ModelParams
from .output import FORMAT_VERSION, fmt, write_manifest, write_orbital, write_profiles
from .plotting import Panel, Series, render_png, write_gnuplot

log = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"
SUMMARY_NAME = "summary.csv"
FIG1_GAMMAS = (-0.2, -1.0)
FIG2_NS = (5, 25, 100, 1000, 10000)
FIG2_GAMMA = -0.2

SUCCESS, UNCONVERGED, ERROR = "success", "unconverged", "error"
EXIT_CODES = {SUCCESS: 0, UNCONVERGED: 2, ERROR: 1}
# fields that legitimately differ between otherwise identical runs
VOLATILE_KEYS = ("wall_time",)


@dataclass
class RunManifest:
    data: dict
    path: Path | None = None

    @property
    def status(self) -> str:
        return self.data.get("status", ERROR)

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]

    def stable(self) -> dict:
        """Manifest fields without timing, for reproducibility comparisons."""
        return {k: v for k, v in self.data.items() if k not in VOLATILE_KEYS}


def density_contrast(phi) -> float:
    d = np.abs(phi) ** 2
    return float(d.max() - d.min())


@dataclass
class _Collector:
    directory: Path
    fields: dict = field(default_factory=dict)
    files: list = field(default_factory=list)
    converged: bool = True

    def orbital(self, name, grid, phi):
        write_orbital(self.directory / name, grid, phi)
        self.files.append(name)

    def profiles(self, name, grid, phi, params, eps):
        write_profiles(self.directory / name, grid, phi, params, eps)
        self.files.append(name)


def _cci(col: _Collector, cfg: RunConfig, grid: RingGrid, params: ModelParams, tag: str = ""):
    res = solve_cci(grid, params, cfg.solver)
    col.orbital(f"orbital_cci{tag}.csv", grid, res.orbital)
    col.profiles(f"profile_cci{tag}.csv", grid, res.orbital, params, res.energy_per_particle)
    col.fields.update({
        f"eps_cci{tag}": res.energy_per_particle,
        f"iterations_cci{tag}": res.iterations,
        f"grad_norm_cci{tag}": res.grad_norm,
        f"residual_norm_cci{tag}": res.residual_norm,
        f"converged_cci{tag}": res.converged,
        f"density_contrast_cci{tag}": density_contrast(res.orbital),
        f"max_density_cci{tag}": float(res.density.max()),
        f"max_imag_cci{tag}": res.max_imag,
    })
    col.converged &= res.converged
    return res


def _gp(col: _Collector, cfg: RunConfig, grid: RingGrid, params: ModelParams, tag: str = ""):
    res = solve_gp(grid, params, cfg.solver)
    col.orbital(f"orbital_gp{tag}.csv", grid, res.orbital)
    col.fields.update({
        f"eps_gp{tag}": res.energy_per_particle,
        f"mu_gp{tag}": res.chemical_potential,
        f"eps_cci_of_gp{tag}": energy_per_particle(grid, res.orbital, params),
        f"iterations_gp{tag}": res.iterations,
        f"grad_norm_gp{tag}": res.grad_norm,
        f"converged_gp{tag}": res.converged,
        f"density_contrast_gp{tag}": density_contrast(res.orbital),
        f"max_density_gp{tag}": float(res.density.max()),
    })
    col.converged &= res.converged
    return res


def _exact2(col: _Collector, cfg: RunConfig, grid: RingGrid, params: ModelParams):
    u = params.u_tilde
    inter = exact.InteractionSpec.contact(u)
    sol = exact.solve_relative(inter, "even", 0, cfg.n_max)
    pair = exact.build_orbitals(sol, grid)
    psi = exact.reconstruct(pair, 0, exact.SYMMETRIC)
    direct = exact.direct_wavefunction(sol, grid)
    phi1 = pair.phi1 / grid.norm(pair.phi1)
    col.orbital("orbital_exact_phi1.csv", grid, phi1)
    col.fields.update({
        "energy_relative": sol.energy,
        "eps_relative": sol.energy / 2.0,
        "decomposition_error": exact.aligned_error(psi, direct),
        "negative_modes": pair.negative_modes,
        "momentum_variance": exact.momentum_check(psi)[1],
    })
    if u < 0:
        col.fields["energy_bound_state"] = exact.contact_bound_state_energy(u)
        col.fields["energy_extrapolated"] = exact.extrapolated_relative_energy(
            inter, cfg.extrapolation_n_max)[0]


def _fock(col: _Collector, cfg: RunConfig, params: ModelParams):
    e = exact.fock_diagonalize(params.N, params, cfg.fock_n_max)
    col.fields.update({"energy_fock": e, "eps_fock": e / params.N})


def _fig1(col: _Collector, cfg: RunConfig, grid: RingGrid):
    panels = []
    for g in FIG1_GAMMAS:
        params = ModelParams(2, g)
        tag = f"_gamma{g:g}"
        _cci(col, cfg, grid, params, tag)
        _gp(col, cfg, grid, params, tag)
        panels.append(Panel(f"N = 2, gamma = {g:g}", (
            Series(f"orbital_cci{tag}.csv", "CCI"),
            Series(f"orbital_gp{tag}.csv", "GP", "--"))))
    _figure(col, "fig1", panels)


def _fig2(col: _Collector, cfg: RunConfig, grid: RingGrid):
    series = []
    for n in FIG2_NS:
        tag = f"_N{n}"
        _cci(col, cfg, grid, ModelParams(n, FIG2_GAMMA), tag)
        series.append(Series(f"orbital_cci{tag}.csv", f"N = {n}"))
    _figure(col, "fig2", [Panel(f"CCI orbitals, gamma = {FIG2_GAMMA:g}", tuple(series))])


def _figure(col: _Collector, name: str, panels):
    write_gnuplot(col.directory / f"{name}.gp", panels, f"{name}.png")
    render_png(col.directory / f"{name}.png", panels, col.directory)
    col.files += [f"{name}.gp", f"{name}.png"]


def run(config: RunConfig) -> RunManifest:
    """Execute one configuration and write its data files and manifest."""
    if config.mode == "sweep":
        return run_sweep(config)
    start = time.perf_counter()
    out = config.resolved_output_dir()
    out.mkdir(parents=True, exist_ok=True)
    col = _Collector(out)
    grid = RingGrid(config.grid_m)
    params = ModelParams(config.n_particles[0], config.gamma[0])
    if config.mode == "cci":
        _cci(col, config, grid, params)
    elif config.mode == "gp":
        _gp(col, config, grid, params)
    elif config.mode == "exact2":
        _exact2(col, config, grid, params)
    elif config.mode == "fock":
        _fock(col, config, params)
    elif config.mode == "fig1":
        _fig1(col, config, grid)
    elif config.mode == "fig2":
        _fig2(col, config, grid)
    data = {
        "format_version": FORMAT_VERSION,
        **config.flat(),
        **col.fields,
        "converged": col.converged,
        "status": SUCCESS if col.converged else UNCONVERGED,
        "files": col.files,
        "wall_time": time.perf_counter() - start,
    }
    path = write_manifest(out / MANIFEST_NAME, data)
    return RunManifest(data, path)


def _combination_dir(index: int, gamma: float, n: int) -> str:
    return f"run{index:03d}_gamma{gamma:g}_N{n}"


def _run_child(config: RunConfig) -> RunManifest:
    try:
        return run(config)
    except (CciRingError, ArithmeticError, ValueError, MemoryError) as exc:
        log.warning("sweep combination failed: %s", exc)
        out = config.resolved_output_dir()
        out.mkdir(parents=True, exist_ok=True)
        data = {"format_version": FORMAT_VERSION, **config.flat(), "converged": False,
                "status": ERROR, "error": f"{type(exc).__name__}: {exc}", "files": []}
        return RunManifest(data, write_manifest(out / MANIFEST_NAME, data))


def sweep(config: RunConfig) -> list:
    """One manifest per (gamma, N) combination, in input order.

    Combinations run in ``config.workers`` processes; each solve is
    deterministic, so the manifests match a serial sweep.
    """
    root = config.resolved_output_dir()
    children = []
    combos = [(g, n) for g in config.gamma for n in config.n_particles]
    for i, (g, n) in enumerate(combos):
        children.append(dataclasses.replace(
            config, mode=config.sweep_mode, gamma=(g,), n_particles=(n,),
            output_dir=str(root / _combination_dir(i, g, n))))
    if config.workers > 1 and len(children) > 1:
        with ProcessPoolExecutor(max_workers=min(config.workers, len(children))) as pool:
            return list(pool.map(_run_child, children))
    return [_run_child(c) for c in children]


SUMMARY_COLUMNS = ("gamma", "n_particles", "eps", "iterations", "converged",
                   "density_contrast", "status", "directory")


def run_sweep(config: RunConfig) -> RunManifest:
    start = time.perf_counter()
    root = config.resolved_output_dir()
    root.mkdir(parents=True, exist_ok=True)
    manifests = sweep(config)
    key = config.sweep_mode
    lines = [",".join(SUMMARY_COLUMNS)]
    for m in manifests:
        d = m.data
        lines.append(",".join([
            fmt(d["config_gamma"][0]), str(d["config_n_particles"][0]),
            fmt(d.get(f"eps_{key}", float("nan"))), str(d.get(f"iterations_{key}", -1)),
            str(d["converged"]).lower(), fmt(d.get(f"density_contrast_{key}", float("nan"))),
            d["status"], m.path.parent.name]))
    (root / SUMMARY_NAME).write_text("\n".join(lines) + "\n")
    statuses = [m.status for m in manifests]
    status = ERROR if ERROR in statuses else UNCONVERGED if UNCONVERGED in statuses else SUCCESS
    data = {
        "format_version": FORMAT_VERSION,
        **config.flat(),
        "combinations": len(manifests),
        "failed": statuses.count(ERROR),
        "converged": all(m.data["converged"] for m in manifests),
        "status": status,
        "files": [SUMMARY_NAME] + [f"{m.path.parent.name}/{MANIFEST_NAME}" for m in manifests],
        "wall_time": time.perf_counter() - start,
    }
    path = write_manifest(root / MANIFEST_NAME, data)
    return RunManifest(data, path)


def read_summary(path) -> list:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))
