"""Config-driven experiment runs: wiring, CSV emission, assertion gates.

Every number written here is reproducible by calling the underlying module
operation directly; the runner adds no computation of its own.  CSV files
carry '#'-prefixed metadata (config hash, tool version), one header line,
and floats serialized with 17 significant digits, so identical config+seed
reproduce byte-identical output.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from . import __version__
from . import em as em_mod
from . import field as field_mod
from . import fock as fock_mod
from . import grassmann as gr_mod
from . import observables as obs_mod
from .config import ConfigError, config_hash, require
from .lattice import Lattice


class AssertionBreach(Exception):
    """A run-level tolerance check failed (CLI exit code 3)."""


class NumericalFailure(Exception):
    """A non-finite number reached an output table (CLI exit code 4)."""


def _fmt(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def write_csv(path: Path, header: list, rows: list, meta: dict) -> None:
    for row in rows:
        for value in row:
            if isinstance(value, (float, np.floating)) and not np.isfinite(value):
                raise NumericalFailure(f"non-finite value in {path.name}: {value!r}")
    lines = [f"# diraclab {__version__}"]
    lines += [f"# {key}: {value}" for key, value in meta.items()]
    lines.append(",".join(header))
    lines += [",".join(_fmt(v) for v in row) for row in rows]
    path.write_text("\n".join(lines) + "\n")


def _lattice_from(cfg: dict) -> Lattice:
    try:
        return Lattice(
            n=require(cfg, "lattice.n", int, positive=True),
            box=require(cfg, "lattice.box", float, positive=True),
            m=require(cfg, "lattice.m", float, default=1.0, positive=True),
            hbar=require(cfg, "lattice.hbar", float, default=1.0, positive=True),
            c=require(cfg, "lattice.c", float, default=1.0, positive=True),
        )
    except ValueError as exc:
        raise ConfigError(f"lattice.*: {exc}") from exc


def _sparse_absmax(mat) -> float:
    return float(np.max(np.abs(mat.data))) if mat.nnz else 0.0


def _meta(cfg: dict, seed: int, experiment: str) -> dict:
    return {"experiment": experiment, "config-sha256": config_hash(cfg, seed), "seed": seed}


def _maybe_plot(outdir: Path, name: str, x, ys: dict, xlabel: str, enabled: bool) -> None:
    if not enabled:
        return
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    for label, y in ys.items():
        ax.plot(x, y, label=label)
    ax.set_xlabel(xlabel)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(outdir / f"{name}.svg")
    plt.close(fig)


# -- evolve -------------------------------------------------------------------

def run_evolve(cfg: dict, outdir: Path, seed: int, do_assert: bool) -> None:
    lat = _lattice_from(cfg)
    steps = require(cfg, "time.steps", int, positive=True)
    dt = require(cfg, "time.dt", float, positive=True)
    t0 = require(cfg, "time.t0", float, default=0.0)
    band = require(cfg, "modes.band", int, default=max(1, lat.n // 4 - 1))
    corrupt = bool(cfg.get("inject_corruption", False))
    rng = np.random.default_rng(seed)
    modes = field_mod.ModeAmplitudes.random(lat, rng, band=band)

    header = ["step", "t", "energy_original", "energy_revised", "charge_original",
              "charge_revised", "n_electron", "n_positron",
              "continuity_original", "continuity_electron", "continuity_positron"]
    rows = []
    current = field_mod.evolve(modes, t0) if t0 else modes
    for step in range(steps + 1):
        t = t0 + step * dt
        if corrupt and step == steps // 2 + 1:
            current = field_mod.ModeAmplitudes(lat, current.b * 1.001, current.d.copy())
        rep = obs_mod.observable_report(current)
        cont = []
        # evolved amplitudes carry their own phases: evaluate at reference time 0
        for which, (res, scale) in obs_mod.continuity_report(current, 0.0).items():
            cont.append(res / scale if scale > 0 else 0.0)
        rows.append([step, t, rep.energy_original, rep.energy_revised,
                     rep.charge_original, rep.charge_revised,
                     rep.n_electron, rep.n_positron, *cont])
        current = field_mod.evolve(current, dt)

    write_csv(outdir / "report.csv", header, rows, _meta(cfg, seed, "evolve"))
    _maybe_plot(outdir, "evolve", [r[1] for r in rows],
                {"energy_revised": [r[3] for r in rows],
                 "n_electron": [r[6] for r in rows],
                 "n_positron": [r[7] for r in rows]},
                "t", bool(cfg.get("plots", False)))

    if do_assert:
        tol = require(cfg, "assert.conservation_tol", float, default=1e-10)
        cont_tol = require(cfg, "assert.continuity_tol", float, default=1e-9)
        first = rows[0]
        for row in rows[1:]:
            for col in range(2, 8):
                drift = abs(row[col] - first[col]) / max(1.0, abs(first[col]))
                if drift > tol:
                    raise AssertionBreach(
                        f"{header[col]} drifted by {drift:.3e} at step {row[0]} (tol {tol:g})"
                    )
            for col in range(8, 11):
                if row[col] > cont_tol:
                    raise AssertionBreach(
                        f"{header[col]} residual {row[col]:.3e} exceeds {cont_tol:g}"
                    )


# -- packet -------------------------------------------------------------------

def run_packet(cfg: dict, outdir: Path, seed: int, do_assert: bool) -> None:
    lat = _lattice_from(cfg)
    task = require(cfg, "packet.task", str, default="widths")
    plots = bool(cfg.get("plots", False))
    if task == "widths":
        sigmas = require(cfg, "widths.sigmas", list)
        if any(s <= 0 for s in sigmas):
            raise ConfigError("config key 'widths.sigmas' must contain positive widths")
        header = ["sigma_target", "rms_width", "n_electron", "n_positron"]
        rows = []
        for sigma in sigmas:
            # the sweep deliberately probes below the resolution limit
            modes = obs_mod.build_packet(lat, sigma, allow_unresolved=True)
            sp = field_mod.synthesize_split(modes, 0.0)
            rho = np.sum(np.abs(sp.psi_plus) ** 2, axis=-1)
            ne, npos = obs_mod.particle_numbers(modes)
            rows.append([sigma, obs_mod.packet_width(lat, rho), ne, npos])
        write_csv(outdir / "report.csv", header, rows, _meta(cfg, seed, "packet/widths"))
        profile_sigma = require(cfg, "profile.sigma", float, default=min(sigmas))
        modes = obs_mod.build_packet(lat, profile_sigma, allow_unresolved=True)
        sp = field_mod.synthesize_split(modes, 0.0)
        rho = np.sum(np.abs(sp.psi_plus) ** 2, axis=-1)
        radii, density = obs_mod.radial_profile(lat, rho)
        write_csv(outdir / "profile.csv", ["radius", "mean_charge_density"],
                  [[r, d] for r, d in zip(radii, density)],
                  _meta(cfg, seed, "packet/profile"))
        _maybe_plot(outdir, "widths", [r[0] for r in rows],
                    {"rms_width": [r[1] for r in rows]}, "sigma_target", plots)
        _maybe_plot(outdir, "profile", list(radii), {"density": list(density)}, "r", plots)
        if do_assert:
            tol = require(cfg, "assert.norm_tol", float, default=1e-10)
            for row in rows:
                if abs(row[2] - 1.0) > tol or abs(row[3]) > tol:
                    raise AssertionBreach(
                        f"packet normalization off at sigma={row[0]}: N_e={row[2]!r}"
                    )
        return
    if task == "spin":
        sigma = require(cfg, "spin.sigma", float, positive=True)
        spin = require(cfg, "spin.spin", int, default=1)
        try:
            modes = obs_mod.build_packet(lat, sigma, spin=spin)
        except ValueError as exc:
            raise ConfigError(f"spin packet: {exc}") from exc
        report = obs_mod.spin_diagnostics(modes)
        header = ["sigma_target", "l_z", "mu_z", "g_ratio", "rms_width",
                  "n_electron", "n_positron"]
        rows = [[sigma, report.l_z, report.mu_z, report.g_ratio, report.rms_radius,
                 report.n_electron, report.n_positron]]
        write_csv(outdir / "report.csv", header, rows, _meta(cfg, seed, "packet/spin"))
        sp = field_mod.synthesize_split(modes, 0.0)
        rho = np.sum(np.abs(sp.psi_plus) ** 2, axis=-1)
        radii, density = obs_mod.radial_profile(lat, rho)
        write_csv(outdir / "profile.csv", ["radius", "mean_charge_density"],
                  [[r, d] for r, d in zip(radii, density)],
                  _meta(cfg, seed, "packet/profile"))
        _maybe_plot(outdir, "profile", list(radii), {"density": list(density)}, "r", plots)
        if do_assert:
            hbar, m, c = lat.hbar, lat.m, lat.c
            lz_tol = require(cfg, "assert.lz_tol", float, default=0.02)
            mu_tol = require(cfg, "assert.mu_tol", float, default=0.05)
            g_tol = require(cfg, "assert.g_tol", float, default=0.05)
            if abs(report.l_z - hbar / 2) > lz_tol * hbar / 2:
                raise AssertionBreach(f"L_z = {report.l_z!r} outside {lz_tol:.0%} of hbar/2")
            mu_ref = -hbar / (2 * m * c)
            if abs(report.mu_z - mu_ref) > mu_tol * abs(mu_ref):
                raise AssertionBreach(f"mu_z = {report.mu_z!r} outside {mu_tol:.0%} of -e hbar/2mc")
            if abs(report.g_ratio - 2.0) > g_tol * 2.0:
                raise AssertionBreach(f"g = {report.g_ratio!r} outside {g_tol:.0%} of 2")
        return
    raise ConfigError(f"config key 'packet.task' must be widths or spin, got {task!r}")


# -- em -----------------------------------------------------------------------

def run_em(cfg: dict, outdir: Path, seed: int, do_assert: bool) -> None:
    lat = _lattice_from(cfg)
    trials = require(cfg, "trials", int, default=20, positive=True)
    dt = require(cfg, "time.dt", float, default=0.37)
    band = require(cfg, "modes.band", int, default=max(1, lat.n // 4 - 1))
    rng = np.random.default_rng(seed)
    header = ["trial", "energy_standard", "energy_phi", "energy_identity_residual",
              "n_photon", "n_antiphoton", "evolution_residual"]
    rows = []
    for trial in range(trials):
        state = em_mod.random_free_state(lat, rng, band=band)
        e_std, e_phi = em_mod.em_energies(state)
        phi = em_mod.phi_from_em(state)
        n_p, n_m = em_mod.photon_number(phi)
        evolved_phi = em_mod.phi_evolve(phi, dt)
        via_maxwell = em_mod.phi_from_em(em_mod.maxwell_evolve(state, dt))
        diff = np.sqrt(float(lat.integrate(
            np.sum(np.abs(evolved_phi.phi - via_maxwell.phi) ** 2, axis=-1)).real))
        norm = np.sqrt(float(lat.integrate(np.sum(np.abs(phi.phi) ** 2, axis=-1)).real))
        rows.append([trial, e_std, e_phi, abs(e_std - e_phi) / max(e_std, 1e-300),
                     n_p, n_m, diff / max(norm, 1e-300)])
    write_csv(outdir / "report.csv", header, rows, _meta(cfg, seed, "em"))
    if do_assert:
        tol = require(cfg, "assert.identity_tol", float, default=1e-10)
        for row in rows:
            if row[3] > tol or row[6] > tol:
                raise AssertionBreach(
                    f"EM identity residuals {row[3]:.3e}/{row[6]:.3e} exceed {tol:g} "
                    f"at trial {row[0]}"
                )


# -- fock ---------------------------------------------------------------------

def run_fock(cfg: dict, outdir: Path, seed: int, do_assert: bool) -> None:
    b_energies = require(cfg, "fock.b_energies", list, default=[1.0])
    c_energies = require(cfg, "fock.c_energies", list, default=[1.0])
    try:
        spec = fock_mod.ModeSpec(tuple(b_energies), tuple(c_energies))
    except ValueError as exc:
        raise ConfigError(f"config keys 'fock.*_energies': {exc}")
    space = fock_mod.build_space(spec)
    h_naive = fock_mod.hamiltonian_naive(space)
    h_normal = fock_mod.hamiltonian_normal(space)
    q_naive = fock_mod.charge_naive(space)
    q_normal = fock_mod.charge_normal(space)

    spec_naive = fock_mod.diagonal_spectrum(h_naive)
    spec_normal = fock_mod.diagonal_spectrum(h_normal)
    write_csv(outdir / "spectrum.csv", ["index", "naive_eigenvalue", "normal_eigenvalue"],
              [[i, a, b] for i, (a, b) in enumerate(zip(spec_naive, spec_normal))],
              _meta(cfg, seed, "fock/spectrum"))

    shift = sum(spec.c_energies)
    ident = space.identity()
    checks = [
        ("hamiltonian_shift_identity",
         _sparse_absmax((h_naive - (h_normal - shift * ident)).tocsr())),
        ("charge_shift_identity",
         _sparse_absmax((q_naive - (q_normal - spec.m_c * ident)).tocsr())),
        ("route_equivalence",
         _sparse_absmax((h_normal - fock_mod.hamiltonian_normal_via_swap(space)).tocsr())),
        ("charge_commutes_naive",
         _sparse_absmax((q_normal @ h_naive - h_naive @ q_normal).tocsr())),
        ("vacuum_energy", abs(complex(space.vacuum() @ (h_normal @ space.vacuum())))),
    ]
    ladder = [*space.b, *space.d]
    worst = 0.0
    for op in ladder:
        acomm = fock_mod.anticommutator(op, op.conj().T.tocsr()) - ident
        worst = max(worst, _sparse_absmax(acomm.tocsr()))
    checks.append(("ladder_anticommutators", worst))
    write_csv(outdir / "report.csv", ["check", "residual"],
              [[name, float(val)] for name, val in checks], _meta(cfg, seed, "fock"))
    if do_assert:
        tol = require(cfg, "assert.identity_tol", float, default=1e-12)
        for name, val in checks:
            if val > tol:
                raise AssertionBreach(f"fock check {name} residual {val:.3e} exceeds {tol:g}")


# -- grassmann ----------------------------------------------------------------

def run_grassmann(cfg: dict, outdir: Path, seed: int, do_assert: bool) -> None:
    n_sites = require(cfg, "grassmann.sites", int, default=2, positive=True)
    if 4 * n_sites * 2 > gr_mod.MAX_GENERATORS:
        raise ConfigError(f"config key 'grassmann.sites' too large: {n_sites}")
    rng = np.random.default_rng(seed)
    algebra = gr_mod.GrassmannAlgebra(4 * n_sites)
    psi_plus = rng.normal(size=(n_sites, 4)) + 1j * rng.normal(size=(n_sites, 4))
    psi_minus = rng.normal(size=(n_sites, 4)) + 1j * rng.normal(size=(n_sites, 4))
    energies = rng.uniform(1.0, 2.0, size=(n_sites, 4))
    dpsi_plus = -1j * energies * psi_plus
    dpsi_minus = +1j * energies * psi_minus
    psi = psi_plus + psi_minus

    rows = []
    worst_pair = 0.0
    for x in (0, n_sites - 1):
        for i in (0, 3):
            a = algebra.alpha(gr_mod.pair_index(x, i))
            astar = algebra.alpha_star(gr_mod.pair_index(x, i))
            sq = gr_mod.multiply(astar, a)
            worst_pair = max(worst_pair, gr_mod.multiply(sq, sq).max_abs())
    rows.append(["alpha_star_alpha_squared", worst_pair])

    worst_acomm = 0.0
    probe = algebra.scalar(1.0) + algebra.alpha(0) + gr_mod.multiply(
        algebra.alpha_star(1), algebra.alpha(2))
    for x in range(n_sites):
        for i in range(4):
            pair_op = gr_mod.field_pair_anticommutator(psi, (x, i), (x, i), algebra)
            worst_acomm = max(worst_acomm, (pair_op(probe) - probe).max_abs())
            other = ((x + 1) % n_sites, (i + 1) % 4)
            cross = gr_mod.field_pair_anticommutator(psi, (x, i), other, algebra)
            worst_acomm = max(worst_acomm, cross(probe).max_abs())
    rows.append(["field_pair_anticommutator", worst_acomm])

    e_main = gr_mod.grassmann_energy(psi_plus, psi_minus, dpsi_plus, dpsi_minus,
                                     algebra, form="main")
    e_reord = gr_mod.grassmann_energy(psi_plus, psi_minus, dpsi_plus, dpsi_minus,
                                      algebra, form="reordered")
    rows.append(["energy_form_rewrite", (e_main - e_reord).max_abs()])

    charge = gr_mod.grassmann_charge_density(psi[0], 0, algebra)
    worst_nil = 0.0
    for mask, coeff in charge.terms.items():
        mono = gr_mod.GrassmannElement(algebra, {mask: coeff})
        worst_nil = max(worst_nil, gr_mod.multiply(mono, mono).max_abs())
    rows.append(["charge_monomials_nilpotent", worst_nil])

    write_csv(outdir / "report.csv", ["check", "residual"], rows, _meta(cfg, seed, "grassmann"))
    if do_assert:
        for name, val in rows:
            if val != 0.0:
                raise AssertionBreach(f"grassmann check {name} residual {val!r} is not zero")


EXPERIMENTS = {
    "evolve": run_evolve,
    "packet": run_packet,
    "em": run_em,
    "fock": run_fock,
    "grassmann": run_grassmann,
}
