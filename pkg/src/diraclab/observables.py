"""Observables of the Dirac field in both formulations.

The original system assigns energy sum_E (|B|^2 - |D|^2) and an always
negative charge density -e psi†psi.  The revised system splits the field
into electron (psi_e = psi_+) and positron (psi_p = conjugate of psi_-)
parts, each with positive energy and opposite-sign charge, independently
conserved.  Every total observable is computable two ways, as a mode sum
and as a spatial lattice integral; the pair must agree to rounding.

Wavepacket machinery (Gaussian positive-frequency packets, rms widths,
angular-momentum and magnetic-moment diagnostics) lives here too.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .field import (
    FieldSplit,
    FieldState,
    ModeAmplitudes,
    synthesize_split,
)
from .lattice import Lattice
from .spinors import SIGMA, gamma_matrices

_GAMMAS = gamma_matrices()
_ALPHA = _GAMMAS.alpha  # gamma^0 gamma^k, (3, 4, 4)
# Spin matrices Sigma_k = diag(sigma_k, sigma_k)
_SPIN = np.stack([np.block([[s, np.zeros((2, 2))], [np.zeros((2, 2)), s]]) for s in SIGMA])


@dataclass
class ObservableReport:
    """The six scalar observables of a field configuration."""

    energy_original: float
    energy_revised: float
    charge_original: float
    charge_revised: float
    n_electron: float
    n_positron: float


@dataclass
class FourCurrent:
    """Charge density and current of one of the three flows."""

    lattice: Lattice
    rho: np.ndarray     # (N, N, N) real
    j: np.ndarray       # (N, N, N, 3) real
    tag: str            # original | electron | positron


@dataclass
class SpinReport:
    """Integrated spin diagnostics of a single-electron packet."""

    mu_z: float
    l_z: float
    g_ratio: float
    rms_radius: float
    n_electron: float
    n_positron: float


def _density(psi: np.ndarray) -> np.ndarray:
    return np.sum(np.abs(psi) ** 2, axis=-1)


def _alpha_current(psi: np.ndarray) -> np.ndarray:
    """psi† alpha_k psi for the three alpha matrices, shape grid + (3,)."""
    out = np.empty(psi.shape[:3] + (3,))
    for k in range(3):
        out[..., k] = np.einsum("...i,ij,...j->...", np.conj(psi), _ALPHA[k], psi).real
    return out


def _mode_sums(modes: ModeAmplitudes):
    e = modes.lattice.energies
    nb = np.sum(np.abs(modes.b) ** 2, axis=0)
    nd = np.sum(np.abs(modes.d) ** 2, axis=0)
    return float(np.sum(e * nb)), float(np.sum(e * nd)), float(nb.sum()), float(nd.sum())


def energy_original(modes: ModeAmplitudes, t: float = 0.0, method: str = "modes") -> float:
    """Original total energy: sum E (|B|^2 - |D|^2), or a^3 sum i hbar psi† dpsi/dt."""
    if method == "modes":
        eb, ed, _, _ = _mode_sums(modes)
        return eb - ed
    if method == "spatial":
        lat = modes.lattice
        sp = synthesize_split(modes, t)
        dp = synthesize_split(modes, t, time_derivative=True)
        dens = np.einsum("...i,...i->...", np.conj(sp.psi), dp.psi)
        return float((1j * lat.hbar * lat.integrate(dens)).real)
    raise ValueError(f"unknown method {method!r}")


def energy_revised(modes: ModeAmplitudes, t: float = 0.0, method: str = "modes") -> float:
    """Revised total energy: sum E (|B|^2 + |D|^2); both field parts positive.

    Spatial form: a^3 sum i hbar (psi_e† dpsi_e/dt + psi_p† dpsi_p/dt).
    """
    if method == "modes":
        eb, ed, _, _ = _mode_sums(modes)
        return eb + ed
    if method == "spatial":
        lat = modes.lattice
        sp = synthesize_split(modes, t)
        dp = synthesize_split(modes, t, time_derivative=True)
        dens_e = np.einsum("...i,...i->...", np.conj(sp.psi_plus), dp.psi_plus)
        # psi_p = conj(psi_-), so psi_p† dpsi_p = conj(psi_-† dpsi_-)
        dens_p = np.conj(np.einsum("...i,...i->...", np.conj(sp.psi_minus), dp.psi_minus))
        return float((1j * lat.hbar * lat.integrate(dens_e + dens_p)).real)
    raise ValueError(f"unknown method {method!r}")


def particle_numbers(modes: ModeAmplitudes, t: float = 0.0, method: str = "modes"):
    """(N_e, N_p) = (sum |B|^2, sum |D|^2) = integrals of psi_e†psi_e, psi_p†psi_p."""
    if method == "modes":
        _, _, nb, nd = _mode_sums(modes)
        return nb, nd
    if method == "spatial":
        lat = modes.lattice
        sp = synthesize_split(modes, t)
        ne = float(lat.integrate(_density(sp.psi_plus)).real)
        npos = float(lat.integrate(_density(sp.positron)).real)
        return ne, npos
    raise ValueError(f"unknown method {method!r}")


def charge_original(modes: ModeAmplitudes, t: float = 0.0, method: str = "modes",
                    e: float = 1.0) -> float:
    """Original total charge -e integral psi†psi = -e (N_e + N_p)."""
    if method == "modes":
        _, _, nb, nd = _mode_sums(modes)
        return -e * (nb + nd)
    if method == "spatial":
        lat = modes.lattice
        sp = synthesize_split(modes, t)
        return float(-e * lat.integrate(_density(sp.psi)).real)
    raise ValueError(f"unknown method {method!r}")


def charge_revised(modes: ModeAmplitudes, t: float = 0.0, method: str = "modes",
                   e: float = 1.0) -> float:
    """Revised total charge -e N_e + e N_p (electron negative, positron positive)."""
    if method == "modes":
        _, _, nb, nd = _mode_sums(modes)
        return -e * nb + e * nd
    if method == "spatial":
        lat = modes.lattice
        sp = synthesize_split(modes, t)
        return float(e * lat.integrate(_density(sp.positron) - _density(sp.psi_plus)).real)
    raise ValueError(f"unknown method {method!r}")


def observable_report(modes: ModeAmplitudes, e: float = 1.0) -> ObservableReport:
    """All six scalars from mode sums (the fast route)."""
    eb, ed, nb, nd = _mode_sums(modes)
    return ObservableReport(
        energy_original=eb - ed,
        energy_revised=eb + ed,
        charge_original=-e * (nb + nd),
        charge_revised=-e * nb + e * nd,
        n_electron=nb,
        n_positron=nd,
    )


def four_current_original(state: FieldState, e: float = 1.0) -> FourCurrent:
    """rho = -e psi†psi (always <= 0), J = -e c psi† gamma^0 gamma psi."""
    lat = state.lattice
    return FourCurrent(lat, -e * _density(state.psi), -e * lat.c * _alpha_current(state.psi),
                       tag="original")


def four_current_revised(sp: FieldSplit, e: float = 1.0):
    """Electron and positron four-currents of the revised theory.

    rho_e = -e psi_e†psi_e <= 0 and rho_p = +e psi_p†psi_p >= 0.  The positron
    current is evaluated as +e c psi_-† gamma^0 gamma psi_-, the locally
    conserved partner of rho_p (equal to the conjugate-field bilinear in the
    x and z components; see the continuity contract).
    """
    lat = sp.lattice
    cur_e = FourCurrent(lat, -e * _density(sp.psi_plus),
                        -e * lat.c * _alpha_current(sp.psi_plus), tag="electron")
    cur_p = FourCurrent(lat, +e * _density(sp.psi_minus),
                        +e * lat.c * _alpha_current(sp.psi_minus), tag="positron")
    return cur_e, cur_p


def _continuity_parts_from(lat: Lattice, sign: float, psi, dpsi):
    dt_rho = sign * 2.0 * np.einsum("...i,...i->...", np.conj(psi), dpsi).real
    j = sign * lat.c * _alpha_current(psi)
    div_j = lat.divergence(j).real
    return dt_rho, div_j


def _continuity_parts(modes: ModeAmplitudes, t: float, which: str, e: float):
    lat = modes.lattice
    sp = synthesize_split(modes, t)
    dp = synthesize_split(modes, t, time_derivative=True)
    if which == "original":
        sign, psi, dpsi = -e, sp.psi, dp.psi
    elif which == "electron":
        sign, psi, dpsi = -e, sp.psi_plus, dp.psi_plus
    elif which == "positron":
        sign, psi, dpsi = +e, sp.psi_minus, dp.psi_minus
    else:
        raise ValueError(f"unknown current {which!r}")
    return _continuity_parts_from(lat, sign, psi, dpsi)


def continuity_report(modes: ModeAmplitudes, t: float = 0.0, e: float = 1.0) -> dict:
    """(residual, scale) for all three currents from one synthesis pass."""
    lat = modes.lattice
    sp = synthesize_split(modes, t)
    dp = synthesize_split(modes, t, time_derivative=True)
    cases = {
        "original": (-e, sp.psi, dp.psi),
        "electron": (-e, sp.psi_plus, dp.psi_plus),
        "positron": (+e, sp.psi_minus, dp.psi_minus),
    }
    out = {}
    for which, (sign, psi, dpsi) in cases.items():
        dt_rho, div_j = _continuity_parts_from(lat, sign, psi, dpsi)
        residual = float(np.sqrt(lat.integrate((dt_rho + div_j) ** 2)))
        scale = float(np.sqrt(lat.integrate(dt_rho**2)) + np.sqrt(lat.integrate(div_j**2)))
        out[which] = (residual, scale)
    return out


def _which_tag(which) -> str:
    return which.tag if isinstance(which, FourCurrent) else which


def continuity_residual(modes: ModeAmplitudes, t: float = 0.0, which="original",
                        e: float = 1.0) -> float:
    """L2 norm of d rho/dt + div J for one of the three currents.

    which: the current's name, or a FourCurrent derived from these modes at
    time t (its tag selects the flow).  The time derivative is analytic from
    the mode phases; the divergence is spectral.  Near zero for band-limited
    states (|n_i| <= N/4 - 1), where the quadratic densities stay inside the
    Brillouin zone.
    """
    lat = modes.lattice
    dt_rho, div_j = _continuity_parts(modes, t, _which_tag(which), e)
    return float(np.sqrt(lat.integrate((dt_rho + div_j) ** 2)))


def continuity_scale(modes: ModeAmplitudes, t: float = 0.0, which="original",
                     e: float = 1.0) -> float:
    """Reference magnitude ||d rho/dt|| + ||div J|| for relative residuals."""
    lat = modes.lattice
    dt_rho, div_j = _continuity_parts(modes, t, _which_tag(which), e)
    return float(np.sqrt(lat.integrate(dt_rho**2)) + np.sqrt(lat.integrate(div_j**2)))


def energy_density(modes: ModeAmplitudes, t: float = 0.0, variant: str = "canonical",
                   theory: str = "original") -> np.ndarray:
    """Pointwise energy density.

    canonical: i hbar psi† dpsi/dt (complex pointwise, real integral);
    symmetrized: (i hbar/2)(psi† dpsi/dt - dpsi†/dt psi) (real pointwise).
    The revised theory uses the electron/positron pair of densities.  Both
    variants integrate to the corresponding total energy.
    """
    lat = modes.lattice
    hbar = lat.hbar
    sp = synthesize_split(modes, t)
    dp = synthesize_split(modes, t, time_derivative=True)
    if theory == "original":
        z = np.einsum("...i,...i->...", np.conj(sp.psi), dp.psi)
        zs = [z]
    elif theory == "revised":
        z_e = np.einsum("...i,...i->...", np.conj(sp.psi_plus), dp.psi_plus)
        z_p = np.conj(np.einsum("...i,...i->...", np.conj(sp.psi_minus), dp.psi_minus))
        zs = [z_e, z_p]
    else:
        raise ValueError(f"unknown theory {theory!r}")
    if variant == "canonical":
        return 1j * hbar * sum(zs)
    if variant == "symmetrized":
        return sum(-hbar * np.imag(z) for z in zs)
    raise ValueError(f"unknown variant {variant!r}")


def build_packet(lat: Lattice, sigma: float, kind: str = "electron", spin: int = 1,
                 center=None, allow_unresolved: bool = False) -> ModeAmplitudes:
    """Gaussian positive-frequency (or pure-positron) packet, unit particle number.

    The amplitude envelope is exp(-sigma^2 |p|^2 / hbar^2), which makes sigma
    the per-axis standard deviation of the position-space density; the
    measured rms radius is then sqrt(3) sigma up to relativistic corrections.
    Requires sigma >= 3a (envelope contained in the Brillouin zone) and
    L >= 6 sigma (packet contained in the box) unless allow_unresolved is
    set; the minimum-size sweep uses the escape deliberately.
    """
    if sigma <= 0:
        raise ValueError(f"target width must be positive, got sigma={sigma}")
    if spin not in (1, 2):
        raise ValueError(f"spin label must be 1 or 2, got {spin}")
    if kind not in ("electron", "positron"):
        raise ValueError(f"kind must be electron or positron, got {kind!r}")
    if not allow_unresolved:
        if sigma < 3.0 * lat.a:
            raise ValueError(
                f"lattice does not resolve the packet: sigma={sigma} < 3a={3 * lat.a}"
            )
        if lat.box < 6.0 * sigma:
            raise ValueError(f"box does not contain the packet: L={lat.box} < 6 sigma={6 * sigma}")
    if center is None:
        center = np.full(3, lat.box / 2.0)
    center = np.asarray(center, dtype=float)
    p = lat.momenta
    p2 = np.sum(p * p, axis=-1)
    amp = np.exp(-(sigma**2) * p2 / lat.hbar**2) * (~lat.nyquist_mask)
    amp = amp * np.exp(-1j * np.einsum("...k,k->...", p, center) / lat.hbar)
    amp = amp / np.sqrt(np.sum(np.abs(amp) ** 2))
    modes = ModeAmplitudes.zero(lat)
    if kind == "electron":
        modes.b[spin - 1] = amp
    else:
        modes.d[spin - 1] = amp
    return modes


def periodic_centroid(lat: Lattice, weights: np.ndarray) -> np.ndarray:
    """Circular-mean centroid of a nonnegative weight field, one value per axis."""
    xs = np.arange(lat.n) * lat.a
    ang = 2.0 * np.pi * xs / lat.box
    out = np.empty(3)
    for ax in range(3):
        marg = weights.sum(axis=tuple(i for i in range(3) if i != ax))
        z = np.sum(marg * np.exp(1j * ang))
        out[ax] = (np.angle(z) % (2.0 * np.pi)) * lat.box / (2.0 * np.pi)
    return out


def _folded_offsets(lat: Lattice, center: np.ndarray) -> np.ndarray:
    """Coordinates relative to center, wrapped into [-L/2, L/2), shape grid+(3,)."""
    rel = lat.coordinates - center
    return (rel + lat.box / 2.0) % lat.box - lat.box / 2.0


def packet_width(lat: Lattice, rho: np.ndarray) -> float:
    """rms radius sqrt(sum |x - xbar|^2 |rho| / sum |rho|), periodic-aware."""
    w = np.abs(rho)
    total = w.sum()
    if total == 0.0:
        raise ValueError("packet width undefined for an identically zero density")
    center = periodic_centroid(lat, w)
    rel = _folded_offsets(lat, center)
    return float(np.sqrt(np.sum(w * np.sum(rel * rel, axis=-1)) / total))


def radial_profile(lat: Lattice, rho: np.ndarray, nbins: int = 32):
    """Angle-averaged |rho| versus folded radius about the density centroid.

    Returns (r_centers, mean_density) arrays of length nbins.
    """
    w = np.abs(rho)
    center = periodic_centroid(lat, w)
    rel = _folded_offsets(lat, center)
    r = np.sqrt(np.sum(rel * rel, axis=-1)).ravel()
    edges = np.linspace(0.0, lat.box / 2.0, nbins + 1)
    idx = np.clip(np.digitize(r, edges) - 1, 0, nbins - 1)
    sums = np.bincount(idx, weights=w.ravel(), minlength=nbins)
    counts = np.bincount(idx, minlength=nbins)
    mean = np.where(counts > 0, sums / np.maximum(counts, 1), 0.0)
    return 0.5 * (edges[:-1] + edges[1:]), mean


def spin_diagnostics(modes: ModeAmplitudes, t: float = 0.0, e: float = 1.0) -> SpinReport:
    """Magnetic moment, flow angular momentum and gyromagnetic ratio.

    mu_z = (1/2c) a^3 sum (x cross J_e)_z with the electron charge current;
    L_z uses the momentum density hbar Im(psi_e† grad psi_e) plus the
    spin-circulation term (1/2) curl s with s = (hbar/2) psi_e† Sigma psi_e,
    so that the flow carries the full hbar/2 of a spin eigenstate.
    Coordinates are taken relative to the periodic centroid.
    """
    lat = modes.lattice
    ne, npos = particle_numbers(modes)
    if npos > 1e-6:
        raise ValueError(f"spin diagnostics need a pure electron packet; N_p = {npos}")
    sp = synthesize_split(modes, t)
    psi = sp.psi_plus
    rho = _density(psi)
    center = periodic_centroid(lat, rho)
    rel = _folded_offsets(lat, center)

    j_e = -e * lat.c * _alpha_current(psi)
    mu_z = float(lat.integrate(rel[..., 0] * j_e[..., 1] - rel[..., 1] * j_e[..., 0]) / (2.0 * lat.c))

    grad = lat.gradient(psi)  # grid + (4, 3)
    g_vec = lat.hbar * np.imag(np.einsum("...i,...ik->...k", np.conj(psi), grad))
    spin_dens = np.empty(psi.shape[:3] + (3,))
    for k in range(3):
        spin_dens[..., k] = 0.5 * lat.hbar * np.einsum(
            "...i,ij,...j->...", np.conj(psi), _SPIN[k], psi
        ).real
    g_vec = g_vec + 0.5 * lat.curl(spin_dens).real
    l_z = float(lat.integrate(rel[..., 0] * g_vec[..., 1] - rel[..., 1] * g_vec[..., 0]))

    g_ratio = (mu_z / l_z) * (2.0 * lat.m * lat.c / (-e))
    return SpinReport(
        mu_z=mu_z,
        l_z=l_z,
        g_ratio=float(g_ratio),
        rms_radius=packet_width(lat, rho),
        n_electron=ne,
        n_positron=npos,
    )
