"""Electromagnetic analog: the phi-field built from E + iB.

Fourier transform the complex field E + iB, divide each mode by the square
root of the energy per photon hbar|k|c (and by sqrt(8 pi)), and transform
back: the resulting three-component complex field phi evolves by the
first-order equation i hbar dphi/dt = -i hbar c s.grad phi and carries the
electromagnetic energy in the same bilinear form as the revised Dirac
energy, with positive signs for both frequency components.

Helicity (eigenbasis of s.k_hat, eigenvalues +1/-1/0) is the internal
diagonal basis: positive helicity is positive frequency.  The k = 0 bin is
excluded by contract (zero-mean free fields), and Nyquist bins are kept out
of random states because a self-conjugate traveling mode cannot stay real.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lattice import Lattice


@dataclass
class EMState:
    """Real electric and magnetic fields on the lattice (Gaussian units)."""

    lattice: Lattice
    e: np.ndarray   # (N, N, N, 3) real
    b: np.ndarray   # (N, N, N, 3) real
    t: float = 0.0


@dataclass
class PhiField:
    """The weighted E + iB field and its frequency split.

    phi_plus / phi_minus are the positive/negative helicity (= frequency)
    parts; the analog particle fields are photon = phi_plus and antiphoton =
    conjugate of phi_minus.
    """

    lattice: Lattice
    phi: np.ndarray        # (N, N, N, 3) complex
    phi_plus: np.ndarray
    phi_minus: np.ndarray
    t: float = 0.0

    @property
    def photon(self) -> np.ndarray:
        return self.phi_plus

    @property
    def antiphoton(self) -> np.ndarray:
        return np.conj(self.phi_minus)


def _khat_and_norm(lat: Lattice):
    k = lat.momenta / lat.hbar
    knorm = np.sqrt(np.sum(k * k, axis=-1))
    khat = np.zeros_like(k)
    nz = knorm > 0
    khat[nz] = k[nz] / knorm[nz][..., None]
    return khat, knorm


def helicity_basis(lat: Lattice):
    """Unit helicity vectors e_+(k), e_-(k) with (s.k_hat) e_pm = pm e_pm.

    Built from a transverse orthonormal pair (e1, e2 = k_hat x e1); the
    k = 0 bin gets zero vectors.
    """
    khat, knorm = _khat_and_norm(lat)
    ref = np.zeros_like(khat)
    ref[..., 2] = 1.0
    # switch reference axis where k is (anti)parallel to z
    along_z = np.abs(khat[..., 2]) > 0.9
    ref[along_z] = np.array([1.0, 0.0, 0.0])
    e1 = np.cross(khat, ref)
    n1 = np.sqrt(np.sum(e1 * e1, axis=-1))
    good = n1 > 0
    e1[good] = e1[good] / n1[good][..., None]
    e2 = np.cross(khat, e1)
    eplus = (e1 + 1j * e2) / np.sqrt(2.0)
    eminus = (e1 - 1j * e2) / np.sqrt(2.0)
    zero = knorm == 0
    eplus[zero] = 0.0
    eminus[zero] = 0.0
    return eplus, eminus


def _fft(f):
    return np.fft.fftn(f, axes=(0, 1, 2))

def _ifft(f):
    return np.fft.ifftn(f, axes=(0, 1, 2))


def _split_phi(lat: Lattice, phi_tilde: np.ndarray):
    eplus, eminus = helicity_basis(lat)
    amp_p = np.einsum("...i,...i->...", np.conj(eplus), phi_tilde)
    amp_m = np.einsum("...i,...i->...", np.conj(eminus), phi_tilde)
    return amp_p[..., None] * eplus, amp_m[..., None] * eminus


def phi_from_em(state: EMState) -> PhiField:
    """Weighted transform of E + iB; rejects fields with a nonzero mean."""
    lat = state.lattice
    f = state.e + 1j * state.b
    f_tilde = _fft(f)
    mean = np.abs(f_tilde[0, 0, 0]).max() / lat.n**3
    scale = np.sqrt(np.mean(state.e**2) + np.mean(state.b**2))
    if mean > 1e-12 * max(scale, 1e-300):
        raise ValueError("phi transform requires zero-mean fields (k = 0 bin is singular)")
    _, knorm = _khat_and_norm(lat)
    weight = np.zeros_like(knorm)
    nz = knorm > 0
    weight[nz] = 1.0 / np.sqrt(8.0 * np.pi * lat.hbar * knorm[nz] * lat.c)
    phi_tilde = f_tilde * weight[..., None]
    phi_tilde[0, 0, 0] = 0.0
    plus_t, minus_t = _split_phi(lat, phi_tilde)
    return PhiField(lat, _ifft(phi_tilde), _ifft(plus_t), _ifft(minus_t), state.t)


def em_from_phi(phi: PhiField) -> EMState:
    """Exact inverse of phi_from_em: E = Re, B = Im of the unweighted field."""
    lat = phi.lattice
    _, knorm = _khat_and_norm(lat)
    weight = np.sqrt(8.0 * np.pi * lat.hbar * knorm * lat.c)
    f_tilde = _fft(phi.phi) * weight[..., None]
    f = _ifft(f_tilde)
    return EMState(lat, f.real.copy(), f.imag.copy(), phi.t)


def phi_evolve(phi: PhiField, dt: float) -> PhiField:
    """Exact evolution: helicity-lambda mode at k gets phase e^{-i lambda c|k| dt}."""
    lat = phi.lattice
    _, knorm = _khat_and_norm(lat)
    plus_t = _fft(phi.phi_plus) * np.exp(-1j * lat.c * knorm * dt)[..., None]
    minus_t = _fft(phi.phi_minus) * np.exp(+1j * lat.c * knorm * dt)[..., None]
    return PhiField(lat, _ifft(plus_t + minus_t), _ifft(plus_t), _ifft(minus_t), phi.t + dt)


def maxwell_evolve(state: EMState, dt: float) -> EMState:
    """Closed-form spectral solution of the free Maxwell equations.

    E~(t) = cos(wt) E~0 + sin(wt) i k_hat x B~0 and the matching B~(t); used
    as the independent oracle for phi_evolve.
    """
    lat = state.lattice
    khat, knorm = _khat_and_norm(lat)
    wt = lat.c * knorm * dt
    cos = np.cos(wt)[..., None]
    sin = np.sin(wt)[..., None]
    e_t = _fft(state.e)
    b_t = _fft(state.b)
    cross_b = 1j * np.cross(khat, b_t)
    cross_e = 1j * np.cross(khat, e_t)
    e_new = cos * e_t + sin * cross_b
    b_new = cos * b_t - sin * cross_e
    return EMState(lat, _ifft(e_new).real.copy(), _ifft(b_new).real.copy(), state.t + dt)


def em_energies(state: EMState):
    """(E_standard, E_phi): the field energy computed both ways.

    E_standard = a^3 sum (E^2 + B^2)/8pi; E_phi = i hbar a^3 sum
    (phi_+† dphi_+/dt - phi_-† dphi_-/dt), with the time derivatives taken
    analytically from the helicity phases.  The two agree to rounding, and
    E_phi is manifestly a positive sum over photon and antiphoton modes.
    """
    lat = state.lattice
    e_std = float(lat.integrate(np.sum(state.e**2 + state.b**2, axis=-1)) / (8.0 * np.pi))
    phi = phi_from_em(state)
    _, knorm = _khat_and_norm(lat)
    omega = (lat.c * knorm)[..., None]
    dplus = _ifft(_fft(phi.phi_plus) * (-1j) * omega)
    dminus = _ifft(_fft(phi.phi_minus) * (+1j) * omega)
    dens = np.einsum("...i,...i->...", np.conj(phi.phi_plus), dplus)
    dens -= np.einsum("...i,...i->...", np.conj(phi.phi_minus), dminus)
    e_phi = float((1j * lat.hbar * lat.integrate(dens)).real)
    return e_std, e_phi


def photon_number(phi: PhiField):
    """(N_photon, N_antiphoton) = integrals of phi_+†phi_+ and phi_-†phi_-."""
    lat = phi.lattice
    n_p = float(lat.integrate(np.sum(np.abs(phi.phi_plus) ** 2, axis=-1)).real)
    n_m = float(lat.integrate(np.sum(np.abs(phi.phi_minus) ** 2, axis=-1)).real)
    return n_p, n_m


def random_free_state(lat: Lattice, rng: np.random.Generator, band: int | None = None,
                      scale: float = 1.0) -> EMState:
    """Random transverse zero-mean E, B via random helicity amplitudes.

    band limits populated bins to |n_i| <= band (use N/4 - 1 when quadratic
    densities will be differentiated spectrally).  Nyquist planes and k = 0
    stay empty.
    """
    eplus, eminus = helicity_basis(lat)
    shape = (lat.n,) * 3
    amp_p = rng.normal(size=shape) + 1j * rng.normal(size=shape)
    amp_m = rng.normal(size=shape) + 1j * rng.normal(size=shape)
    keep = ~lat.nyquist_mask
    keep = keep.copy()
    keep[0, 0, 0] = False  # zero-mean contract: k = 0 bin stays empty
    if band is not None:
        f = np.abs(lat.mode_numbers)
        inside = (f[:, None, None] <= band) & (f[None, :, None] <= band) & (f[None, None, :] <= band)
        keep &= inside
    f_tilde = (amp_p * keep)[..., None] * eplus + (amp_m * keep)[..., None] * eminus
    f = _ifft(f_tilde) * scale
    return EMState(lat, f.real.copy(), f.imag.copy(), 0.0)
