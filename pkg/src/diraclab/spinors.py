"""Gamma matrices, momentum-space basis spinors and spin-1 matrices.

Everything here is pure linear algebra in the Dirac (standard) representation
with metric signature (+, -, -, -).  Basis spinors are normalized to
u†u = v†v = 2 E_p and satisfy u†(p) v(p') = 0 whenever the spatial momenta
are opposite, which is what makes positive/negative frequency cross terms
drop out of all quadratic observables.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Pauli matrices
SIGMA = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)

_I2 = np.eye(2, dtype=complex)
_Z2 = np.zeros((2, 2), dtype=complex)

METRIC = np.diag([1.0, -1.0, -1.0, -1.0])


@dataclass(frozen=True)
class GammaSet:
    """The four gamma matrices in the Dirac representation."""

    gamma0: np.ndarray
    gamma1: np.ndarray
    gamma2: np.ndarray
    gamma3: np.ndarray

    def __iter__(self):
        return iter((self.gamma0, self.gamma1, self.gamma2, self.gamma3))

    @property
    def spatial(self) -> np.ndarray:
        """gamma^1..gamma^3 stacked as a (3, 4, 4) array."""
        return np.stack([self.gamma1, self.gamma2, self.gamma3])

    @property
    def alpha(self) -> np.ndarray:
        """The velocity matrices gamma^0 gamma^k, stacked (3, 4, 4)."""
        return np.stack([self.gamma0 @ g for g in self.spatial])


def gamma_matrices() -> GammaSet:
    """Dirac-representation gamma matrices: {g^mu, g^nu} = 2 diag(+,-,-,-)."""
    g0 = np.block([[_I2, _Z2], [_Z2, -_I2]])
    gs = [np.block([[_Z2, s], [-s, _Z2]]) for s in SIGMA]
    return GammaSet(g0, gs[0], gs[1], gs[2])


def spin1_matrices() -> np.ndarray:
    """Spin-1 matrices (s_i)_{jk} = -i eps_{ijk}, stacked as (3, 3, 3)."""
    eps = np.zeros((3, 3, 3))
    eps[0, 1, 2] = eps[1, 2, 0] = eps[2, 0, 1] = 1.0
    eps[0, 2, 1] = eps[2, 1, 0] = eps[1, 0, 2] = -1.0
    return -1j * eps


@dataclass(frozen=True)
class SpinBasis:
    """Basis spinors u^s, v^s (s = 1, 2) at one 3-momentum, plus E_p.

    u, v have shape (2, 4); index 0 is the spin label s-1.
    """

    p: np.ndarray
    energy: float
    u: np.ndarray
    v: np.ndarray


def on_shell_energy(p_vec, m: float, c: float = 1.0):
    """E_p = sqrt(m^2 c^4 + |p|^2 c^2); p_vec may be an array of vectors."""
    p_vec = np.asarray(p_vec, dtype=float)
    p2 = np.sum(p_vec * p_vec, axis=-1)
    return np.sqrt(m * m * c**4 + p2 * c * c)


def basis_spinors(p_vec, m: float, c: float = 1.0) -> SpinBasis:
    """Construct u^s(p), v^s(p) in the Dirac representation.

    u^s = sqrt(E+mc^2) (xi^s ; X xi^s), v^s = sqrt(E+mc^2) (X eta^s ; eta^s)
    with X = c sigma.p / (E + mc^2) and xi^s = eta^s the standard 2-spinor
    seeds.  Requires m > 0 (the massless construction degenerates).
    """
    if m <= 0:
        raise ValueError(f"basis spinors require m > 0, got m={m}")
    p_vec = np.asarray(p_vec, dtype=float)
    energy = float(on_shell_energy(p_vec, m, c))
    denom = energy + m * c * c
    x = c * np.einsum("kij,k->ij", SIGMA, p_vec) / denom  # X = c sigma.p/(E+mc^2)
    root = np.sqrt(denom)
    u = np.zeros((2, 4), dtype=complex)
    v = np.zeros((2, 4), dtype=complex)
    for s in range(2):
        seed = np.zeros(2, dtype=complex)
        seed[s] = 1.0
        u[s, :2] = root * seed
        u[s, 2:] = root * (x @ seed)
        v[s, :2] = root * (x @ seed)
        v[s, 2:] = root * seed
    return SpinBasis(p=p_vec, energy=energy, u=u, v=v)


def spinor_tables(px, py, pz, m: float, c: float = 1.0):
    """Vectorized u^s, v^s over a grid of momenta.

    px, py, pz: arrays of any common shape.  Returns (u, v, energy) with
    u, v of shape (2,) + grid + (4,).
    """
    energy = np.sqrt(m * m * c**4 + (px * px + py * py + pz * pz) * c * c)
    denom = energy + m * c * c
    root = np.sqrt(denom)
    # (sigma.p) acting on the two seeds, written out in components
    up_seed1 = np.stack([c * pz / denom, c * (px + 1j * py) / denom], axis=-1)
    up_seed2 = np.stack([c * (px - 1j * py) / denom, -c * pz / denom], axis=-1)
    shape = energy.shape
    one = np.ones(shape)
    zero = np.zeros(shape)
    u = np.empty((2,) + shape + (4,), dtype=complex)
    v = np.empty((2,) + shape + (4,), dtype=complex)
    u[0] = root[..., None] * np.stack([one, zero, up_seed1[..., 0], up_seed1[..., 1]], axis=-1)
    u[1] = root[..., None] * np.stack([zero, one, up_seed2[..., 0], up_seed2[..., 1]], axis=-1)
    v[0] = root[..., None] * np.stack([up_seed1[..., 0], up_seed1[..., 1], one, zero], axis=-1)
    v[1] = root[..., None] * np.stack([up_seed2[..., 0], up_seed2[..., 1], zero, one], axis=-1)
    return u, v, energy


def completeness_defect(p_vec, m: float, c: float = 1.0) -> float:
    """Max-norm deviation of sum_s [u(p)u†(p) + v(p~)v†(p~)] from 2 E_p I."""
    p_vec = np.asarray(p_vec, dtype=float)
    sb = basis_spinors(p_vec, m, c)
    sb_rev = basis_spinors(-p_vec, m, c)
    total = np.zeros((4, 4), dtype=complex)
    for s in range(2):
        total += np.outer(sb.u[s], sb.u[s].conj())
        total += np.outer(sb_rev.v[s], sb_rev.v[s].conj())
    return float(np.max(np.abs(total - 2.0 * sb.energy * np.eye(4))))
