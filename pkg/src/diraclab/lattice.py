"""Periodic cubic lattice, its discrete momentum grid and Fourier contract.

Conventions (all discretization normalization lives here):

* sites x_j = a*j, j = 0..N-1 per axis, a = L/N;
* momenta p_n = (2 pi hbar / L) n with integer n in [-N/2, N/2) per axis,
  stored in FFT bin order;
* the forward transform is unitary with respect to the physical measures:
  a^3 sum_x |f(x)|^2 = sum_n |f~(n)|^2 (Parseval), and a plane wave
  e^{i p_n.x/hbar} lands in the single bin n with weight L^{3/2}.

Mode amplitudes elsewhere in the package are the discrete rescaling
B = b(p_n) dp^{3/2}, so every continuum integral identity becomes an exact
finite sum over bins.
"""

from __future__ import annotations

from functools import cached_property

import numpy as np

from .spinors import spinor_tables


class Lattice:
    """Immutable periodic cubic lattice with physics constants attached."""

    def __init__(self, n: int, box: float, m: float = 1.0, hbar: float = 1.0, c: float = 1.0):
        if n % 2 != 0:
            raise ValueError(f"N must be even, got N={n}")
        if n < 4:
            raise ValueError(f"N must be >= 4, got N={n}")
        if box <= 0:
            raise ValueError(f"box length must be positive, got L={box}")
        if m <= 0:
            raise ValueError(f"mass must be positive, got m={m}")
        if hbar <= 0 or c <= 0:
            raise ValueError(f"hbar and c must be positive, got hbar={hbar}, c={c}")
        self.n = int(n)
        self.box = float(box)
        self.m = float(m)
        self.hbar = float(hbar)
        self.c = float(c)

    @property
    def a(self) -> float:
        """Lattice spacing."""
        return self.box / self.n

    @property
    def volume(self) -> float:
        return self.box**3

    @property
    def dp(self) -> float:
        """Momentum grid spacing 2 pi hbar / L."""
        return 2.0 * np.pi * self.hbar / self.box

    @property
    def mode_numbers(self) -> np.ndarray:
        """Integer mode numbers per axis in FFT bin order."""
        return np.fft.fftfreq(self.n, d=1.0 / self.n)

    @cached_property
    def momenta(self) -> np.ndarray:
        """Momentum vectors on the full grid, shape (N, N, N, 3)."""
        f = self.mode_numbers * self.dp
        px, py, pz = np.meshgrid(f, f, f, indexing="ij")
        return np.stack([px, py, pz], axis=-1)

    @cached_property
    def energies(self) -> np.ndarray:
        """On-shell E_p over the momentum grid, shape (N, N, N)."""
        p2 = np.sum(self.momenta**2, axis=-1)
        return np.sqrt(self.m**2 * self.c**4 + p2 * self.c**2)

    @cached_property
    def nyquist_mask(self) -> np.ndarray:
        """True on bins where any momentum component sits at -N/2."""
        ny = self.mode_numbers == -self.n // 2
        return ny[:, None, None] | ny[None, :, None] | ny[None, None, :]

    @cached_property
    def coordinates(self) -> np.ndarray:
        """Site coordinates, shape (N, N, N, 3)."""
        xs = np.arange(self.n) * self.a
        x, y, z = np.meshgrid(xs, xs, xs, indexing="ij")
        return np.stack([x, y, z], axis=-1)

    @cached_property
    def negated_index(self) -> np.ndarray:
        """Per-axis bin permutation mapping momentum p to -p."""
        return (-np.arange(self.n)) % self.n

    @cached_property
    def spinor_tables(self):
        """Cached (u, v, E) basis-spinor tables over the momentum grid."""
        p = self.momenta
        return spinor_tables(p[..., 0], p[..., 1], p[..., 2], self.m, self.c)

    def same_grid(self, other: "Lattice") -> bool:
        return (
            self.n == other.n
            and self.box == other.box
            and self.m == other.m
            and self.hbar == other.hbar
            and self.c == other.c
        )

    def negate_momentum_bins(self, field: np.ndarray) -> np.ndarray:
        """Reorder a momentum-space array so bin n holds the old bin of -p_n."""
        idx = self.negated_index
        out = field
        for axis in range(3):
            out = np.take(out, idx, axis=axis)
        return out

    def integrate(self, density: np.ndarray) -> complex | float:
        """a^3 sum over sites (leading three axes)."""
        return self.a**3 * density.sum(axis=(0, 1, 2))

    def transform(self, field: np.ndarray, direction: str = "forward") -> np.ndarray:
        """Unitary DFT between site and momentum representations.

        forward: f~(n) = (a/N)^{3/2} sum_x f(x) e^{-i p_n.x/hbar}
        inverse: exact inverse; inverse(forward(f)) == f.
        Works on any array whose first three axes are the grid.
        """
        if direction == "forward":
            return np.fft.fftn(field, axes=(0, 1, 2)) * (self.a / self.n) ** 1.5
        if direction == "inverse":
            return np.fft.ifftn(field, axes=(0, 1, 2)) * (self.n / self.a) ** 1.5
        raise ValueError(f"direction must be 'forward' or 'inverse', got {direction!r}")

    def gradient(self, field: np.ndarray) -> np.ndarray:
        """Spectral gradient; returns shape field.shape + (3,)."""
        ik = 1j * self.momenta / self.hbar
        tilde = np.fft.fftn(field, axes=(0, 1, 2))
        extra = field.ndim - 3
        out = np.empty(field.shape + (3,), dtype=complex)
        for axis in range(3):
            k = ik[..., axis].reshape(ik.shape[:3] + (1,) * extra)
            out[..., axis] = np.fft.ifftn(tilde * k, axes=(0, 1, 2))
        return out

    def divergence(self, vec: np.ndarray) -> np.ndarray:
        """Spectral divergence of a vector field with trailing axis 3."""
        ik = 1j * self.momenta / self.hbar
        out = np.zeros(vec.shape[:3], dtype=complex)
        for axis in range(3):
            tilde = np.fft.fftn(vec[..., axis], axes=(0, 1, 2))
            out += np.fft.ifftn(tilde * ik[..., axis], axes=(0, 1, 2))
        return out

    def curl(self, vec: np.ndarray) -> np.ndarray:
        """Spectral curl of a vector field with trailing axis 3."""
        g = np.stack([self.gradient(vec[..., i]) for i in range(3)], axis=-2)
        # g[..., i, j] = d_j v_i
        out = np.empty_like(vec, dtype=complex)
        out[..., 0] = g[..., 2, 1] - g[..., 1, 2]
        out[..., 1] = g[..., 0, 2] - g[..., 2, 0]
        out[..., 2] = g[..., 1, 0] - g[..., 0, 1]
        return out


def make_lattice(n: int, box: float, m: float = 1.0, hbar: float = 1.0, c: float = 1.0) -> Lattice:
    """Validate parameters and build a Lattice."""
    return Lattice(n, box, m, hbar, c)
