import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from diraclab import Lattice, make_lattice


class TestConstruction:
    def test_momentum_grid_small_box(self):
        lat = make_lattice(4, 2.0 * np.pi)
        assert lat.dp == pytest.approx(1.0, rel=1e-15)
        assert sorted(lat.mode_numbers * lat.dp) == [-2.0, -1.0, 0.0, 1.0]

    def test_odd_n_rejected(self):
        with pytest.raises(ValueError, match="N must be even"):
            make_lattice(3, 1.0)

    def test_tiny_n_rejected(self):
        with pytest.raises(ValueError, match="N must be >= 4"):
            make_lattice(2, 1.0)

    def test_bad_physics_parameters_rejected(self):
        with pytest.raises(ValueError, match="box"):
            make_lattice(4, -1.0)
        with pytest.raises(ValueError, match="mass"):
            make_lattice(4, 1.0, m=0.0)

    def test_momenta_recomputed_from_definition(self):
        lat = make_lattice(16, 16.0, m=1.0)
        assert lat.a == pytest.approx(1.0)
        f = lat.mode_numbers
        expected = np.array([0, 1, 2, 3, 4, 5, 6, 7, -8, -7, -6, -5, -4, -3, -2, -1], dtype=float)
        assert np.array_equal(f, expected)
        assert np.allclose(lat.momenta[..., 0], (2 * np.pi / 16.0) * f[:, None, None], atol=0)
        assert np.max(np.abs(lat.momenta)) == pytest.approx((16 // 2) * lat.dp)

    def test_energies_on_shell(self):
        lat = make_lattice(8, 4.0, m=2.0, c=3.0)
        p2 = np.sum(lat.momenta**2, axis=-1)
        assert np.allclose(lat.energies, np.sqrt(4.0 * 81.0 + p2 * 9.0), rtol=1e-15)


class TestTransform:
    def test_zero_maps_to_zero(self, lat8):
        f = np.zeros((8, 8, 8), dtype=complex)
        assert np.array_equal(lat8.transform(f), f)

    def test_plane_wave_single_bin(self, lat8):
        n = (2, 5, 1)  # bin 5 holds mode number -3
        phase = np.einsum(
            "...k,k->...", lat8.coordinates, lat8.momenta[n] / lat8.hbar
        )
        f = np.exp(1j * phase)
        tilde = lat8.transform(f)
        expected = np.zeros_like(tilde)
        expected[n] = lat8.box**1.5
        assert np.allclose(tilde, expected, atol=1e-12 * lat8.box**1.5)

    @settings(max_examples=15, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), n=st.sampled_from([4, 8, 16, 32]))
    def test_parseval_and_roundtrip(self, seed, n):
        lat = Lattice(n, 5.0)
        r = np.random.default_rng(seed)
        f = r.normal(size=(n, n, n)) + 1j * r.normal(size=(n, n, n))
        tilde = lat.transform(f)
        lhs = lat.a**3 * np.sum(np.abs(f) ** 2)
        rhs = np.sum(np.abs(tilde) ** 2)
        assert rhs == pytest.approx(lhs, rel=1e-12)
        back = lat.transform(tilde, "inverse")
        assert np.max(np.abs(back - f)) < 1e-12 * np.max(np.abs(f))

    def test_discrete_plane_wave_orthogonality(self, lat8):
        # a^3 sum_x e^{i(p_n - p_m).x} = L^3 delta_nm, exactly
        phases = np.einsum("...k,nk->n...", lat8.coordinates, lat8.momenta.reshape(-1, 3))
        for n in (0, 3, 101):
            for m in (0, 3, 257):
                val = lat8.a**3 * np.sum(np.exp(1j * (phases[n] - phases[m])))
                want = lat8.volume if n == m else 0.0
                assert abs(val - want) < 1e-12 * lat8.volume

    def test_transform_vector_components(self, lat8, rng):
        f = rng.normal(size=(8, 8, 8, 4)) + 1j * rng.normal(size=(8, 8, 8, 4))
        tilde = lat8.transform(f)
        for i in range(4):
            assert np.allclose(tilde[..., i], lat8.transform(f[..., i]), atol=0)

    def test_invalid_direction(self, lat8):
        with pytest.raises(ValueError, match="direction"):
            lat8.transform(np.zeros((8, 8, 8)), "sideways")


class TestCalculus:
    def test_gradient_of_plane_wave(self, lat8):
        n = (1, 2, 6)
        p = lat8.momenta[n]
        phase = np.einsum("...k,k->...", lat8.coordinates, p / lat8.hbar)
        f = np.exp(1j * phase)
        grad = lat8.gradient(f)
        for k in range(3):
            assert np.allclose(grad[..., k], 1j * p[k] / lat8.hbar * f, atol=1e-12)

    def test_divergence_and_curl_of_gradient(self, lat8, rng):
        # band-limited scalar so spectral identities are exact
        tilde = np.zeros((8, 8, 8), dtype=complex)
        tilde[:2, :2, :2] = rng.normal(size=(2, 2, 2)) + 1j * rng.normal(size=(2, 2, 2))
        f = np.fft.ifftn(tilde)
        grad = lat8.gradient(f)
        curl = lat8.curl(grad)
        assert np.max(np.abs(curl)) < 1e-13 * max(np.max(np.abs(grad)), 1e-30)
        lap = lat8.divergence(grad)
        p2 = np.sum(lat8.momenta**2, axis=-1)
        expected = np.fft.ifftn(-p2 / lat8.hbar**2 * np.fft.fftn(f))
        assert np.allclose(lap, expected, atol=1e-12 * np.max(np.abs(expected)))
