import numpy as np
import pytest
from scipy import sparse

from diraclab import (
    ModeSpec,
    build_space,
    charge_naive,
    charge_normal,
    field_operator_check,
    hamiltonian_naive,
    hamiltonian_normal,
)
from diraclab.fock import anticommutator, diagonal_spectrum, hamiltonian_normal_via_swap


def absmax(mat) -> float:
    mat = sparse.csr_matrix(mat)
    return float(np.max(np.abs(mat.data))) if mat.nnz else 0.0


@pytest.fixture(scope="module")
def two_mode():
    return build_space(ModeSpec((1.0,), (1.0,)))


class TestSpaceConstruction:
    def test_dimension_cap(self):
        with pytest.raises(ValueError, match="cap"):
            ModeSpec(tuple([1.0] * 7), tuple([1.0] * 7))

    def test_energies_must_be_positive(self):
        with pytest.raises(ValueError, match="positive"):
            ModeSpec((1.0, -2.0), ())

    def test_vacuum_has_filled_c_slots(self, two_mode):
        vac = two_mode.vacuum()
        assert vac[two_mode.vacuum_index] == 1.0
        assert two_mode.vacuum_index == 0b10  # b empty, c occupied
        # annihilated by b and by d = c†
        assert absmax(sparse.csr_matrix(two_mode.b[0] @ vac).T) == 0.0
        assert np.max(np.abs(two_mode.d[0] @ vac)) == 0.0

    def test_pauli_exclusion(self, two_mode):
        assert absmax(two_mode.b_dag[0] @ two_mode.b_dag[0]) == 0.0
        assert absmax(two_mode.d_dag[0] @ two_mode.d_dag[0]) == 0.0


class TestAnticommutators:
    def test_basic_pair(self, two_mode):
        ident = two_mode.identity()
        assert absmax(anticommutator(two_mode.b[0], two_mode.b_dag[0]) - ident) == 0.0
        assert absmax(anticommutator(two_mode.d[0], two_mode.d_dag[0]) - ident) == 0.0

    def test_mixed_pairs_vanish(self, two_mode):
        assert absmax(anticommutator(two_mode.b[0], two_mode.d_dag[0])) == 0.0
        assert absmax(anticommutator(two_mode.b[0], two_mode.d[0])) == 0.0

    def test_all_pairs_exact_at_eight_modes(self):
        space = build_space(ModeSpec(tuple([1.0] * 4), tuple([1.5] * 4)))
        ladders = [*space.b, *space.d]
        daggers = [op.conj().T.tocsr() for op in ladders]
        ident = space.identity()
        for i, a in enumerate(ladders):
            for j, b in enumerate(ladders):
                assert absmax(anticommutator(a, b)) == 0.0
                expected = ident if i == j else None
                acomm = anticommutator(a, daggers[j])
                if expected is None:
                    assert absmax(acomm) == 0.0
                else:
                    assert absmax(acomm - expected) == 0.0


class TestHamiltonians:
    def test_naive_spectrum_two_mode(self, two_mode):
        assert np.array_equal(
            diagonal_spectrum(hamiltonian_naive(two_mode)), [-1.0, 0.0, 0.0, 1.0]
        )

    def test_normal_spectrum_two_mode(self, two_mode):
        assert np.array_equal(
            diagonal_spectrum(hamiltonian_normal(two_mode)), [0.0, 1.0, 1.0, 2.0]
        )

    def test_pure_b_sector_nonnegative(self):
        space = build_space(ModeSpec((1.0, 2.0, 0.5), ()))
        assert diagonal_spectrum(hamiltonian_naive(space)).min() >= 0.0

    def test_negative_energy_of_bare_c_excitation(self, two_mode):
        h = hamiltonian_naive(two_mode)
        state = two_mode.c_dag[0] @ two_mode.bare_vacuum()
        assert (state.conj() @ (h @ state)).real == pytest.approx(-1.0, abs=0)

    def test_shift_identity_exact(self):
        # dyadic-rational energies keep every float operation exact
        space = build_space(ModeSpec((1.0, 0.25), (0.75, 2.5)))
        h_naive = hamiltonian_naive(space)
        h_normal = hamiltonian_normal(space)
        shift = 0.75 + 2.5
        assert absmax(h_naive - (h_normal - shift * space.identity())) == 0.0

    def test_shift_identity_generic_energies(self):
        space = build_space(ModeSpec((1.0, 0.3), (0.7, 2.5)))
        h_naive = hamiltonian_naive(space)
        h_normal = hamiltonian_normal(space)
        shift = 0.7 + 2.5
        assert absmax(h_naive - (h_normal - shift * space.identity())) < 1e-14

    def test_naive_floor_is_filled_c_sector(self):
        # the finite sea floor: minimum eigenvalue -sum E_c, attained exactly
        # on the filled-c / empty-b state, which is the physical vacuum
        space = build_space(ModeSpec((1.0, 2.0), (0.5, 1.5, 3.0)))
        diag = hamiltonian_naive(space).diagonal().real
        assert diag.min() == pytest.approx(-(0.5 + 1.5 + 3.0), abs=0)
        assert int(np.argmin(diag)) == space.vacuum_index

    def test_normal_positive_semidefinite_with_vacuum_ground(self):
        space = build_space(ModeSpec((1.0, 2.0), (0.5, 1.5)))
        h = hamiltonian_normal(space)
        assert diagonal_spectrum(h).min() == 0.0
        vac = space.vacuum()
        assert (vac.conj() @ (h @ vac)).real == 0.0

    def test_both_routes_byte_identical(self):
        space = build_space(ModeSpec((1.0, 0.25), (2.0, 0.125)))
        direct = hamiltonian_normal(space).toarray()
        swapped = hamiltonian_normal_via_swap(space).toarray()
        assert direct.tobytes() == swapped.tobytes()


class TestCharges:
    def test_eigenvalues_on_single_particle_states(self, two_mode):
        q = charge_normal(two_mode)
        vac = two_mode.vacuum()
        electron = two_mode.b_dag[0] @ vac
        positron = two_mode.d_dag[0] @ vac
        assert (electron.conj() @ (q @ electron)).real == pytest.approx(-1.0, abs=0)
        assert (positron.conj() @ (q @ positron)).real == pytest.approx(+1.0, abs=0)

    def test_shift_identity(self):
        space = build_space(ModeSpec((1.0,), (2.0, 3.0)))
        q_naive = charge_naive(space)
        q_normal = charge_normal(space)
        assert absmax(q_naive - (q_normal - 2 * space.identity())) == 0.0

    def test_commutes_with_both_hamiltonians(self):
        space = build_space(ModeSpec((1.0, 0.5), (0.25, 2.0)))
        for q in (charge_naive(space), charge_normal(space)):
            for h in (hamiltonian_naive(space), hamiltonian_normal(space)):
                assert absmax(q @ h - h @ q) == 0.0


class TestFieldOperatorCheck:
    def test_completeness_on_random_momenta(self, rng):
        from diraclab.spinors import completeness_defect, on_shell_energy

        for _ in range(50):
            p = rng.normal(scale=3.0, size=3)
            assert completeness_defect(p, 1.0) < 1e-12 * on_shell_energy(p, 1.0)

    def test_truncated_delta_three_momenta(self):
        dp = 2.0 * np.pi / 8.0
        momenta = [np.zeros(3), np.array([dp, 0, 0]), np.array([-dp, 0, 0])]
        positions = [np.zeros(3), np.array([1.0, 0.5, -0.25])]
        report = field_operator_check(momenta, m=1.0, c=1.0, hbar=1.0, box=8.0,
                                      positions=positions)
        assert report["dimension"] == 2**12
        assert report["completeness_defect"] < 1e-12
        assert report["delta_defect"] < 1e-12
        assert report["zero_defect"] == 0.0

    def test_single_momentum_coincident_points(self):
        report = field_operator_check([np.zeros(3)], m=1.0, c=1.0, hbar=1.0, box=4.0,
                                      positions=[np.zeros(3)])
        # {psi_i(x), psi_j†(x)} = delta_ij / L^3 exactly at the single included mode
        assert report["delta_defect"] < 1e-14
        assert report["zero_defect"] == 0.0

    def test_rejects_asymmetric_momentum_set(self):
        with pytest.raises(ValueError, match="negation"):
            field_operator_check([np.array([0.5, 0, 0])], 1.0, 1.0, 1.0, 4.0, [np.zeros(3)])

    def test_rejects_oversized_mode_set(self):
        dp = 2 * np.pi / 8
        momenta = [np.zeros(3)]
        for k in (1, 2):
            momenta += [np.array([k * dp, 0, 0]), np.array([-k * dp, 0, 0])]
        with pytest.raises(ValueError, match="cap"):
            field_operator_check(momenta, 1.0, 1.0, 1.0, 8.0, [np.zeros(3)])


def test_diagonal_spectrum_rejects_offdiagonal():
    mat = sparse.csr_matrix(np.array([[0.0, 1.0], [1.0, 0.0]]))
    with pytest.raises(ValueError, match="diagonal"):
        diagonal_spectrum(mat)
