"""diraclab: a numerical laboratory for classical Dirac field theory.

The package turns the structural claims of the electron/positron
field-splitting picture into executable checks: exact spectral dynamics of
the free Dirac field, the original and revised energy/charge systems, the
weighted E + iB analog of the photon field, finite-mode Fock quantization,
and a Grassmann-valued construction.
"""

__version__ = "0.1.0"

from .lattice import Lattice, make_lattice
from .spinors import GammaSet, SpinBasis, basis_spinors, gamma_matrices, spin1_matrices
from .field import (
    FieldSplit,
    FieldState,
    ModeAmplitudes,
    decompose,
    dirac_residual,
    evolve,
    split,
    synthesize,
    synthesize_split,
)
from .observables import (
    FourCurrent,
    ObservableReport,
    SpinReport,
    build_packet,
    charge_original,
    charge_revised,
    continuity_report,
    continuity_residual,
    energy_density,
    energy_original,
    energy_revised,
    four_current_original,
    four_current_revised,
    observable_report,
    packet_width,
    particle_numbers,
    spin_diagnostics,
)
from .em import (
    EMState,
    PhiField,
    em_energies,
    em_from_phi,
    maxwell_evolve,
    phi_evolve,
    phi_from_em,
    photon_number,
)
from .fock import (
    FockSpace,
    ModeSpec,
    build_space,
    charge_naive,
    charge_normal,
    field_operator_check,
    hamiltonian_naive,
    hamiltonian_normal,
)
from .grassmann import (
    GrassmannAlgebra,
    GrassmannElement,
    conjugate,
    functional_derivative,
    grassmann_charge_density,
    grassmann_energy,
    lift_field,
    multiply,
    unlift_field,
)
