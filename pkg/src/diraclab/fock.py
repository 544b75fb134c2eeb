"""Finite-mode fermionic Fock space and the two quantization routes.

A small set of electron (b-type) and negative-frequency (c-type) modes is
represented on the 2^M occupation basis via the Jordan-Wigner construction,
so every anticommutation relation is an exact matrix identity.  The positron
operators are the same matrices relabeled, d_k† = c_k, and the physical
vacuum is the state annihilated by every b and every d: all c-slots filled,
the finite shadow of the filled negative sea.

The naive Hamiltonian sum E (b†b - c†c) and charge -e sum (b†b + c†c) carry
the negative-energy and constant-shift pathologies; their normal-ordered
replacements sum E (b†b + d†d) and sum (-e b†b + e d†d) differ from them by
exact multiples of the identity - the finite-mode analog of dropping the
delta^3(0) terms.  Building the normal-ordered operators directly from the
d-operators (the revised-theory route) yields byte-identical matrices.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import sparse

MAX_MODES = 12


@dataclass(frozen=True)
class ModeSpec:
    """Energies (and optional momentum/spin labels) of the b and c mode slots."""

    b_energies: tuple
    c_energies: tuple
    b_labels: tuple = ()
    c_labels: tuple = ()

    def __post_init__(self):
        if any(e <= 0 for e in self.b_energies + self.c_energies):
            raise ValueError("every mode energy must be positive")
        if self.total_modes > MAX_MODES:
            raise ValueError(
                f"Fock dimension cap exceeded: {self.total_modes} modes > {MAX_MODES}"
            )

    @property
    def m_b(self) -> int:
        return len(self.b_energies)

    @property
    def m_c(self) -> int:
        return len(self.c_energies)

    @property
    def total_modes(self) -> int:
        return self.m_b + self.m_c

    @property
    def dimension(self) -> int:
        return 2**self.total_modes


def _jw_annihilator(mode: int, n_modes: int) -> sparse.csr_matrix:
    """Jordan-Wigner annihilation operator for one mode.

    Occupation of mode k is bit k of the basis index; the parity string runs
    over modes j < k.  Entries are exactly 0 or +-1.
    """
    dim = 2**n_modes
    states = np.arange(dim)
    occupied = (states >> mode) & 1 == 1
    cols = states[occupied]
    rows = cols - (1 << mode)
    below = cols & ((1 << mode) - 1)
    signs = np.array([(-1.0) ** int(bin(int(x)).count("1")) for x in below])
    return sparse.csr_matrix((signs, (rows, cols)), shape=(dim, dim))


@dataclass
class FockSpace:
    """Operator family over the occupation basis of a ModeSpec.

    b-modes occupy Jordan-Wigner slots 0..M_b-1, c-modes the rest
    (momentum-major ordering fixed so matrices are reproducible).
    """

    spec: ModeSpec
    b: list = field(default_factory=list)
    b_dag: list = field(default_factory=list)
    c: list = field(default_factory=list)
    c_dag: list = field(default_factory=list)

    def __post_init__(self):
        n = self.spec.total_modes
        for k in range(self.spec.m_b):
            op = _jw_annihilator(k, n)
            self.b.append(op)
            self.b_dag.append(op.conj().T.tocsr())
        for k in range(self.spec.m_c):
            op = _jw_annihilator(self.spec.m_b + k, n)
            self.c.append(op)
            self.c_dag.append(op.conj().T.tocsr())

    # positron operators are the c operators relabeled: d† = c, d = c†
    @property
    def d(self) -> list:
        return self.c_dag

    @property
    def d_dag(self) -> list:
        return self.c

    @property
    def dimension(self) -> int:
        return self.spec.dimension

    def identity(self) -> sparse.csr_matrix:
        return sparse.identity(self.dimension, dtype=complex, format="csr")

    @property
    def vacuum_index(self) -> int:
        """Basis index of the physical vacuum: b-slots empty, c-slots filled."""
        idx = 0
        for k in range(self.spec.m_c):
            idx |= 1 << (self.spec.m_b + k)
        return idx

    def vacuum(self) -> np.ndarray:
        vec = np.zeros(self.dimension, dtype=complex)
        vec[self.vacuum_index] = 1.0
        return vec

    def bare_vacuum(self) -> np.ndarray:
        """The all-empty state (no positive or negative energy modes occupied)."""
        vec = np.zeros(self.dimension, dtype=complex)
        vec[0] = 1.0
        return vec


def build_space(spec: ModeSpec) -> FockSpace:
    return FockSpace(spec)


def anticommutator(x: sparse.spmatrix, y: sparse.spmatrix) -> sparse.csr_matrix:
    return (x @ y + y @ x).tocsr()


def hamiltonian_naive(space: FockSpace) -> sparse.csr_matrix:
    """H = sum E (b†b - c†c): diagonal, unbounded below as modes are added."""
    spec = space.spec
    h = sparse.csr_matrix((space.dimension, space.dimension), dtype=complex)
    for k, e_k in enumerate(spec.b_energies):
        h = h + e_k * (space.b_dag[k] @ space.b[k])
    for k, e_k in enumerate(spec.c_energies):
        h = h - e_k * (space.c_dag[k] @ space.c[k])
    return h.tocsr()


def hamiltonian_normal(space: FockSpace) -> sparse.csr_matrix:
    """H = sum E (b†b + d†d): positive semidefinite, vacuum eigenvalue zero.

    Built directly from the d-operators, the revised-theory route.
    """
    spec = space.spec
    h = sparse.csr_matrix((space.dimension, space.dimension), dtype=complex)
    for k, e_k in enumerate(spec.b_energies):
        h = h + e_k * (space.b_dag[k] @ space.b[k])
    for k, e_k in enumerate(spec.c_energies):
        h = h + e_k * (space.d_dag[k] @ space.d[k])
    return h.tocsr()


def hamiltonian_normal_via_swap(space: FockSpace) -> sparse.csr_matrix:
    """Normal-ordered Hamiltonian by the original route: swap then reorder.

    Start from the naive sum, rewrite -E c†c as -E d d† = E d†d - E, and drop
    the constant: exactly hamiltonian_naive + (sum_c E) I.
    """
    spec = space.spec
    shift = sum(spec.c_energies)
    return (hamiltonian_naive(space) + shift * space.identity()).tocsr()


def charge_naive(space: FockSpace, e: float = 1.0) -> sparse.csr_matrix:
    """Q = -e sum (b†b + c†c): every occupied mode counts as electron charge."""
    spec = space.spec
    q = sparse.csr_matrix((space.dimension, space.dimension), dtype=complex)
    for k in range(spec.m_b):
        q = q - e * (space.b_dag[k] @ space.b[k])
    for k in range(spec.m_c):
        q = q - e * (space.c_dag[k] @ space.c[k])
    return q.tocsr()


def charge_normal(space: FockSpace, e: float = 1.0) -> sparse.csr_matrix:
    """Q = sum (-e b†b + e d†d): electrons negative, positrons positive."""
    spec = space.spec
    q = sparse.csr_matrix((space.dimension, space.dimension), dtype=complex)
    for k in range(spec.m_b):
        q = q - e * (space.b_dag[k] @ space.b[k])
    for k in range(spec.m_c):
        q = q + e * (space.d_dag[k] @ space.d[k])
    return q.tocsr()


def diagonal_spectrum(op: sparse.spmatrix) -> np.ndarray:
    """Sorted eigenvalues of a diagonal occupation-basis operator."""
    diag = op.diagonal()
    off = op - sparse.diags(diag)
    if off.nnz and np.max(np.abs(off.data)) > 0:
        raise ValueError("operator is not diagonal in the occupation basis")
    return np.sort(diag.real)


def field_operator_check(spec_momenta, m: float, c: float, hbar: float, box: float,
                         positions):
    """Equal-time anticommutators of the truncated field operator.

    spec_momenta: list of 3-momentum vectors, closed under negation; each
    carries both spins and both (b, c) families.  positions: list of points
    x at which the operators are assembled.  Returns a report dict with the
    worst deviations of { psi_i(x), psi_j†(y) } from the truncated delta
    delta_ij L^-3 sum_n e^{i p_n (x-y)/hbar} and of the dagger-free pairs
    from zero, plus the spinor completeness defect underlying the delta.
    """
    from .spinors import basis_spinors, completeness_defect

    momenta = [np.asarray(p, dtype=float) for p in spec_momenta]
    for p in momenta:
        if not any(np.allclose(q, -p) for q in momenta):
            raise ValueError("momentum set must be closed under negation")
    n_mom = len(momenta)
    n_modes = 4 * n_mom  # 2 spins x (b, c) per momentum
    if n_modes > MAX_MODES:
        raise ValueError(f"Fock dimension cap exceeded: {n_modes} modes > {MAX_MODES}")
    spec = ModeSpec(
        b_energies=tuple(float(np.sqrt(m**2 * c**4 + p @ p * c * c)) for p in momenta for _ in range(2)),
        c_energies=tuple(float(np.sqrt(m**2 * c**4 + p @ p * c * c)) for p in momenta for _ in range(2)),
    )
    space = FockSpace(spec)

    bases = [basis_spinors(p, m, c) for p in momenta]
    vol = box**3

    def field_op(i: int, x) -> sparse.csr_matrix:
        op = sparse.csr_matrix((space.dimension, space.dimension), dtype=complex)
        for mi, (p, sb) in enumerate(zip(momenta, bases)):
            phase = np.exp(1j * (p @ x) / hbar)
            w = 1.0 / np.sqrt(2.0 * sb.energy * vol)
            for s in range(2):
                op = op + (w * phase * sb.u[s][i]) * space.b[2 * mi + s]
                op = op + (w * np.conj(phase) * sb.v[s][i]) * space.c[2 * mi + s]
        return op.tocsr()

    completeness = max(completeness_defect(p, m, c) for p in momenta)
    worst_delta = 0.0
    worst_zero = 0.0
    ident = space.identity()
    for x in positions:
        ops_x = [field_op(i, np.asarray(x, dtype=float)) for i in range(4)]
        for y in positions:
            ops_y = [field_op(j, np.asarray(y, dtype=float)) for j in range(4)]
            delta_xy = sum(
                np.exp(1j * (p @ (np.asarray(x) - np.asarray(y))) / hbar) for p in momenta
            ) / vol
            for i in range(4):
                for j in range(4):
                    acomm = anticommutator(ops_x[i], ops_y[j].conj().T.tocsr())
                    expect = delta_xy if i == j else 0.0
                    worst_delta = max(worst_delta, abs(acomm - expect * ident).max())
                    acomm0 = anticommutator(ops_x[i], ops_y[j])
                    if acomm0.nnz:
                        worst_zero = max(worst_zero, np.max(np.abs(acomm0.data)))
    return {
        "completeness_defect": completeness,
        "delta_defect": float(worst_delta),
        "zero_defect": float(worst_zero),
        "dimension": space.dimension,
    }
