"""Finite Grassmann algebra with conjugated generator pairs.

Generators alpha_0..alpha_{n-1} and their conjugates alpha*_0..alpha*_{n-1}
all anticommute; elements are finitely supported maps from generator subsets
(bitmasks, alpha_i at bit i and alpha*_i at bit n+i) to complex coefficients,
stored with the generators of each monomial in increasing bit order.  Signs
follow transposition parity, so the product machinery itself implements the
alpha alpha* = -alpha* alpha rewrite rule.

Field values lift one-to-one: psi_G = psi_c * alpha(site, component), and the
multiply-by-field / left-functional-derivative pair realizes the fermionic
anticommutators exactly.  No value is assigned to alpha*_i alpha_i (its
square is zero, but the product itself stays an unevaluated monomial).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MAX_GENERATORS = 48


@dataclass(frozen=True)
class GrassmannAlgebra:
    """n conjugated generator pairs: 2n anticommuting generators."""

    n_pairs: int

    def __post_init__(self):
        if self.n_pairs < 1 or 2 * self.n_pairs > MAX_GENERATORS:
            raise ValueError(
                f"need 1 <= pairs <= {MAX_GENERATORS // 2}, got {self.n_pairs}"
            )

    @property
    def n_generators(self) -> int:
        return 2 * self.n_pairs

    def generator_bit(self, i: int, conjugated: bool = False) -> int:
        if not 0 <= i < self.n_pairs:
            raise ValueError(f"generator index {i} out of range")
        return i + (self.n_pairs if conjugated else 0)

    def alpha(self, i: int) -> "GrassmannElement":
        return GrassmannElement(self, {1 << self.generator_bit(i): 1.0 + 0.0j})

    def alpha_star(self, i: int) -> "GrassmannElement":
        return GrassmannElement(self, {1 << self.generator_bit(i, True): 1.0 + 0.0j})

    def scalar(self, value: complex) -> "GrassmannElement":
        return GrassmannElement(self, {0: complex(value)} if value != 0 else {})

    def zero(self) -> "GrassmannElement":
        return GrassmannElement(self, {})


def _bits(mask: int):
    out = []
    bit = 0
    while mask:
        if mask & 1:
            out.append(bit)
        mask >>= 1
        bit += 1
    return out


def _merge_sign(mask_a: int, mask_b: int) -> int:
    """Parity sign for concatenating two increasing monomials and resorting.

    Counts pairs (i in a, j in b) with i > j: each is one transposition.
    """
    sign = 1
    for j in _bits(mask_b):
        higher = mask_a >> (j + 1)
        if higher.bit_count() & 1:
            sign = -sign
    return sign


@dataclass
class GrassmannElement:
    """Sparse Grassmann number: {generator-subset bitmask: coefficient}."""

    algebra: GrassmannAlgebra
    terms: dict

    def _clean(self) -> "GrassmannElement":
        self.terms = {m: c for m, c in self.terms.items() if c != 0}
        return self

    def __add__(self, other: "GrassmannElement") -> "GrassmannElement":
        if self.algebra != other.algebra:
            raise ValueError("elements belong to different algebras")
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return GrassmannElement(self.algebra, out)._clean()

    def __sub__(self, other: "GrassmannElement") -> "GrassmannElement":
        return self + (-1.0) * other

    def __rmul__(self, scalar: complex) -> "GrassmannElement":
        return GrassmannElement(
            self.algebra, {m: scalar * c for m, c in self.terms.items()}
        )._clean()

    def __mul__(self, other):
        if isinstance(other, GrassmannElement):
            return multiply(self, other)
        return GrassmannElement(
            self.algebra, {m: c * other for m, c in self.terms.items()}
        )._clean()

    def __eq__(self, other) -> bool:
        if not isinstance(other, GrassmannElement):
            return NotImplemented
        return self.algebra == other.algebra and self._clean().terms == other._clean().terms

    def is_zero(self) -> bool:
        return not self._clean().terms

    def degrees(self):
        return sorted({m.bit_count() for m in self.terms})

    def max_abs(self) -> float:
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def coefficient(self, mask: int) -> complex:
        return self.terms.get(mask, 0.0 + 0.0j)


def multiply(a: GrassmannElement, b: GrassmannElement) -> GrassmannElement:
    """Bilinear associative product; monomials with a repeated generator vanish."""
    if a.algebra != b.algebra:
        raise ValueError("elements belong to different algebras")
    out: dict = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            if ma & mb:
                continue
            sign = _merge_sign(ma, mb)
            m = ma | mb
            out[m] = out.get(m, 0) + sign * ca * cb
    return GrassmannElement(a.algebra, out)._clean()


def conjugate(a: GrassmannElement) -> GrassmannElement:
    """Star map: alpha_i <-> alpha*_i, coefficients conjugated, order reversed."""
    n = a.algebra.n_pairs
    out: dict = {}
    for mask, coeff in a.terms.items():
        bits = _bits(mask)
        swapped = [(b + n) if b < n else (b - n) for b in reversed(bits)]
        # parity of the permutation sorting the reversed star-swapped sequence
        sign = 1
        seq = list(swapped)
        for i in range(len(seq)):
            for j in range(i + 1, len(seq)):
                if seq[i] > seq[j]:
                    sign = -sign
        new_mask = 0
        for b in swapped:
            new_mask |= 1 << b
        out[new_mask] = out.get(new_mask, 0) + sign * np.conj(coeff)
    return GrassmannElement(a.algebra, out)._clean()


def functional_derivative(a: GrassmannElement, bit: int) -> GrassmannElement:
    """Left derivative with respect to the generator at a given bit position.

    Removes the generator from each monomial containing it, with the sign of
    moving it to the front; kills monomials without it.  Satisfies
    {d_k, alpha_k .} = 1 and {d_k, alpha_j .} = 0 for j != k, exactly.
    """
    out: dict = {}
    sel = 1 << bit
    for mask, coeff in a.terms.items():
        if not mask & sel:
            continue
        before = mask & (sel - 1)
        sign = -1 if before.bit_count() & 1 else 1
        new_mask = mask & ~sel
        out[new_mask] = out.get(new_mask, 0) + sign * coeff
    return GrassmannElement(a.algebra, out)._clean()


# -- lifting complex field configurations -----------------------------------

def pair_index(site: int, component: int, n_components: int = 4) -> int:
    """Generator-pair index for one (site, spinor component) slot."""
    return site * n_components + component


def lift_field(psi_values: np.ndarray, algebra: GrassmannAlgebra):
    """Lift complex field values (n_sites, k) to Grassmann-valued components.

    psi_G[site][i] = psi_values[site, i] * alpha(site, i); one generator pair
    per slot, so 4 * n_sites pairs for a Dirac field.
    """
    psi_values = np.asarray(psi_values)
    n_sites, n_comp = psi_values.shape
    if n_sites * n_comp != algebra.n_pairs:
        raise ValueError(
            f"field needs {n_sites * n_comp} generator pairs, algebra has {algebra.n_pairs}"
        )
    return [
        [psi_values[x, i] * algebra.alpha(pair_index(x, i, n_comp)) for i in range(n_comp)]
        for x in range(n_sites)
    ]


def unlift_field(lifted, algebra: GrassmannAlgebra) -> np.ndarray:
    """Inverse of lift_field: read the alpha coefficient of each component."""
    n_sites = len(lifted)
    n_comp = len(lifted[0])
    out = np.empty((n_sites, n_comp), dtype=complex)
    for x in range(n_sites):
        for i in range(n_comp):
            mask = 1 << algebra.generator_bit(pair_index(x, i, n_comp))
            out[x, i] = lifted[x][i].coefficient(mask)
    return out


def grassmann_charge_density(psi_site: np.ndarray, site: int, algebra: GrassmannAlgebra,
                             e: float = 1.0) -> GrassmannElement:
    """-e sum_i psi_i* psi_i alpha*_i alpha_i at one site (degree-2, nilpotent)."""
    out = algebra.zero()
    for i, value in enumerate(np.asarray(psi_site)):
        pair = pair_index(site, i, len(psi_site))
        mono = multiply(algebra.alpha_star(pair), algebra.alpha(pair))
        out = out + (-e * np.conj(value) * value) * mono
    return out


def grassmann_energy(psi_plus: np.ndarray, psi_minus: np.ndarray,
                     dpsi_plus: np.ndarray, dpsi_minus: np.ndarray,
                     algebra: GrassmannAlgebra, hbar: float = 1.0,
                     form: str = "main") -> GrassmannElement:
    """Grassmann-valued energy over the lifted sites.

    main:      i hbar sum_{x,i} psi_i* dpsi_i/dt alpha*_i alpha_i  (full field)
    reordered: the negative-frequency square rewritten with the generators in
               the opposite order, -dpsi_-/dt psi_-* alpha_i alpha*_i; the two
               agree exactly once the alpha alpha* = -alpha* alpha rule is
               applied, which the product machinery does on construction.
    """
    if form not in ("main", "reordered"):
        raise ValueError(f"unknown energy form {form!r}")
    psi_plus = np.asarray(psi_plus)
    psi_minus = np.asarray(psi_minus)
    dpsi_plus = np.asarray(dpsi_plus)
    dpsi_minus = np.asarray(dpsi_minus)
    n_sites, n_comp = psi_plus.shape
    out = algebra.zero()
    for x in range(n_sites):
        for i in range(n_comp):
            pair = pair_index(x, i, n_comp)
            star_first = multiply(algebra.alpha_star(pair), algebra.alpha(pair))
            # one coefficient per frequency pair, shared by both forms, so the
            # forms differ only in the order of the generators they multiply
            terms = [
                1j * hbar * np.conj(psi_plus[x, i]) * dpsi_plus[x, i],
                1j * hbar * np.conj(psi_plus[x, i]) * dpsi_minus[x, i],
                1j * hbar * np.conj(psi_minus[x, i]) * dpsi_plus[x, i],
                1j * hbar * np.conj(psi_minus[x, i]) * dpsi_minus[x, i],
            ]
            if form == "main":
                for coeff in terms:
                    out = out + coeff * star_first
            else:
                plain_first = multiply(algebra.alpha(pair), algebra.alpha_star(pair))
                for coeff in terms[:3]:
                    out = out + coeff * star_first
                out = out + (-terms[3]) * plain_first
    return out


# -- field operators on the algebra ------------------------------------------

def multiply_by_field(psi_values: np.ndarray, site: int, component: int,
                      algebra: GrassmannAlgebra):
    """The operator Psi -> psi_G_i(x) Psi (left multiplication by the lifted value)."""
    n_comp = np.asarray(psi_values).shape[1]
    factor = psi_values[site, component] * algebra.alpha(pair_index(site, component, n_comp))

    def op(elem: GrassmannElement) -> GrassmannElement:
        return multiply(factor, elem)

    return op


def field_derivative(psi_values: np.ndarray, site: int, component: int,
                     algebra: GrassmannAlgebra):
    """The operator Psi -> d Psi / d psi_G_i(x), the adjoint slot of the pair.

    The field component is psi_c * alpha, so the derivative with respect to it
    is (1/psi_c) times the generator derivative; requires psi_c != 0 there.
    """
    value = np.asarray(psi_values)[site, component]
    if value == 0:
        raise ValueError("field derivative undefined where the lifted value vanishes")
    n_comp = np.asarray(psi_values).shape[1]
    bit = algebra.generator_bit(pair_index(site, component, n_comp))

    def op(elem: GrassmannElement) -> GrassmannElement:
        return (1.0 / value) * functional_derivative(elem, bit)

    return op


def field_pair_anticommutator(psi_values: np.ndarray, slot_mult, slot_deriv,
                              algebra: GrassmannAlgebra):
    """The operator { psi_hat_i(x), psi_hat_j†(y) } with exact scalar algebra.

    Both field operators factor into a scalar (the lifted value or its
    reciprocal) times a generator-level operator, so the anticommutator is
    (psi_i(x)/psi_j(y)) { mult_a, d_b }.  The generator part is exact sign
    bookkeeping and the scalar ratio is evaluated once (identically 1 on the
    diagonal slot), so the delta_ij delta_xy identity holds exactly.
    """
    psi_values = np.asarray(psi_values)
    n_comp = psi_values.shape[1]
    xa, ia = slot_mult
    yb, jb = slot_deriv
    value_b = psi_values[yb, jb]
    if value_b == 0:
        raise ValueError("field derivative undefined where the lifted value vanishes")
    ratio = 1.0 + 0.0j if slot_mult == slot_deriv else psi_values[xa, ia] / value_b
    bit_a = algebra.generator_bit(pair_index(xa, ia, n_comp))
    bit_b = algebra.generator_bit(pair_index(yb, jb, n_comp))
    gen_a = algebra.alpha(pair_index(xa, ia, n_comp))

    def op(elem: GrassmannElement) -> GrassmannElement:
        first = multiply(gen_a, functional_derivative(elem, bit_b))
        second = functional_derivative(multiply(gen_a, elem), bit_b)
        return ratio * (first + second)

    return op
