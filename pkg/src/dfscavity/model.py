"""Hamiltonians of the four-atom scheme and a second-order perturbation engine.

The full model is

    H = H0 + Hint,
    H0   = omega_a * sum_i sigma_iz + omega * adag a,
    Hint = G * sum_{i<j} (a^2 sigma_i^+ sigma_j^+ + adag^2 sigma_i^- sigma_j^-),

with the pair sum over the six unordered atom pairs: the ordered reading
would double every matrix element and contradict the closed-form coupling
(4n+2)G^2/delta, which the unordered form reproduces exactly.

The effective model at fixed photon number n keeps the six double-flip
products that exchange excitation between an atom pair and its complement
(egeg<->gege, egge<->geeg, eegg<->ggee), each with coefficient
Omega(n) = (4n+2)G^2/delta, plus an optional photon-number-dependent
diagonal (Stark) term.

`derive_second_order` is the independent oracle for all of the above: it
sums over every intermediate outside a degenerate manifold,

    Heff[m, m'] = sum_{k not in M} <m|Hint|k><k|Hint|m'> / (E_k - E_m),

with the denominator sign fixed so the egeg<->gege element comes out as
+(4n+2)G^2/delta. Exhaustive path counting also produces exchange elements
(e.g. egeg<->eegg) and diagonal entries of the same size Omega(n); those are
reported, never suppressed (see validate.compare_effective_models).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

from .hilbert import (
    HERMITIAN_ATOL,
    N_ATOMIC_CONFIGS,
    Operator,
    SystemParams,
    atomic_index,
    basis_index,
    cavity_ladder,
    config_labels,
    excitation_number,
    single_atom_operator,
)

# the six two-excitation atomic configurations, in a fixed label order
TWO_EXCITATION_LABELS = ("egeg", "egge", "geeg", "gege", "eegg", "ggee")
TWO_EXCITATION_CONFIGS = tuple(atomic_index(s) for s in TWO_EXCITATION_LABELS)


def pair_partner(config) -> int:
    """Complementary configuration: every atom flipped (egeg <-> gege etc.)."""
    return (~atomic_index(config)) & (N_ATOMIC_CONFIGS - 1)


@dataclass(frozen=True)
class Manifold:
    """A degenerate set of composite basis indices with its reference energy."""

    members: tuple[int, ...]
    energy: float


@dataclass(frozen=True)
class EffectiveCoupling:
    """Pair-exchange rate Omega for a given Fock sector."""

    omega: float
    n: int
    provenance: str  # "closed-form" | "pt-derived"


def effective_coupling(n: int, params: SystemParams) -> EffectiveCoupling:
    """Closed-form Omega(n) = (4n+2) G^2 / delta."""
    if n < 0:
        raise ValueError(f"Fock sector must be >= 0, got {n}")
    omega = (4 * n + 2) * params.G**2 / params.delta
    return EffectiveCoupling(omega=omega, n=n, provenance="closed-form")


def build_h0(params: SystemParams) -> Operator:
    """Bare Hamiltonian: diagonal with E(config, n) = omega_a*m_z + omega*n,
    m_z = (#e - #g)/2."""
    n_levels = params.n_max + 1
    diag = np.empty(N_ATOMIC_CONFIGS * n_levels, dtype=complex)
    for a in range(N_ATOMIC_CONFIGS):
        m_z = excitation_number(a) - 2  # (#e - #g)/2 with four atoms
        for n in range(n_levels):
            diag[a * n_levels + n] = params.omega_a * m_z + params.omega * n
    return Operator(np.diag(diag))


def build_hint(params: SystemParams) -> Operator:
    """Interaction term over the six unordered atom pairs."""
    n_max = params.n_max
    a2 = cavity_ladder("a", 2, n_max).matrix
    adag2 = cavity_ladder("a_dag", 2, n_max).matrix
    h = np.zeros((params.dim, params.dim), dtype=complex)
    for i, j in combinations(range(1, 5), 2):
        raise_ij = single_atom_operator(i, "+", n_max).matrix @ single_atom_operator(j, "+", n_max).matrix
        lower_ij = single_atom_operator(i, "-", n_max).matrix @ single_atom_operator(j, "-", n_max).matrix
        h += params.G * (a2 @ raise_ij + adag2 @ lower_ij)
    return Operator(h)


def build_full_hamiltonian(params: SystemParams) -> Operator:
    return Operator(build_h0(params).matrix + build_hint(params).matrix)


def stark_diagonal(params: SystemParams, n: int) -> np.ndarray:
    """Second-order diagonal shift of each atomic configuration at photon
    number n: [C(n_e,2)(n+1)(n+2) - C(4-n_e,2) n(n-1)] G^2/delta."""
    shifts = np.empty(N_ATOMIC_CONFIGS, dtype=float)
    for a in range(N_ATOMIC_CONFIGS):
        n_e = excitation_number(a)
        shifts[a] = (comb(n_e, 2) * (n + 1) * (n + 2) - comb(4 - n_e, 2) * n * (n - 1)) * params.G**2 / params.delta
    return shifts


def build_h_eff(params: SystemParams, n: int = 0, include_stark: bool = False) -> Operator:
    """Effective Hamiltonian on the 16-dim atomic space (cavity factored out).

    Contains exactly the six double-flip terms, each with coefficient
    Omega(n); with include_stark, adds the second-order diagonal of
    `stark_diagonal` (the photon-number-dependent shifts).
    """
    omega = effective_coupling(n, params).omega
    h = np.zeros((N_ATOMIC_CONFIGS, N_ATOMIC_CONFIGS), dtype=complex)
    for c in TWO_EXCITATION_CONFIGS:
        h[pair_partner(c), c] = omega  # each double-flip product moves c to its complement
    if include_stark:
        h += np.diag(stark_diagonal(params, n)).astype(complex)
    return Operator(h)


def two_excitation_manifold(params: SystemParams, n: int) -> Manifold:
    """The six degenerate two-excitation states at fixed Fock level n."""
    if not 0 <= n <= params.n_max:
        raise ValueError(f"Fock level n={n} outside 0..{params.n_max}")
    members = tuple(basis_index(c, n, params.n_max) for c in TWO_EXCITATION_CONFIGS)
    h0 = build_h0(params)
    energies = np.real(np.diag(h0.matrix))[list(members)]
    return Manifold(members=members, energy=float(energies[0]))


def derive_second_order(h0: Operator, hint: Operator, manifold: Manifold) -> Operator:
    """Second-order effective operator on a degenerate manifold.

    Sums over ALL intermediates outside the manifold (it is the independent
    oracle; cherry-picking intermediates would make validation circular).
    Diagonal (Stark) entries are included.

    Raises ValueError if h0 is not diagonal, the manifold is not degenerate,
    or hint has matrix elements inside the manifold.
    """
    h0m = h0.matrix
    offdiag = h0m - np.diag(np.diag(h0m))
    if np.max(np.abs(offdiag)) > HERMITIAN_ATOL * max(1.0, np.max(np.abs(h0m))):
        raise ValueError("h0 must be diagonal in the computational basis")
    energies = np.real(np.diag(h0m))
    members = list(manifold.members)
    e_m = energies[members]
    tol = 1e-9 * max(1.0, abs(manifold.energy))
    if np.max(np.abs(e_m - manifold.energy)) > tol:
        raise ValueError(
            f"manifold is not degenerate: energies {e_m} vs reference {manifold.energy}"
        )
    v = hint.matrix
    intra = v[np.ix_(members, members)]
    if np.max(np.abs(intra)) > HERMITIAN_ATOL * max(1.0, np.max(np.abs(v))):
        raise ValueError("hint has nonzero matrix elements inside the manifold")
    outside = np.setdiff1d(np.arange(h0.dim), members)
    v_mo = v[np.ix_(members, outside)]
    v_om = v[np.ix_(outside, members)]
    denom = energies[outside] - manifold.energy
    coupled = np.abs(v_om).max(axis=1) > 0
    if np.any(np.abs(denom[coupled]) == 0):
        raise ValueError("intermediate state degenerate with the manifold")
    weights = np.zeros_like(denom)
    weights[coupled] = 1.0 / denom[coupled]
    heff = v_mo @ (weights[:, None] * v_om)
    return Operator(heff)


def derived_coupling(params: SystemParams, n: int) -> EffectiveCoupling:
    """Omega obtained from the PT engine's egeg<->gege element (oracle route)."""
    manifold = two_excitation_manifold(params, n)
    heff = derive_second_order(build_h0(params), build_hint(params), manifold)
    i = TWO_EXCITATION_LABELS.index("egeg")
    j = TWO_EXCITATION_LABELS.index("gege")
    return EffectiveCoupling(omega=float(np.real(heff.matrix[i, j])), n=n, provenance="pt-derived")


def manifold_labels(manifold: Manifold, n_max: int) -> tuple[str, ...]:
    """Atomic labels of the manifold members (for reports)."""
    return tuple(config_labels(m // (n_max + 1)) for m in manifold.members)
