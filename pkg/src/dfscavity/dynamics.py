"""Propagators: exact matrix-exponential evolution and the closed-form
pair-exchange map.

Exact evolution goes through the eigendecomposition of the hermitian
generator (dimensions stay <= a few hundred here, so exactness beats speed);
the scaling-and-squaring route is kept as a cross-check in the tests.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hilbert import NORM_ATOL, Operator, StateVector
from .model import TWO_EXCITATION_CONFIGS, pair_partner


@dataclass(frozen=True)
class Propagator:
    unitary: Operator
    generator: Operator
    duration: float


def make_propagator(h: Operator, t: float) -> Propagator:
    """exp(-i h t) via eigendecomposition of the hermitian generator."""
    if not h.hermitian:
        raise ValueError("generator must be hermitian")
    w, v = np.linalg.eigh(h.matrix)
    u = (v * np.exp(-1j * w * t)) @ v.conj().T
    return Propagator(unitary=Operator(u), generator=h, duration=t)


def evolve_exact(h: Operator, psi: StateVector, t: float) -> StateVector:
    """exp(-i h t) |psi>; norm is preserved to the working tolerance."""
    if not h.hermitian:
        raise ValueError("generator must be hermitian")
    w, v = np.linalg.eigh(h.matrix)
    amps = v @ (np.exp(-1j * w * t) * (v.conj().T @ psi.amplitudes))
    out = StateVector(amps, psi.n_max)
    drift = abs(out.norm() - psi.norm())
    if drift > 100 * NORM_ATOL:
        raise RuntimeError(f"norm drift {drift:.2e} in exact evolution")
    return out


def evolve_times(h: Operator, psi: StateVector, times: np.ndarray) -> np.ndarray:
    """Amplitudes at many times, shape (len(times), dim); one eigh for all."""
    if not h.hermitian:
        raise ValueError("generator must be hermitian")
    w, v = np.linalg.eigh(h.matrix)
    coeffs = v.conj().T @ psi.amplitudes
    phases = np.exp(-1j * np.outer(np.asarray(times), w))
    return (phases * coeffs) @ v.T


def _two_excitation_support_ok(psi: StateVector, atol: float = 1e-12) -> bool:
    block = np.abs(psi.amplitudes.reshape(-1, psi.n_max + 1))
    outside = np.ones(block.shape[0], dtype=bool)
    outside[list(TWO_EXCITATION_CONFIGS)] = False
    return float(np.max(block[outside])) <= atol if outside.any() else True


def dfs_propagate(psi: StateVector, pulse_area: float) -> StateVector:
    """Closed-form evolution within the two-excitation manifold:

        |c> -> cos(area) |c> - i sin(area) |c_bar>

    for each of the six configurations c and its complement c_bar, applied in
    every Fock sector. Exactly unitary; errors if psi has support outside the
    six two-excitation configurations.
    """
    if not _two_excitation_support_ok(psi):
        raise ValueError("state has support outside the six two-excitation configurations")
    n_levels = psi.n_max + 1
    block = psi.amplitudes.reshape(-1, n_levels)
    out = np.zeros_like(block)
    c_area, s_area = np.cos(pulse_area), np.sin(pulse_area)
    for c in TWO_EXCITATION_CONFIGS:
        out[c] += c_area * block[c]
        out[pair_partner(c)] += -1j * s_area * block[c]
    return StateVector(out.reshape(-1), psi.n_max)
