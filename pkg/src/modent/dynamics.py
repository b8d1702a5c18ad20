"""Excitation-exchange Hamiltonians, time evolution, and the controlled mixing unitary.

Units: hbar = 1 and the default coupling strength is J = 1, so all times are
expressed in units of 1/J.  Propagators are built by eigendecomposition of the
Hermitian Hamiltonian, which is unitary to rounding at the dimensions used
here (<= 4096).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .hilbert import (
    BosonicMode,
    FermionicMode,
    LinearOp,
    PureState,
    SubsystemKind,
    SystemLayout,
    TwoLevel,
    embed_operator,
)

# Raising/lowering operators of a two-level particle, basis (g, e): s+|g> = |e>.
SIGMA_PLUS = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)
SIGMA_MINUS = SIGMA_PLUS.conj().T


def annihilation(kind: SubsystemKind) -> np.ndarray:
    """Annihilation matrix of a mode: sqrt(n) ladder for bosons, hard-core for fermions."""
    if isinstance(kind, BosonicMode):
        return np.diag(np.sqrt(np.arange(1, kind.dim, dtype=float)), k=1).astype(complex)
    if isinstance(kind, FermionicMode):
        return np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
    raise ValueError(f"no annihilation operator for subsystem kind {kind!r}")


def number_operator(kind: SubsystemKind) -> np.ndarray:
    a = annihilation(kind)
    return a.conj().T @ a


@dataclass(frozen=True)
class CouplingSpec:
    """A two-level particle exchanging excitations with one or more field modes."""

    qubit_label: str
    mode_labels: tuple
    strength_J: float = 1.0

    def __post_init__(self):
        modes = tuple(str(m) for m in self.mode_labels)
        if not modes:
            raise ValueError("coupling needs at least one mode")
        labels = (self.qubit_label,) + modes
        if len(set(labels)) != len(labels):
            raise ValueError(f"coupling labels must be distinct, got {labels}")
        if not self.strength_J > 0:
            raise ValueError(f"coupling strength must be positive, got {self.strength_J}")
        object.__setattr__(self, "mode_labels", modes)


@dataclass(frozen=True)
class MixingAngle:
    """Rotation angle of the controlled mixing operation, in [0, pi]."""

    theta: float

    def __post_init__(self):
        if not 0.0 <= self.theta <= math.pi:
            raise ValueError(f"mixing angle must lie in [0, pi], got {self.theta}")


def _check_coupling_kinds(layout: SystemLayout, spec: CouplingSpec):
    if not isinstance(layout.kind_of(spec.qubit_label), TwoLevel):
        raise ValueError(f"subsystem {spec.qubit_label!r} must be TwoLevel")
    for m in spec.mode_labels:
        if not isinstance(layout.kind_of(m), (BosonicMode, FermionicMode)):
            raise ValueError(f"subsystem {m!r} must be a bosonic or fermionic mode")


def collective_jc_hamiltonian(layout: SystemLayout, spec: CouplingSpec) -> LinearOp:
    """J * sum_k (i s+ a_k - i s- a_k^dag) embedded in the layout.

    Hermitian by construction; conserves the total excitation number
    (qubit excitation plus mode occupations).
    """
    _check_coupling_kinds(layout, spec)
    sp = embed_operator(layout, SIGMA_PLUS, [spec.qubit_label]).matrix
    h = np.zeros((layout.dim, layout.dim), dtype=complex)
    for m in spec.mode_labels:
        a = embed_operator(layout, annihilation(layout.kind_of(m)), [m]).matrix
        h += 1j * (sp @ a)
    h = spec.strength_J * (h + h.conj().T)
    return LinearOp(layout, h)


def jc_hamiltonian(layout: SystemLayout, spec: CouplingSpec) -> LinearOp:
    """Single-mode excitation-exchange Hamiltonian J (i s+ a - i s- a^dag)."""
    if len(spec.mode_labels) != 1:
        raise ValueError("jc_hamiltonian couples exactly one mode; "
                         "use collective_jc_hamiltonian for several")
    return collective_jc_hamiltonian(layout, spec)


def propagator(hamiltonian: LinearOp, t: float) -> LinearOp:
    """exp(-i H t) via Hermitian eigendecomposition."""
    if not hamiltonian.is_hermitian():
        raise ValueError("propagator requires a Hermitian Hamiltonian")
    w, v = np.linalg.eigh(hamiltonian.matrix)
    u = (v * np.exp(-1j * w * float(t))) @ v.conj().T
    return LinearOp(hamiltonian.layout, u)


def evolve(state: PureState, hamiltonian: LinearOp, t: float) -> PureState:
    """exp(-i H t) |state>; norm is preserved to rounding."""
    if state.layout.dims != hamiltonian.layout.dims:
        raise ValueError("state and Hamiltonian dimensions do not match")
    return propagator(hamiltonian, t).apply_to(state)


def mixing_subspace_indices(layout: SystemLayout, qubit_label: str,
                            flying_label: str, ancilla_label: str):
    """Global index pairs of the two-dimensional subspaces mixed by U(theta).

    Returns ``(i1, i2)`` arrays: for every configuration of the remaining
    subsystems, ``i1`` is the basis index with (qubit=e, flying=1, ancilla=0)
    and ``i2`` the one with (qubit=e, flying=0, ancilla=1).
    """
    q = layout.position(qubit_label)
    f = layout.position(flying_label)
    a = layout.position(ancilla_label)
    if len({q, f, a}) != 3:
        raise ValueError("qubit, flying and ancilla labels must be distinct")
    if not isinstance(layout.kind_of(qubit_label), TwoLevel):
        raise ValueError(f"subsystem {qubit_label!r} must be TwoLevel")
    for lab in (flying_label, ancilla_label):
        if not isinstance(layout.kind_of(lab), FermionicMode):
            raise ValueError(f"subsystem {lab!r} must be a FermionicMode")
    strides = layout.strides()
    dims = layout.dims
    base = np.zeros(1, dtype=np.int64)
    for pos in range(len(dims)):
        if pos in (q, f, a):
            continue
        base = (base[:, None] + (np.arange(dims[pos]) * strides[pos])[None, :]).ravel()
    i1 = base + strides[q] + strides[f]
    i2 = base + strides[q] + strides[a]
    return i1, i2


def controlled_mixing_unitary(layout: SystemLayout, qubit_label: str, flying_label: str,
                              ancilla_label: str, angle) -> LinearOp:
    """Rotation [[cos, -sin], [sin, cos]] on the ordered subspace
    {|e,1,0>, |e,0,1>} of (qubit, flying mode, ancilla mode), identity elsewhere.
    """
    theta = angle.theta if isinstance(angle, MixingAngle) else float(angle)
    MixingAngle(theta)  # range check
    i1, i2 = mixing_subspace_indices(layout, qubit_label, flying_label, ancilla_label)
    u = np.eye(layout.dim, dtype=complex)
    c, s = math.cos(theta), math.sin(theta)
    u[i1, i1] = c
    u[i2, i2] = c
    u[i1, i2] = -s
    u[i2, i1] = s
    return LinearOp(layout, u)


def apply_mixing(amplitudes: np.ndarray, i1: np.ndarray, i2: np.ndarray,
                 theta: float) -> np.ndarray:
    """Apply the mixing rotation in place on an amplitude vector (fast path)."""
    c, s = math.cos(theta), math.sin(theta)
    v1 = amplitudes[i1].copy()
    v2 = amplitudes[i2]
    amplitudes[i1] = c * v1 - s * v2
    amplitudes[i2] = s * v1 + c * v2
    return amplitudes
