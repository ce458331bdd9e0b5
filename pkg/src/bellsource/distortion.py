"""Exchange-coupled pair under local fields: exact evolution and post-control states.

The two-spin Hamiltonian is H = -J sigma1.sigma2 + B1 sigma1z + B2 sigma2z
(hbar = 1, energies and inverse times share units). Its field inhomogeneity
B- = B1 - B2 mixes the (|00>,|11>)-sector Bell states; the residual mixing
after a correction cycle is captured by the dimensionless product n*delta,
where delta = j - Q(j) is the gap between the interaction ratio
j = J / sqrt(B-^2 + 4 J^2) and its best rational approximation Q(j).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .source import SourceSpec, superpose_species
from .statevec import PureState, bell_state

__all__ = [
    "BestRational",
    "ControlKnob",
    "FieldParams",
    "HamiltonianMatrix",
    "RationalProvenance",
    "hamiltonian",
    "evolve",
    "j_parameter",
    "rational_approx",
    "small_mismatch_estimate",
    "controlled_psi1",
    "controlled_psi2",
    "controlled_emission",
]

_HERMITIAN_TOL = 1e-12
_PROVENANCE_TOL = 1e-15

_B00 = bell_state((0, 0)).amplitudes
_B01 = bell_state((0, 1)).amplitudes
_B10 = bell_state((1, 0)).amplitudes


@dataclass(frozen=True)
class FieldParams:
    """Exchange coupling J and local field strengths B1, B2 (energy units)."""

    J: float
    B1: float
    B2: float

    @property
    def b_minus(self) -> float:
        return self.B1 - self.B2


@dataclass(frozen=True, eq=False)
class HamiltonianMatrix:
    """4x4 Hermitian matrix, block-diagonal over {|00>,|11>} + {|01>,|10>}."""

    entries: np.ndarray

    def __post_init__(self) -> None:
        m = np.array(self.entries, dtype=complex)
        if m.shape != (4, 4):
            raise ValueError(f"Hamiltonian must be 4x4, got {m.shape}")
        if np.max(np.abs(m - m.conj().T)) > _HERMITIAN_TOL:
            raise ValueError("Hamiltonian is not Hermitian")
        cross = [(0, 1), (0, 2), (3, 1), (3, 2)]
        for i, j in cross:
            if abs(m[i, j]) > _HERMITIAN_TOL or abs(m[j, i]) > _HERMITIAN_TOL:
                raise ValueError("Hamiltonian mixes the {00,11} and {01,10} sectors")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)


def hamiltonian(fp: FieldParams) -> HamiltonianMatrix:
    """-J(XX + YY + ZZ) + B1 Z1 + B2 Z2 in the computational basis."""
    J, B1, B2 = fp.J, fp.B1, fp.B2
    m = np.array(
        [
            [-J + B1 + B2, 0.0, 0.0, 0.0],
            [0.0, J + B1 - B2, -2.0 * J, 0.0],
            [0.0, -2.0 * J, J - B1 + B2, 0.0],
            [0.0, 0.0, 0.0, -J - B1 - B2],
        ],
        dtype=complex,
    )
    return HamiltonianMatrix(m)


def evolve(state: PureState, fp: FieldParams, t: float) -> PureState:
    """exp(-iHt) applied exactly through the two 2x2 sector solutions.

    The {|00>,|11>} sector is diagonal (pure phases); the {|01>,|10>} sector
    is J*I + B-*Z - 2J*X, whose exponential is a rotation about an axis in
    the X-Z plane with frequency omega = sqrt(B-^2 + 4J^2).
    """
    if state.num_qubits != 2:
        raise ValueError(f"evolution is defined on 2-qubit states, got {state.num_qubits}")
    J, bm = fp.J, fp.b_minus
    a0, a1, a2, a3 = state.amplitudes
    out = np.empty(4, dtype=complex)
    out[0] = cmath.exp(-1j * (-J + fp.B1 + fp.B2) * t) * a0
    out[3] = cmath.exp(-1j * (-J - fp.B1 - fp.B2) * t) * a3
    omega = math.hypot(bm, 2.0 * J)
    if omega == 0.0:
        out[1], out[2] = a1, a2
    else:
        phase = cmath.exp(-1j * J * t)
        c = math.cos(omega * t)
        s = math.sin(omega * t) / omega
        out[1] = phase * ((c - 1j * s * bm) * a1 + 1j * s * 2.0 * J * a2)
        out[2] = phase * (1j * s * 2.0 * J * a1 + (c + 1j * s * bm) * a2)
    return PureState(out)


def j_parameter(fp: FieldParams) -> float:
    """Interaction ratio J / sqrt(B-^2 + 4 J^2), in (-1/2, 1/2]."""
    denom = math.hypot(fp.b_minus, 2.0 * fp.J)
    if denom == 0.0:
        raise ValueError("j is undefined for J = 0 and B1 = B2 (zero denominator)")
    return fp.J / denom


class BestRational(NamedTuple):
    num: int
    den: int
    delta: float


def rational_approx(j: float, max_den: int) -> BestRational:
    """Best rational approximation num/den to j with den <= max_den.

    Continued-fraction convergent semantics (no fraction with denominator
    at most max_den lies strictly closer); delta = j - num/den.
    """
    if max_den < 1:
        raise ValueError(f"max_den must be >= 1, got {max_den}")
    if abs(j) > 0.5:
        raise ValueError(f"|j| <= 1/2 violated: got {j!r}")
    best = Fraction(j).limit_denominator(max_den)
    delta = float(Fraction(j) - best)
    return BestRational(best.numerator, best.denominator, delta)


def small_mismatch_estimate(fp: FieldParams) -> float:
    """Leading-order mismatch estimate -B-^2 / (4 J^2) for weak inhomogeneity.

    This is the coarse quoted estimate only; the exact small-field expansion
    of j - 1/2 is -B-^2/(16 J^2) + O(B-^4), a factor 4 smaller. Use
    j_parameter/rational_approx for exact values.
    """
    if fp.J == 0.0:
        raise ValueError("mismatch estimate is undefined for J = 0")
    return -(fp.b_minus**2) / (4.0 * fp.J**2)


class RationalProvenance(NamedTuple):
    j: float
    q_num: int
    q_den: int


@dataclass(frozen=True)
class ControlKnob:
    """Correction-cycle count n and residual mismatch delta.

    All post-control formulas depend on n and delta only through the
    product n*delta. The optional provenance records the (j, Q) pair the
    mismatch was derived from.
    """

    n: int
    delta: float
    provenance: RationalProvenance | None = None
    ndelta: float = field(init=False)

    def __post_init__(self) -> None:
        if self.n < 0 or self.n != int(self.n):
            raise ValueError(f"n must be a non-negative integer, got {self.n!r}")
        if abs(self.delta) > 0.5:
            raise ValueError(f"|delta| <= 1/2 violated: got {self.delta!r}")
        if self.provenance is not None:
            j, num, den = self.provenance
            if den < 1:
                raise ValueError(f"provenance denominator must be >= 1, got {den}")
            implied = float(Fraction(j) - Fraction(num, den))
            if abs(self.delta - implied) > _PROVENANCE_TOL:
                raise ValueError(
                    f"delta {self.delta!r} disagrees with provenance j - Q(j) = {implied!r}"
                )
        object.__setattr__(self, "ndelta", self.n * self.delta)

    @classmethod
    def from_field_params(cls, fp: FieldParams, max_den: int, n: int = 1) -> "ControlKnob":
        """Derive delta from the interaction ratio and its rational approximation."""
        j = j_parameter(fp)
        num, den, delta = rational_approx(j, max_den)
        return cls(n=n, delta=delta, provenance=RationalProvenance(j, num, den))


def controlled_psi1(knob: ControlKnob) -> PureState:
    """Post-control first species.

    (1 + i e^{ix} sin x) b00 - i e^{ix} sin x b10 with x = 2 pi n delta;
    algebraically e^{ix}(cos x b00 - i sin x b10), so the norm is exactly 1.
    """
    x = 2.0 * math.pi * knob.ndelta
    phase = cmath.exp(1j * x)
    amps = (1.0 + 1j * phase * math.sin(x)) * _B00 - 1j * phase * math.sin(x) * _B10
    return PureState(amps)


def controlled_psi2(theta: float, knob: ControlKnob) -> PureState:
    """Post-control second species at angle theta.

    sin(theta) b01 - e^{ix} cos x cos(theta) b10 + i e^{ix} sin x cos(theta) b00;
    unit norm, orthogonal to controlled_psi1 at the same knob.
    """
    x = 2.0 * math.pi * knob.ndelta
    phase = cmath.exp(1j * x)
    amps = (
        math.sin(theta) * _B01
        - phase * math.cos(x) * math.cos(theta) * _B10
        + 1j * phase * math.sin(x) * math.cos(theta) * _B00
    )
    return PureState(amps)


def controlled_emission(spec: SourceSpec, knob: ControlKnob) -> tuple[PureState, float]:
    """Post-control source output and the raw squared norm of its superposition.

    The control map is unitary on the species span, so the raw squared
    norm equals the undistorted value 1 + sin(gamma)^2 * 2 p1 p2 * sin(2 theta1)
    for every knob.
    """
    return superpose_species(
        spec,
        controlled_psi1(knob),
        controlled_psi2(spec.theta1, knob),
        controlled_psi2(spec.theta2, knob),
    )
