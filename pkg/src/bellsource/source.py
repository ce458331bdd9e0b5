"""Emission-source states: two entangled species and their weighted superposition.

The source emits a combination of a fixed maximally entangled pair and a
one-parameter family of entangled pairs; the mixing weights live on a unit
circle and the two family angles are complementary. The combined raw
superposition is generally *not* normalized (the two family members at
complementary angles overlap), so the builder returns both the physical
normalized state and the raw squared norm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .statevec import PureState, tensor

__all__ = [
    "ComponentStates",
    "DegenerateSourceError",
    "SourceSpec",
    "component_states",
    "psi1",
    "psi2",
    "superpose_species",
    "emitted_state",
]

_SPEC_TOL = 1e-9
_DEGENERATE_NORM = 1e-12


class DegenerateSourceError(ValueError):
    """The requested superposition cancels to (numerically) zero norm."""


@dataclass(frozen=True)
class SourceSpec:
    """Emission parameters: mixing angle gamma, species weights, species angles.

    Invariants checked on construction: p1^2 + p2^2 = 1 and
    theta1 + theta2 = pi/2 (both within 1e-9), gamma in [0, pi/2].
    The state amplitudes are alpha1 = cos(gamma), alpha2 = sin(gamma).
    """

    gamma: float
    p1: float
    p2: float
    theta1: float
    theta2: float

    def __post_init__(self) -> None:
        weight = self.p1**2 + self.p2**2
        if abs(weight - 1.0) > _SPEC_TOL:
            raise ValueError(f"p1^2 + p2^2 = 1 violated: got {weight!r}")
        angle_sum = self.theta1 + self.theta2
        if abs(angle_sum - math.pi / 2) > _SPEC_TOL:
            raise ValueError(f"theta1 + theta2 = pi/2 violated: got {angle_sum!r}")
        if not 0.0 <= self.gamma <= math.pi / 2:
            raise ValueError(f"gamma in [0, pi/2] violated: got {self.gamma!r}")

    @property
    def alpha1(self) -> float:
        return math.cos(self.gamma)

    @property
    def alpha2(self) -> float:
        return math.sin(self.gamma)

    @classmethod
    def from_p1_theta1(
        cls, gamma: float, p1: float, theta1: float, p2_negative: bool = False
    ) -> "SourceSpec":
        """Complete a spec from (gamma, p1, theta1); p2 and theta2 are derived."""
        if abs(p1) > 1.0:
            raise ValueError(f"p1^2 + p2^2 = 1 violated: |p1| = {abs(p1)!r} > 1")
        p2 = math.sqrt(max(0.0, 1.0 - p1**2))
        if p2_negative:
            p2 = -p2
        return cls(gamma=gamma, p1=p1, p2=p2, theta1=theta1, theta2=math.pi / 2 - theta1)


@dataclass(frozen=True)
class ComponentStates:
    """The four single-qubit states generating both species at a given angle."""

    phi: PureState
    eta: PureState
    varphi: PureState
    mu: PureState


def component_states(theta: float) -> ComponentStates:
    """Single-qubit generators at angle theta; phi _|_ eta and varphi _|_ mu."""
    c = math.cos(theta / 2)
    s = math.sin(theta / 2)
    return ComponentStates(
        phi=PureState(np.array([c, s])),
        eta=PureState(np.array([s, -c])),
        varphi=PureState(np.array([s, c])),
        mu=PureState(np.array([c, -s])),
    )


def psi1(theta: float = 0.0) -> PureState:
    """First species (phi phi + eta eta)/sqrt2; identical for every theta."""
    parts = component_states(theta)
    amps = (
        tensor(parts.phi, parts.phi).amplitudes + tensor(parts.eta, parts.eta).amplitudes
    ) / math.sqrt(2)
    return PureState(amps)


def psi2(theta: float) -> PureState:
    """Second species (varphi varphi - mu mu)/sqrt2.

    Its Bell coefficients are (0, sin theta, -cos theta, 0), so it is
    orthogonal to psi1 for every theta.
    """
    parts = component_states(theta)
    amps = (
        tensor(parts.varphi, parts.varphi).amplitudes - tensor(parts.mu, parts.mu).amplitudes
    ) / math.sqrt(2)
    return PureState(amps)


def superpose_species(
    spec: SourceSpec, species1: PureState, species2_first: PureState, species2_second: PureState
) -> tuple[PureState, float]:
    """alpha1*species1 + alpha2*(p1*first + p2*second), normalized.

    Returns the physical state together with the raw squared norm of the
    unnormalized combination, which equals
    1 + sin(gamma)^2 * 2 p1 p2 * sin(2 theta1).
    """
    raw = spec.alpha1 * species1.amplitudes + spec.alpha2 * (
        spec.p1 * species2_first.amplitudes + spec.p2 * species2_second.amplitudes
    )
    raw_norm = float(np.vdot(raw, raw).real)
    if raw_norm < _DEGENERATE_NORM:
        raise DegenerateSourceError(f"raw squared norm {raw_norm!r} below {_DEGENERATE_NORM}")
    return PureState(raw / math.sqrt(raw_norm)), raw_norm


def emitted_state(spec: SourceSpec) -> tuple[PureState, float]:
    """Undistorted source output and the raw squared norm of its superposition."""
    return superpose_species(spec, psi1(), psi2(spec.theta1), psi2(spec.theta2))
