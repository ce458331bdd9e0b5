"""Non-local Bell-basis characterization and the species population formulas.

The measurement contract: a Bell label (a, b) is reported as the outcome
(a, a XOR b) on two ancilla readout bits, so the label (1,0) species shows
up as outcome 11 and outcome 10 belongs to the species that the source can
never emit (f10 is identically zero on source-reachable states). The
measured pair survives in the identified Bell state. Two independent
routes are provided: direct Born-rule projection in the Bell basis, and a
four-qubit ancilla circuit realization proven equivalent by tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distortion import ControlKnob
from .source import SourceSpec
from .statevec import (
    BELL_LABELS,
    CNOT,
    HADAMARD,
    BellLabel,
    PureState,
    UnitaryMatrix,
    basis_state,
    bell_coefficients,
    bell_state,
    expand_unitary,
    measure_qubits,
    tensor,
)

__all__ = [
    "MeasurementRecord",
    "PopulationTable",
    "Populations",
    "SpeciesMoments",
    "OUTCOME_KEYS",
    "label_to_outcome",
    "outcome_to_label",
    "species_moments",
    "table_populations",
    "populations_analytic",
    "populations_exact",
    "nonlocal_bell_measurement",
    "circuit_realization",
    "run_characterization_circuit",
    "circuit_outcome_distribution",
    "sample_histogram",
]

OUTCOME_KEYS = ("00", "01", "10", "11")


def label_to_outcome(label: BellLabel | tuple[int, int]) -> tuple[int, int]:
    """Readout bits (i3, j4) announced for Bell label (a, b): (a, a XOR b)."""
    a, b = label
    return (a, a ^ b)


def outcome_to_label(outcome: tuple[int, int]) -> BellLabel:
    """Bell label identified by readout bits (i3, j4); the map is an involution."""
    i, j = outcome
    return BellLabel(i, i ^ j)


@dataclass(frozen=True)
class SpeciesMoments:
    """Weighted cosine/cosine moments of the second-species angles.

    C = p1 cos(theta1) + p2 cos(theta2), S = p1 sin(theta1) + p2 sin(theta2).
    C^2 + S^2 = 1 + 2 p1 p2 sin(2 theta1), which is 1 only when
    p1 p2 sin(2 theta1) = 0.
    """

    C: float
    S: float


@dataclass(frozen=True)
class Populations:
    """Occupation weights of the four readout outcomes."""

    f00: float
    f01: float
    f10: float
    f11: float

    def total(self) -> float:
        return self.f00 + self.f01 + self.f10 + self.f11

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.f00, self.f01, self.f10, self.f11)

    def as_dict(self) -> dict[str, float]:
        return {"f00": self.f00, "f01": self.f01, "f10": self.f10, "f11": self.f11}


@dataclass(frozen=True)
class PopulationTable:
    """Raw closed-form populations next to their normalized (physical) view."""

    raw: Populations
    normalized: Populations

    @classmethod
    def from_raw(cls, raw: Populations) -> "PopulationTable":
        total = raw.total()
        if min(raw.as_tuple()) < -1e-12 or total < 1e-12:
            raise ValueError(f"invalid population weights {raw.as_tuple()!r}")
        normalized = Populations(*(f / total for f in raw.as_tuple()))
        return cls(raw=raw, normalized=normalized)


def species_moments(spec: SourceSpec) -> SpeciesMoments:
    return SpeciesMoments(
        C=spec.p1 * math.cos(spec.theta1) + spec.p2 * math.cos(spec.theta2),
        S=spec.p1 * math.sin(spec.theta1) + spec.p2 * math.sin(spec.theta2),
    )


def table_populations(
    gamma: float, c_squared: float, s_squared: float, ndelta: float
) -> Populations:
    """Raw closed-form populations for moments C^2, S^2 at control value n*delta.

    f00 = cos^2(g) cos^2(x) + C^2 sin^2(g) sin^2(x)
    f01 = S^2 sin^2(g)
    f10 = 0
    f11 = C^2 sin^2(g) cos^2(x) + cos^2(g) sin^2(x)      with x = 2 pi n delta.
    """
    x = 2.0 * math.pi * ndelta
    cos2_g = math.cos(gamma) ** 2
    sin2_g = math.sin(gamma) ** 2
    cos2_x = math.cos(x) ** 2
    sin2_x = math.sin(x) ** 2
    return Populations(
        f00=cos2_g * cos2_x + c_squared * sin2_g * sin2_x,
        f01=s_squared * sin2_g,
        f10=0.0,
        f11=c_squared * sin2_g * cos2_x + cos2_g * sin2_x,
    )


def populations_analytic(spec: SourceSpec, knob: ControlKnob) -> PopulationTable:
    """Closed-form population table for a controlled emission."""
    moments = species_moments(spec)
    raw = table_populations(spec.gamma, moments.C**2, moments.S**2, knob.ndelta)
    return PopulationTable.from_raw(raw)


def _outcome_probabilities(state12: PureState) -> dict[tuple[int, int], float]:
    coeffs = bell_coefficients(state12)
    return {
        label_to_outcome(label): abs(c) ** 2 for label, c in zip(BELL_LABELS, coeffs)
    }


def populations_exact(state12: PureState) -> PopulationTable:
    """Born-rule population table of a normalized 2-qubit state.

    Raw and normalized views coincide because the input is already physical.
    """
    probs = _outcome_probabilities(state12)
    pops = Populations(
        f00=probs[(0, 0)], f01=probs[(0, 1)], f10=probs[(1, 0)], f11=probs[(1, 1)]
    )
    return PopulationTable(raw=pops, normalized=pops)


@dataclass(frozen=True)
class MeasurementRecord:
    """One characterization shot: readout bits, surviving pair state, Born weight."""

    outcome: tuple[int, int]
    post_state: PureState
    probability: float


def nonlocal_bell_measurement(state12: PureState, rng: np.random.Generator) -> MeasurementRecord:
    """Sample one Bell-basis measurement of the pair (non-destructive).

    The Bell label is drawn by the Born rule, reported through the readout
    labeling, and the pair is left in the identified Bell state.
    """
    coeffs = bell_coefficients(state12)
    probs = np.array([abs(c) ** 2 for c in coeffs])
    k = int(np.searchsorted(np.cumsum(probs), rng.random(), side="right"))
    k = min(k, 3)
    label = BELL_LABELS[k]
    return MeasurementRecord(
        outcome=label_to_outcome(label),
        post_state=bell_state(label),
        probability=float(probs[k]),
    )


def _circuit_gates() -> tuple[UnitaryMatrix, ...]:
    # Map the pair to its label bits, copy them onto the ancillas, map back.
    return (
        expand_unitary(CNOT, (1, 2), 4),
        expand_unitary(HADAMARD, (1,), 4),
        expand_unitary(CNOT, (1, 3), 4),
        expand_unitary(CNOT, (2, 4), 4),
        expand_unitary(HADAMARD, (1,), 4),
        expand_unitary(CNOT, (1, 2), 4),
    )


_GATES = _circuit_gates()
_RELABEL = {(a, b): (a, a ^ b) for a in (0, 1) for b in (0, 1)}


def circuit_realization(
    state12: PureState,
) -> tuple[tuple[UnitaryMatrix, ...], dict[tuple[int, int], tuple[int, int]]]:
    """Concrete 4-qubit realization of the non-local measurement.

    Returns the gate sequence to run on ``state12 (x) |00>`` (qubits 3, 4
    are the ancillas) and the classical relabeling applied to the raw
    ancilla readout. The gates are input-independent; the argument fixes
    and validates the measured pair.
    """
    if state12.num_qubits != 2:
        raise ValueError(f"characterization measures a 2-qubit pair, got {state12.num_qubits}")
    return _GATES, dict(_RELABEL)


def _run_gates(state12: PureState) -> PureState:
    psi = tensor(state12, basis_state("00"))
    amps = psi.amplitudes
    for gate in _GATES:
        amps = gate.entries @ amps
    return PureState(amps)


def _pair_state(state4: PureState, raw_bits: tuple[int, int]) -> PureState:
    block = state4.amplitudes.reshape(2, 2, 2, 2)[:, :, raw_bits[0], raw_bits[1]]
    return PureState(block.reshape(-1))


def run_characterization_circuit(
    state12: PureState, rng: np.random.Generator
) -> MeasurementRecord:
    """Execute the ancilla circuit and measure qubits 3, 4.

    Independent of :func:`nonlocal_bell_measurement`: the outcome is read
    off the ancillas and the surviving pair state is extracted from the
    collapsed register, not constructed.
    """
    gates, relabel = circuit_realization(state12)
    final = _run_gates(state12)
    raw_bits, collapsed, prob = measure_qubits(final, (3, 4), rng)
    return MeasurementRecord(
        outcome=relabel[raw_bits],
        post_state=_pair_state(collapsed, raw_bits),
        probability=prob,
    )


def circuit_outcome_distribution(
    state12: PureState,
) -> dict[tuple[int, int], tuple[float, PureState | None]]:
    """Full outcome analysis of the ancilla circuit, without sampling.

    Maps each relabeled outcome to (probability, surviving pair state);
    the state is None for outcomes of zero weight.
    """
    _, relabel = circuit_realization(state12)
    final = _run_gates(state12)
    blocks = final.amplitudes.reshape(2, 2, 2, 2)
    result: dict[tuple[int, int], tuple[float, PureState | None]] = {}
    for raw, outcome in relabel.items():
        block = blocks[:, :, raw[0], raw[1]].reshape(-1)
        prob = float(np.vdot(block, block).real)
        post = PureState(block / math.sqrt(prob)) if prob > 1e-12 else None
        result[outcome] = (prob, post)
    return result


def sample_histogram(
    state12: PureState, shots: int, rng: np.random.Generator
) -> dict[str, int]:
    """Outcome counts of ``shots`` independent Bell measurements of the pair.

    Each shot measures a freshly prepared copy; the counts are drawn in one
    multinomial step, which has exactly the joint law of the independent
    per-shot measurements. Keys are the readout strings "00".."11".
    """
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    probs = _outcome_probabilities(state12)
    ordered = np.array([probs[(int(k[0]), int(k[1]))] for k in OUTCOME_KEYS])
    counts = rng.multinomial(shots, ordered / ordered.sum())
    return {key: int(c) for key, c in zip(OUTCOME_KEYS, counts)}
