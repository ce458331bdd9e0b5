from __future__ import annotations

import math
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from bellsource import ControlKnob, PureState, SourceSpec


def random_state(rng: np.random.Generator, num_qubits: int) -> PureState:
    dim = 2**num_qubits
    amps = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return PureState(amps, normalize=True)


def random_spec(rng: np.random.Generator) -> SourceSpec:
    weight_angle = rng.uniform(0.0, 2.0 * math.pi)
    return SourceSpec(
        gamma=rng.uniform(0.0, math.pi / 2),
        p1=math.cos(weight_angle),
        p2=math.sin(weight_angle),
        theta1=(theta1 := rng.uniform(-math.pi, math.pi)),
        theta2=math.pi / 2 - theta1,
    )


def random_knob(rng: np.random.Generator) -> ControlKnob:
    return ControlKnob(n=int(rng.integers(0, 12)), delta=rng.uniform(-0.5, 0.5))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20260810)
