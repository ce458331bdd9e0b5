"""Population steering and parameter inference from measured populations.

Steering inverts the closed-form populations for the control value: given a
mixing angle gamma and target populations (f00, f11), it returns the
sin^2(2 pi n delta) that realizes them together with the species moments the
source must have. Inference goes the other way, recovering (sin^2 gamma,
C^2, S^2) from measured frequencies at a known control value.

Infeasibility of a steering target is a value, not an error, for region
scanning; it is still raised as a typed exception from solve_ndelta so the
violated bound can be named.

Note on the gamma = pi/2 slice: the feasible set there satisfies
S^2 = 1 - f00 - f11, so the third population f01 = 1 - f00 - f11 vanishes
only on the boundary line f00 + f11 = 1, even though that slice otherwise
offers the largest target region.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .characterize import table_populations

__all__ = [
    "ControlError",
    "DegenerateSteeringError",
    "EmissionEstimate",
    "InfeasibleError",
    "RegionPoint",
    "SingularSystemError",
    "SteeringSolution",
    "UnidentifiableSourceError",
    "solve_ndelta",
    "feasible",
    "region_grid",
    "infer_parameters",
    "infer_ndelta",
]

_SINGULAR_TOL = 1e-9
_FREQ_SUM_TOL = 1e-6
# Targets this close to a feasibility bound count as on the boundary; without
# the slack, exact boundary points flip on 1-ulp rounding (e.g. sin^2(pi/4)).
_BOUND_TOL = 1e-12


class ControlError(ValueError):
    """Base for typed steering/inference failures."""


class InfeasibleError(ControlError):
    """A steering target violates a population or moment bound."""

    def __init__(self, bound: str, detail: str):
        super().__init__(f"infeasible target: {bound} violated ({detail})")
        self.bound = bound


class DegenerateSteeringError(ControlError):
    """The steering denominator vanishes; the control value is undetermined."""


class SingularSystemError(ControlError):
    """The inference system is singular (control value at 1/8 mod 1/4)."""


class UnidentifiableSourceError(ControlError):
    """The mixing-weight estimate leaves the physical range or pins gamma ~ 0."""


@dataclass(frozen=True)
class SteeringSolution:
    """Control value and source moments realizing a steering target.

    ndelta_principal is the principal branch in [0, 1/4]; all other
    branches are k/2 +- ndelta_principal for integer k.
    """

    s_squared: float
    ndelta_principal: float
    required_C_squared: float
    required_S_squared: float


@dataclass(frozen=True)
class EmissionEstimate:
    """Inferred source parameters plus the moment-consistency defect.

    residual = |C^2 + S^2 - 1|; it is reported rather than folded into the
    estimates so violations of the unit-moment assumption stay visible.
    """

    sin2_gamma: float
    C_squared: float
    S_squared: float
    residual: float


@dataclass(frozen=True)
class RegionPoint:
    """One steering target with its feasibility verdict."""

    f00_target: float
    f11_target: float
    feasible: bool
    solution: SteeringSolution | None

    def __post_init__(self) -> None:
        if self.feasible != (self.solution is not None):
            raise ValueError("feasible flag must match solution presence")


def solve_ndelta(gamma: float, f00: float, f11: float) -> SteeringSolution:
    """Control value realizing target populations (f00, f11) at mixing angle gamma.

    sin^2(2 pi n delta) = (cos^2 g - f00) / (cos 2g + 1 - f00 - f11) and the
    source moments must satisfy S^2 = (1 - f00 - f11) / sin^2 g. Raises
    InfeasibleError when a bound fails by more than 1e-12 (closer counts as
    on the boundary), DegenerateSteeringError when the denominator vanishes.
    """
    if not 0.0 < gamma <= math.pi / 2:
        raise ValueError(f"gamma must lie in (0, pi/2], got {gamma!r}")
    if f00 < 0.0 or f11 < 0.0:
        raise ValueError(f"target populations must be non-negative, got ({f00!r}, {f11!r})")
    if f00 + f11 > 1.0 + _BOUND_TOL:
        raise InfeasibleError("f00 + f11 <= 1", f"got {f00 + f11!r}")

    sin2_g = math.sin(gamma) ** 2
    s_req = (1.0 - f00 - f11) / sin2_g
    if not -_BOUND_TOL <= s_req <= 1.0 + _BOUND_TOL:
        raise InfeasibleError("required_S_squared in [0, 1]", f"got {s_req!r}")
    s_req = min(max(s_req, 0.0), 1.0)

    denom = math.cos(2.0 * gamma) + 1.0 - f00 - f11
    if denom == 0.0:
        raise DegenerateSteeringError(
            f"cos(2 gamma) + 1 - f00 - f11 = 0 at gamma={gamma!r}, f00={f00!r}, f11={f11!r}"
        )
    s_squared = (math.cos(gamma) ** 2 - f00) / denom
    if not -_BOUND_TOL <= s_squared <= 1.0 + _BOUND_TOL:
        raise InfeasibleError("sin^2(2 pi n delta) in [0, 1]", f"got {s_squared!r}")
    s_squared = min(max(s_squared, 0.0), 1.0)

    return SteeringSolution(
        s_squared=s_squared,
        ndelta_principal=math.asin(math.sqrt(s_squared)) / (2.0 * math.pi),
        required_C_squared=1.0 - s_req,
        required_S_squared=s_req,
    )


def feasible(gamma: float, f00: float, f11: float) -> RegionPoint:
    """Feasibility of a steering target as a value; never raises for targets."""
    try:
        solution = solve_ndelta(gamma, f00, f11)
    except ControlError:
        return RegionPoint(f00_target=f00, f11_target=f11, feasible=False, solution=None)
    return RegionPoint(f00_target=f00, f11_target=f11, feasible=True, solution=solution)


def region_grid(gamma: float, resolution: int) -> list[RegionPoint]:
    """Feasibility over the uniform resolution x resolution grid on [0,1]^2.

    Row-major: f00 varies slowest. Suitable for plotting the steering
    region slice at the given gamma.
    """
    if resolution < 2:
        raise ValueError(f"resolution must be >= 2, got {resolution}")
    values = [i / (resolution - 1) for i in range(resolution)]
    return [feasible(gamma, f00, f11) for f00 in values for f11 in values]


def infer_parameters(f00: float, f01: float, f11: float, ndelta: float) -> EmissionEstimate:
    """Recover (sin^2 gamma, C^2, S^2) from normalized frequencies at a known knob.

    Solves f00 = a c^2 + b s^2, f11 = a s^2 + b c^2 for a = cos^2 gamma and
    b = sin^2 gamma C^2, where c^2, s^2 are cos^2/sin^2 of 2 pi n delta.
    The system determinant is cos(4 pi n delta).
    """
    if abs(f00 + f01 + f11 - 1.0) > _FREQ_SUM_TOL:
        raise ValueError(
            f"frequencies must be normalized: f00 + f01 + f11 = {f00 + f01 + f11!r}"
        )
    x = 2.0 * math.pi * ndelta
    det = math.cos(2.0 * x)
    if abs(det) <= _SINGULAR_TOL:
        raise SingularSystemError(
            f"cos(4 pi n delta) = {det!r} at ndelta={ndelta!r}; populations cannot "
            "separate the two mixing weights"
        )
    c2 = math.cos(x) ** 2
    s2 = math.sin(x) ** 2
    a = (f00 * c2 - f11 * s2) / det
    b = (f11 * c2 - f00 * s2) / det
    if not 0.0 <= a <= 1.0:
        raise UnidentifiableSourceError(f"cos^2 gamma estimate {a!r} outside [0, 1]")
    if 1.0 - a < _SINGULAR_TOL:
        raise UnidentifiableSourceError(
            f"sin^2 gamma estimate {1.0 - a!r} ~ 0; species moments are unidentifiable"
        )
    c_squared = b / (1.0 - a)
    s_squared = f01 / (1.0 - a)
    return EmissionEstimate(
        sin2_gamma=1.0 - a,
        C_squared=c_squared,
        S_squared=s_squared,
        residual=abs(c_squared + s_squared - 1.0),
    )


def infer_ndelta(f00: float, f11: float, gamma: float) -> float:
    """Principal control value explaining measured (f00, f11) at known gamma.

    Raises the solve_ndelta failures when the pair is not reachable.
    """
    solution = solve_ndelta(gamma, f00, f11)
    return solution.ndelta_principal


def forward_populations(gamma: float, solution: SteeringSolution):
    """Closed-form populations at a steering solution (round-trip check helper)."""
    return table_populations(
        gamma,
        solution.required_C_squared,
        solution.required_S_squared,
        solution.ndelta_principal,
    )
