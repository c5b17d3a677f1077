"""
Exact two-qubit kernel for spin measurements in the x-y plane.

Basis ordering is (up-up, up-down, down-up, down-down). A measurement along
azimuth ``alpha`` measures ``cos(alpha) X + sin(alpha) Y``; outcome 0 is the
+1 eigenvalue and outcome 1 the -1 eigenvalue.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidStateError

TWO_PI = 2.0 * math.pi

_IDENTITY = np.eye(2, dtype=complex)
_SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
_SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)

# eigenvalue attached to each outcome value
_OUTCOME_SIGN = (1.0, -1.0)


class InitialLabel(enum.IntEnum):
    """Prepared initial state of the pair; the integer is the CSV code."""

    I1 = 1
    I2 = 2

    @classmethod
    def parse(cls, value) -> "InitialLabel":
        if isinstance(value, cls):
            return value
        if isinstance(value, str):
            text = value.strip().upper()
            if text in ("I1", "1"):
                return cls.I1
            if text in ("I2", "2"):
                return cls.I2
            raise ValueError(f"not an initial-state label: {value!r}")
        return cls(int(value))


@dataclass(frozen=True)
class StateVector:
    amplitudes: tuple

    def __post_init__(self):
        amps = tuple(complex(z) for z in self.amplitudes)
        if len(amps) != 4:
            raise InvalidStateError("a two-qubit state has exactly 4 amplitudes")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.amplitudes, dtype=complex)

    @property
    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.array) ** 2)))

    def is_normalized(self, tol: float = 1e-12) -> bool:
        return abs(self.norm ** 2 - 1.0) <= tol


@dataclass(frozen=True)
class MeasurementDirection:
    azimuth: float

    def __post_init__(self):
        object.__setattr__(self, "azimuth", float(self.azimuth) % TWO_PI)


def _direction(angle) -> MeasurementDirection:
    if isinstance(angle, MeasurementDirection):
        return angle
    return MeasurementDirection(angle)


def _check_outcome(outcome) -> int:
    if outcome not in (0, 1):
        raise ValueError(f"outcome must be 0 or 1, got {outcome!r}")
    return int(outcome)


def make_state(label) -> StateVector:
    """Return the normalized state prepared under ``label``.

    I1 is the symmetric combination of up-down and down-up, which gives
    perfectly equal in-plane outcomes at equal settings. I2 is the singlet.
    """
    label = InitialLabel.parse(label)
    h = 1.0 / math.sqrt(2.0)
    if label is InitialLabel.I1:
        return StateVector((0.0, h, h, 0.0))
    return StateVector((0.0, h, -h, 0.0))


def measurement_projector(direction, outcome) -> np.ndarray:
    """Projector onto ``outcome`` for an in-plane spin measurement."""
    alpha = _direction(direction).azimuth
    sign = _OUTCOME_SIGN[_check_outcome(outcome)]
    n_sigma = math.cos(alpha) * _SIGMA_X + math.sin(alpha) * _SIGMA_Y
    return 0.5 * (_IDENTITY + sign * n_sigma)


def joint_outcome_probability(state: StateVector, alpha_a, alpha_b, outcome_a, outcome_b) -> float:
    """Born-rule probability <psi| P_A (x) P_B |psi>."""
    if not state.is_normalized():
        raise InvalidStateError(f"state norm is {state.norm!r}, expected 1")
    proj = np.kron(measurement_projector(alpha_a, outcome_a), measurement_projector(alpha_b, outcome_b))
    psi = state.array
    value = np.vdot(psi, proj @ psi).real
    return float(min(max(value, 0.0), 1.0))


def outcome_distribution(state: StateVector, alpha_a, alpha_b) -> np.ndarray:
    """2x2 array ``p[A, B]`` of joint outcome probabilities."""
    return np.array(
        [[joint_outcome_probability(state, alpha_a, alpha_b, x, y) for y in (0, 1)] for x in (0, 1)]
    )


def correlation_e(state: StateVector, alpha_a, alpha_b) -> float:
    """P(A=B) - P(A!=B) for the given pair of directions."""
    p = outcome_distribution(state, alpha_a, alpha_b)
    return float(p[0, 0] + p[1, 1] - p[0, 1] - p[1, 0])
