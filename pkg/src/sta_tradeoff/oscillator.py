"""Parametric harmonic oscillator driven along its instantaneous ground state.

Closed forms for the instantaneous cost, ground-state angle and maximal
speed under the linear frequency ramp ``omega_t = omega0 + omega_d t / tau``.
None of them depends on the mass.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .qsl import energy_norm, qsl_speed
from .schedules import Ramp

SQRT8 = math.sqrt(8.0)


@dataclass(frozen=True)
class OscillatorParams:
    omega0: float
    omega_d: float
    tau: float
    mass: float = 1.0

    def __post_init__(self):
        if not self.omega0 > 0:
            raise ValidationError(f"omega0 must be positive, got {self.omega0}")
        if not self.omega0 + self.omega_d > 0:
            raise ValidationError(f"final frequency omega0 + omega_d = {self.omega0 + self.omega_d} must be positive")
        if not self.mass > 0:
            raise ValidationError(f"mass must be positive, got {self.mass}")
        if not self.tau > 0:
            raise ValidationError(f"tau must be positive, got {self.tau}")

    @property
    def ramp(self) -> Ramp:
        return Ramp(start=self.omega0, delta=self.omega_d, tau=self.tau)

    def omega(self, t: float) -> float:
        return self.ramp.value(t)

    def omega_dot(self, t: float) -> float:
        return self.ramp.derivative(t)


def osc_cost_rate(p: OscillatorParams, t: float) -> float:
    """Instantaneous cost ``|d omega/dt| / (sqrt(8) omega_t)``."""
    return abs(p.omega_dot(t)) / (SQRT8 * p.omega(t))


def osc_angle(p: OscillatorParams, t: float) -> float:
    """Angle between the initial ground state and the ground state at ``omega_t``.

    ``cos^2 L = 2 sqrt(w0 wt) / (w0 + wt)`` and
    ``sin^2 L = (sqrt(w0) - sqrt(wt))^2 / (w0 + wt)``; the atan2 form keeps
    full precision when ``omega_t`` is close to ``omega0``.
    """
    w0, wt = p.omega0, p.omega(t)
    return math.atan2(abs(math.sqrt(w0) - math.sqrt(wt)), math.sqrt(2.0 * math.sqrt(w0 * wt)))


def osc_ground_energy(p: OscillatorParams, t: float) -> float:
    return 0.5 * p.omega(t)


def osc_epsilon(p: OscillatorParams, t: float) -> float:
    return energy_norm(osc_ground_energy(p, t), osc_cost_rate(p, t))


def osc_speed(p: OscillatorParams, t: float) -> float:
    return qsl_speed(osc_epsilon(p, t), osc_angle(p, t))


def ground_state_wavefunction(omega: float, x: np.ndarray, mass: float = 1.0) -> np.ndarray:
    """Real Gaussian ground state on a position grid, hbar = 1."""
    return (mass * omega / math.pi) ** 0.25 * np.exp(-0.5 * mass * omega * x * x)


def gaussian_overlap_angle(omega0: float, omega_t: float, mass: float = 1.0, points: int = 4096) -> float:
    """Angle between two oscillator ground states from a discretized overlap.

    Trapezoidal rule on ``[-L, L]`` with ``L = 8 / sqrt(min omega)``. This is
    the numerical cross-check for :func:`osc_angle`.
    """
    half = 8.0 / math.sqrt(mass * min(omega0, omega_t))
    x = np.linspace(-half, half, points)
    overlap = np.trapezoid(ground_state_wavefunction(omega0, x, mass) * ground_state_wavefunction(omega_t, x, mass), x)
    return math.acos(min(1.0, abs(float(overlap))))


class OscillatorProtocol:
    """Adapter exposing the closed forms through the generic protocol interface."""

    def __init__(self, params: OscillatorParams):
        self.params = params
        self.tau = params.tau

    def control(self, t):
        return self.params.omega(t)

    def epsilon(self, t):
        return osc_epsilon(self.params, t)

    def cost_rate(self, t):
        return osc_cost_rate(self.params, t)

    def angle(self, t):
        return osc_angle(self.params, t)

    def speed(self, t):
        return osc_speed(self.params, t)
