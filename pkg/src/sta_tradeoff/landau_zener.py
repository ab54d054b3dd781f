"""Landau-Zener avoided crossing with its counterdiabatic correction.

The working frame is rescaled by the splitting: ``H0 = sigma_x + h(t) sigma_z``
with ``h = g / Delta``. With ``rescaled=False`` energies are reported in bare
units (multiplied by ``Delta``); angles, eigenvectors and the counterdiabatic
term are the same in both frames because ``h' / (1 + h^2)`` equals
``g' Delta / (Delta^2 + g^2)``.

The ground state follows ``theta(t) = atan2(1, h(t))``, the polar angle of the
field direction, which is continuous and monotone through the crossing.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .qsl import energy_norm, qsl_speed
from .schedules import Ramp
from .spectral import SIGMA_X, SIGMA_Y, SIGMA_Z


@dataclass(frozen=True)
class LZParams:
    delta: float
    g0: float
    g_d: float
    tau: float
    rescaled: bool = True

    def __post_init__(self):
        if not self.delta > 0:
            raise ValidationError(f"splitting delta must be strictly positive, got {self.delta}")
        if not self.tau > 0:
            raise ValidationError(f"tau must be positive, got {self.tau}")

    @property
    def ramp(self) -> Ramp:
        return Ramp(start=self.g0, delta=self.g_d, tau=self.tau)

    def field(self, t: float) -> float:
        """Dimensionless field ``h = g / Delta``."""
        return self.ramp.value(t) / self.delta

    def field_rate(self, t: float) -> float:
        return self.ramp.derivative(t) / self.delta

    @property
    def energy_unit(self) -> float:
        return 1.0 if self.rescaled else self.delta


def mixing_angle(h: float) -> float:
    return math.atan2(1.0, h)


def lz_hamiltonian(p: LZParams, t: float) -> np.ndarray:
    h = p.field(t)
    return p.energy_unit * (SIGMA_X + h * SIGMA_Z)


def lz_cd_coefficient(p: LZParams, t: float) -> float:
    """Coefficient ``c`` of ``H1 = c sigma_y``, ``c = -h' / (2 (1 + h^2))``."""
    h = p.field(t)
    return -p.field_rate(t) / (2.0 * (1.0 + h * h))


def lz_cd_term(p: LZParams, t: float) -> np.ndarray:
    return lz_cd_coefficient(p, t) * SIGMA_Y


def lz_cost_rate(p: LZParams, t: float) -> float:
    return abs(lz_cd_coefficient(p, t))


def lz_ground_energy(p: LZParams, t: float) -> float:
    h = p.field(t)
    return -p.energy_unit * math.hypot(1.0, h)


def lz_ground_state(p: LZParams, t: float):
    """Ground eigenvector and eigenvalue of :func:`lz_hamiltonian`.

    The vector is ``(sin(theta/2), -cos(theta/2))`` up to sign; the sign is
    chosen so the largest-magnitude component is positive, matching
    :func:`sta_tradeoff.spectral.eigensystem_hermitian`.
    """
    half = 0.5 * mixing_angle(p.field(t))
    s, c = math.sin(half), math.cos(half)
    v = np.array([-s, c], dtype=complex) if c > s else np.array([s, -c], dtype=complex)
    return v, lz_ground_energy(p, t)


def lz_angle(p: LZParams, t: float) -> float:
    return 0.5 * abs(mixing_angle(p.field(t)) - mixing_angle(p.field(0.0)))


def lz_epsilon(p: LZParams, t: float) -> float:
    return energy_norm(lz_ground_energy(p, t), lz_cost_rate(p, t))


def lz_speed(p: LZParams, t: float) -> float:
    return qsl_speed(lz_epsilon(p, t), lz_angle(p, t))


def lz_driven_hamiltonian(p: LZParams, t: float) -> np.ndarray:
    """``H0 + H1`` in the working frame."""
    return lz_hamiltonian(p, t) + lz_cd_term(p, t)


class LZProtocol:
    def __init__(self, params: LZParams):
        self.params = params
        self.tau = params.tau

    def control(self, t):
        return self.params.ramp.value(t)

    def epsilon(self, t):
        return lz_epsilon(self.params, t)

    def cost_rate(self, t):
        return lz_cost_rate(self.params, t)

    def angle(self, t):
        return lz_angle(self.params, t)

    def speed(self, t):
        return lz_speed(self.params, t)
