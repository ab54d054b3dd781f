"""Quantum speed limit quantities for a transitionless protocol.

A *protocol* is any object exposing ``tau`` and the per-time methods
``control(t)``, ``epsilon(t)``, ``cost_rate(t)`` and ``angle(t)`` (see
:class:`SpeedProtocol`). Units are natural, hbar = 1.

An unbounded speed (the angle sits at 0 or pi/2 while the energy norm is
positive) is returned as ``UNBOUNDED`` (``math.inf``), never produced by a
floating-point division.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Protocol

import numpy as np

from .errors import DomainError
from .quadrature import ABS_TOL, REL_TOL, adaptive_quadrature

UNBOUNDED = math.inf
HALF_PI = 0.5 * math.pi
DEFAULT_GRID_POINTS = 1001


class SpeedProtocol(Protocol):
    tau: float

    def control(self, t: float) -> float: ...

    def epsilon(self, t: float) -> float: ...

    def cost_rate(self, t: float) -> float: ...

    def angle(self, t: float) -> float: ...


@dataclass(frozen=True)
class SpeedSample:
    t: float
    control: float
    epsilon: float
    angle: float
    cost_rate: float
    speed: float

    @property
    def unbounded(self) -> bool:
        return math.isinf(self.speed)


@dataclass
class ProtocolReport:
    tau: float
    samples: list[SpeedSample]
    total_cost: float
    E_tau: float
    tau_qsl: float
    final_angle: float
    meta: dict = field(default_factory=dict)

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(s, name) for s in self.samples])

    def finite_speeds(self):
        """``(t, v)`` arrays restricted to samples with a bounded speed."""
        pairs = [(s.t, s.speed) for s in self.samples if not s.unbounded]
        if not pairs:
            return np.empty(0), np.empty(0)
        t, v = zip(*pairs)
        return np.array(t), np.array(v)


def qsl_speed(epsilon: float, angle: float) -> float:
    """Maximal rate of change of the angle, ``epsilon / (cos L sin L)``."""
    if not 0.0 <= angle <= HALF_PI:
        raise DomainError(f"angle {angle} outside [0, pi/2]")
    if epsilon < 0:
        raise DomainError(f"energy norm must be non-negative, got {epsilon}")
    if epsilon == 0.0:
        return 0.0
    if angle == 0.0 or angle == HALF_PI:
        return UNBOUNDED
    denom = math.cos(angle) * math.sin(angle)
    if denom <= 0.0:
        return UNBOUNDED
    return epsilon / denom


def energy_norm(eigenvalue: float, cost_rate: float) -> float:
    """Energy norm of the driven eigenstate, ``sqrt(eps_n^2 + (dC/dt)^2)``."""
    return math.hypot(eigenvalue, cost_rate)


def total_cost(protocol: SpeedProtocol, tau: float | None = None, abs_tol=ABS_TOL, rel_tol=REL_TOL) -> float:
    """Time integral of the instantaneous cost over the protocol."""
    tau = protocol.tau if tau is None else tau
    return adaptive_quadrature(protocol.cost_rate, 0.0, tau, abs_tol, rel_tol)


def time_averaged_energy(protocol: SpeedProtocol, tau: float | None = None, abs_tol=ABS_TOL,
                         rel_tol=REL_TOL) -> float:
    tau = protocol.tau if tau is None else tau
    return adaptive_quadrature(lambda t: abs(protocol.epsilon(t)), 0.0, tau, abs_tol, rel_tol) / tau


def qsl_time_from(final_angle: float, E_tau: float) -> float:
    """``sin^2(L_tau) / (2 E_tau)``; the tau factors of the integral form cancel."""
    s = math.sin(final_angle)
    if s == 0.0:
        return 0.0
    return s * s / (2.0 * E_tau)


def qsl_time(protocol: SpeedProtocol, tau: float | None = None, abs_tol=ABS_TOL, rel_tol=REL_TOL) -> float:
    """Minimal evolution time ``tau sin^2(L_tau) / (2 int_0^tau eps_t dt)``.

    Returns exactly 0 when the final state coincides with the initial one.
    """
    tau = protocol.tau if tau is None else tau
    final = protocol.angle(tau)
    if math.sin(final) == 0.0:
        return 0.0
    integral = adaptive_quadrature(lambda t: abs(protocol.epsilon(t)), 0.0, tau, abs_tol, rel_tol)
    return tau * math.sin(final) ** 2 / (2.0 * integral)


def sample(protocol: SpeedProtocol, t: float) -> SpeedSample:
    eps = protocol.epsilon(t)
    ang = protocol.angle(t)
    return SpeedSample(t=t, control=protocol.control(t), epsilon=eps, angle=ang,
                       cost_rate=protocol.cost_rate(t), speed=qsl_speed(eps, ang))


def time_grid(tau: float, grid_points: int = DEFAULT_GRID_POINTS) -> np.ndarray:
    if grid_points < 3:
        raise ValueError(f"grid_points must be >= 3, got {grid_points}")
    t = np.linspace(0.0, tau, grid_points)
    t[-1] = tau
    return t


def summarize(protocol: SpeedProtocol, abs_tol=ABS_TOL, rel_tol=REL_TOL) -> dict:
    """Integrated quantities: total cost, E_tau, tau_QSL and the final angle."""
    tau = protocol.tau
    C = total_cost(protocol, tau, abs_tol, rel_tol)
    E = time_averaged_energy(protocol, tau, abs_tol, rel_tol)
    final = protocol.angle(tau)
    return {"tau": tau, "total_cost": C, "E_tau": E, "tau_qsl": qsl_time_from(final, E), "final_angle": final}


def build_report(protocol: SpeedProtocol, grid_points: int = DEFAULT_GRID_POINTS, abs_tol=ABS_TOL,
                 rel_tol=REL_TOL) -> ProtocolReport:
    """Sample the protocol on a uniform grid and integrate C, E_tau and tau_QSL."""
    samples = [sample(protocol, float(t)) for t in time_grid(protocol.tau, grid_points)]
    return ProtocolReport(samples=samples, **summarize(protocol, abs_tol, rel_tol))
