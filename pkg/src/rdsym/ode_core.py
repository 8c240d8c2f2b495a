"""Fixed-step RK4 for the reduced ODE systems in the similarity variable z.

State layout is always ``(w1, w1', w2, w2')``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainError, ReductionNotClosedError, RHSNonFiniteError
from .symmetry import LieReductionParams, derived_reduction_closes

__all__ = [
    "SystemLabel",
    "ReducedSystem",
    "Trajectory",
    "cubic_reduced_system",
    "printed_lie_reduced_system",
    "derived_lie_reduced_system",
    "integrate_rk4",
    "energy_eq12",
    "trajectory_energy",
    "sd_matched_initial_state",
]


class SystemLabel(enum.Enum):
    Eq7Printed = "Eq7Printed"
    Eq7Derived = "Eq7Derived"
    Eq12 = "Eq12"


@dataclass(frozen=True)
class ReducedSystem:
    dimension: int
    rhs: Callable[[float, np.ndarray], np.ndarray]
    label: SystemLabel
    params: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Trajectory:
    z_values: np.ndarray
    states: np.ndarray

    def __post_init__(self):
        if len(self.z_values) != self.states.shape[0]:
            raise ValueError("z_values and states disagree in length")

    @property
    def final(self):
        return self.states[-1]


def _as_ratio_fn(phi):
    if callable(phi):
        return phi
    c = float(phi)
    return lambda ratio: c


def cubic_reduced_system(phi1, phi2=0.0):
    """w1'' + phi1 w1^3 = 0, w2'' + phi2 w2^3 = 0.

    ``phi1``/``phi2`` may be constants or functions of the ratio w2/w1.
    """
    f1 = _as_ratio_fn(phi1)
    f2 = _as_ratio_fn(phi2)
    need_ratio = callable(phi1) or callable(phi2)

    def rhs(z, y):
        w1, d1, w2, d2 = y
        ratio = w2 / w1 if need_ratio else 0.0
        return np.array([d1, -f1(ratio) * w1**3, d2, -f2(ratio) * w2**3])

    params = {}
    if not callable(phi1):
        params["phi1"] = float(phi1)
    if not callable(phi2):
        params["phi2"] = float(phi2)
    return ReducedSystem(4, rhs, SystemLabel.Eq12, params)


def _require_nondegenerate(p):
    if p.nu == 0 or p.a == 0 or p.b == 0:
        raise DomainError("reduced Lie system needs nu, a, b nonzero (leading coefficient vanishes)")


def printed_lie_reduced_system(p: LieReductionParams):
    """The reference ("printed") reduced system solved for (w1'', w2'')."""
    _require_nondegenerate(p)
    nu, a, b, lam = p.nu, p.a, p.b, p.lam

    def rhs(z, y):
        w1, d1, w2, d2 = y
        e = math.exp(lam * (w1 - w2))
        dd1 = -(2 * nu * z**2 * d1 + 4 * nu**2 * z * d1 + 2 * e * p.phi1 * w1) / (8 * nu**2 * a * z**2)
        dd2 = -(
            nu * z**2 * d2 + nu**2 * b / lam + 2 * nu**2 * b * z * d2 + e * (p.phi1 * w2 + p.phi2)
        ) / (4 * nu**2 * b * z**2)
        return np.array([d1, dd1, d2, dd2])

    return ReducedSystem(4, rhs, SystemLabel.Eq7Printed, vars(p).copy())


def derived_lie_reduced_system(p: LieReductionParams):
    """Chain-rule reduced system; only defined where the reduction closes in z."""
    _require_nondegenerate(p)
    if not derived_reduction_closes(p):
        raise ReductionNotClosedError(
            "the Lie ansatz does not reduce these parameters to an ODE in z "
            "(need phi1 = 0 and ln_sign*lam2 = lam, or no reaction)"
        )
    nu, a, b, lam, sg = p.nu, p.a, p.b, p.lam, p.ln_sign

    def rhs(z, y):
        w1, d1, w2, d2 = y
        dw = w1 - w2
        react1 = 2 * math.exp(p.l1 * dw) * p.phi1 * w1 if p.phi1 else 0.0
        react2 = math.exp(p.l2 * dw) * (p.phi1 * w2 + p.phi2) if (p.phi1 or p.phi2) else 0.0
        dd1 = -(2 * nu * z**2 * d1 + 4 * a * nu**2 * z * d1 + react1) / (8 * a * nu**2 * z**2)
        dd2 = -(
            nu * z**2 * d2 - 2 * sg * b * nu**2 / lam + 2 * b * nu**2 * z * d2 + react2
        ) / (4 * b * nu**2 * z**2)
        return np.array([d1, dd1, d2, dd2])

    return ReducedSystem(4, rhs, SystemLabel.Eq7Derived, vars(p).copy())


def _eval_rhs(system, z, y):
    with np.errstate(all="ignore"):
        try:
            k = np.asarray(system.rhs(z, y), dtype=float)
        except (OverflowError, ZeroDivisionError) as exc:
            raise RHSNonFiniteError(z) from exc
    if k.shape != (system.dimension,):
        raise ValueError(f"rhs returned shape {k.shape}, expected ({system.dimension},)")
    if not np.all(np.isfinite(k)):
        raise RHSNonFiniteError(z)
    return k


def integrate_rk4(system: ReducedSystem, y0, z_span, h) -> Trajectory:
    """Classical RK4 with a fixed step.

    ``z_span = (z0, z1)`` may run backwards. The step is shrunk so that an
    integer number of steps lands exactly on ``z1``.
    """
    if not h > 0:
        raise ValueError("step h must be positive")
    z0, z1 = map(float, z_span)
    if z0 == z1:
        raise ValueError("empty integration span")
    n = max(1, math.ceil(abs(z1 - z0) / h - 1e-9))
    step = (z1 - z0) / n
    zs = z0 + step * np.arange(n + 1)
    zs[-1] = z1
    ys = np.empty((n + 1, system.dimension))
    y = np.asarray(y0, dtype=float).copy()
    if y.shape != (system.dimension,):
        raise ValueError(f"y0 must have length {system.dimension}")
    ys[0] = y
    for i in range(n):
        z = zs[i]
        k1 = _eval_rhs(system, z, y)
        k2 = _eval_rhs(system, z + 0.5 * step, y + 0.5 * step * k1)
        k3 = _eval_rhs(system, z + 0.5 * step, y + 0.5 * step * k2)
        k4 = _eval_rhs(system, z + step, y + step * k3)
        y = y + (step / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        ys[i + 1] = y
    return Trajectory(zs, ys)


def energy_eq12(omega, omega_dot, phi):
    """First integral 1/2 w'^2 + (phi/4) w^4 of w'' + phi w^3 = 0."""
    return 0.5 * omega_dot**2 + 0.25 * phi * omega**4


def trajectory_energy(traj: Trajectory, phi1, phi2=0.0):
    s = traj.states
    return energy_eq12(s[:, 0], s[:, 1], phi1) + energy_eq12(s[:, 2], s[:, 3], phi2)


def sd_matched_initial_state(phi1):
    """State at z=0 of w1 = sd(z)/sqrt(2 phi1): (0, 1/sqrt(2 phi1), 0, 0)."""
    return np.array([0.0, 1.0 / math.sqrt(2.0 * phi1), 0.0, 0.0])
