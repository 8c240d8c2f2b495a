"""Closed-form solutions of the cubic system

    U_t - U_xx = a U^3,    V_t - V_xx = b V^3

built from the conditional-symmetry ansatz U = (x+k1) w1(z), V = (x+k1) w2(z)
with z = x^2/2 + k1 x + 3t. Two families are provided:

* ``EllipticPair`` (a > 0, b < 0):
  U = (x+k1) sd(z; 1/sqrt2) / sqrt(2a),  V = sqrt(-2/b) (x+k1) ds(z; 1/sqrt2)
* ``EllipticPlusLinear`` (a > 0, b = 0):
  same U,  V = (x+k1) (C1 z + C2)

ds has poles on the level curves z = 2mK, which :func:`singular_times` reports.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .elliptic import (
    DS_POLE_TOL,
    K_HALF,
    ds_derivatives,
    jacobi_ds,
    jacobi_sd,
    jacobi_sncndn,
    sd_derivatives,
)
from .errors import DomainError

__all__ = [
    "CaseTag",
    "ExactSolutionSpec",
    "SingularCurve",
    "MODULUS",
    "similarity_z",
    "eval_case1",
    "eval_case2",
    "eval_exact",
    "exact_jets",
    "singular_times",
    "residual_cubic_system",
    "residual_cubic_system_fd",
]

MODULUS = math.sqrt(0.5)


class CaseTag(enum.Enum):
    EllipticPair = "EllipticPair"
    EllipticPlusLinear = "EllipticPlusLinear"


@dataclass(frozen=True)
class ExactSolutionSpec:
    case_tag: CaseTag
    a: float
    b: float = 0.0
    k1: float = 1.0
    C1: float = 0.0
    C2: float = 0.0

    def __post_init__(self):
        tag = CaseTag(self.case_tag)
        object.__setattr__(self, "case_tag", tag)
        if not self.a > 0:
            raise DomainError(f"reaction coefficient a must be > 0, got {self.a!r}")
        if tag is CaseTag.EllipticPair and not self.b < 0:
            raise DomainError(f"EllipticPair requires b < 0, got {self.b!r}")

    @property
    def u_coefficient(self):
        # sqrt(2a)/(2a) == 1/sqrt(2a)
        return 1.0 / math.sqrt(2.0 * self.a)

    @property
    def v_coefficient(self):
        # -sqrt(-2b)/b == sqrt(-2/b) for b < 0
        return math.sqrt(-2.0 / self.b)

    @property
    def b_effective(self):
        return self.b if self.case_tag is CaseTag.EllipticPair else 0.0


def similarity_z(x, t, k1):
    """z = x^2/2 + k1 x + 3t."""
    return 0.5 * x * x + k1 * x + 3.0 * t


def _check_case(spec, tag):
    if spec.case_tag is not tag:
        raise DomainError(f"expected case {tag.value}, got {spec.case_tag.value}")


def _u_value(x, t, spec):
    z = similarity_z(x, t, spec.k1)
    return spec.u_coefficient * (x + spec.k1) * jacobi_sd(z, MODULUS)


def eval_case1(x, t, spec: ExactSolutionSpec):
    """(U, V) of the elliptic pair. Raises ``PoleError`` on a ds pole."""
    _check_case(spec, CaseTag.EllipticPair)
    z = similarity_z(x, t, spec.k1)
    shift = x + spec.k1
    sn, _, dn = jacobi_sncndn(z, MODULUS)
    if np.any(np.abs(sn) < DS_POLE_TOL):
        jacobi_ds(z, MODULUS)  # raises PoleError naming the offending z
    U = spec.u_coefficient * shift * (sn / dn)
    V = spec.v_coefficient * shift * (dn / sn)
    return U, V


def eval_case2(x, t, spec: ExactSolutionSpec):
    _check_case(spec, CaseTag.EllipticPlusLinear)
    z = similarity_z(x, t, spec.k1)
    U = _u_value(x, t, spec)
    V = (x + spec.k1) * (z * spec.C1 + spec.C2)
    return U, V


def eval_exact(x, t, spec: ExactSolutionSpec):
    """Dispatch on ``spec.case_tag``."""
    if spec.case_tag is CaseTag.EllipticPair:
        return eval_case1(x, t, spec)
    return eval_case2(x, t, spec)


@dataclass(frozen=True)
class SingularCurve:
    """Level curve z(x, t) = z_value (= 2 m K) on which ds has a pole."""

    m: int
    z_value: float
    k1: float

    def t_of_x(self, x):
        return (self.z_value - 0.5 * x * x - self.k1 * x) / 3.0

    def describe(self):
        return f"m={self.m}: z = 2*{self.m}*K = {self.z_value:.6f}"


def _z_bounds(k1, x_range, t_range):
    x0, x1 = sorted(map(float, x_range))
    t0, t1 = sorted(map(float, t_range))
    xs = [x0, x1]
    if x0 < -k1 < x1:
        xs.append(-k1)
    zx = [0.5 * x * x + k1 * x for x in xs]
    return min(zx) + 3.0 * t0, max(zx) + 3.0 * t1


def singular_times(spec: ExactSolutionSpec, x_range, t_range):
    """Pole curves of ds meeting the closed rectangle ``x_range x t_range``.

    Only the ``EllipticPair`` case has poles (sd is bounded on the real line),
    so the other case always returns an empty list.
    """
    if spec.case_tag is not CaseTag.EllipticPair:
        return []
    z_lo, z_hi = _z_bounds(spec.k1, x_range, t_range)
    half_period = 2.0 * K_HALF
    m_lo = math.ceil(z_lo / half_period)
    m_hi = math.floor(z_hi / half_period)
    return [SingularCurve(m, m * half_period, spec.k1) for m in range(m_lo, m_hi + 1)]


def exact_jets(x, t, spec: ExactSolutionSpec, u_scale=1.0):
    """Analytic (value, d/dt, d/dx, d2/dx2) for U and V via the chain rule.

    With F = c (x+k1) f(z): F_t = 3c (x+k1) f', F_x = c (f + (x+k1)^2 f'),
    F_xx = c (3 (x+k1) f' + (x+k1)^3 f'').
    """
    k1 = spec.k1
    z = similarity_z(x, t, k1)
    s = x + k1

    def jet(coef, f, f1, f2):
        return (
            coef * s * f,
            3.0 * coef * s * f1,
            coef * (f + s * s * f1),
            coef * (3.0 * s * f1 + s**3 * f2),
        )

    cu = spec.u_coefficient * u_scale
    ujet = jet(cu, *sd_derivatives(z, MODULUS))
    if spec.case_tag is CaseTag.EllipticPair:
        vjet = jet(spec.v_coefficient, *ds_derivatives(z, MODULUS))
    else:
        lin = z * spec.C1 + spec.C2
        vjet = (
            s * lin,
            3.0 * s * spec.C1,
            lin + s * s * spec.C1,
            3.0 * s * spec.C1,
        )
    return ujet, vjet


def residual_cubic_system(x, t, spec: ExactSolutionSpec, u_scale=1.0):
    """Pointwise (U_t - U_xx - a U^3, V_t - V_xx - b V^3) with analytic derivatives.

    ``u_scale`` multiplies U before the residual is formed; it exists only to
    demonstrate that the residual detects a wrong field.
    """
    (u, ut, _, uxx), (v, vt, _, vxx) = exact_jets(x, t, spec, u_scale)
    r_u = ut - uxx - spec.a * u**3
    r_v = vt - vxx - spec.b_effective * v**3
    return r_u, r_v


def residual_cubic_system_fd(x, t, spec: ExactSolutionSpec, h=1e-4):
    """Same residual with central finite differences; an independent cross-check."""
    def fields(xx, tt):
        return np.asarray(eval_exact(xx, tt, spec), dtype=float)

    c = fields(x, t)
    f_t = (fields(x, t + h) - fields(x, t - h)) / (2 * h)
    f_xx = (fields(x + h, t) - 2 * c + fields(x - h, t)) / (h * h)
    coeffs = np.array([spec.a, spec.b_effective])
    r = f_t - f_xx - coeffs * c**3
    return float(r[0]), float(r[1])
