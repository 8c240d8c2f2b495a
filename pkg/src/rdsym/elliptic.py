"""Jacobi elliptic functions and the complete elliptic integral K(k).

Everything is computed from the arithmetic-geometric mean: K directly, and
sn/cn/dn by descending Landen transformation with backward recurrence for
the amplitude (Abramowitz & Stegun 16.4). Functions accept scalars or numpy
arrays for the argument; the modulus ``k`` (not the parameter m = k**2) may
be a float, an array broadcastable against ``z``, or a :class:`Modulus`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, ModulusDegenerateError, PoleError

__all__ = [
    "Modulus",
    "EllipticTriple",
    "complete_K",
    "jacobi_sncndn",
    "jacobi_sd",
    "jacobi_ds",
    "sd_derivatives",
    "ds_derivatives",
    "DS_POLE_TOL",
    "K_HALF",
]

# switch to the circular / hyperbolic closed forms below this
DEGENERATE_TOL = 1e-9
DS_POLE_TOL = 1e-12
_MAX_AGM_STEPS = 64


@dataclass(frozen=True)
class Modulus:
    """Elliptic modulus ``k`` with its cached complement ``k' = sqrt(1-k^2)``."""

    k: float
    k_prime: float = field(init=False)

    def __post_init__(self):
        k = float(self.k)
        if not (0.0 <= k <= 1.0):
            raise DomainError(f"modulus must lie in [0, 1], got {k!r}")
        object.__setattr__(self, "k", k)
        # (1-k)(1+k) avoids cancellation in 1 - k*k as k -> 1
        object.__setattr__(self, "k_prime", math.sqrt((1.0 - k) * (1.0 + k)))

    def __float__(self):
        return self.k


@dataclass(frozen=True)
class EllipticTriple:
    sn: np.ndarray | float
    cn: np.ndarray | float
    dn: np.ndarray | float

    def __iter__(self):
        return iter((self.sn, self.cn, self.dn))


def _k_value(k):
    if isinstance(k, Modulus):
        return k.k
    return k


def _agm(a, b):
    for _ in range(_MAX_AGM_STEPS):
        if abs(a - b) <= 1e-16 * a:
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return 0.5 * (a + b)


def complete_K(k) -> float:
    """Complete elliptic integral of the first kind, the quarter period of sn.

    >>> round(complete_K(0.0), 15) == round(math.pi / 2, 15)
    True
    """
    k = float(_k_value(k))
    if not math.isfinite(k) or k < 0.0 or k > 1.0:
        raise DomainError(f"modulus must lie in [0, 1), got {k!r}")
    if k == 1.0:
        raise ModulusDegenerateError("K(k) diverges at k = 1")
    kp = math.sqrt((1.0 - k) * (1.0 + k))
    return math.pi / (2.0 * _agm(1.0, kp))


K_HALF = complete_K(math.sqrt(0.5))


def _landen_sncndn(z, k, kp):
    """Descending Landen / AGM evaluation, k and kp broadcast against z."""
    a = np.ones_like(k)
    b = kp.copy()
    c = k.copy()
    ratios = []
    for _ in range(_MAX_AGM_STEPS):
        if np.all(np.abs(c) <= 1e-16 * a):
            break
        a, b, c = 0.5 * (a + b), np.sqrt(a * b), 0.5 * (a - b)
        ratios.append(c / a)
    n = len(ratios)
    # reduce modulo the real period 4K = 2*pi/a_N before amplification
    period = 2.0 * np.pi / a
    z = z - period * np.round(z / period)
    phi = (2.0**n) * a * z
    for r in reversed(ratios):
        phi = 0.5 * (phi + np.arcsin(r * np.sin(phi)))
    sn = np.sin(phi)
    cn = np.cos(phi)
    # dn^2 = k'^2 + k^2 cn^2 is a sum of non-negative terms: no cancellation
    # near cn = 0, where the classical cos(phi0)/cos(phi1 - phi0) is 0/0
    dn = np.sqrt(kp * kp + k * k * cn * cn)
    return sn, cn, dn


def jacobi_sncndn(z, k) -> EllipticTriple:
    """Return ``(sn, cn, dn)`` at argument ``z`` for modulus ``k``."""
    k = _k_value(k)
    z_arr = np.asarray(z, dtype=float)
    k_arr = np.asarray(k, dtype=float)
    if not np.all(np.isfinite(z_arr)):
        raise DomainError("argument z must be finite")
    if np.any(~np.isfinite(k_arr)) or np.any(k_arr < 0.0) or np.any(k_arr > 1.0):
        raise DomainError("modulus must lie in [0, 1]")
    scalar = z_arr.ndim == 0 and k_arr.ndim == 0
    z_arr, k_arr = np.broadcast_arrays(z_arr, k_arr)
    z_arr = np.array(z_arr, dtype=float)
    k_arr = np.array(k_arr, dtype=float)
    kp = np.sqrt((1.0 - k_arr) * (1.0 + k_arr))

    sn = np.empty_like(z_arr)
    cn = np.empty_like(z_arr)
    dn = np.empty_like(z_arr)

    circ = k_arr < DEGENERATE_TOL
    hyp = kp < DEGENERATE_TOL
    gen = ~(circ | hyp)

    if np.any(circ):
        zc = z_arr[circ]
        sn[circ], cn[circ], dn[circ] = np.sin(zc), np.cos(zc), 1.0
    if np.any(hyp):
        zh = z_arr[hyp]
        sech = 1.0 / np.cosh(zh)
        sn[hyp], cn[hyp], dn[hyp] = np.tanh(zh), sech, sech
    if np.any(gen):
        sn[gen], cn[gen], dn[gen] = _landen_sncndn(z_arr[gen], k_arr[gen], kp[gen])

    if scalar:
        return EllipticTriple(float(sn), float(cn), float(dn))
    return EllipticTriple(sn, cn, dn)


def _check_sd_modulus(k):
    k_arr = np.asarray(_k_value(k), dtype=float)
    if np.any(k_arr >= 1.0):
        raise DomainError("sd requires 0 <= k < 1")


def jacobi_sd(z, k):
    """sd = sn/dn. Bounded by 1/k' on the real line."""
    _check_sd_modulus(k)
    sn, _, dn = jacobi_sncndn(z, k)
    return sn / dn


def jacobi_ds(z, k, pole_tol: float = DS_POLE_TOL):
    """ds = dn/sn; raises :class:`PoleError` where ``|sn(z)| < pole_tol``."""
    sn, _, dn = jacobi_sncndn(z, k)
    sn_arr = np.asarray(sn)
    bad = np.abs(sn_arr) < pole_tol
    if np.any(bad):
        z_bad = np.broadcast_to(np.asarray(z, dtype=float), sn_arr.shape)[bad]
        raise PoleError(float(np.ravel(z_bad)[0]))
    return dn / sn


def sd_derivatives(z, k):
    """Return ``(sd, sd', sd'')`` from the closed-form quotient-rule identities.

    sd' = cn/dn^2 and sd'' = (2 k^2 sn cn^2 - sn dn^2) / dn^3.
    """
    k2 = np.asarray(_k_value(k), dtype=float) ** 2
    sn, cn, dn = jacobi_sncndn(z, k)
    d1 = cn / dn**2
    d2 = (2.0 * k2 * sn * cn**2 - sn * dn**2) / dn**3
    return sn / dn, d1, d2


def ds_derivatives(z, k, pole_tol: float = DS_POLE_TOL):
    """Return ``(ds, ds', ds'')``: ds' = -cn/sn^2, ds'' = dn (sn^2 + 2 cn^2) / sn^3."""
    sn, cn, dn = jacobi_sncndn(z, k)
    sn_arr = np.asarray(sn)
    bad = np.abs(sn_arr) < pole_tol
    if np.any(bad):
        z_bad = np.broadcast_to(np.asarray(z, dtype=float), sn_arr.shape)[bad]
        raise PoleError(float(np.ravel(z_bad)[0]))
    d1 = -cn / sn**2
    d2 = dn * (sn**2 + 2.0 * cn**2) / sn**3
    return dn / sn, d1, d2
