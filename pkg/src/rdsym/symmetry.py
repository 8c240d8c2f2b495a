"""Symmetry operators, ansatz evaluators and reduction checks.

A first-order operator on (t, x, U, V) space is stored as its four
coefficient functions::

    X = xi_t d/dt + xi_x d/dx + eta_U d/dU + eta_V d/dV

Solutions invariant under X satisfy the invariant-surface conditions
``xi_t F_t + xi_x F_x - eta_F = 0`` for F in (U, V); that characteristic is
what :func:`invariant_surface_residual` evaluates.

Two ansatz families are supported:

* Lie (dilatation + translation)::

      U = w1(z),  V = sigma (2/lam) ln(nu x + beta) + w2(z),
      z = 2 (nu x + beta)^2 / (2 nu t + alpha)

  ``sigma = -1`` is the default. The "printed" reduced ODEs below match
  only ``sigma = +1``; both signs are supported so the mismatch can be
  measured rather than assumed.

* conditional::

      U = (x+k1) w1(z),  V = (x+k1) w2(z),  z = x^2/2 + k1 x + 3t
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .elliptic import ds_derivatives, sd_derivatives
from .errors import (
    DomainError,
    LogDomainError,
    SingularPointError,
    TimeSingularError,
)

Coefficient = Callable[[float, float, float, float], float]

# B of the dilatation generator; B-hat = b_ab u_b d/du_a = U d/dV
B_MATRIX = ((0.0, 0.0), (1.0, 0.0))

TIME_SINGULAR_TOL = 1e-14


def _zero(t, x, U, V):
    return 0.0


def _const(c):
    def f(t, x, U, V):
        return c

    return f


@dataclass(frozen=True)
class SymmetryOperator:
    xi_t: Coefficient
    xi_x: Coefficient
    eta_U: Coefficient
    eta_V: Coefficient
    name: str = "X"

    def coefficients(self, t, x, U, V):
        try:
            out = tuple(
                float(f(t, x, U, V))
                for f in (self.xi_t, self.xi_x, self.eta_U, self.eta_V)
            )
        except ZeroDivisionError as exc:
            raise SingularPointError(f"{self.name} singular at t={t}, x={x}") from exc
        if not all(math.isfinite(c) for c in out):
            raise SingularPointError(f"{self.name} singular at t={t}, x={x}")
        return out

    def __add__(self, other):
        return linear_combination([(1.0, self), (1.0, other)], f"{self.name}+{other.name}")

    def scaled(self, c):
        return linear_combination([(c, self)], f"{c}*{self.name}")


def linear_combination(terms, name="X"):
    """Coefficient-wise sum of ``c_i * X_i`` for ``terms = [(c_i, X_i), ...]``."""
    terms = list(terms)

    def comb(attr):
        def f(t, x, U, V):
            return sum(c * getattr(op, attr)(t, x, U, V) for c, op in terms)

        return f

    return SymmetryOperator(comb("xi_t"), comb("xi_x"), comb("eta_U"), comb("eta_V"), name)


def translation_operator(alpha, beta):
    """X0 = alpha d/dt + beta d/dx."""
    return SymmetryOperator(_const(alpha), _const(beta), _zero, _zero, "X0")


def _dilatation_base():
    return (lambda t, x, U, V: 2.0 * t), (lambda t, x, U, V: x)


def dilatation_d1(lam, variant="literal", B=B_MATRIX, ln_sign=-1):
    """D1 = 2t d/dt + x d/dx - (2/lam) B-hat.

    ``variant="literal"`` applies B-hat = b_ab u_b d/du_a as written, which
    for the default B gives eta_V = -(2/lam) U. ``variant="ansatz"`` instead
    uses the shift generator that leaves the logarithmic Lie ansatz invariant,
    eta_V = ln_sign * 2/lam (eta_U = 0).
    """
    xt, xx = _dilatation_base()
    if variant == "literal":
        (b11, b12), (b21, b22) = B

        def eta_U(t, x, U, V):
            return -(2.0 / lam) * (b11 * U + b12 * V)

        def eta_V(t, x, U, V):
            return -(2.0 / lam) * (b21 * U + b22 * V)

    elif variant == "ansatz":
        eta_U = _zero
        eta_V = _const(ln_sign * 2.0 / lam)
    else:
        raise DomainError(f"unknown D1 variant {variant!r}")
    return SymmetryOperator(xt, xx, eta_U, eta_V, f"D1[{variant}]")


def dilatation_d2(lam, n):
    """D2 = 2t d/dt + x d/dx - (2/lam)(d/dU - 2n U d/dV)."""
    xt, xx = _dilatation_base()
    return SymmetryOperator(
        xt,
        xx,
        _const(-2.0 / lam),
        lambda t, x, U, V: 4.0 * n * U / lam,
        "D2",
    )


def dilatation_d3(lam, p):
    """D3 = 2t d/dt + x d/dx - (2/lam) p_a d/du_a with constant p = (p1, p2)."""
    p1, p2 = p
    xt, xx = _dilatation_base()
    return SymmetryOperator(xt, xx, _const(-2.0 * p1 / lam), _const(-2.0 * p2 / lam), "D3")


def lie_operator(alpha, beta, nu, lam, variant="ansatz", ln_sign=-1):
    """X = X0 + nu D1."""
    op = linear_combination(
        [(1.0, translation_operator(alpha, beta)), (nu, dilatation_d1(lam, variant, ln_sign=ln_sign))],
        f"X0+nu*D1[{variant}]",
    )
    return op


def conditional_operator(k1):
    """d/dt - 3/(x+k1) d/dx - 3/(x+k1)^2 (U d/dU + V d/dV)."""
    return SymmetryOperator(
        _const(1.0),
        lambda t, x, U, V: -3.0 / (x + k1),
        lambda t, x, U, V: -3.0 * U / (x + k1) ** 2,
        lambda t, x, U, V: -3.0 * V / (x + k1) ** 2,
        "Xcond",
    )


# -- profiles and ansatz evaluation -----------------------------------------


@dataclass(frozen=True)
class Profile:
    """A scalar function of z together with its first two derivatives."""

    f: Callable
    df: Callable
    d2f: Callable

    def __call__(self, z):
        return self.f(z), self.df(z), self.d2f(z)


def polynomial_profile(coeffs):
    """Profile for ``sum(coeffs[i] * z**i)``."""
    p = np.polynomial.Polynomial(coeffs)
    dp = p.deriv()
    d2p = dp.deriv()
    return Profile(p, dp, d2p)


def sd_profile(a, modulus=math.sqrt(0.5)):
    """z -> sd(z)/sqrt(2a); solves w'' + a w^3 = 0 at modulus 1/sqrt2."""
    c = 1.0 / math.sqrt(2.0 * a)
    return Profile(
        lambda z: c * sd_derivatives(z, modulus)[0],
        lambda z: c * sd_derivatives(z, modulus)[1],
        lambda z: c * sd_derivatives(z, modulus)[2],
    )


def ds_profile(b, modulus=math.sqrt(0.5)):
    """z -> sqrt(-2/b) ds(z); solves w'' + b w^3 = 0 (b < 0) at modulus 1/sqrt2."""
    c = math.sqrt(-2.0 / b)
    return Profile(
        lambda z: c * ds_derivatives(z, modulus)[0],
        lambda z: c * ds_derivatives(z, modulus)[1],
        lambda z: c * ds_derivatives(z, modulus)[2],
    )


@dataclass(frozen=True)
class Jet:
    """Field value with its t, x and xx partial derivatives at one point."""

    value: float
    t: float
    x: float
    xx: float


@dataclass(frozen=True)
class AnsatzPoint:
    z: float
    U: Jet
    V: Jet


@dataclass(frozen=True)
class AnsatzFields:
    """(t, x) -> AnsatzPoint with analytic derivatives."""

    evaluate: Callable[[float, float], AnsatzPoint]
    kind: str = ""
    params: dict = field(default_factory=dict)

    def __call__(self, t, x):
        return self.evaluate(t, x)


def lie_similarity_z(alpha, beta, nu, t, x):
    """z = 2 (nu x + beta)^2 / (2 nu t + alpha) and its t, x, xx partials."""
    s = nu * x + beta
    tau = 2.0 * nu * t + alpha
    if abs(tau) < TIME_SINGULAR_TOL:
        raise TimeSingularError(f"2*nu*t + alpha vanishes at t={t}")
    z = 2.0 * s * s / tau
    return z, -4.0 * nu * s * s / tau**2, 4.0 * nu * s / tau, 4.0 * nu * nu / tau


def lie_ansatz_eval(w1: Profile, w2: Profile, alpha, beta, nu, lam, t, x, ln_sign=-1):
    """Evaluate the Lie ansatz and its derivatives at (t, x)."""
    s = nu * x + beta
    if s <= 0:
        raise LogDomainError(f"nu*x + beta = {s} <= 0")
    z, z_t, z_x, z_xx = lie_similarity_z(alpha, beta, nu, t, x)
    f1, d1, dd1 = w1(z)
    f2, d2, dd2 = w2(z)
    g = ln_sign * 2.0 / lam
    U = Jet(f1, d1 * z_t, d1 * z_x, dd1 * z_x**2 + d1 * z_xx)
    V = Jet(
        g * math.log(s) + f2,
        d2 * z_t,
        g * nu / s + d2 * z_x,
        -g * nu * nu / (s * s) + dd2 * z_x**2 + d2 * z_xx,
    )
    return AnsatzPoint(z, U, V)


def lie_ansatz(w1, w2, alpha, beta, nu, lam, ln_sign=-1):
    params = dict(alpha=alpha, beta=beta, nu=nu, lam=lam, ln_sign=ln_sign)
    return AnsatzFields(
        lambda t, x: lie_ansatz_eval(w1, w2, alpha, beta, nu, lam, t, x, ln_sign),
        "lie",
        params,
    )


def conditional_ansatz_eval(omega1: Profile, omega2: Profile, k1, t, x):
    """U = (x+k1) w1(z), V = (x+k1) w2(z), z = x^2/2 + k1 x + 3t."""
    s = x + k1
    z = 0.5 * x * x + k1 * x + 3.0 * t

    def jet(profile):
        f, d1, d2 = profile(z)
        return Jet(s * f, 3.0 * s * d1, f + s * s * d1, 3.0 * s * d1 + s**3 * d2)

    return AnsatzPoint(z, jet(omega1), jet(omega2))


def conditional_ansatz(omega1, omega2, k1):
    return AnsatzFields(
        lambda t, x: conditional_ansatz_eval(omega1, omega2, k1, t, x),
        "conditional",
        dict(k1=k1),
    )


def invariant_surface_residual(op: SymmetryOperator, fields, t, x):
    """(qU, qV) = xi_t F_t + xi_x F_x - eta_F for F = U, V at (t, x)."""
    p = fields(t, x) if not isinstance(fields, AnsatzPoint) else fields
    xi_t, xi_x, eta_u, eta_v = op.coefficients(t, x, p.U.value, p.V.value)
    q_u = xi_t * p.U.t + xi_x * p.U.x - eta_u
    q_v = xi_t * p.V.t + xi_x * p.V.x - eta_v
    return q_u, q_v


# -- the Lie reduction -------------------------------------------------------


@dataclass(frozen=True)
class LieReductionParams:
    """Parameters of the exp-coupled system under the Lie ansatz.

    ``lam1``/``lam2`` are the exponents of the two reaction terms and default
    to the ansatz exponent ``lam``.
    """

    nu: float
    alpha: float
    beta: float
    lam: float
    a: float
    b: float
    phi1: float
    phi2: float
    lam1: float | None = None
    lam2: float | None = None
    ln_sign: int = -1

    @property
    def l1(self):
        return self.lam if self.lam1 is None else self.lam1

    @property
    def l2(self):
        return self.lam if self.lam2 is None else self.lam2


def exp_coupled_residual(point: AnsatzPoint, p: LieReductionParams):
    """Residual of U_t = a U_xx + e^{l1(U-V)} phi1 U, V_t = b V_xx + e^{l2(U-V)} (phi1 V + phi2)."""
    U, V = point.U, point.V
    diff = U.value - V.value
    r_u = U.t - p.a * U.xx - math.exp(p.l1 * diff) * p.phi1 * U.value
    r_v = V.t - p.b * V.xx - math.exp(p.l2 * diff) * (p.phi1 * V.value + p.phi2)
    return r_u, r_v


def printed_reduced_residual(z, w1, w2, p: LieReductionParams):
    """LHS - RHS of the reference ("printed") reduced system; profiles are (f, f', f'')."""
    f1, d1, dd1 = w1
    f2, d2, dd2 = w2
    nu, a, b, lam = p.nu, p.a, p.b, p.lam
    e = math.exp(lam * (f1 - f2))
    r1 = 2 * nu * z**2 * d1 + 4 * nu**2 * z * d1 + 8 * nu**2 * a * z**2 * dd1 + 2 * e * p.phi1 * f1
    r2 = (
        nu * z**2 * d2
        + nu**2 * b / lam
        + 2 * nu**2 * b * z * d2
        + 4 * nu**2 * b * z**2 * dd2
        + e * (p.phi1 * f2 + p.phi2)
    )
    return r1, r2


def derived_reduced_residual(z, s, w1, w2, p: LieReductionParams):
    """Chain-rule reduction, normalised like the printed form.

    ``s = nu x + beta``. Equals ``(-2 s^2, -s^2)`` times the PDE residual. The
    dependence on ``s`` drops out only when :func:`derived_reduction_closes`.
    """
    f1, d1, dd1 = w1
    f2, d2, dd2 = w2
    nu, a, b, lam, sg = p.nu, p.a, p.b, p.lam, p.ln_sign
    dw = f1 - f2
    pow1 = s ** (2.0 - 2.0 * sg * p.l1 / lam)
    pow2 = s ** (2.0 - 2.0 * sg * p.l2 / lam)
    r1 = (
        2 * nu * z**2 * d1
        + 4 * a * nu**2 * z * d1
        + 8 * a * nu**2 * z**2 * dd1
        + 2 * pow1 * math.exp(p.l1 * dw) * p.phi1 * f1
    )
    log_term = sg * (2.0 / lam) * math.log(s) if p.phi1 != 0 else 0.0
    r2 = (
        nu * z**2 * d2
        - 2 * sg * b * nu**2 / lam
        + 2 * b * nu**2 * z * d2
        + 4 * b * nu**2 * z**2 * dd2
        + pow2 * math.exp(p.l2 * dw) * (p.phi1 * (f2 + log_term) + p.phi2)
    )
    return r1, r2


DERIVED_SYSTEM_TEXT = (
    "2 nu z^2 w1' + 4 a nu^2 z w1' + 8 a nu^2 z^2 w1'' "
    "= -2 s^(2-2 sigma l1/lam) exp(l1 (w1-w2)) phi1 w1\n"
    "nu z^2 w2' - 2 sigma b nu^2/lam + 2 b nu^2 z w2' + 4 b nu^2 z^2 w2'' "
    "= -s^(2-2 sigma l2/lam) exp(l2 (w1-w2)) (phi1 (w2 + sigma (2/lam) ln s) + phi2)\n"
    "with s = nu x + beta, sigma = sign of the log term in the V ansatz"
)

PRINTED_SYSTEM_TEXT = (
    "2 nu z^2 w1' + 4 nu^2 z w1' + 8 nu^2 a z^2 w1'' = -2 exp(lam (w1-w2)) phi1 w1\n"
    "nu z^2 w2' + nu^2 b/lam + 2 nu^2 b z w2' + 4 nu^2 b z^2 w2'' "
    "= -exp(lam (w1-w2)) (phi1 w2 + phi2)"
)


def derived_reduction_closes(p: LieReductionParams):
    """True when the derived reduction depends on z alone (a genuine ODE system)."""
    if p.nu == 0:
        return True
    u_ok = p.phi1 == 0 or p.ln_sign * p.l1 == p.lam
    v_ok = p.phi1 == 0 and (p.phi2 == 0 or p.ln_sign * p.l2 == p.lam)
    return u_ok and v_ok


@dataclass(frozen=True)
class PointDiscrepancy:
    t: float
    x: float
    z: float
    printed: float
    derived: float


@dataclass(frozen=True)
class ReductionReport:
    verdict: str
    max_discrepancy: float
    derived_max_discrepancy: float
    derived_closes: bool
    per_point: list
    printed_system: str = PRINTED_SYSTEM_TEXT
    derived_system: str = DERIVED_SYSTEM_TEXT

    @property
    def consistent(self):
        return self.verdict == "consistent"


def _relative(diff, terms):
    return abs(diff) / (1.0 + max(abs(v) for v in terms))


def reduction_consistency_check(
    w1: Profile,
    w2: Profile,
    params: LieReductionParams,
    sample_points: Sequence[tuple[float, float]],
    tol: float = 1e-8,
):
    """Compare the PDE residual of the ansatz against both reduced forms.

    The PDE residual (r_U, r_V) is rescaled by (-2 s^2, -s^2) and compared
    with the printed and derived reduced residuals at the same z.
    Discrepancies are normalised by ``1 + max |term|``.
    """
    per_point = []
    for t, x in sample_points:
        pt = lie_ansatz_eval(
            w1, w2, params.alpha, params.beta, params.nu, params.lam, t, x, params.ln_sign
        )
        s = params.nu * x + params.beta
        r_u, r_v = exp_coupled_residual(pt, params)
        scaled = (-2.0 * s * s * r_u, -s * s * r_v)
        j1, j2 = w1(pt.z), w2(pt.z)
        printed = printed_reduced_residual(pt.z, j1, j2, params)
        derived = derived_reduced_residual(pt.z, s, j1, j2, params)
        d_printed = max(
            _relative(scaled[i] - printed[i], (scaled[i], printed[i])) for i in range(2)
        )
        d_derived = max(
            _relative(scaled[i] - derived[i], (scaled[i], derived[i])) for i in range(2)
        )
        per_point.append(PointDiscrepancy(t, x, pt.z, d_printed, d_derived))
    max_p = max((d.printed for d in per_point), default=0.0)
    max_d = max((d.derived for d in per_point), default=0.0)
    return ReductionReport(
        verdict="consistent" if max_p < tol else "inconsistent",
        max_discrepancy=max_p,
        derived_max_discrepancy=max_d,
        derived_closes=derived_reduction_closes(params),
        per_point=per_point,
    )
