"""Invariant suites behind ``rdsym verify``.

Each suite returns a list of :class:`Check`. Status ``INFO`` marks a
measurement that is reported but never fails the run.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .elliptic import (
    K_HALF,
    complete_K,
    jacobi_ds,
    jacobi_sd,
    jacobi_sncndn,
)
from .exact_solutions import (
    CaseTag,
    ExactSolutionSpec,
    residual_cubic_system,
    residual_cubic_system_fd,
)
from .ode_core import (
    cubic_reduced_system,
    derived_lie_reduced_system,
    integrate_rk4,
    sd_matched_initial_state,
    trajectory_energy,
)
from .pde_solver import convergence_study, heat_equation_study
from .symmetry import (
    LieReductionParams,
    Profile,
    conditional_ansatz,
    conditional_operator,
    dilatation_d1,
    exp_coupled_residual,
    invariant_surface_residual,
    lie_ansatz,
    lie_ansatz_eval,
    lie_operator,
    lie_similarity_z,
    linear_combination,
    polynomial_profile,
    reduction_consistency_check,
    translation_operator,
)

SUITES = ("elliptic", "exact", "symmetry", "reduction", "convergence")

K_REFERENCE = 1.8540746773013719
ORDER_BAND = (1.7, 2.3)
RK4_RATIO_BAND = (12.0, 20.0)
# max end-time error of the nx=201 manufactured run; first passing run gave 4.26e-05
PDE_ERROR_BOUND = 1e-4
SQRT_HALF = math.sqrt(0.5)


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    value: float
    tolerance: str
    status: str
    detail: str = ""

    @property
    def passed(self):
        return self.status != "FAIL"


def _below(suite, name, value, tol, detail=""):
    return Check(suite, name, float(value), f"< {tol:g}", "PASS" if value < tol else "FAIL", detail)


def _above(suite, name, value, tol, detail=""):
    return Check(suite, name, float(value), f"> {tol:g}", "PASS" if value > tol else "FAIL", detail)


def _within(suite, name, value, band, detail=""):
    lo, hi = band
    ok = lo <= value <= hi
    return Check(suite, name, float(value), f"in [{lo:g}, {hi:g}]", "PASS" if ok else "FAIL", detail)


# -- elliptic ----------------------------------------------------------------


def fd_second(f, z, h=1e-4):
    return (f(z + h) - 2.0 * f(z) + f(z - h)) / (h * h)


def elliptic_suite(rng):
    S = "elliptic"
    z = rng.uniform(-50.0, 50.0, 10_000)
    k = rng.uniform(0.0, 0.999, 10_000)
    sn, cn, dn = jacobi_sncndn(z, k)
    out = [
        _below(S, "max|sn^2+cn^2-1|", np.max(np.abs(sn**2 + cn**2 - 1.0)), 1e-12),
        _below(S, "max|dn^2+k^2 sn^2-1|", np.max(np.abs(dn**2 + k**2 * sn**2 - 1.0)), 1e-12),
        _below(S, "|K(1/sqrt2)-1.8540746773013719|", abs(complete_K(SQRT_HALF) - K_REFERENCE), 1e-13),
    ]
    zs = np.linspace(0.3, 3.0, 102)[1:-1]  # open interval
    sd = lambda x: jacobi_sd(x, SQRT_HALF)  # noqa: E731
    ds = lambda x: jacobi_ds(x, SQRT_HALF)  # noqa: E731
    out.append(_below(S, "max|sd''+sd^3/2| (fd h=1e-4)", np.max(np.abs(fd_second(sd, zs) + 0.5 * sd(zs) ** 3)), 1e-5))
    out.append(_below(S, "max|ds''-2 ds^3| (fd h=1e-4)", np.max(np.abs(fd_second(ds, zs) - 2.0 * ds(zs) ** 3)), 1e-5))
    zz = rng.uniform(-50.0, 50.0, 2_000)
    sn_h = np.asarray(jacobi_sncndn(zz, SQRT_HALF).sn)
    zz = zz[np.abs(sn_h) > 1e-6]
    out.append(_below(S, "max|sd*ds-1|", np.max(np.abs(sd(zz) * ds(zz) - 1.0)), 1e-10))
    out.append(_below(S, "max|sd(z+4K)-sd(z)|", np.max(np.abs(sd(zz + 4 * K_HALF) - sd(zz))), 1e-10))
    return out


# -- exact solutions ---------------------------------------------------------


def exact_suite(rng):
    S = "exact"
    spec = ExactSolutionSpec(CaseTag.EllipticPair, a=1.0, b=-1.0, k1=1.0)
    x = rng.uniform(0.0, 1.0, 1000)
    t = rng.uniform(0.1, 0.5, 1000)
    r_u, r_v = residual_cubic_system(x, t, spec)
    out = [_below(S, "case1 max residual (analytic)", max(np.max(np.abs(r_u)), np.max(np.abs(r_v))), 1e-8)]

    worst = 0.0
    for _ in range(200):
        s = ExactSolutionSpec(
            CaseTag.EllipticPair,
            a=rng.uniform(1e-3, 5.0),
            b=-rng.uniform(1e-3, 5.0),
            k1=rng.uniform(0.5, 2.0),
        )
        xs, ts = rng.uniform(0, 1, 5), rng.uniform(0.1, 0.5, 5)
        # k1 > 1 can push z past 2K; keep only pole-free points
        z = 0.5 * xs**2 + s.k1 * xs + 3 * ts
        keep = (z > 0.05) & (z < 2 * K_HALF - 0.05)
        if not np.any(keep):
            continue
        ru, rv = residual_cubic_system(xs[keep], ts[keep], s)
        # normalised by field magnitude: large coefficients scale U, V
        scale = 1.0 + s.u_coefficient**3 + s.v_coefficient**3
        worst = max(worst, float(np.max(np.abs(ru))) / scale, float(np.max(np.abs(rv))) / scale)
    out.append(_below(S, "random (a,b,k1) max residual/scale", worst, 1e-8))

    fd = max(max(map(abs, residual_cubic_system_fd(xi, ti, spec))) for xi, ti in zip(x[:100], t[:100]))
    out.append(_below(S, "case1 max residual (finite differences)", fd, 1e-4))

    spec2 = ExactSolutionSpec(CaseTag.EllipticPlusLinear, a=1.0, k1=1.0, C1=1.0, C2=0.5)
    r_u2, r_v2 = residual_cubic_system(x, t, spec2)
    out.append(_below(S, "case2 max U residual", np.max(np.abs(r_u2)), 1e-8))
    out.append(_below(S, "case2 max V residual", np.max(np.abs(r_v2)), 1e-12))
    r_bad, _ = residual_cubic_system(0.3, 0.2, spec, u_scale=1.01)
    out.append(_above(S, "perturbed U detected", abs(r_bad), 1e-3))
    return out


# -- symmetry ----------------------------------------------------------------


def random_cubic_profile(rng, scale=1.0):
    return polynomial_profile(rng.uniform(-scale, scale, 4))


def symmetry_suite(rng):
    S = "symmetry"
    worst = 0.0
    count = 0
    while count < 1000:
        k1 = rng.uniform(-1.0, 2.0)
        x = rng.uniform(-2.0, 2.0)
        if abs(x + k1) <= 0.1:
            continue
        t = rng.uniform(0.0, 1.0)
        fields = conditional_ansatz(random_cubic_profile(rng), random_cubic_profile(rng), k1)
        q = invariant_surface_residual(conditional_operator(k1), fields, t, x)
        worst = max(worst, abs(q[0]), abs(q[1]))
        count += 1
    out = [_below(S, "conditional operator on conditional ansatz", worst, 1e-10)]

    worst_z = 0.0
    worst_q = 0.0
    worst_lin = 0.0
    literal = 0.0
    for _ in range(200):
        alpha, beta, nu, lam = rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0), rng.uniform(-0.2, 1.0), rng.uniform(0.5, 3.0)
        t, x = rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)
        _, z_t, z_x, _ = lie_similarity_z(alpha, beta, nu, t, x)
        worst_z = max(worst_z, abs((alpha + 2 * nu * t) * z_t + (beta + nu * x) * z_x))
        fields = lie_ansatz(random_cubic_profile(rng, 0.3), random_cubic_profile(rng, 0.3), alpha, beta, nu, lam)
        q = invariant_surface_residual(lie_operator(alpha, beta, nu, lam), fields, t, x)
        worst_q = max(worst_q, abs(q[0]), abs(q[1]))
        ql = invariant_surface_residual(lie_operator(alpha, beta, nu, lam, variant="literal"), fields, t, x)
        literal = max(literal, abs(ql[1]))
        direct = lie_operator(alpha, beta, nu, lam)
        summed = linear_combination([(1.0, translation_operator(alpha, beta)), (nu, dilatation_d1(lam, "ansatz"))])
        U, V = rng.uniform(-1, 1, 2)
        worst_lin = max(worst_lin, max(abs(a - b) for a, b in zip(direct.coefficients(t, x, U, V), summed.coefficients(t, x, U, V))))
    out.append(_below(S, "z annihilated by characteristic field", worst_z, 1e-12))
    out.append(_below(S, "X0+nu*D1 (ansatz form) on Lie ansatz", worst_q, 1e-10))
    out.append(_below(S, "X0+nu*D1 coefficientwise linearity", worst_lin, 1e-14))
    out.append(Check(S, "X0+nu*D1 (literal B-hat) V-channel residual", literal, "report", "INFO",
                     "literal B-hat does not leave the log ansatz invariant"))
    return out


# -- reduction -----------------------------------------------------------------


def reduction_suite(rng):
    S = "reduction"
    w1 = polynomial_profile([0.1, 0.2, -0.05, 0.01])
    w2 = polynomial_profile([0.3, -0.1, 0.02, -0.002])
    pts = list(zip(rng.uniform(0.1, 1.0, 50), rng.uniform(0.1, 1.0, 50)))
    params = LieReductionParams(nu=1, alpha=1, beta=1, lam=1, a=1, b=1, phi1=0.5, phi2=1.5)
    rep = reduction_consistency_check(w1, w2, params, [(t, x) for t, x in pts])
    out = [
        Check(S, "printed reduced system vs ansatz", rep.max_discrepancy, "report", "INFO",
              f"verdict={rep.verdict}"),
        _below(S, "derived reduced system vs ansatz", rep.derived_max_discrepancy, 1e-8),
    ]

    # cubic reduced ODE against the closed form
    system = cubic_reduced_system(1.0)
    y0 = sd_matched_initial_state(1.0)

    def err(h):
        tr = integrate_rk4(system, y0, (0.0, 3.0), h)
        return tr, float(np.max(np.abs(tr.states[:, 0] - jacobi_sd(tr.z_values, SQRT_HALF) / math.sqrt(2))))

    tr, e = err(1e-3)
    out.append(_below(S, "RK4 cubic reduced ODE vs sd/sqrt2 (h=1e-3)", e, 1e-8))
    E = trajectory_energy(tr, 1.0)
    out.append(_below(S, "RK4 relative energy drift", np.max(np.abs(E - E[0])) / abs(E[0]), 1e-6))
    out.append(_within(S, "RK4 error ratio on halving h=0.05", err(0.05)[1] / err(0.025)[1], RK4_RATIO_BAND))
    long = integrate_rk4(system, y0, (0.0, 10.0), 1e-3)
    back = integrate_rk4(system, long.final, (10.0, 0.0), 1e-3)
    out.append(_below(S, "RK4 forward/backward return", np.max(np.abs(back.final - y0)), 1e-8))

    closed = LieReductionParams(nu=1, alpha=1, beta=1, lam=1, a=1, b=1, phi1=0.0, phi2=1.5, ln_sign=1)
    out.append(_below(S, "derived ODE trajectory back in the PDE", derived_backsubstitution(closed), 1e-5))
    return out


def derived_backsubstitution(params, y0=(0.2, 0.1, 0.1, -0.05), z_span=(0.5, 5.0), h=1e-3, x=0.5):
    """Integrate the derived reduced system, rebuild the fields, return the max PDE residual."""
    system = derived_lie_reduced_system(params)
    tr = integrate_rk4(system, np.array(y0), z_span, h)
    s = params.nu * x + params.beta
    worst = 0.0
    for z, y in zip(tr.z_values[::50], tr.states[::50]):
        dy = system.rhs(z, y)
        p1 = Profile(lambda _z, v=y[0]: v, lambda _z, v=y[1]: v, lambda _z, v=dy[1]: v)
        p2 = Profile(lambda _z, v=y[2]: v, lambda _z, v=y[3]: v, lambda _z, v=dy[3]: v)
        # choose t so that z(t, x) hits the trajectory node
        t = (2 * s * s / z - params.alpha) / (2 * params.nu)
        pt = lie_ansatz_eval(p1, p2, params.alpha, params.beta, params.nu, params.lam, t, x, params.ln_sign)
        worst = max(worst, *map(abs, exp_coupled_residual(pt, params)))
    return worst


# -- convergence ---------------------------------------------------------------


def convergence_suite(rng):
    S = "convergence"
    spec = ExactSolutionSpec(CaseTag.EllipticPair, a=1.0, b=-1.0, k1=1.0)
    rows = convergence_study(spec)
    out = []
    for row in rows[1:]:
        out.append(_within(S, f"cubic manufactured order at nx={row.nx}", row.observed_order, ORDER_BAND))
    out.append(_below(S, "cubic manufactured max error at nx=201", rows[-1].max_error, PDE_ERROR_BOUND))
    for row in heat_equation_study()[1:]:
        out.append(_within(S, f"heat-kernel order at nx={row.nx}", row.observed_order, ORDER_BAND))
    return out


_RUNNERS = {
    "elliptic": elliptic_suite,
    "exact": exact_suite,
    "symmetry": symmetry_suite,
    "reduction": reduction_suite,
    "convergence": convergence_suite,
}


def run_suites(suite="all", seed=42):
    names = SUITES if suite == "all" else (suite,)
    checks = []
    for name in names:
        # independent stream per suite so one suite's sampling never shifts another's
        rng = np.random.default_rng([seed, SUITES.index(name)])
        checks.extend(_RUNNERS[name](rng))
    return checks


def format_report(checks):
    lines = []
    for c in checks:
        extra = f"  ({c.detail})" if c.detail else ""
        lines.append(f"{c.status:4s}  {c.suite:11s}  {c.name}: {c.value:.6e} {c.tolerance}{extra}")
    n_fail = sum(not c.passed for c in checks)
    lines.append(f"{len(checks)} checks, {n_fail} failed")
    return "\n".join(lines) + "\n"
