"""Method-of-lines solver for two-field reaction-diffusion systems on [x_min, x_max].

    U_t = d2/dx2 (a11 U + a12 V) + F(U, V)
    V_t = d2/dx2 (a21 U + a22 V) + G(U, V)

The second difference is applied to the combinations ``A @ (U, V)`` (flux
form), so the discrete operator is ``kron(A, L)`` with ``L`` the 1-D
three-point Laplacian. Dirichlet and exact-solution boundaries pin the end
nodes; zero-flux boundaries use a reflected ghost node.

Two time integrators are provided: explicit RK4 (CFL-limited), and an IMEX
scheme with Crank-Nicolson diffusion and a Heun predictor-corrector for the
reaction, second order in time.
"""
from __future__ import annotations

import enum
import logging
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from .errors import BlowUpError, CFLViolation, ConfigError
from .exact_solutions import ExactSolutionSpec, eval_exact

log = logging.getLogger(__name__)

__all__ = [
    "Grid1D",
    "GeneralReaction",
    "ExpCoupledReaction",
    "CubicReaction",
    "RDSystem",
    "general_system",
    "exp_coupled_system",
    "cubic_system",
    "Dirichlet",
    "NeumannZero",
    "Exact",
    "FieldState",
    "Scheme",
    "SimulationConfig",
    "laplacian_of_combination",
    "laplacian_matrix",
    "step",
    "simulate",
    "ConvergenceRow",
    "convergence_study",
    "heat_equation_study",
    "discrete_integral",
    "CFL_SAFETY",
    "cfl_limit",
    "exact_ic",
    "initial_state",
    "default_dt_rule",
]

CFL_SAFETY = 0.9


@dataclass(frozen=True)
class Grid1D:
    x_min: float
    x_max: float
    nx: int

    def __post_init__(self):
        if int(self.nx) != self.nx or self.nx < 3:
            raise ConfigError(f"nx must be an integer >= 3, got {self.nx!r}", field="nx")
        if not self.x_min < self.x_max:
            raise ConfigError("x_min must be < x_max", field="x_min")

    @property
    def dx(self):
        return (self.x_max - self.x_min) / (self.nx - 1)

    @property
    def x(self):
        return np.linspace(self.x_min, self.x_max, self.nx)


# -- reactions ---------------------------------------------------------------


@dataclass(frozen=True)
class GeneralReaction:
    F: Callable
    G: Callable

    def __call__(self, U, V):
        return self.F(U, V), self.G(U, V)


@dataclass(frozen=True)
class ExpCoupledReaction:
    """F = exp(lam1 (U-V)) phi1 U,  G = exp(lam2 (U-V)) (phi1 V + phi2)."""

    lam1: float
    lam2: float
    phi1: float
    phi2: float

    def __call__(self, U, V):
        d = U - V
        return (
            np.exp(self.lam1 * d) * self.phi1 * U,
            np.exp(self.lam2 * d) * (self.phi1 * V + self.phi2),
        )


@dataclass(frozen=True)
class CubicReaction:
    """F = phi1 U^3, G = phi2 V^3; phi may be a constant or a function of U/V."""

    phi1: float | Callable = 1.0
    phi2: float | Callable = 0.0

    def __call__(self, U, V):
        if callable(self.phi1) or callable(self.phi2):
            ratio = U / V
        p1 = self.phi1(ratio) if callable(self.phi1) else self.phi1
        p2 = self.phi2(ratio) if callable(self.phi2) else self.phi2
        return p1 * U**3, p2 * V**3


@dataclass(frozen=True)
class RDSystem:
    A: np.ndarray
    reaction: Callable
    form: str = "general"

    def __post_init__(self):
        A = np.array(self.A, dtype=float)
        if A.shape != (2, 2):
            raise ConfigError("diffusion matrix must be 2x2", field="A")
        A.setflags(write=False)
        object.__setattr__(self, "A", A)


def _check_nondegenerate(A):
    det = A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0]
    alt = A[0, 0] * A[0, 1] - A[1, 0] * A[1, 1]
    if det == 0:
        warnings.warn("diffusion matrix is singular (det A = 0)", RuntimeWarning, stacklevel=3)
    if (det != 0) != (alt != 0):
        log.warning(
            "a11*a12 - a21*a22 = %g and det A = %g disagree on nondegeneracy; using det A",
            alt,
            det,
        )


def general_system(A, F, G):
    A = np.array(A, dtype=float)
    _check_nondegenerate(A)
    return RDSystem(A, GeneralReaction(F, G), "general")


def exp_coupled_system(a, b, lam1, lam2, phi1, phi2):
    """Diagonal diffusion diag(a, b) with exponential coupling."""
    return RDSystem(np.diag([a, b]), ExpCoupledReaction(lam1, lam2, phi1, phi2), "exp-coupled")


def cubic_system(phi1, phi2=0.0):
    return RDSystem(np.eye(2), CubicReaction(phi1, phi2), "cubic")


# -- boundary conditions ----------------------------------------------------


def _as_time_fn(g):
    if callable(g):
        return g
    c = float(g)
    return lambda t: c


@dataclass(frozen=True)
class Dirichlet:
    """Prescribed end values; each entry is a constant or a function of t."""

    left_U: float | Callable = 0.0
    left_V: float | Callable = 0.0
    right_U: float | Callable = 0.0
    right_V: float | Callable = 0.0

    def values(self, grid, t):
        f = _as_time_fn
        return (
            (f(self.left_U)(t), f(self.left_V)(t)),
            (f(self.right_U)(t), f(self.right_V)(t)),
        )


@dataclass(frozen=True)
class NeumannZero:
    def values(self, grid, t):
        return None


@dataclass(frozen=True)
class Exact:
    """End values taken from a closed-form solution."""

    spec: ExactSolutionSpec

    def values(self, grid, t):
        U, V = eval_exact(np.array([grid.x_min, grid.x_max]), t, self.spec)
        return (float(U[0]), float(V[0])), (float(U[1]), float(V[1]))


def _pinned(bc):
    return not isinstance(bc, NeumannZero)


# -- state ---------------------------------------------------------------------


@dataclass(frozen=True)
class FieldState:
    t: float
    U: np.ndarray
    V: np.ndarray

    def is_finite(self):
        return bool(np.all(np.isfinite(self.U)) and np.all(np.isfinite(self.V)))

    def stacked(self):
        return np.concatenate([self.U, self.V])


def _from_stacked(t, y, nx):
    return FieldState(t, y[:nx].copy(), y[nx:].copy())


def laplacian_matrix(grid: Grid1D, bc) -> sp.csr_matrix:
    """Three-point Laplacian; rows of pinned end nodes are zero."""
    n = grid.nx
    inv = 1.0 / grid.dx**2
    main = np.full(n, -2.0 * inv)
    upper = np.full(n - 1, inv)
    lower = np.full(n - 1, inv)
    if _pinned(bc):
        main[0] = main[-1] = 0.0
        upper[0] = 0.0
        lower[-1] = 0.0
    else:
        # reflected ghost: w[-1] = w[1], w[n] = w[n-2]
        upper[0] = 2.0 * inv
        lower[-1] = 2.0 * inv
    return sp.diags([lower, main, upper], [-1, 0, 1], format="csr")


def laplacian_of_combination(state: FieldState, A, grid: Grid1D, bc):
    """Second differences of a11 U + a12 V and a21 U + a22 V."""
    A = np.asarray(A, dtype=float)
    L = laplacian_matrix(grid, bc)
    w1 = A[0, 0] * state.U + A[0, 1] * state.V
    w2 = A[1, 0] * state.U + A[1, 1] * state.V
    return L @ w1, L @ w2


def discrete_integral(values, grid: Grid1D):
    """Trapezoidal integral; exactly conserved by the zero-flux Laplacian."""
    w = np.full(grid.nx, grid.dx)
    w[0] = w[-1] = 0.5 * grid.dx
    return float(w @ values)


# -- time stepping -------------------------------------------------------------


class Scheme(enum.Enum):
    ExplicitRK4 = "ExplicitRK4"
    IMEX = "IMEX"


def _max_diag(A):
    return float(max(A[0, 0], A[1, 1]))


def cfl_limit(A, grid, safety=CFL_SAFETY):
    d = _max_diag(np.asarray(A))
    if d <= 0:
        return math.inf
    return safety * grid.dx**2 / (2.0 * d)


class _Stepper:
    """Holds the assembled operators for one (system, grid, bc, dt, scheme)."""

    def __init__(self, system: RDSystem, grid: Grid1D, bc, dt, scheme=Scheme.IMEX, cfl_safety=CFL_SAFETY):
        if not dt > 0:
            raise ConfigError("dt must be positive", field="dt")
        self.system = system
        self.grid = grid
        self.bc = bc
        self.dt = float(dt)
        self.scheme = Scheme(scheme)
        self.n = grid.nx
        self._bc_cache = (None, None)
        L = laplacian_matrix(grid, bc)
        self.M = sp.kron(sp.csr_matrix(system.A), L, format="csc")
        self.mask = np.ones(2 * self.n)
        if _pinned(bc):
            for i in (0, self.n - 1, self.n, 2 * self.n - 1):
                self.mask[i] = 0.0
        if self.scheme is Scheme.ExplicitRK4:
            limit = cfl_limit(system.A, grid, cfl_safety)
            if self.dt > limit:
                raise CFLViolation(f"dt={self.dt:g} exceeds explicit limit {limit:g}")
        else:
            eye = sp.identity(2 * self.n, format="csc")
            self.lhs = splu((eye - 0.5 * self.dt * self.M).tocsc())
            self.rhs_op = (eye + 0.5 * self.dt * self.M).tocsr()

    def _reaction(self, y):
        n = self.n
        ru, rv = self.system.reaction(y[:n], y[n:])
        return np.concatenate([ru, rv]) * self.mask

    def _boundary(self, t):
        if self._bc_cache[0] != t:
            self._bc_cache = (t, self.bc.values(self.grid, t))
        return self._bc_cache[1]

    def _impose(self, y, t):
        vals = self._boundary(t)
        if vals is None:
            return y
        (ul, vl), (ur, vr) = vals
        n = self.n
        y[0], y[n - 1], y[n], y[2 * n - 1] = ul, ur, vl, vr
        return y

    def _f(self, t, y):
        y = self._impose(y.copy(), t)
        return self.M @ y + self._reaction(y)

    def advance(self, t, y):
        dt = self.dt
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            if self.scheme is Scheme.ExplicitRK4:
                k1 = self._f(t, y)
                k2 = self._f(t + 0.5 * dt, y + 0.5 * dt * k1)
                k3 = self._f(t + 0.5 * dt, y + 0.5 * dt * k2)
                k4 = self._f(t + dt, y + dt * k3)
                y_new = y + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
            else:
                base = self.rhs_op @ y
                r0 = self._reaction(y)
                y_star = self.lhs.solve(self._impose(base + dt * r0, t + dt))
                r1 = self._reaction(y_star)
                y_new = self.lhs.solve(self._impose(base + 0.5 * dt * (r0 + r1), t + dt))
            y_new = self._impose(y_new, t + dt)
        return y_new


def step(state: FieldState, system: RDSystem, grid: Grid1D, bc, dt, scheme=Scheme.IMEX) -> FieldState:
    """Advance ``state`` by one step of size ``dt``."""
    stepper = _Stepper(system, grid, bc, dt, scheme)
    y = stepper._impose(state.stacked(), state.t)
    y_new = stepper.advance(state.t, y)
    t_new = state.t + dt
    if not np.all(np.isfinite(y_new)):
        raise BlowUpError(t_new)
    return _from_stacked(t_new, y_new, grid.nx)


@dataclass(frozen=True)
class SimulationConfig:
    """Everything needed for a deterministic run.

    ``ic`` is either a callable ``x -> (U, V)`` or a pair of arrays.
    Snapshots are stored every ``stride`` steps and at the final step.
    """

    system: RDSystem
    grid: Grid1D
    bc: object
    ic: Callable | tuple
    t0: float
    t_end: float
    dt: float
    stride: int = 1
    scheme: Scheme = Scheme.IMEX
    metadata: dict = field(default_factory=dict)

    def n_steps(self):
        span = self.t_end - self.t0
        if span < 0:
            raise ConfigError("t_end must be >= t0", field="t_end")
        if not self.dt > 0:
            raise ConfigError("dt must be positive", field="dt")
        n = round(span / self.dt)
        if abs(n * self.dt - span) > 1e-9 * max(1.0, abs(span)):
            raise ConfigError("t_end - t0 must be an integer multiple of dt", field="dt")
        return n


def initial_state(config: SimulationConfig) -> FieldState:
    x = config.grid.x
    if callable(config.ic):
        U, V = config.ic(x)
    else:
        U, V = config.ic
    U = np.broadcast_to(np.asarray(U, dtype=float), x.shape).copy()
    V = np.broadcast_to(np.asarray(V, dtype=float), x.shape).copy()
    return FieldState(config.t0, U, V)


def exact_ic(spec: ExactSolutionSpec, t0):
    """Initial condition callable sampling a closed-form solution at ``t0``."""
    def ic(x):
        return eval_exact(x, t0, spec)

    return ic


def simulate(config: SimulationConfig) -> list[FieldState]:
    """Run ``config`` and return the snapshots.

    On non-finite output raises :class:`BlowUpError` whose ``time`` is the
    first bad step time and whose ``snapshots`` holds what was collected.
    """
    n = config.n_steps()
    stride = int(config.stride)
    if stride < 1:
        raise ConfigError("stride must be >= 1", field="stride")
    state0 = initial_state(config)
    snapshots = [state0]
    if n == 0:
        return snapshots
    stepper = _Stepper(config.system, config.grid, config.bc, config.dt, config.scheme)
    nx = config.grid.nx
    y = stepper._impose(state0.stacked(), config.t0)
    for i in range(n):
        t = config.t0 + i * config.dt
        y = stepper.advance(t, y)
        t_new = config.t0 + (i + 1) * config.dt
        if not np.all(np.isfinite(y)):
            err = BlowUpError(t_new)
            err.snapshots = snapshots
            raise err
        if (i + 1) % stride == 0 or i + 1 == n:
            snapshots.append(_from_stacked(t_new, y, nx))
    return snapshots


# -- convergence -----------------------------------------------------------------


@dataclass(frozen=True)
class ConvergenceRow:
    nx: int
    dx: float
    dt: float
    max_error: float
    observed_order: float | None


def _check_grids(grids):
    grids = list(grids)
    if len(grids) < 3:
        raise ConfigError("convergence study needs at least 3 grids", field="grids")
    for coarse, fine in zip(grids, grids[1:]):
        if fine - 1 != 2 * (coarse - 1):
            raise ConfigError("successive grids must double nx - 1", field="grids")
    return grids


def _study(system, exact, bc, grids, dt_rule, t0, t_end, x_range, scheme):
    rows = []
    prev = None
    for nx in _check_grids(grids):
        grid = Grid1D(x_range[0], x_range[1], nx)
        dt_req = dt_rule(nx)
        n = max(1, math.ceil((t_end - t0) / dt_req - 1e-9))
        dt = (t_end - t0) / n
        cfg = SimulationConfig(system, grid, bc, lambda x: exact(x, t0), t0, t0 + n * dt, dt, n, scheme)
        final = simulate(cfg)[-1]
        U_ex, V_ex = exact(grid.x, final.t)
        err = float(max(np.max(np.abs(final.U - U_ex)), np.max(np.abs(final.V - V_ex))))
        order = None if prev is None else math.log2(prev / err)
        rows.append(ConvergenceRow(nx, grid.dx, dt, err, order))
        prev = err
    return rows


def default_dt_rule(nx, x_range=(0.0, 1.0), factor=2.0):
    dx = (x_range[1] - x_range[0]) / (nx - 1)
    return factor * dx * dx


def convergence_study(
    spec: ExactSolutionSpec,
    grids: Sequence[int] = (51, 101, 201),
    dt_rule: Callable[[int], float] = default_dt_rule,
    t0: float = 0.1,
    t_end: float = 0.5,
    x_range=(0.0, 1.0),
    scheme=Scheme.IMEX,
):
    """Grid refinement against a closed-form solution of the cubic system.

    Initial data and boundary values come from ``spec``; the error is the
    max over both fields at ``t_end``; ``observed_order`` compares each row
    with the previous (coarser) one.
    """
    system = cubic_system(spec.a, spec.b_effective)

    def exact(x, t):
        return eval_exact(x, t, spec)

    return _study(system, exact, Exact(spec), grids, dt_rule, t0, t_end, x_range, scheme)


def heat_equation_study(
    grids: Sequence[int] = (51, 101, 201),
    dt_rule: Callable[[int], float] = default_dt_rule,
    t_end: float = 0.1,
    scheme=Scheme.IMEX,
):
    """Pure diffusion against the decaying modes exp(-pi^2 t) sin(pi x), exp(-4 pi^2 t) sin(2 pi x)."""
    zero = lambda U, V: np.zeros_like(U)  # noqa: E731
    system = RDSystem(np.eye(2), GeneralReaction(zero, zero), "diffusion")

    def exact(x, t):
        return (
            np.exp(-np.pi**2 * t) * np.sin(np.pi * x),
            np.exp(-4 * np.pi**2 * t) * np.sin(2 * np.pi * x),
        )

    return _study(system, exact, Dirichlet(), grids, dt_rule, 0.0, t_end, (0.0, 1.0), scheme)
