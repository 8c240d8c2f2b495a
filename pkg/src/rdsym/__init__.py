"""Coupled nonlinear reaction-diffusion systems.

Submodules:

- :mod:`rdsym.elliptic` -- Jacobi sn/cn/dn, sd, ds and K(k) via the AGM
- :mod:`rdsym.exact_solutions` -- closed-form elliptic solutions of the cubic system
- :mod:`rdsym.symmetry` -- symmetry operators, ansatz evaluation, reduction checks
- :mod:`rdsym.ode_core` -- RK4 for the reduced ODE systems
- :mod:`rdsym.pde_solver` -- method-of-lines solver and convergence studies
- :mod:`rdsym.cli` -- ``rdsym`` command line
"""
from .errors import (
    BlowUpError,
    CFLViolation,
    ConfigError,
    DomainError,
    ModulusDegenerateError,
    PoleError,
    RDSymError,
    RHSNonFiniteError,
    SingularPointError,
)

__version__ = "0.1.0"
