"""Closed-form solutions of the cubic reaction-diffusion system.

    U_t - U_xx = a U^3,   V_t - V_xx = b V^3
"""
import numpy as np

from rdsym.exact_solutions import (
    CaseTag,
    ExactSolutionSpec,
    eval_exact,
    residual_cubic_system,
    residual_cubic_system_fd,
    singular_times,
)

pair = ExactSolutionSpec(CaseTag.EllipticPair, a=1.0, b=-1.0, k1=1.0)

# %% where is it safe to evaluate?
print("poles in [0,1]x[0.1,0.5]:", singular_times(pair, (0, 1), (0.1, 0.5)))
for c in singular_times(pair, (0, 1), (0.0, 1.3)):
    print("  ", c.describe(), " t(x=0.5) =", c.t_of_x(0.5))

# %% values on a small grid
x = np.linspace(0, 1, 6)
U, V = eval_exact(x, 0.3, pair)
print("U(x, 0.3) =", np.round(U, 6))
print("V(x, 0.3) =", np.round(V, 6))

# %% it really solves the system
r_u, r_v = residual_cubic_system(x, 0.3, pair)
print("analytic residual:", np.max(np.abs(r_u)), np.max(np.abs(r_v)))
print("finite-difference residual at x=0.4:", residual_cubic_system_fd(0.4, 0.3, pair))
print("with U scaled by 1.01:", residual_cubic_system(0.4, 0.3, pair, u_scale=1.01)[0])

# %% the b = 0 branch keeps U and makes V a linear profile
lin = ExactSolutionSpec(CaseTag.EllipticPlusLinear, a=1.0, k1=1.0, C1=0.5, C2=1.0)
print("V residual, b=0 branch:", np.max(np.abs(residual_cubic_system(x, 0.3, lin)[1])))
