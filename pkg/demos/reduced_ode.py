"""RK4 on the reduced cubic ODE w'' + phi w^3 = 0, checked against sd."""
import math

import numpy as np

from rdsym.elliptic import jacobi_sd
from rdsym.ode_core import cubic_reduced_system, integrate_rk4, sd_matched_initial_state, trajectory_energy

k = math.sqrt(0.5)
system = cubic_reduced_system(1.0)
y0 = sd_matched_initial_state(1.0)

for h in (0.1, 0.05, 0.025):
    tr = integrate_rk4(system, y0, (0.0, 3.0), h)
    err = np.max(np.abs(tr.states[:, 0] - jacobi_sd(tr.z_values, k) / math.sqrt(2)))
    E = trajectory_energy(tr, 1.0)
    print(f"h={h:<6} error={err:.3e}  energy drift={np.ptp(E) / E[0]:.1e}")

# the error ratio on halving should be close to 2^4 = 16
