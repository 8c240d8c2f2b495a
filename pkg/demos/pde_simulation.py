"""Method-of-lines runs: a manufactured solution and the shipped exp-coupled config."""
import numpy as np

from rdsym.config import load_config, simulation_from
from rdsym.errors import BlowUpError
from rdsym.exact_solutions import CaseTag, ExactSolutionSpec, eval_exact
from rdsym.pde_solver import convergence_study, heat_equation_study, simulate

# %% manufactured solution: closed form for IC and boundary data
cfg = simulation_from(load_config("manufactured_case1"))
final = simulate(cfg)[-1]
U, V = eval_exact(cfg.grid.x, final.t, ExactSolutionSpec(CaseTag.EllipticPair, 1.0, -1.0, 1.0))
print(f"t={final.t:.2f}  max error U {np.max(np.abs(final.U - U)):.2e}  V {np.max(np.abs(final.V - V)):.2e}")

# %% grid refinement
for name, rows in (("cubic", convergence_study(ExactSolutionSpec(CaseTag.EllipticPair, 1.0, -1.0, 1.0))),
                   ("heat", heat_equation_study())):
    for r in rows:
        order = "" if r.observed_order is None else f"{r.observed_order:.3f}"
        print(f"{name:5s} nx={r.nx:4d} error={r.max_error:.3e} order={order}")

# %% the stiff exp-coupled block; initial and boundary data are placeholders
cfg = simulation_from(load_config("paper_eq8"))
print(cfg.metadata["note"])
try:
    snaps = simulate(cfg)
    print("completed, final mean U =", snaps[-1].U.mean())
except BlowUpError as exc:
    print("blow-up at t =", exc.time, "after", len(exc.snapshots), "snapshots")
