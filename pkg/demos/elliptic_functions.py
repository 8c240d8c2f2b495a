"""Jacobi elliptic functions from the AGM.

Run with ``python demos/elliptic_functions.py``.
"""
import math

import numpy as np

from rdsym.elliptic import complete_K, jacobi_ds, jacobi_sd, jacobi_sncndn, sd_derivatives

# %% quarter period
k = math.sqrt(0.5)
K = complete_K(k)
print("K(1/sqrt2) =", K)

# %% the three functions and their identities
z = np.linspace(-3 * K, 3 * K, 7)
sn, cn, dn = jacobi_sncndn(z, k)
print("sn at multiples of K:", np.round(sn, 12))
print("max |sn^2 + cn^2 - 1| =", np.max(np.abs(sn**2 + cn**2 - 1)))
print("max |dn^2 + k^2 sn^2 - 1| =", np.max(np.abs(dn**2 + k**2 * sn**2 - 1)))

# the modulus limits fall back to circular and hyperbolic functions
print("k=0:", jacobi_sncndn(0.7, 0.0), "vs sin/cos", (math.sin(0.7), math.cos(0.7)))
print("k=1:", jacobi_sncndn(0.7, 1.0).sn, "vs tanh", math.tanh(0.7))

# %% sd and ds at k = 1/sqrt2
zz = np.linspace(0.3, 3.0, 5)
f, f1, f2 = sd_derivatives(zz, k)
print("sd'' + sd^3/2 =", f2 + 0.5 * f**3)   # zero: sd solves w'' + w^3/2 = 0
print("sd*ds =", jacobi_sd(zz, k) * jacobi_ds(zz, k))

try:
    jacobi_ds(2 * K, k)
except Exception as exc:
    print("ds at 2K:", exc)
