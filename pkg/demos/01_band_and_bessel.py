# %% [markdown]
# Band model and Bessel functions
#
# A ZnO-like chain with five cosine harmonics, ten electrons in the band.

# %%
import math

import numpy as np

from qhhg.band import c_coefficients, dispersion, k_constant, lattice_coupling, zno
from qhhg.specfun import bessel_j, bessel_j_table, bessel_remainder_bound

band = zno()
print("lattice constant", band.a, "bohr; electrons", band.electron_count)
print("band bottom  eps(0)   =", dispersion(band, 0.0))
print("zone edge    eps(pi/a) =", dispersion(band, math.pi / band.a))

# %%
# Only odd-l coefficients survive for the symmetric ten-electron filling.
for l, c in enumerate(c_coefficients(band), start=1):
    print(f"C_{l} = {c: .6f}")
print("K_5 =", k_constant(band, 5))

# %%
g_tilde = lattice_coupling(band, 4e-8, 0.005)
amp = math.sqrt(7.35e11)
print("coupling g~ =", g_tilde, " largest Bessel argument =", band.l_max * g_tilde * amp)

# %%
# J_n(x) falls off sharply once n exceeds x.
x = band.l_max * g_tilde * amp
table = bessel_j_table(41, np.array([x]))[:, 0]
for n in range(21, 42, 4):
    print(f"J_{n}({x:.2f}) = {table[n]: .3e}   scalar: {bessel_j(n, x): .3e}")

# %%
# Error bound of the leading power term at x = n/9 stays below 1e-2.
for n in (1, 5, 15):
    print(n, bessel_remainder_bound(n, n / 9))
