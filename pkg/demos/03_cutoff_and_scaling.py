# %% [markdown]
# Cutoff orders and the weak-field power law

# %%
import numpy as np

from qhhg.analysis import cutoff_order, perturbative_limit, scaling_curve
from qhhg.band import zno
from qhhg.phasespace import DrivingField, moments

band = zno()
g0, w0 = 4e-8, 0.005

# %%
for kind in ("coherent", "fock", "thermal", "bsv"):
    field = DrivingField.from_mean_photons(kind, 7.35e11)
    mu, sigma = moments(field)
    print(f"{kind:9s} mu={mu:.4e} sigma={sigma:.4e} cutoff={cutoff_order(band, field, g0, w0):.2f}")

# %%
# Below the threshold the fifth harmonic grows as <N>^5; thermal light gains 5! = 120.
for kind in ("coherent", "thermal"):
    limit = perturbative_limit(band, kind, 5, g0, w0)
    print(kind, "threshold <N> =", f"{limit.mean_photons:.4e}")

limit = perturbative_limit(band, "coherent", 5, g0, w0)
photons = limit.mean_photons * np.logspace(-2, 2, 9)
curve = scaling_curve(band, "coherent", 5, g0, w0, photons, nodes=200)
for N, e, p, inside in zip(curve.mean_photons, curve.exact_signal, curve.perturbative_signal, curve.inside_range):
    print(f"<N>={N:.2e}  exact={e:.3e}  power law={p:.3e}  ratio={e / p:.3f}  {'inside' if inside else ''}")
