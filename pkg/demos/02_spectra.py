# %% [markdown]
# Harmonic spectra for four kinds of driving light
#
# Same mean photon number for every field. Coherent and Fock light give the
# same spectrum; thermal and squeezed vacuum extend to far higher orders.

# %%
import math

import numpy as np

from qhhg.band import zno
from qhhg.drive import PulseSpec, current, time_grid
from qhhg.phasespace import DrivingField
from qhhg.spectrum import floquet_peaks, harmonic_peak_heights, quantum_spectrum, sc_spectrum

band = zno()
pulse = PulseSpec()
grid = time_grid(pulse, 512)
photons = 7.35e11

# %%
fields = {kind: DrivingField.from_mean_photons(kind, photons) for kind in ("coherent", "fock", "thermal", "bsv")}
heights = {}
for kind, field in fields.items():
    spec = quantum_spectrum(band, pulse, field, grid)
    heights[kind] = np.array([h for _, h in harmonic_peak_heights(spec, pulse.omega0, 45)])

print(" n " + "".join(f"{k:>12}" for k in heights))
for n in range(1, 46, 4):
    print(f"{n:2d} " + "".join(f"{heights[k][n - 1] / heights[k].max():12.2e}" for k in heights))

# %%
# Pulse versus Floquet limit for coherent light: one overall constant apart
# from orders sitting near a zero of the Bessel sum.
amp = math.sqrt(photons)
spec = sc_spectrum(current(band, pulse, amp, 0.0, grid))
h = np.array([x for _, x in harmonic_peak_heights(spec, pulse.omega0, 23)])[0::2]
fp = floquet_peaks(band, DrivingField.coherent(amp), pulse.g0, pulse.omega0, 23)
for n, r in zip(fp.orders, h / fp.weights):
    print(f"n={n:2d}  pulse/Floquet = {r:.3e}")
