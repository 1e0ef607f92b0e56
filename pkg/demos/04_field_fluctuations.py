# %% [markdown]
# Mean and spread of the generated field
#
# A short pulse keeps this under a minute. The spread is zero for coherent
# light, flat for thermal light and oscillates at twice the carrier for
# squeezed vacuum.

# %%
import numpy as np

from qhhg.band import zno
from qhhg.drive import PulseSpec, time_grid
from qhhg.efield import dominant_frequency, generated_field_stats, peak_width_report
from qhhg.phasespace import DrivingField, phase_space_grid, radial_grid

band = zno()
pulse = PulseSpec(flat_cycles=4, ramp_cycles=1)
grid = time_grid(pulse, 512)

# %%
traces = {}
for kind in ("coherent", "thermal", "bsv"):
    field = DrivingField.from_mean_photons(kind, 7.35e11)
    quad = phase_space_grid(field, radial_grid(field, nodes=200), 128)
    traces[kind] = generated_field_stats(band, pulse, field, grid, quad)

for kind, tr in traces.items():
    m = tr.flat_top_mask()
    print(f"{kind:9s} max|mean|={np.max(np.abs(tr.mean)):.3e}  std range=[{tr.std[m].min():.3e}, {tr.std[m].max():.3e}]")

# %%
bsv = traces["bsv"]
m = bsv.flat_top_mask()
print("squeezed vacuum std^2 oscillates at", dominant_frequency(bsv.times[m], bsv.std[m] ** 2) / pulse.omega0, "w0")

# %%
for kind in ("coherent", "bsv"):
    peaks = peak_width_report(traces[kind])
    print(kind, "main peaks:", len(peaks), " FWHM range (fs):",
          f"{min(w for _, w in peaks):.3f} - {max(w for _, w in peaks):.3f}")
