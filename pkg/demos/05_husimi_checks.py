# %% [markdown]
# How far the Husimi function can stand in for the P function

# %%
from qhhg.appcheck import app_report, mandel_q, min_quadrature_variance
from qhhg.phasespace import DrivingField

report = app_report(fock_n=100, bsv_r=1.0)
for key, value in report.to_dict().items():
    if key != "details":
        print(f"{key:26s} {value}")

# %%
# The vacuum offset: the approximation never squeezes below 1/4.
for r in (0.0, 0.5, 1.0, 2.0, 4.0):
    f = DrivingField.bsv(r)
    print(f"r={r}: approx {min_quadrature_variance(f, 'app'):.4f}   exact {min_quadrature_variance(f, 'exact'):.4f}")

# %%
for n in (1, 10, 100, 1000):
    f = DrivingField.fock(n)
    print(n, mandel_q(f, "app_integral"), mandel_q(f, "exact"))
