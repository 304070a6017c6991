# %% [markdown]
# # A Gaussian hump under KdV
#
# The reference configuration: 512 points on a period of 20, dispersion 0.05,
# dt = 0.01 and three fixed-point sweeps per step. The hump steepens and sheds
# a train of solitons while the mean and the L2 norm stay put.

# %%
import numpy as np
import matplotlib.pyplot as plt

from wgms import SolverSession, StepConfig, initial_condition, kdv_system, make_grid
from wgms.diagnostics import invariants

grid = make_grid(512, 20.0)
sys = kdv_system(dispersion=0.05)
u0 = initial_condition("kdv_gaussian", period=grid.period)(grid.sample_points)
session = SolverSession(sys, grid, u0, StepConfig(dt=0.01, iterations=3))

# %%
frames = []
session.integrate(5.0, observer=frames.append, every=100)
inv0 = invariants(sys, u0, grid)
inv1 = invariants(sys, session.state, grid)
for key in inv0:
    print(f"{key:12s} {inv0[key]: .12f} -> {inv1[key]: .12f}")

# %%
fig, ax = plt.subplots(figsize=(7, 4))
for snap in frames:
    ax.plot(grid.sample_points, snap.state[0].real, label=f"t={snap.time:g}")
ax.set_xlabel("x")
ax.set_ylabel("u")
ax.legend()
fig.savefig("kdv_gaussian.png", dpi=120)
