# %% [markdown]
# # How fast the filter norm vanishes
#
# The filter ``B = d M(D) / (1 - d L(D))`` is diagonal in Fourier space, so
# its L2 norm is the largest ``|b_hat|`` on the grid. It should shrink like
# ``dt**(q/ell)`` with ``q = deg L - deg M`` and ``ell = deg L``.

# %%
import numpy as np

from wgms import kdv_system, make_grid, nls_system, sge_system
from wgms.diagnostics import fit_scaling_exponent

grid = make_grid(512, 2 * np.pi)
dts = np.logspace(-4, -2, 8)
for sys in (kdv_system(1, 1), nls_system(1, 1), sge_system()):
    fit = fit_scaling_exponent(sys, grid, dts)
    print(f"{sys.name}: slope {fit.slope:.4f}, q/ell = {fit.expected_slope:.4f}")

# %% [markdown]
# For KdV the peak sits at an interior wavenumber ``2**(-1/6) d**(-1/3)`` and
# the norm follows ``2**(-2/3) 3**(-1/2) d**(2/3)`` closely.

# %%
fit = fit_scaling_exponent(kdv_system(1, 1), grid, dts)
closed = 2 ** (-2 / 3) * 3 ** -0.5 * (dts / 2) ** (2 / 3)
for dt, got, want in zip(dts, fit.norm_values, closed):
    print(f"dt={dt:.2e}  |B|={got:.5e}  closed form {want:.5e}  ratio {got / want:.4f}")
