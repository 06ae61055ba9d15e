"""
Explicit contactomorphisms and their conformal factors
======================================================

A map of ``V = C^n x S^1`` is a contactomorphism when it pulls the contact
form ``dt - alpha`` back to a positive multiple of itself.  Here we sample
the twist maps and the Planck rescaling on a grid and look at the factor.
"""

import numpy as np

from contactforge.geometry import SamplingGrid, conformal_factor_check, rho
from contactforge.maps import make_planck_map, make_twist, planck_target_form

grid = SamplingGrid(shells=3, r_min=0.1, r_max=2.0, sphere_points=128, time_samples=8)

# %%
# The twist of order N shrinks the form by ``1 / (1 + N rho)``.  Both the
# closed-form Jacobian and finite differences agree on the residual.
for N in (1, 2, 3):
    F = make_twist(N, 2)
    exact = conformal_factor_check(F, grid, 1e-8)
    fd = conformal_factor_check(F, grid, 1e-5, use_fd=True)
    z = exact.details["z"]
    err = np.max(np.abs(exact.details["factors"] - 1 / (1 + N * rho(z))))
    print(f"twist N={N}: residual {exact.details['max_residual']:.1e} (fd "
          f"{fd.details['max_residual']:.1e}), factor error {err:.1e}")

# %%
# The Planck map changes the period of the circle factor, so it is compared
# against the rescaled target form; the factor is the constant ``2 pi hbar``.
for hbar in (0.5, 1.0, 2.0):
    rep = conformal_factor_check(make_planck_map(hbar, 2), grid, 1e-8,
                                 target_form=planck_target_form)
    f = rep.details["factors"]
    print(f"planck hbar={hbar}: factor in [{f.min():.12f}, {f.max():.12f}], "
          f"2 pi hbar = {2 * np.pi * hbar:.12f}")
