"""
Conley-Zehnder indices and ellipsoid degrees
============================================

The index of a path of symplectic matrices counts eigenvalue crossings
through 1.  Rotation paths give the calibration; ellipsoids give the
degrees in which their contact homology lives.
"""

import numpy as np

from contactforge.index import (EllipsoidSpec, SymplecticPath, ch_ellipsoid, cz_index,
                                ellipsoid_degree, ellipsoid_degree_by_flow, maslov_index)

# %%
# A full turn of the circle has Maslov index 2, and every extra turn of a
# rotation path lowers the index by 2.
print("Maslov of one turn:", maslov_index(SymplecticPath.rotation([1])))
for rate in (0.3, 1.3, 2.3, -0.7):
    print(f"rotation at rate {rate:+.1f}: CZ = {cz_index(SymplecticPath.rotation([rate]))}")

# %%
# The degree of a ball drops by ``2n`` each time ``1/R`` passes an integer.
# The closed formula is cross-checked against the index of the linearized flow.
rng = np.random.default_rng(0)
for R in (1.5, 0.9, 0.45, 0.3, 0.22):
    spec = EllipsoidSpec(2, 1, R)
    print(f"ball R={R}: degree {ellipsoid_degree(spec)} "
          f"(flow {ellipsoid_degree_by_flow(spec, rng)}), CH ranks {ch_ellipsoid(spec).ranks}")
