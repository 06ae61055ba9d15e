"""
Profile transforms and invariant cones
======================================

Two exact computations.  The profile transform is an order-reversing
involution on admissible radial profiles, and the cone test decides
orderability for the universal cover of ``SU(2,1)``.
"""

from fractions import Fraction as F

import numpy as np

from contactforge.index import F_parameters, profile_F, profile_transform
from contactforge.olshanskii import build_c0, contact_cone, orderability_verdict

# %%
# The transform of a two-node profile is again a two-node profile.
H = profile_F(F(1, 4), F(1, 2), F(3))
Hbar = profile_transform(H)
print("F(1/4, 1/2, 3) transforms to F", tuple(str(x) for x in F_parameters(Hbar)))
print("involution:", profile_transform(Hbar).nodes == H.nodes)
u = np.linspace(0.05, 4, 6)
print("sampled values:", np.round(Hbar(u), 4))

# %%
# The cone ``c_0`` in the compact Cartan subalgebra, then the verdict for
# the cone of the standard contact structure.
c = build_c0()
print("H1 =", tuple(map(str, c.H1)), " Z =", tuple(map(str, c.Z)), " H0 =", tuple(map(str, c.H0)))
v = orderability_verdict(contact_cone())
print("verdict:", v.verdict, " witness:", tuple(map(str, v.witness)))
