"""Numerical and exact verification of contact squeezing constructions.

Modules
-------
geometry
    Coordinates, forms, Hamiltonian fields, smooth maps, sampling grids.
maps
    Explicit contact maps and paths with their Hamiltonian calculus.
verify
    Grid checks of positivity, inequalities and the mu functional.
squeeze
    Squeezing verdicts, iteration plans and the reparameterized homotopy.
distinguished
    The distinguished map built by ODE integration and the main loop.
index
    Conley-Zehnder and Maslov indices, ellipsoid degrees, profiles.
olshanskii
    Exact su(2,1) structure theory and the orderability verdict.
cli
    Command-line front end.
"""

__version__ = "0.1.0"

from .geometry import (HamiltonianField, SamplingGrid, SmoothMap, conformal_factor_check,
                       contact_form, radial_invariants, rho, rplus_action, sgrad)
from .report import BoundReport, MuEstimate
from .index import (EllipsoidSpec, GradedGroup, ProfileFunction, SymplecticPath,
                    action_spectrum, ball_inclusion_iso, ch_ellipsoid, cz_index,
                    ellipsoid_degree, maslov_index, period_action_check, profile_transform)
from .olshanskii import (RationalCone2, RationalMatrix, build_c0, dual_cone,
                         orderability_verdict, root_system, su21_structure)
from .squeeze import iteration_plan, squeezing_verdict

__all__ = [
    "HamiltonianField", "SamplingGrid", "SmoothMap", "conformal_factor_check", "contact_form",
    "radial_invariants", "rho", "rplus_action", "sgrad", "BoundReport", "MuEstimate",
    "EllipsoidSpec", "GradedGroup", "ProfileFunction", "SymplecticPath", "action_spectrum",
    "ball_inclusion_iso", "ch_ellipsoid", "cz_index", "ellipsoid_degree", "maslov_index",
    "period_action_check", "profile_transform", "RationalCone2", "RationalMatrix", "build_c0",
    "dual_cone", "orderability_verdict", "root_system", "su21_structure", "iteration_plan",
    "squeezing_verdict",
]
