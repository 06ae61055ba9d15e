import time
from fractions import Fraction as Fr

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from contactforge.olshanskii import (
    BASIS_NAMES, DegenerateConeError, GaussianRational, RationalCone2, basis_matrices,
    block_sum, build_c0, commutator, contact_cone, contact_cone_crosscheck, coordinates,
    dual_cone, in_su21, orderability_verdict, qform, root_system, scaled_J, su21_structure,
)


def test_gaussian_rational_arithmetic():
    a = GaussianRational(Fr(1, 2), Fr(1))
    b = GaussianRational(Fr(-1), Fr(1, 3))
    assert complex(a * b) == pytest.approx(complex(a) * complex(b))
    assert (a / b) * b == a
    assert (a - a).is_zero() and a.conj().im == -a.im


def test_basis_in_su21():
    basis = basis_matrices()
    assert len(basis) == len(BASIS_NAMES) == 8
    for X in basis:
        assert in_su21(X)
        assert X.trace().is_zero()


def test_commutator_coordinates_match_block_action():
    st_ = su21_structure()
    E1 = basis_matrices()[0]
    for j, X in enumerate(basis_matrices()):
        coords = coordinates(commutator(E1, X))
        assert tuple(row[j] for row in st_.ad_E1) == coords


def test_adjoint_operators():
    st_ = su21_structure()
    zero = ((0, 0), (0, 0))
    assert st_.ad_E1 == block_sum(zero, scaled_J(1), scaled_J(2), scaled_J(1))
    assert st_.ad_E2 == block_sum(zero, scaled_J(-1), scaled_J(1), scaled_J(2))


def test_killing_form_proportional():
    st_ = su21_structure()
    s = st_.killing_scale
    assert s > 0
    # negative definite on the compact Cartan subalgebra
    assert tuple(tuple(-x / s for x in row) for row in st_.killing_h) == ((2, 1), (1, 2))
    assert st_.Q == ((2, 1), (1, 2))


def test_roots_and_compactness():
    roots = root_system()
    vectors = {r.vector for r in roots}
    assert vectors == {(1, -1), (-1, 1), (1, 0), (-1, 0), (0, 1), (0, -1)}
    for r in roots:
        if r.vector in {(1, -1), (-1, 1)}:
            assert r.compact and not r.noncompact
        else:
            assert r.noncompact and not r.compact


def test_c0_construction():
    c = build_c0()
    assert c.H1 == (1, 0)
    assert c.Z == (Fr(2, 3), Fr(2, 3))
    assert c.H0 == (Fr(-1, 3), Fr(2, 3))
    assert set(c.weyl_orbit_H0) == {(Fr(-1, 3), Fr(2, 3)), (Fr(2, 3), Fr(-1, 3))}
    assert c.c0.same_as(c.c_min)
    quadrant = RationalCone2.from_generators((1, 0), (0, 1))
    assert c.c_min.same_as(quadrant)


def test_dual_of_first_quadrant():
    d = dual_cone(RationalCone2.from_generators((1, 0), (0, 1)))
    x = (Fr(-1, 3), Fr(2, 3))
    assert qform(x, (1, 0)) == 0 and qform(x, (0, 1)) == 1
    assert d.contains(x)


def test_degenerate_dual_rejected():
    with pytest.raises(DegenerateConeError):
        dual_cone(RationalCone2.from_inequalities((1, 0), (1, 0)), ((1, 0), (0, 1)))
    with pytest.raises(DegenerateConeError):
        RationalCone2.from_generators((1, 2), (2, 4))


rationals = st.fractions(min_value=-5, max_value=5, max_denominator=20)


@given(u=st.tuples(rationals, rationals), v=st.tuples(rationals, rationals))
def test_dual_is_an_involution(u, v):
    cross = u[0] * v[1] - u[1] * v[0]
    assume(cross != 0)
    cone = RationalCone2.from_generators(u, v)
    assert dual_cone(dual_cone(cone)).same_as(cone)
    identity = ((1, 0), (0, 1))
    assert dual_cone(dual_cone(cone, identity), identity).same_as(cone)


def test_orderability_verdicts():
    v = orderability_verdict(contact_cone())
    assert v.verdict == "non-orderable"
    assert not v.in_plus_c0 and not v.in_minus_c0
    w = v.witness
    assert contact_cone().contains(w) and not build_c0().c0.contains(w)
    assert tuple(w) in {(1, Fr(-1, 2)), (Fr(-1, 2), 1)}
    assert orderability_verdict(build_c0().c_min).verdict == "order-compatible"


def test_contact_cone_geometric_crosscheck():
    pairs = [(1, 0), (Fr(-1, 3), 1), (-1, 1), (1, -3), (Fr(1, 2), Fr(-1, 4))]
    out = contact_cone_crosscheck(pairs, count=256)
    assert out["max_error"] < 1e-10
    assert out["agree"]


def test_suite_runs_fast():
    su21_structure.cache_clear()
    start = time.perf_counter()
    build_c0()
    orderability_verdict(contact_cone())
    assert time.perf_counter() - start < 1.0
