import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from contactforge.index import (
    AdmissibilityError, DegenerateEndpointError, EllipsoidSpec, GradedGroup, ProfileFunction,
    ResonanceError, SymplecticPath, action_spectrum, ball_inclusion_iso, catenate, ch_ellipsoid,
    cz_index, direct_sum, ellipsoid_degree, ellipsoid_degree_by_flow, F_parameters,
    maslov_index, period_action_check, profile_F, profile_G, profile_transform, rho_map,
)

P = SymplecticPath
non_integer = st.floats(-3.0, 3.0).filter(lambda x: abs(x - round(x)) > 0.05)


def brute_force_rotation_cz(rates):
    """Crossing count for ``diag(exp(2 pi i a t))``: each full turn costs 2."""
    return int(sum(-2 * math.floor(a) for a in rates))


# ---------------------------------------------------------------------------
# symplectic paths


def test_path_validation():
    with pytest.raises(ValueError):
        P(np.stack([2 * np.eye(2), np.eye(2)]))
    with pytest.raises(ValueError):
        P(np.stack([np.eye(2), np.diag([2.0, 2.0])]))


def test_maslov_values():
    assert maslov_index(P.rotation([1])) == 2
    assert maslov_index(P.rotation([0])) == 0
    for k in (-2, 3):
        assert maslov_index(P.rotation([k])) == 2 * k
    assert maslov_index(P.rotation([2, -1])) == 2
    with pytest.raises(ValueError):
        maslov_index(P.rotation([0.5]))


@pytest.mark.parametrize("c", [0.3, 0.5, 0.9])
def test_cz_normalisations(c):
    assert cz_index(P.rotation([c])) == 0
    assert cz_index(P.rotation([1 + c])) == -2


def test_cz_of_negative_definite_quadratic():
    assert cz_index(P.from_generator(-0.3 * np.eye(2))) == 2
    assert cz_index(P.from_generator(0.3 * np.eye(2))) == 0


def test_cz_morse_calibration_on_random_quadratics():
    rng = np.random.default_rng(1)
    for _ in range(20):
        n = int(rng.integers(1, 4))
        Q = np.linalg.qr(rng.normal(size=(2 * n, 2 * n)))[0]
        d = rng.uniform(0.2, 1.0, 2 * n) * rng.choice([-1, 1], 2 * n)
        S = 0.3 * Q @ np.diag(d) @ Q.T
        assert cz_index(P.from_generator(S)) == int((d < 0).sum())


def test_degenerate_endpoint_rejected():
    with pytest.raises(DegenerateEndpointError):
        cz_index(P.rotation([1.0]))


def test_rho_map_on_rotation():
    A = P.rotation([0.3], samples=3).endpoint
    assert np.isclose(rho_map(A), np.exp(2j * np.pi * 0.3))
    assert np.isclose(rho_map(-np.eye(2)), -1.0)


@settings(max_examples=15)
@given(rates=st.lists(non_integer, min_size=1, max_size=3))
def test_cz_of_rotations_matches_crossing_count(rates):
    assert cz_index(P.rotation(rates)) == brute_force_rotation_cz(rates)


@settings(max_examples=15)
@given(rates=st.lists(non_integer, min_size=1, max_size=2),
       ks=st.lists(st.integers(-3, 3), min_size=2, max_size=2))
def test_catenation_rule(rates, ks):
    k = ks[: len(rates)]
    path = P.rotation(rates)
    loop = P.rotation(k)
    assert cz_index(catenate(path, loop)) == cz_index(path) - maslov_index(loop)


@settings(max_examples=15)
@given(a=st.lists(non_integer, min_size=1, max_size=2),
       b=st.lists(non_integer, min_size=1, max_size=2))
def test_direct_sum_additivity(a, b):
    pa, pb = P.rotation(a), P.rotation(b)
    assert cz_index(direct_sum(pa, pb)) == cz_index(pa) + cz_index(pb)


@settings(max_examples=10)
@given(seed=st.integers(0, 10_000), k=st.integers(1, 3))
def test_grading_shift_by_maslov_loop(seed, k):
    """Twisting by the Maslov-2k loop moves the index by -2k."""
    rng = np.random.default_rng(seed)
    Q = np.linalg.qr(rng.normal(size=(2, 2)))[0]
    S = 0.3 * Q @ np.diag(rng.uniform(0.2, 1.0, 2) * rng.choice([-1, 1], 2)) @ Q.T
    path = P.from_generator(S)
    loop = P.rotation([k], samples=len(path.times))
    assert cz_index(catenate(path, loop)) == cz_index(path) - 2 * k


def test_direct_sum_of_generated_paths():
    a = P.from_generator(-0.3 * np.eye(2))
    b = P.from_generator(np.diag([0.3, -0.2]))
    assert cz_index(direct_sum(a, b)) == cz_index(a) + cz_index(b) == 3


# ---------------------------------------------------------------------------
# ellipsoids and contact homology


def test_ellipsoid_degree_examples():
    assert ellipsoid_degree(EllipsoidSpec(2, 1, 0.9)) == -4
    assert ellipsoid_degree(EllipsoidSpec(2, 3, 0.4)) == -4
    assert ellipsoid_degree(EllipsoidSpec(3, 1, 2.5)) == 0
    for n in (1, 2, 5):
        assert ellipsoid_degree(EllipsoidSpec(n, 1, 1.7)) == 0
    for k in range(2, 7):
        R = 0.5 * (1 / k + 1 / (k - 1))
        assert ellipsoid_degree(EllipsoidSpec(2, 1, R)) == -4 * (k - 1)
        assert ellipsoid_degree(EllipsoidSpec(3, 1, R)) == -6 * (k - 1)


def test_resonant_ellipsoids_rejected():
    with pytest.raises(ResonanceError):
        ellipsoid_degree(EllipsoidSpec(2, 1, 0.5))
    with pytest.raises(ResonanceError):
        ellipsoid_degree(EllipsoidSpec(2, 2, 0.25))
    with pytest.raises(ValueError):
        EllipsoidSpec(2, 1.5, 0.3)


def test_ch_ellipsoid():
    assert ch_ellipsoid(EllipsoidSpec(2, 1, 0.9)).ranks == {-4: 1}
    assert ch_ellipsoid(EllipsoidSpec(2, 3, 0.4)).ranks == {-4: 1}
    assert ch_ellipsoid(EllipsoidSpec(3, 1, 2.5)).ranks == {0: 1}
    g = GradedGroup({0: 0, -2: 1})
    assert g.ranks == {-2: 1} and g.rank(5) == 0
    with pytest.raises(ValueError):
        GradedGroup({0: -1})


def test_formula_matches_linearized_flow():
    rng = np.random.default_rng(7)
    checked = 0
    while checked < 20:
        spec = EllipsoidSpec(int(rng.integers(1, 4)), int(rng.integers(1, 5)),
                             float(rng.uniform(0.05, 2.0)))
        if spec.resonances():
            continue
        assert ellipsoid_degree(spec) == ellipsoid_degree_by_flow(spec, rng), spec
        checked += 1


def test_ball_inclusion_examples():
    c = ball_inclusion_iso(2, 0.35, 0.45)
    assert c.isomorphism and c.k == 3
    c = ball_inclusion_iso(2, 0.9, 1.1)
    assert not c.isomorphism and c.separator == 1
    assert ball_inclusion_iso(2, 0.7, 0.7).isomorphism
    with pytest.raises(ValueError):
        ball_inclusion_iso(2, 0.5, 0.4)


@given(R1=st.floats(0.05, 3.0), d=st.floats(0.0, 2.0), n=st.integers(1, 4))
def test_ball_inclusion_agrees_with_degrees(R1, d, n):
    R2 = R1 + d
    s1, s2 = EllipsoidSpec(n, 1, R1), EllipsoidSpec(n, 1, R2)
    assume(not s1.resonances() and not s2.resonances())
    iso = ball_inclusion_iso(n, R1, R2).isomorphism
    assert iso == (ellipsoid_degree(s1) == ellipsoid_degree(s2))


def test_action_spectrum():
    s = action_spectrum(EllipsoidSpec(2, 1, 0.5), depth=8)
    np.testing.assert_allclose(s.values, -0.5 * np.arange(1, 9))
    assert not s.non_resonant
    assert action_spectrum(EllipsoidSpec(2, 1, 0.9)).non_resonant
    e = action_spectrum(EllipsoidSpec(2, 2, 0.3), depth=10)
    brute = {round(-0.3 * m, 12) for m in range(1, 11)} | {round(-0.6 * m, 12) for m in range(1, 11)}
    assert set(np.round(e.values, 12)) == brute


def test_period_action():
    assert period_action_check(0.7, 0.7, 1.0, 2.0, 2.0, 3)
    assert period_action_check(6.0, 123.0, 0.0, 9.0, 2.0, 3)
    mu, C, P_ = 0.5, 1.0, 2.0
    for A in (0.1, 0.5, 1.0):
        T = mu * A + (P_ - mu * C) * 1
        assert period_action_check(T, A, mu, C, P_, 1) and T <= P_
    with pytest.raises(ValueError):
        period_action_check(1.0, 1.0, -1.0, 1.0, 1.0, 1)


# ---------------------------------------------------------------------------
# profile transform


def test_constant_profile_is_fixed():
    H = ProfileFunction(((Fraction(1, 2), Fraction(1)), (Fraction(1), Fraction(1))))
    assert profile_transform(H).nodes == H.nodes


def test_F_family_closed_under_transform():
    a, b, c = Fraction(1, 4), Fraction(1, 2), Fraction(3)
    Hbar = profile_transform(profile_F(a, b, c))
    assert F_parameters(Hbar) == (a / c, b, 1 / c)
    assert profile_transform(Hbar).nodes == profile_F(a, b, c).nodes


def test_G_profile_and_admissibility():
    G = profile_G(Fraction(1, 4), Fraction(1, 2), Fraction(-1))
    with pytest.raises(AdmissibilityError):
        profile_transform(G)
    with pytest.raises(ValueError):
        profile_G(0.5, 0.25, -1)
    shifted = profile_transform(profile_F(Fraction(1, 4), Fraction(1, 2), Fraction(3))).shifted(-1)
    assert shifted.nodes[-1][1] == 0 and shifted.nodes[0][1] < 0


def test_smooth_profile_involution():
    H = ProfileFunction(func=lambda u: 2 - 0.9 * np.tanh(5 * (u - 0.5)), support=(0.1, 1.5))
    back = profile_transform(profile_transform(H))
    u = np.linspace(0.05, 2.0, 60)
    np.testing.assert_allclose(back(u), H(u), atol=1e-10)


fractions = st.fractions(min_value=Fraction(1, 20), max_value=Fraction(5), max_denominator=50)


@st.composite
def admissible_pair(draw):
    """Two admissible profiles on common nodes with ``H1 <= H2``."""
    k = draw(st.integers(2, 5))
    us = sorted(set(draw(st.lists(fractions, min_size=k, max_size=k))))
    assume(len(us) >= 2)
    h1 = draw(st.lists(fractions, min_size=len(us), max_size=len(us)))
    d = draw(st.lists(st.fractions(min_value=0, max_value=2, max_denominator=50),
                      min_size=len(us), max_size=len(us)))
    H1 = ProfileFunction(tuple(zip(us, h1)))
    H2 = ProfileFunction(tuple((u, a + b) for u, a, b in zip(us, h1, d)))
    for H in (H1, H2):
        try:
            H.check_admissible()
        except AdmissibilityError:
            assume(False)
    return H1, H2


@given(pair=admissible_pair())
def test_profile_involution_exact(pair):
    for H in pair:
        assert profile_transform(profile_transform(H)).nodes == H.nodes


@given(pair=admissible_pair())
def test_profile_anti_monotone(pair):
    H1, H2 = pair
    B1, B2 = profile_transform(H1), profile_transform(H2)
    lo = min(B1.nodes[0][0], B2.nodes[0][0]) / 2
    hi = max(B1.nodes[-1][0], B2.nodes[-1][0]) * 2
    v = np.linspace(float(lo), float(hi), 400)
    assert np.all(B2(v) <= B1(v) + 1e-10)
