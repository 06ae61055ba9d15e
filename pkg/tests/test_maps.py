import numpy as np
import pytest

from contactforge.geometry import (
    SamplingGrid, conformal_factor_check, quadratic_hamiltonian, radial_invariants, rho,
    symplectic_defect, complex_to_real_matrix,
)
from contactforge.maps import (
    compose_paths, constant_path, contact_factor_s3, extract_hamiltonian, hamiltonian_at_image,
    invert_path, make_loop_embedding, make_planck_map, make_pu21, make_pu21_lift, make_shift,
    make_squeeze_pair, make_twist, make_unitary_generators, planck_target_form,
    pu21_dilation_factor, rotation_path, s3_loop, s3_loop_hamiltonian, time_scaled,
)

from conftest import random_points

GRID = SamplingGrid(shells=3, sphere_points=64, time_samples=8)
SMALL_R = SamplingGrid(shells=3, r_min=0.1, r_max=0.5, sphere_points=64, time_samples=8)


def _z_t(rng, count=40, n=3, scale=0.5):
    return random_points(rng, count, n, scale), rng.uniform(size=count)


# ---------------------------------------------------------------------------
# contact embeddings


def test_twist_fixes_origin_and_maps_radius():
    F = make_twist(1, 2)
    z, t = F(np.zeros(2, dtype=complex), 0.3)
    assert np.all(z == 0) and t == 0.3
    w = np.array([1 / np.sqrt(np.pi), 0], dtype=complex)
    assert np.isclose(rho(F(w, 0.7)[0]), 0.5, rtol=1e-14)


@pytest.mark.parametrize("N", [1, 2, 3, 4])
def test_twist_conformal_factor(N):
    rep = conformal_factor_check(make_twist(N, 2), GRID, 1e-8)
    assert rep.passed
    z = rep.details["z"]
    np.testing.assert_allclose(rep.details["factors"], 1 / (1 + N * rho(z)), rtol=1e-10)
    assert conformal_factor_check(make_twist(N, 2), GRID, 1e-5, use_fd=True).passed


def test_loop_embedding_reproduces_twist(rng):
    N = 2
    e = rotation_path(np.full(2, float(N)))
    Psi = make_loop_embedding(e, e.hamiltonian)
    F = make_twist(N, 2)
    z, t = _z_t(rng, n=2)
    np.testing.assert_allclose(Psi(z, t)[0], F(z, t)[0], atol=1e-14)
    rep = conformal_factor_check(Psi, GRID, 1e-8)
    assert rep.passed
    np.testing.assert_allclose(rep.details["factors"], 1 / (1 + N * rho(rep.details["z"])),
                               rtol=1e-10)


def test_loop_embedding_of_constant_loop_is_identity(rng):
    c = constant_path(2)
    Psi = make_loop_embedding(c, c.hamiltonian)
    z, t = _z_t(rng, n=2)
    np.testing.assert_allclose(Psi(z, t)[0], z, atol=1e-15)


def test_squeeze_pair_radial_formulas(rng):
    n = 3
    Phi, Psi = make_squeeze_pair(n)
    z, t = _z_t(rng, 200, n, 0.3)
    r = radial_invariants(z)
    ok = Psi.in_domain(z, t)
    out = radial_invariants(Psi(z[ok], t[ok])[0])
    denom = 1 + r.rho_j[ok, 0] - r.rho_j[ok, 1]
    np.testing.assert_allclose(out.varrho, r.varrho[ok] / denom, rtol=1e-12)
    ok = Phi.in_domain(z, t)
    out = radial_invariants(Phi(z[ok], t[ok])[0])
    num = r.rho_j[ok, 0] + r.varrho[ok]
    denom = 1 + (n - 1) * r.rho_j[ok, 0] - r.varrho[ok]
    np.testing.assert_allclose(out.rho, num / denom, rtol=1e-12)


def test_squeeze_pair_keeps_zero_varrho(rng):
    _, Psi = make_squeeze_pair(3)
    z = np.zeros((10, 3), dtype=complex)
    z[:, 0] = rng.normal(size=10) + 1j * rng.normal(size=10)
    assert np.all(radial_invariants(Psi(z, 0.2)[0]).varrho == 0)


def test_squeeze_pair_contactness():
    for m in make_squeeze_pair(3):
        rep = conformal_factor_check(m, SMALL_R, 1e-8)
        assert rep.passed, m.name


def test_shift():
    z = np.array([[1 + 2j, 3j]])
    np.testing.assert_array_equal(make_shift(0.0, 2)(z), z)
    a, b = make_shift(0.5, 2), make_shift(-1.25, 2)
    np.testing.assert_allclose(a(b(z)), make_shift(-0.75, 2)(z), atol=1e-15)
    assert radial_invariants(a(z)).varrho == radial_invariants(z).varrho


def test_planck_map():
    hbar = 0.3
    P = make_planck_map(hbar, 2)
    rep = conformal_factor_check(P, GRID, 1e-8, target_form=planck_target_form)
    assert rep.passed
    np.testing.assert_allclose(rep.details["factors"], 2 * np.pi * hbar, rtol=1e-10)
    z = rep.details["z"]
    np.testing.assert_allclose(rho(P(z, 0.0)[0]), 2 * np.pi * hbar * rho(z), rtol=1e-12)
    unit = make_planck_map(1 / (2 * np.pi), 2)
    w, u = unit(z[:5], 0.25)
    np.testing.assert_allclose(w, z[:5], atol=1e-15)
    with pytest.raises(ValueError):
        make_planck_map(0.0, 2)


# ---------------------------------------------------------------------------
# unitary generators and Hamiltonian calculus


def test_unitary_generator_properties(rng):
    n = 3
    gen = make_unitary_generators(n)
    z, t = _z_t(rng, n=n)
    np.testing.assert_allclose(gen["fs"](n, 1.0)(t, z), gen["f"](t, z), atol=1e-13)
    np.testing.assert_allclose(gen["fs"](n, 0.0)(t, z), z, atol=1e-13)
    U, _ = gen["f"].matrix(rng.uniform(size=8))
    np.testing.assert_allclose(np.linalg.det(U), 1.0, atol=1e-13)
    with pytest.raises(ValueError):
        gen["b"](1)
    with pytest.raises(ValueError):
        gen["fs"](n + 1, 0.5)
    with pytest.raises(ValueError):
        make_unitary_generators(1)


@pytest.mark.parametrize("j", [2, 3])
@pytest.mark.parametrize("s", [0.3, 0.8])
def test_conjugated_rotation_hamiltonian_identity(rng, j, s):
    n = 3
    gen = make_unitary_generators(n)
    z, t = _z_t(rng, 50, n, 1.0)
    h = gen["h"](j, s)
    x, Hx = hamiltonian_at_image(h, t, z)
    I = gen["I"](j, s)
    w = np.einsum("ij,mj->mi", np.conj(I).T, gen["b"](j)(-t, z))
    expected = -np.pi * np.abs(z[:, j - 1]) ** 2 + np.pi * np.abs(w[:, j - 1]) ** 2
    np.testing.assert_allclose(Hx, expected, atol=1e-7)
    np.testing.assert_allclose(h.hamiltonian(x, t), expected, atol=1e-10)
    # only coordinates 1 and j move
    others = [k for k in range(n) if k not in (0, j - 1)]
    np.testing.assert_array_equal(h(t, z)[:, others], z[:, others])


def test_linear_paths_are_symplectic(rng):
    gen = make_unitary_generators(3)
    for path in (gen["e"], gen["f"], gen["g"], gen["h"](2, 0.4), gen["fs"](3, 0.7)):
        U, _ = path.matrix(rng.uniform(size=6))
        assert np.max(symplectic_defect(complex_to_real_matrix(U))) < 1e-8, path.name


def test_compose_identity_and_double_rotation(rng):
    gen = make_unitary_generators(2)
    e = gen["e"]
    z, t = _z_t(rng, n=2)
    c = compose_paths(e, constant_path(2))
    np.testing.assert_allclose(c(t, z), e(t, z), atol=1e-14)
    np.testing.assert_allclose(c.hamiltonian(z, t), e.hamiltonian(z, t), atol=1e-13)
    ee = compose_paths(e, e)
    np.testing.assert_allclose(ee(t, z), time_scaled(e, 2)(t, z), atol=1e-13)
    np.testing.assert_allclose(ee.hamiltonian(z, t), 2 * rho(z), rtol=1e-12)


def test_compose_rule_matches_extraction(rng):
    gen = make_unitary_generators(3)
    fg = compose_paths(gen["f"], gen["h"](2, 0.6))
    z, t = _z_t(rng, n=3)
    np.testing.assert_allclose(extract_hamiltonian(fg)(z, t), fg.hamiltonian(z, t), atol=1e-7)


def test_compose_rule_for_nonlinear_paths(rng):
    # conjugation by the S^3 lift yields a non-matrix path
    loop = s3_loop(0.3)
    z, t = _z_t(rng, 30, 2, 0.7)
    x, Hx = hamiltonian_at_image(loop, t, z)
    np.testing.assert_allclose(loop.hamiltonian(x, t), Hx, atol=1e-7 * (1 + rho(x).max()))
    np.testing.assert_allclose(s3_loop_hamiltonian(0.3)(x, t), Hx, atol=1e-7 * (1 + rho(x).max()))


def test_invert_path(rng):
    gen = make_unitary_generators(2)
    z, t = _z_t(rng, n=2)
    c = invert_path(constant_path(2))
    np.testing.assert_allclose(c(t, z), z, atol=1e-15)
    ei = invert_path(gen["e"])
    np.testing.assert_allclose(ei(t, z), gen["e"](-t, z), atol=1e-13)
    np.testing.assert_allclose(ei.hamiltonian(z, t), -rho(z), rtol=1e-12)
    np.testing.assert_allclose(extract_hamiltonian(ei)(z, t), -rho(z), atol=1e-7)
    g = gen["h"](2, 0.35)
    np.testing.assert_allclose(invert_path(invert_path(g))(t, z), g(t, z), atol=1e-9)
    gi = invert_path(g)
    np.testing.assert_allclose(extract_hamiltonian(gi)(z, t), -g.hamiltonian(g(t, z), t),
                               atol=1e-7)


def test_extract_hamiltonian(rng):
    gen = make_unitary_generators(3)
    z, t = _z_t(rng, n=3)
    np.testing.assert_allclose(extract_hamiltonian(gen["e"])(z, t), rho(z), atol=1e-7)
    r = radial_invariants(z)
    np.testing.assert_allclose(extract_hamiltonian(gen["f"])(z, t),
                               2 * r.rho_j[:, 0] - r.varrho, atol=1e-7)
    np.testing.assert_allclose(extract_hamiltonian(constant_path(3))(z, t), 0.0, atol=1e-12)


def test_loops_close(rng):
    gen = make_unitary_generators(3)
    z = random_points(rng, 10, 3)
    for path in (gen["e"], gen["f"], gen["g"], gen["h"](3, 0.5)):
        assert path.is_loop
        np.testing.assert_allclose(path(np.ones(10), z), path(np.zeros(10), z), atol=1e-10)
        np.testing.assert_allclose(path(np.zeros(10), z), z, atol=1e-14)


# ---------------------------------------------------------------------------
# PU(2,1)


def test_pu21_b_on_sphere(rng):
    alpha = 0.4
    b, cay, dil = make_pu21(alpha)
    np.testing.assert_allclose(b(np.array([1.0, 0.0], dtype=complex)), [1.0, 0.0], atol=1e-15)
    x = random_points(rng, 200, 2)
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    np.testing.assert_allclose(np.linalg.norm(b(x), axis=1), 1.0, atol=1e-12)


def test_pu21_conjugate_is_dilation(rng):
    alpha = 0.4
    b, cay, dil = make_pu21(alpha)
    s = pu21_dilation_factor(alpha, b, cay)
    w = random_points(rng, 20, 2)
    w[:, 0] += 3j
    out = cay(b(cay.inverse(w)))
    np.testing.assert_allclose(out, np.stack([s * s * w[:, 0], s * w[:, 1]], axis=1), rtol=1e-8)
    svals = [pu21_dilation_factor(a) for a in (0.5, 0.1, 0.02)]
    assert svals[0] < svals[1] < svals[2] and svals[2] > 50


def test_pu21_lift_is_equivariant_symplectic(rng):
    alpha = 0.2
    B = make_pu21_lift(alpha)
    z = random_points(rng, 20, 2)
    assert np.max(symplectic_defect(B.fd_jacobian(z))) < 1e-6
    np.testing.assert_allclose(B(np.sqrt(3.0) * z), np.sqrt(3.0) * B(z), rtol=1e-12)
    np.testing.assert_allclose(B.inverse(B(z)), z, atol=1e-10)
    b, _, _ = make_pu21(alpha)
    x = z / np.linalg.norm(z, axis=1, keepdims=True)
    k = contact_factor_s3(b, alpha, x)
    np.testing.assert_allclose(k, np.sinh(alpha) ** 2 / np.abs(x[:, 0] + np.cosh(alpha)) ** 2,
                               rtol=1e-10)


def test_quadratic_hamiltonian_equals_rotation_generator(rng):
    H = quadratic_hamiltonian([2.0, -1.0])
    z = random_points(rng, 5, 2)
    np.testing.assert_allclose(rotation_path([2.0, -1.0]).hamiltonian(z, 0.0), H(z), rtol=1e-13)
