"""Catalog of explicit maps and loops, and the Hamiltonian calculus of paths.

Paths are equivariant families ``f_t`` of maps of ``C^n`` based at the
identity.  Each carries an optional generating :class:`HamiltonianField`.
For unitary linear paths ``U(t)`` the generator is closed form:
``H(w, t) = 1/2 <w, A w>`` with ``A = -i U'(t) U(t)^{-1}``.

Rules used throughout (all for equivariant paths):

* the Hamiltonian of ``f_t g_t`` is ``F(z, t) + G(f_t^{-1} z, t)``;
* the Hamiltonian of ``g_t^{-1}`` is ``-G(g_t z, t)``;
* the Hamiltonian of ``a g_t a^{-1}`` is ``G(a^{-1} z, t)`` for a fixed
  symplectomorphism ``a``;
* the Hamiltonian of ``f_{kt}`` is ``k F(z, kt)``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np

from .geometry import (HamiltonianField, SmoothMap, alpha_pairing,
                       complex_to_real_matrix, phase, quadratic_hamiltonian,
                       radial_invariants, rho, to_complex, to_real, fd_jacobian,
                       wrap_time)

EXTRACT_STEP = 1e-5


def _apply(U: np.ndarray, z: np.ndarray) -> np.ndarray:
    return np.einsum("...ij,...j->...i", U, z)


@dataclass(frozen=True)
class PathFamily:
    """Equivariant path ``t -> f_t`` of maps of ``C^n``.

    ``func(t, z)`` broadcasts ``t`` of shape ``(...)`` against ``z`` of shape
    ``(..., n)``.  ``matrix(t)`` returns ``(U, dU/dt)`` for linear paths.
    """

    func: Callable
    n: int
    inverse: Optional[Callable] = None
    hamiltonian: Optional[HamiltonianField] = None
    is_loop: bool = False
    is_equivariant: bool = True
    matrix: Optional[Callable] = None
    name: str = "path"

    def __call__(self, t, z):
        return self.func(np.asarray(t, dtype=float), np.asarray(z, dtype=complex))

    def inv(self, t, z):
        """``f_t^{-1}(z)``; damped Newton when no closed form is registered."""
        t = np.asarray(t, dtype=float)
        z = np.asarray(z, dtype=complex)
        if self.inverse is not None:
            return self.inverse(t, z)
        return newton_inverse(lambda w: self.func(t, w), z)


def newton_inverse(g: Callable, y: np.ndarray, x0: Optional[np.ndarray] = None,
                   tol: float = 1e-12, max_iter: int = 60) -> np.ndarray:
    """Solve ``g(x) = y`` pointwise by damped Newton with FD Jacobians.

    Raises
    ------
    RuntimeError
        If some point fails to converge.
    """
    y = np.asarray(y, dtype=complex)
    x = y.copy() if x0 is None else np.asarray(x0, dtype=complex).copy()
    flat = lambda v: to_real(g(to_complex(v)))  # noqa: E731
    for _ in range(max_iter):
        r = to_real(g(x) - y)
        err = np.linalg.norm(r, axis=-1)
        if np.all(err <= tol * np.maximum(1.0, np.linalg.norm(to_real(y), axis=-1))):
            return x
        J = fd_jacobian(flat, to_real(x))
        step = np.linalg.solve(J, -r[..., None])[..., 0]
        lam = np.ones(err.shape)
        xr = to_real(x)
        for _ in range(30):
            trial = xr + lam[..., None] * step
            new_err = np.linalg.norm(flat(trial) - to_real(y), axis=-1)
            bad = new_err > err * (1 - 1e-4 * lam) + 1e-15
            if not np.any(bad):
                break
            lam = np.where(bad, lam / 2, lam)
        x = to_complex(xr + lam[..., None] * step)
    raise RuntimeError("newton_inverse did not converge")


# ---------------------------------------------------------------------------
# linear paths


def linear_path(matrix: Callable, n: int, is_loop: bool, name: str) -> PathFamily:
    """Path ``z -> U(t) z`` with closed-form Hamiltonian and inverse."""

    def func(t, z):
        U, _ = matrix(t)
        return _apply(U, z)

    def inverse(t, z):
        U, _ = matrix(t)
        return _apply(np.conj(np.swapaxes(U, -1, -2)), z)

    def generator(t):
        U, dU = matrix(t)
        return -1j * dU @ np.conj(np.swapaxes(U, -1, -2))

    def H(z, t):
        A = generator(t)
        return 0.5 * np.real(np.sum(np.conj(z) * _apply(A, z), axis=-1))

    def grad(z, t):
        return _apply(generator(t), z)

    ham = HamiltonianField(H, n, grad, True, False, f"H[{name}]")
    return PathFamily(func, n, inverse, ham, is_loop, True, matrix, name)


def rotation_path(weights, name: str = "rotation") -> PathFamily:
    """``z_j -> exp(2 pi i w_j t) z_j``, generated by ``sum w_j rho_j``."""
    w = np.asarray(weights, dtype=float)
    n = len(w)

    def matrix(t):
        t = np.asarray(t, dtype=float)
        ph = np.exp(2j * np.pi * wrap_time(t)[..., None] * w)
        U = ph[..., :, None] * np.eye(n)
        return U, (2j * np.pi * w * ph)[..., :, None] * np.eye(n)

    integral = bool(np.allclose(w, np.round(w)))
    p = linear_path(matrix, n, integral, name)
    # the diagonal generator is time independent: keep its exact form
    ham = quadratic_hamiltonian(w, f"H[{name}]")
    return replace(p, hamiltonian=ham)


def plane_rotation(n: int, j: int, s: float) -> np.ndarray:
    """``I^(s)_j``: rotation of the ``(z_1, z_j)`` plane by ``s pi / 2``.

    ``s`` runs over ``[0, 1]``; ``s = 1`` swaps ``(z_1, z_j) -> (-z_j, z_1)``.
    """
    if not (2 <= j <= n):
        raise ValueError(f"index j={j} outside 2..{n}")
    sig = 0.5 * np.pi * float(s)
    M = np.eye(n, dtype=complex)
    a, b = 0, j - 1
    M[a, a] = np.cos(sig)
    M[a, b] = -np.sin(sig)
    M[b, a] = np.sin(sig)
    M[b, b] = np.cos(sig)
    return M


def conjugated_rotation(n: int, j: int, s: float) -> PathFamily:
    """``h^(s)_{j,t} = I b_{j,t} I^{-1} b_{j,-t}``."""
    I = plane_rotation(n, j, s)
    Iinv = I.T.copy()
    e = np.zeros(n)
    e[j - 1] = 1.0

    def matrix(t):
        t = np.asarray(t, dtype=float)
        ph = np.exp(2j * np.pi * wrap_time(t))[..., None]
        bp = (1 + (ph - 1) * e)[..., :, None] * np.eye(n)
        bm = (1 + (np.conj(ph) - 1) * e)[..., :, None] * np.eye(n)
        dbp = (2j * np.pi * ph * e)[..., :, None] * np.eye(n)
        dbm = (-2j * np.pi * np.conj(ph) * e)[..., :, None] * np.eye(n)
        U = I @ bp @ Iinv @ bm
        dU = I @ dbp @ Iinv @ bm + I @ bp @ Iinv @ dbm
        return U, dU

    return linear_path(matrix, n, True, f"h[j={j},s={s}]")


def product_path(paths, name: str = "product") -> PathFamily:
    """Pointwise product ``P_1(t) P_2(t) ...`` of linear paths."""
    paths = list(paths)
    n = paths[0].n

    def matrix(t):
        mats = [p.matrix(t) for p in paths]
        U = mats[0][0]
        for M, _ in mats[1:]:
            U = U @ M
        dU = 0
        for k in range(len(mats)):
            term = None
            for i, (M, dM) in enumerate(mats):
                factor = dM if i == k else M
                term = factor if term is None else term @ factor
            dU = dU + term
        return U, dU

    return linear_path(matrix, n, all(p.is_loop for p in paths), name)


def time_scaled(f: PathFamily, k: float) -> PathFamily:
    """``t -> f_{kt}``, generated by ``k F(z, kt)``."""
    ham = None
    if f.hamiltonian is not None:
        H = f.hamiltonian
        g = None if H.grad is None else (lambda z, t: k * H.grad(z, k * t))
        ham = HamiltonianField(lambda z, t: k * H.func(z, k * t), f.n, g,
                               H.homogeneous, False, f"{k}*{H.name}(kt)")
    matrix = None
    if f.matrix is not None:
        def matrix(t):
            U, dU = f.matrix(k * np.asarray(t, dtype=float))
            return U, k * dU
    inverse = None if f.inverse is None else (lambda t, z: f.inverse(k * t, z))
    return PathFamily(lambda t, z: f.func(k * t, z), f.n, inverse, ham,
                      f.is_loop and float(k).is_integer(), f.is_equivariant,
                      matrix, f"{f.name}({k}t)")


def make_unitary_generators(n: int) -> dict:
    """Unitary loops used by the squeezing constructions.

    Returns
    -------
    dict
        ``e``, ``f``, ``g`` (PathFamily); ``b(j)``, ``I(j, s)``, ``h(j, s)``
        and ``fs(m, s)`` (callables).  ``fs(n, s)`` deforms ``f`` (at
        ``s = 1``) to the constant loop (at ``s = 0``).
    """
    if n < 2:
        raise ValueError("unitary generators need n >= 2")
    e = rotation_path(np.ones(n), "e")
    f = rotation_path([n - 1] + [-1] * (n - 1), "f")
    g = rotation_path([1, -1] + [0] * (n - 2), "g")

    def b(j):
        if not (2 <= j <= n):
            raise ValueError(f"index j={j} outside 2..{n}")
        w = np.zeros(n)
        w[j - 1] = 1
        return rotation_path(w, f"b[{j}]")

    def fs(m, s):
        if not (2 <= m <= n):
            raise ValueError(f"index m={m} outside 2..{n}")
        return product_path([conjugated_rotation(n, j, s) for j in range(2, m + 1)],
                            f"f[m={m},s={s}]")

    return {
        "e": e, "f": f, "g": g, "b": b,
        "I": lambda j, s: plane_rotation(n, j, s),
        "h": lambda j, s: conjugated_rotation(n, j, s),
        "fs": fs,
    }


# ---------------------------------------------------------------------------
# Hamiltonian calculus


def compose_paths(f: PathFamily, g: PathFamily) -> PathFamily:
    """``t -> f_t g_t`` with Hamiltonian ``F(z,t) + G(f_t^{-1} z, t)``."""
    if f.matrix is not None and g.matrix is not None:
        return product_path([f, g], f"{f.name}*{g.name}")
    F, G = f.hamiltonian, g.hamiltonian
    ham = None
    if F is not None and G is not None:
        ham = HamiltonianField(lambda z, t: F(z, t) + G(f.inv(t, z), t), f.n,
                               None, True, False, f"{F.name}+{G.name}")
    inverse = None
    if f.inverse is not None and g.inverse is not None:
        inverse = lambda t, z: g.inverse(t, f.inverse(t, z))  # noqa: E731
    return PathFamily(lambda t, z: f.func(t, g.func(t, z)), f.n, inverse, ham,
                      f.is_loop and g.is_loop, True, None, f"{f.name}*{g.name}")


def invert_path(g: PathFamily) -> PathFamily:
    """``t -> g_t^{-1}`` with Hamiltonian ``-G(g_t z, t)``."""
    G = g.hamiltonian
    ham = None
    if G is not None:
        ham = HamiltonianField(lambda z, t: -G(g.func(t, z), t), g.n, None, True,
                               False, f"-{G.name}(g z)")
    matrix = None
    if g.matrix is not None:
        def matrix(t):
            U, dU = g.matrix(t)
            Ui = np.conj(np.swapaxes(U, -1, -2))
            return Ui, -Ui @ dU @ Ui
        return replace(linear_path(matrix, g.n, g.is_loop, f"{g.name}^-1"),
                       hamiltonian=ham)
    return PathFamily(lambda t, z: g.inv(t, z), g.n, g.func, ham, g.is_loop, True,
                      None, f"{g.name}^-1")


def conjugate_path(a: SmoothMap, g: PathFamily) -> PathFamily:
    """``t -> a g_t a^{-1}`` for a fixed equivariant symplectomorphism ``a``."""
    if a.inverse is None:
        raise ValueError("conjugation needs a registered inverse")
    G = g.hamiltonian
    ham = None
    if G is not None:
        ham = HamiltonianField(lambda z, t: G(a.inverse(z), t), g.n, None, True,
                               False, f"{G.name}(a^-1 z)")

    def func(t, z):
        return a.func(g.func(t, a.inverse(z)))

    def inverse(t, z):
        return a.func(g.inv(t, a.inverse(z)))

    return PathFamily(func, g.n, inverse, ham, g.is_loop, True, None,
                      f"{a.name}{g.name}{a.name}^-1")


def constant_path(n: int) -> PathFamily:
    return rotation_path(np.zeros(n), "constant")


def path_velocity(f: PathFamily, t, y, step: float = EXTRACT_STEP) -> np.ndarray:
    """``d/dt f_t(y)`` by central differences in ``t``."""
    t = np.asarray(t, dtype=float)
    return (f(t + step, y) - f(t - step, y)) / (2 * step)


def hamiltonian_at_image(f: PathFamily, t, y, step: float = EXTRACT_STEP):
    """Return ``(f_t y, H(f_t y, t))`` without inverting the path.

    Uses ``H(f_t y, t) = alpha_{f_t y}(d/dt f_t(y))``.
    """
    x = f(t, y)
    return x, alpha_pairing(x, path_velocity(f, t, y, step))


def extract_hamiltonian(f: PathFamily, step: float = EXTRACT_STEP) -> HamiltonianField:
    """Generating Hamiltonian ``H(z, t) = alpha_z(X_t(z))`` of an equivariant path.

    ``X_t(z)`` is the time derivative of ``f`` at ``f_t^{-1}(z)``, taken by
    central differences with step ``step``.
    """

    def H(z, t):
        y = f.inv(t, z)
        return alpha_pairing(np.asarray(z, dtype=complex), path_velocity(f, t, y, step))

    return HamiltonianField(H, f.n, None, True, False, f"extract[{f.name}]")


# ---------------------------------------------------------------------------
# contact maps of V


def _scaled_linear_map(path: PathFamily, H: Optional[HamiltonianField],
                       name: str, at_image: bool = True) -> SmoothMap:
    """``(z, t) -> (U(t) z / sqrt(1 + K), t)`` with ``K = H(U(t) z, t)``.

    With ``at_image=False`` the factor uses ``K = H(z, t)``.  A missing
    ``H`` means ``K = 0``.
    """
    n = path.n

    def K_of(z, t):
        if H is None:
            return np.zeros(z.shape[:-1])
        w = path(t, z) if at_image else z
        return H(w, t)

    def func(z, t):
        return path(t, z) / np.sqrt(1 + K_of(z, t))[..., None], t

    def guard(z, t):
        return 1 + K_of(z, t) > 0

    def jac(z, t):
        t = np.broadcast_to(t, z.shape[:-1])
        U, dU = path.matrix(t)
        R = complex_to_real_matrix(U)
        x = to_real(z)
        Uz = _apply(U, z)
        dUz = _apply(dU, z)
        if H is None:
            K = np.zeros(z.shape[:-1])
            gK = np.zeros(x.shape)
            dK = np.zeros(z.shape[:-1])
        else:
            w = Uz if at_image else z
            K = H(w, t)
            gH = to_real(H.gradient(w, t))
            h = 1e-6
            dK = (H(w, t + h) - H(w, t - h)) / (2 * h)
            if at_image:
                gK = np.einsum("...ji,...j->...i", R, gH)
                dK = dK + np.sum(gH * to_real(dUz), axis=-1)
            else:
                gK = gH
        kap = (1 + K) ** -0.5
        dkap = -0.5 * (1 + K) ** -1.5
        Rx = to_real(Uz)
        Dx = kap[..., None, None] * R + Rx[..., :, None] * (dkap[..., None] * gK)[..., None, :]
        Dt = to_real(kap[..., None] * dUz + (dkap * dK)[..., None] * Uz)
        m = 2 * n + 1
        J = np.zeros(z.shape[:-1] + (m, m))
        J[..., : 2 * n, : 2 * n] = Dx
        J[..., : 2 * n, -1] = Dt
        J[..., -1, -1] = 1.0
        return J

    closed = path.matrix is not None
    return SmoothMap(func, n, True, jac if closed else None, guard, None, True, name)


def make_twist(N: int, n: int) -> SmoothMap:
    """``F_N(z, t) = (exp(2 pi i N t) z / sqrt(1 + N pi |z|^2), t)``.

    Its conformal factor is ``1 / (1 + N pi |z|^2)``.
    """
    if N < 1 or n < 1:
        raise ValueError("need N >= 1 and n >= 1")
    rot = rotation_path(np.full(n, float(N)), f"e[{N}t]")
    return _scaled_linear_map(rot, rot.hamiltonian, f"twist[N={N}]")


def make_loop_embedding(h: PathFamily, H: HamiltonianField) -> SmoothMap:
    """``Psi(z, t) = (h_t z / (1 + H(h_t z, t)), t)``.

    Division is the R_+ action, so the complex vector is divided by
    ``sqrt(1 + H)``.  The conformal factor is ``1 / (1 + H(h_t z, t))``.
    Closed-form Jacobian when ``h`` is linear.
    """
    if h.matrix is not None:
        return _scaled_linear_map(h, H, f"loop-embedding[{h.name}]")

    def func(z, t):
        w = h(t, z)
        return w / np.sqrt(1 + H(w, t))[..., None], t

    def guard(z, t):
        return 1 + H(h(t, z), t) > 0

    return SmoothMap(func, h.n, True, None, guard, None, True,
                     f"loop-embedding[{h.name}]")


def make_squeeze_pair(n: int):
    """The pair ``Phi = f_t z / sqrt(1+F)``, ``Psi = g_t z / sqrt(1+G)``.

    ``F = (n-1) rho_1 - varrho`` and ``G = rho_1 - rho_2`` are invariant
    under their own loops, so both are loop embeddings.
    """
    gen = make_unitary_generators(n)
    Phi = _scaled_linear_map(gen["f"], gen["f"].hamiltonian, "Phi", at_image=False)
    Psi = _scaled_linear_map(gen["g"], gen["g"].hamiltonian, "Psi", at_image=False)
    return replace(Phi, name="Phi"), replace(Psi, name="Psi")


def make_shift(c: float, n: int) -> SmoothMap:
    """Translation ``Y_c``: ``z_1 -> z_1 + c``."""
    e1 = np.zeros(n, dtype=complex)
    e1[0] = c

    def jac(z):
        return np.broadcast_to(np.eye(2 * n), z.shape[:-1] + (2 * n, 2 * n)).copy()

    return SmoothMap(lambda z: z + e1, n, False, jac, None, lambda z: z - e1,
                     False, f"shift[{c}]")


def shift_hamiltonian(n: int) -> HamiltonianField:
    """``-q_1``: its Hamiltonian field is the unit translation along ``p_1``."""
    e1 = np.zeros(n, dtype=complex)
    e1[0] = -1j

    return HamiltonianField(lambda z, t: -np.asarray(z)[..., 0].imag, n,
                            lambda z, t: np.broadcast_to(e1, np.shape(z)).copy(),
                            False, False, "-q1")


def make_planck_map(hbar: float, n: int) -> SmoothMap:
    """``(p, q, t) -> (sqrt(h) p, sqrt(h) q, h (t + p.q / 2))``, ``h = 2 pi hbar``.

    Pulls ``du - p' dq'`` back to ``h (dt - alpha)``; use
    :func:`planck_target_form` as the target form.
    """
    if hbar <= 0:
        raise ValueError("hbar must be positive")
    h = 2 * np.pi * hbar
    sh = np.sqrt(h)

    def func(z, t):
        return sh * z, h * (t + 0.5 * np.sum(z.real * z.imag, axis=-1))

    def jac(z, t):
        m = 2 * n + 1
        J = np.zeros(z.shape[:-1] + (m, m))
        idx = np.arange(2 * n)
        J[..., idx, idx] = sh
        J[..., -1, :n] = 0.5 * h * z.imag
        J[..., -1, n: 2 * n] = 0.5 * h * z.real
        J[..., -1, -1] = h
        return J

    def inverse(z, u):
        w = z / sh
        return w, u / h - 0.5 * np.sum(w.real * w.imag, axis=-1)

    return SmoothMap(func, n, True, jac, None, inverse, False, f"planck[hbar={hbar}]")


def planck_target_form(z, u):
    """Coefficients of ``du - p dq`` in ``(dp, dq, du)`` order."""
    z = np.asarray(z, dtype=complex)
    zero = np.zeros(z.shape)
    one = np.ones(z.shape[:-1] + (1,))
    return np.concatenate([zero, -z.real, one], axis=-1)


# ---------------------------------------------------------------------------
# PU(2,1) maps on the three-sphere


def make_pu21(alpha: float):
    """The map ``b`` of ``S^3``, the Cayley transform and the dilation.

    Returns
    -------
    b, cayley, dilation : SmoothMap
        ``dilation`` is ``(w_1, w_2) -> (s^2 w_1, s w_2)`` with ``s`` recovered
        numerically from ``cayley o b o cayley^{-1}`` (stored in its name and
        in :func:`pu21_dilation_factor`).
    """
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    C, S = np.cosh(alpha), np.sinh(alpha)

    def b(z):
        d = z[..., 0] + C
        return np.stack([(C * z[..., 0] + 1) / d, S * z[..., 1] / d], axis=-1)

    def binv(w):
        d = C - w[..., 0]
        return np.stack([(C * w[..., 0] - 1) / d, S * w[..., 1] / d], axis=-1)

    def bjac(z):
        return complex_to_real_matrix(pu21_holomorphic_jacobian(alpha, z))

    bmap = SmoothMap(b, 2, False, bjac, lambda z: np.abs(z[..., 0] + C) > 1e-12,
                     binv, False, f"b[alpha={alpha}]")

    def cay(z):
        d = 1j / (1 - z[..., 0])
        return np.stack([d * (z[..., 0] + 1), d * z[..., 1]], axis=-1)

    def cayinv(w):
        d = w[..., 0] + 1j
        return np.stack([(w[..., 0] - 1j) / d, 2 * w[..., 1] / d], axis=-1)

    cmap = SmoothMap(cay, 2, False, None, lambda z: np.abs(1 - z[..., 0]) > 1e-12,
                     cayinv, False, "cayley")
    s = pu21_dilation_factor(alpha, bmap, cmap)
    dil = SmoothMap(lambda w: w * np.array([s * s, s]), 2, False, None, None,
                    lambda w: w / np.array([s * s, s]), False, f"dilation[s={s}]")
    return bmap, cmap, dil


def pu21_holomorphic_jacobian(alpha: float, z: np.ndarray) -> np.ndarray:
    """Complex Jacobian of ``b``."""
    C, S = np.cosh(alpha), np.sinh(alpha)
    z = np.asarray(z, dtype=complex)
    d = z[..., 0] + C
    D = np.zeros(z.shape[:-1] + (2, 2), dtype=complex)
    D[..., 0, 0] = S * S / d ** 2
    D[..., 1, 0] = -S * z[..., 1] / d ** 2
    D[..., 1, 1] = S / d
    return D


def pu21_dilation_factor(alpha: float, bmap=None, cmap=None, samples: int = 16) -> float:
    """Recover ``s`` from ``cayley o b o cayley^{-1}`` on sample points."""
    if bmap is None or cmap is None:
        bmap, cmap, _ = make_pu21(alpha)
    rng = np.random.default_rng(12345)
    w = rng.normal(size=(samples, 2)) + 1j * rng.normal(size=(samples, 2))
    w[:, 0] += 3j  # keep away from the Cayley pole
    out = cmap(bmap(cmap.inverse(w)))
    s = np.median((out[:, 1] / w[:, 1]).real)
    return float(s)


def contact_factor_s3(bmap: SmoothMap, alpha: float, x: np.ndarray) -> np.ndarray:
    """``kappa`` in ``b^* beta = kappa beta`` on the unit sphere.

    ``beta`` is the restriction of the Liouville form; the Reeb direction at
    ``x`` is ``i x`` with ``beta(i x) = 1/2``.
    """
    x = np.asarray(x, dtype=complex)
    D = pu21_holomorphic_jacobian(alpha, x)
    v = _apply(D, 1j * x)
    return 2 * alpha_pairing(bmap(x), v)


def make_pu21_lift(alpha: float) -> SmoothMap:
    """Equivariant lift of ``b`` to ``C^2 minus 0``.

    ``B(sqrt(s) x) = sqrt(s / kappa(x)) b(x)`` for unit ``x``; this is a
    symplectomorphism commuting with the R_+ action.
    """
    bmap, _, _ = make_pu21(alpha)
    inv_map = SmoothMap(bmap.inverse, 2, False, None, None, bmap.func, False, "b^-1")

    def lift(z, forward=True):
        z = np.asarray(z, dtype=complex)
        r = np.linalg.norm(z, axis=-1)
        x = z / r[..., None]
        if forward:
            k = contact_factor_s3(bmap, alpha, x)
            y = bmap(x)
        else:
            y = inv_map(x)
            k = 1.0 / contact_factor_s3(bmap, alpha, y)
        return (r / np.sqrt(k))[..., None] * y

    return SmoothMap(lambda z: lift(z, True), 2, False, None, None,
                     lambda z: lift(z, False), True, f"B[alpha={alpha}]")


def s3_loop(alpha: float) -> PathFamily:
    """The loop ``e_{-t} f_{3t} B e_t B^{-1}`` on ``C^2``, with Hamiltonian."""
    gen = make_unitary_generators(2)
    B = make_pu21_lift(alpha)
    inner = compose_paths(time_scaled(gen["f"], 3), conjugate_path(B, gen["e"]))
    return compose_paths(invert_path(gen["e"]), inner)


def s3_loop_hamiltonian(alpha: float) -> HamiltonianField:
    """Closed-form Hamiltonian ``-rho + 3(rho_1 - rho_2) + rho(B^{-1} f_{-3t} e_t z)``."""
    B = make_pu21_lift(alpha)
    f = make_unitary_generators(2)["f"]

    def H(z, t):
        r = radial_invariants(z)
        w = f(-3 * np.asarray(t), phase(t)[..., None] * z)
        return 2 * r.rho_j[..., 0] - 4 * r.rho_j[..., 1] + rho(B.inverse(w))

    return HamiltonianField(H, 2, None, True, False, f"s3-loop[alpha={alpha}]")
