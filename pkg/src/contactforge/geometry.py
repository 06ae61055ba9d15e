"""Symplectic and contact basics on C^n = R^{2n} and V = R^{2n} x S^1.

Conventions
-----------
Points of ``C^n`` are complex arrays ``z`` of shape ``(..., n)`` with
``z = p + i q``.  Real coordinates are ordered ``x = (p_1..p_n, q_1..q_n)``
and points of ``V`` carry a trailing circle coordinate ``t`` (real, mod 1).
Covectors and Jacobians are expressed in these real coordinates.

The Liouville form is ``alpha = 1/2 (p dq - q dp)`` and the contact form on
``V`` is ``dt - alpha``.  Hamiltonian vector fields use
``sgrad H = (-dH/dq, dH/dp)``, which makes ``pi |z|^2`` generate the
rotation ``z -> exp(2 pi i t) z`` and gives ``alpha(sgrad H) = H`` for
functions of degree one under the R_+ action ``z -> sqrt(c) z``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.stats import qmc

from .report import BoundReport

FD_REL_STEP = 1e-6


# ---------------------------------------------------------------------------
# coordinates


def to_real(z: np.ndarray) -> np.ndarray:
    """Stack ``(p, q)`` from a complex array of shape ``(..., n)``."""
    z = np.asarray(z, dtype=complex)
    return np.concatenate([z.real, z.imag], axis=-1)


def to_complex(x: np.ndarray) -> np.ndarray:
    """Inverse of :func:`to_real`."""
    x = np.asarray(x, dtype=float)
    n = x.shape[-1] // 2
    return x[..., :n] + 1j * x[..., n:]


def omega_matrix(n: int) -> np.ndarray:
    """Matrix of the symplectic form, ``omega(u, v) = u^T Omega v``."""
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, eye], [-eye, zero]])


def complex_structure(n: int) -> np.ndarray:
    """Real matrix of multiplication by ``i``."""
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, -eye], [eye, zero]])


def complex_to_real_matrix(U: np.ndarray) -> np.ndarray:
    """Real ``2n x 2n`` matrix of a complex-linear map ``U``."""
    U = np.asarray(U, dtype=complex)
    A, B = U.real, U.imag
    top = np.concatenate([A, -B], axis=-1)
    bottom = np.concatenate([B, A], axis=-1)
    return np.concatenate([top, bottom], axis=-2)


def wrap_time(t):
    """Reduce a circle coordinate to ``[0, 1)``."""
    return np.mod(t, 1.0)


def phase(t) -> np.ndarray:
    """``exp(2 pi i t)`` with the angle reduced mod 1 first."""
    return np.exp(2j * np.pi * wrap_time(np.asarray(t, dtype=float)))


# ---------------------------------------------------------------------------
# forms and invariants


def liouville_form(z: np.ndarray) -> np.ndarray:
    """Coefficients of ``alpha_z = 1/2 (p dq - q dp)`` in ``(dp, dq)`` order.

    Parameters
    ----------
    z : array_like, shape (..., n)
        Complex points.

    Returns
    -------
    ndarray, shape (..., 2n)
    """
    z = np.asarray(z, dtype=complex)
    return 0.5 * np.concatenate([-z.imag, z.real], axis=-1)


def alpha_pairing(z: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Evaluate ``alpha_z(v)`` for complex tangent vectors ``v``.

    Uses ``alpha_z(v) = 1/2 Im <z, v>`` with the Hermitian product
    conjugate-linear in the first slot.
    """
    z = np.asarray(z, dtype=complex)
    v = np.asarray(v, dtype=complex)
    return 0.5 * np.sum(np.imag(np.conj(z) * v), axis=-1)


def contact_form(z: np.ndarray, t=None) -> np.ndarray:
    """Coefficients of ``dt - alpha`` in ``(dp, dq, dt)`` order.

    The form does not depend on ``t``; the argument is accepted so the
    signature mirrors a point of ``V``.
    """
    a = liouville_form(z)
    one = np.ones(a.shape[:-1] + (1,))
    return np.concatenate([-a, one], axis=-1)


@dataclass(frozen=True)
class RadialInvariants:
    """``rho_j = pi |z_j|^2``, ``varrho = sum_{j>=2} rho_j`` and ``rho``."""

    rho_j: np.ndarray
    varrho: np.ndarray
    rho: np.ndarray


def radial_invariants(z: np.ndarray) -> RadialInvariants:
    z = np.asarray(z, dtype=complex)
    rj = np.pi * np.abs(z) ** 2
    return RadialInvariants(rj, rj[..., 1:].sum(axis=-1), rj.sum(axis=-1))


def rho(z: np.ndarray) -> np.ndarray:
    """``pi |z|^2``."""
    z = np.asarray(z, dtype=complex)
    return np.pi * np.sum(np.abs(z) ** 2, axis=-1)


def rplus_action(c, z: np.ndarray) -> np.ndarray:
    """The R_+ action on the symplectization, ``z -> sqrt(c) z``."""
    c = np.asarray(c, dtype=float)
    if np.any(c <= 0):
        raise ValueError("rplus_action needs c > 0")
    return np.sqrt(c)[..., None] * np.asarray(z, dtype=complex)


# ---------------------------------------------------------------------------
# Hamiltonians


@dataclass(frozen=True)
class HamiltonianField:
    """Scalar function ``H(z, t)`` (or ``H(z, t, s)`` when ``parametric``).

    Attributes
    ----------
    func : callable
        Vectorized evaluator returning real values of shape ``z.shape[:-1]``.
    n : int
        Complex dimension.
    grad : callable, optional
        Closed-form complex gradient ``dH/dp + i dH/dq``.
    homogeneous : bool
        Degree one under ``z -> sqrt(c) z`` (degree two in ``z``).
    """

    func: Callable
    n: int
    grad: Optional[Callable] = None
    homogeneous: bool = True
    parametric: bool = False
    name: str = "H"

    def __call__(self, z, t=0.0, s=None):
        z = np.asarray(z, dtype=complex)
        t = np.asarray(t, dtype=float)
        if self.parametric:
            return self.func(z, t, 0.0 if s is None else np.asarray(s, dtype=float))
        return self.func(z, t)

    def at(self, s) -> "HamiltonianField":
        """Freeze the homotopy parameter."""
        if not self.parametric:
            return self
        g = None
        if self.grad is not None:
            g = lambda z, t: self.grad(z, t, s)  # noqa: E731
        return HamiltonianField(lambda z, t: self.func(z, t, s), self.n, g,
                                self.homogeneous, False, f"{self.name}[s={s}]")

    def gradient(self, z, t=0.0):
        """Complex gradient; central differences when no closed form."""
        z = np.asarray(z, dtype=complex)
        if self.grad is not None:
            return self.grad(z, np.asarray(t, dtype=float))
        return fd_gradient(lambda w: self(w, t), z)

    def scaled(self, c: float) -> "HamiltonianField":
        g = None if self.grad is None else (lambda z, t: c * self.grad(z, t))
        return HamiltonianField(lambda z, t: c * self.func(z, t), self.n, g,
                                self.homogeneous, False, f"{c}*{self.name}")


def fd_gradient(f: Callable, z: np.ndarray) -> np.ndarray:
    """Central-difference complex gradient of a real function on ``C^n``."""
    z = np.asarray(z, dtype=complex)
    out = np.zeros(z.shape, dtype=complex)
    for k in range(z.shape[-1]):
        for unit, slot in ((1.0, 1.0), (1j, 1j)):
            coord = z[..., k].real if unit == 1.0 else z[..., k].imag
            h = FD_REL_STEP * np.maximum(1.0, np.abs(coord))
            e = np.zeros(z.shape, dtype=complex)
            e[..., k] = unit * h
            out[..., k] += slot * (f(z + e) - f(z - e)) / (2 * h)
    return out


def quadratic_hamiltonian(weights, name: str = "H") -> HamiltonianField:
    """``H(z) = sum_j w_j pi |z_j|^2`` with closed-form gradient."""
    w = np.asarray(weights, dtype=float)

    def func(z, t):
        return np.pi * np.sum(w * np.abs(z) ** 2, axis=-1)

    def grad(z, t):
        return 2 * np.pi * w * z

    return HamiltonianField(func, len(w), grad, True, False, name)


def sgrad(H: HamiltonianField, z, t=0.0) -> np.ndarray:
    """Hamiltonian vector field as a complex velocity ``i * grad H``."""
    return 1j * H.gradient(np.asarray(z, dtype=complex), t)


# ---------------------------------------------------------------------------
# maps


@dataclass(frozen=True)
class SmoothMap:
    """A map of ``V`` (``circle=True``) or of ``C^n`` (``circle=False``).

    ``func(z, t) -> (z', t')`` on ``V`` and ``func(z) -> z'`` on ``C^n``.
    ``jac`` returns the real Jacobian in ``(p, q[, t])`` coordinates; when
    absent, central differences are used.
    """

    func: Callable
    n: int
    circle: bool = True
    jac: Optional[Callable] = None
    guard: Optional[Callable] = None
    inverse: Optional[Callable] = None
    equivariant: bool = False
    name: str = "map"

    def __call__(self, z, t=None):
        z = np.asarray(z, dtype=complex)
        if self.circle:
            return self.func(z, np.asarray(0.0 if t is None else t, dtype=float))
        return self.func(z)

    def in_domain(self, z, t=None) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        if self.guard is None:
            return np.ones(z.shape[:-1], dtype=bool)
        if self.circle:
            return np.asarray(self.guard(z, np.asarray(0.0 if t is None else t, dtype=float)))
        return np.asarray(self.guard(z))

    def _flat(self, x):
        z = to_complex(x[..., : 2 * self.n])
        if self.circle:
            zz, tt = self.func(z, x[..., -1])
            return np.concatenate([to_real(zz), np.asarray(tt)[..., None]], axis=-1)
        return to_real(self.func(z))

    def fd_jacobian(self, z, t=None) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        x = to_real(z)
        if self.circle:
            tt = np.broadcast_to(np.asarray(0.0 if t is None else t, dtype=float), z.shape[:-1])
            x = np.concatenate([x, tt[..., None]], axis=-1)
        return fd_jacobian(self._flat, x)

    def jacobian(self, z, t=None) -> np.ndarray:
        if self.jac is None:
            return self.fd_jacobian(z, t)
        z = np.asarray(z, dtype=complex)
        if self.circle:
            return self.jac(z, np.asarray(0.0 if t is None else t, dtype=float))
        return self.jac(z)


def fd_jacobian(f: Callable, x: np.ndarray) -> np.ndarray:
    """Central-difference Jacobian of ``f: R^m -> R^k`` along the last axis."""
    x = np.asarray(x, dtype=float)
    cols = []
    for k in range(x.shape[-1]):
        h = FD_REL_STEP * np.maximum(1.0, np.abs(x[..., k]))
        e = np.zeros_like(x)
        e[..., k] = h
        cols.append((f(x + e) - f(x - e)) / (2 * h[..., None]))
    return np.stack(cols, axis=-1)


def identity_map(n: int, circle: bool = True) -> SmoothMap:
    m = 2 * n + (1 if circle else 0)

    def jac(z, t=None):
        return np.broadcast_to(np.eye(m), z.shape[:-1] + (m, m)).copy()

    if circle:
        return SmoothMap(lambda z, t: (z, t), n, True, jac,
                         inverse=lambda z, t: (z, t), equivariant=True, name="identity")
    return SmoothMap(lambda z: z, n, False, jac, inverse=lambda z: z,
                     equivariant=True, name="identity")


def symplectic_defect(J: np.ndarray) -> np.ndarray:
    """``max |J^T Omega J - Omega|`` per point, for ``2n x 2n`` Jacobians."""
    n = J.shape[-1] // 2
    Om = omega_matrix(n)
    D = np.swapaxes(J, -1, -2) @ Om @ J - Om
    return np.max(np.abs(D), axis=(-1, -2))


# ---------------------------------------------------------------------------
# grids


@dataclass(frozen=True)
class SamplingGrid:
    """Deterministic sampling grid on shells x sphere x time x homotopy.

    Attributes
    ----------
    shells : int
        Number of log-spaced radii on ``[r_min, r_max]`` (Euclidean ``|z|``).
    sphere_points : int
        Scrambled Sobol points pushed to the unit sphere.
    time_samples : int
        Uniform samples of ``t`` in ``[0, 1)``.
    homotopy_samples : int
        Uniform samples of ``s`` in ``[0, 1]``.
    """

    shells: int = 8
    r_min: float = 0.25
    r_max: float = 4.0
    sphere_points: int = 512
    time_samples: int = 64
    homotopy_samples: int = 16
    seed: int = 0

    def __post_init__(self):
        for name in ("shells", "sphere_points", "time_samples", "homotopy_samples"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if not (0 < self.r_min <= self.r_max):
            raise ValueError("need 0 < r_min <= r_max")

    def radii(self) -> np.ndarray:
        if self.shells == 1:
            return np.array([self.r_min])
        return np.geomspace(self.r_min, self.r_max, self.shells)

    def sphere(self, n: int) -> np.ndarray:
        return sphere_points(n, self.sphere_points, self.seed)

    def times(self) -> np.ndarray:
        return np.arange(self.time_samples) / self.time_samples

    def svalues(self) -> np.ndarray:
        if self.homotopy_samples == 1:
            return np.array([1.0])
        return np.linspace(0.0, 1.0, self.homotopy_samples)

    def points(self, n: int) -> np.ndarray:
        """All shell points, shape ``(shells * sphere_points, n)``."""
        u = self.sphere(n)
        return (self.radii()[:, None, None] * u[None]).reshape(-1, n)

    def spacetime(self, n: int):
        """Flattened ``(z, t)`` over shells x sphere x times."""
        z = self.points(n)
        t = self.times()
        Z = np.repeat(z, len(t), axis=0)
        T = np.tile(t, len(z))
        return Z, T

    def size(self, with_time: bool = True, with_s: bool = False) -> int:
        m = self.shells * self.sphere_points
        if with_time:
            m *= self.time_samples
        if with_s:
            m *= self.homotopy_samples
        return m

    def as_dict(self) -> dict:
        return {
            "shells": self.shells, "r_min": self.r_min, "r_max": self.r_max,
            "sphere_points": self.sphere_points, "time_samples": self.time_samples,
            "homotopy_samples": self.homotopy_samples, "seed": self.seed,
        }


def sphere_points(n: int, count: int, seed: int = 0) -> np.ndarray:
    """Low-discrepancy points on the unit sphere of ``C^n``.

    Scrambled Sobol points in ``[0,1)^{2n}`` are mapped through the normal
    inverse CDF and normalized, which keeps the sample deterministic for a
    given seed.
    """
    from scipy.special import ndtri

    sob = qmc.Sobol(d=2 * n, scramble=True, seed=seed)
    m = int(np.ceil(np.log2(max(count, 1))))
    u = sob.random_base2(m)[:count]
    u = np.clip(u, 1e-12, 1 - 1e-12)
    g = ndtri(u)
    g /= np.linalg.norm(g, axis=-1, keepdims=True)
    return to_complex(g)


# ---------------------------------------------------------------------------
# contactness


def conformal_factor_check(smap: SmoothMap, grid: SamplingGrid, tol: float,
                           target_form: Optional[Callable] = None,
                           use_fd: bool = False) -> BoundReport:
    """Test ``smap^*(dt - alpha) = c (dt - alpha)`` with ``c > 0`` on a grid.

    Parameters
    ----------
    smap : SmoothMap
        Map of ``V`` (``circle=True``).
    grid : SamplingGrid
    tol : float
        Bound on the relative residual ``|pullback - c lambda| / |pullback|``.
    target_form : callable, optional
        Covector field on the target, ``(z', t') -> (..., 2n+1)``.  Defaults
        to :func:`contact_form`.
    use_fd : bool
        Force finite-difference Jacobians.

    Returns
    -------
    BoundReport
        ``min_value`` is the smallest conformal factor seen; the maximum
        residual and the factors at every point live in ``details``.
    """
    if not smap.circle:
        raise ValueError("conformal_factor_check needs a map of V")
    start = time.perf_counter()
    z, t = grid.spacetime(smap.n)
    ok = smap.in_domain(z, t) & (np.linalg.norm(z, axis=-1) >= grid.r_min * (1 - 1e-12))
    skipped = int(np.count_nonzero(~ok))
    z, t = z[ok], t[ok]
    zz, tt = smap(z, t)
    J = smap.fd_jacobian(z, t) if (use_fd or smap.jac is None) else smap.jacobian(z, t)
    lam_t = (target_form or contact_form)(zz, tt)
    pulled = np.einsum("...i,...ij->...j", lam_t, J)
    lam_s = contact_form(z, t)
    c = np.sum(pulled * lam_s, axis=-1) / np.sum(lam_s * lam_s, axis=-1)
    resid = np.linalg.norm(pulled - c[:, None] * lam_s, axis=-1)
    resid = resid / np.maximum(np.linalg.norm(pulled, axis=-1), 1e-300)
    k = int(np.argmin(c))
    worst = int(np.argmax(resid))
    passed = bool(resid[worst] < tol and c[k] > 0)
    return BoundReport(
        quantity=f"conformal factor of {smap.name}",
        min_value=float(c[k]),
        witness={"z": z[k], "t": float(t[k])},
        grid=grid.as_dict(),
        tolerance=tol,
        passed=passed,
        skipped=skipped,
        runtime=time.perf_counter() - start,
        details={"max_residual": float(resid[worst]), "points": int(len(c)),
                 "factors": c, "z": z, "t": t, "jacobian": "fd" if (use_fd or smap.jac is None) else "closed"},
    )
