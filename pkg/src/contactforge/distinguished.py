"""The equivariant map ``a`` carrying an ellipsoid onto its shift, and the
positive contractible loop built from it (point fibre, ``C^n`` only).

Notation: ``E = {nu rho_1 + varrho = 1}``, ``Y_s`` the shift by ``s`` along
``Re z_1``, ``B = {rho <= 1}`` and ``W = {(2n+1) varrho - (n-1) rho_1 <= 1}``.
The map ``a^(s)`` is the time-``s`` flow of the equivariant extension
``F_s`` of the translation Hamiltonian ``-q_1`` restricted to ``Y_s(E)``;
``a = a^(c)``.
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from .geometry import (HamiltonianField, SamplingGrid, SmoothMap,
                       radial_invariants, rho, sphere_points, symplectic_defect,
                       to_complex, to_real, fd_jacobian)
from .maps import make_unitary_generators, time_scaled
from .report import BoundReport, MuEstimate, argmin_first

CACHE_VERSION = 1


# ---------------------------------------------------------------------------
# shift parameters


@dataclass(frozen=True)
class ShiftParams:
    """``(nu, c, lam)`` with ``pi nu c^2`` above the inclusion threshold."""

    n: int
    nu: float
    c: float
    lam: float

    @property
    def x(self) -> float:
        """``pi nu c^2``."""
        return float(np.pi * self.nu * self.c ** 2)

    def lower_bound(self) -> float:
        n = self.n
        return 2 * n / (2 * n + 1) + self.nu * 2 * n / (n - 1)

    def is_valid(self) -> bool:
        return self.lower_bound() < self.x <= self.lam ** 2 < 1


def choose_shift_params(n: int, slack: float = 0.05) -> ShiftParams:
    """Deterministic admissible ``(nu, c, lam)``.

    Takes the first ``nu = 10^-k`` whose window ``(lower, 1)`` for
    ``pi nu c^2`` leaves ``slack`` below 1, puts ``pi nu c^2`` at the window
    midpoint and ``lam^2`` at the midpoint of ``[pi nu c^2, 1)``.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    for k in range(1, 12):
        nu = 10.0 ** -k
        lo = 2 * n / (2 * n + 1) + nu * 2 * n / (n - 1)
        if lo < 1 - slack:
            x = 0.5 * (lo + 1)
            c = np.sqrt(x / (np.pi * nu))
            lam = np.sqrt(0.5 * (x + 1))
            return ShiftParams(n, nu, float(c), float(lam))
    raise RuntimeError("no admissible nu found")


def ellipsoid_level(params: ShiftParams, z, s=0.0) -> np.ndarray:
    """``nu pi |z_1 - s|^2 + varrho(z)``; equals 1 on ``Y_s(E)``."""
    z = np.asarray(z, dtype=complex)
    s = np.asarray(s, dtype=float)
    r = radial_invariants(z)
    return params.nu * np.pi * np.abs(z[..., 0] - s) ** 2 + r.varrho


def w_level(z, n: int) -> np.ndarray:
    """``(2n+1) varrho - (n-1) rho_1``; ``W`` is where this is ``<= 1``."""
    r = radial_invariants(z)
    return (2 * n + 1) * r.varrho - (n - 1) * r.rho_j[..., 0]


def points_on_E(params: ShiftParams, count: int, seed: int = 0) -> np.ndarray:
    """Rays through quasi-random sphere points, cut at ``E``."""
    u = sphere_points(params.n, count, seed)
    return u / np.sqrt(ellipsoid_level(params, u))[..., None]


# ---------------------------------------------------------------------------
# equivariant extension


def ray_root(Q: Callable, z: np.ndarray, lo: float = 1e-8, hi: float = 1e8,
             iters: int = 200) -> np.ndarray:
    """Solve ``Q(sqrt(u) z) = 1`` for ``u > 0`` along each ray.

    Vectorized bisection in ``log u`` down to machine resolution.  ``Q``
    must increase along rays (starshaped level set).

    Raises
    ------
    ValueError
        If the root is not bracketed by ``[lo, hi]``.
    """
    z = np.asarray(z, dtype=complex)
    f = lambda u: Q(np.sqrt(u)[..., None] * z) - 1.0  # noqa: E731
    a = np.full(z.shape[:-1], np.log(lo))
    b = np.full(z.shape[:-1], np.log(hi))
    fa, fb = f(np.exp(a)), f(np.exp(b))
    if np.any(fa > 0) or np.any(fb < 0):
        raise ValueError("ray crossing not bracketed: level set is not starshaped here")
    for _ in range(iters):
        m = 0.5 * (a + b)
        fm = f(np.exp(m))
        a = np.where(fm < 0, m, a)
        b = np.where(fm < 0, b, m)
        if np.max(b - a) < 1e-15:
            break
    return np.exp(0.5 * (a + b))


def equivariant_extension(H_on_sigma: Callable, Q: Callable, n: int,
                          name: str = "extension") -> HamiltonianField:
    """Degree-one extension ``F(z) = H(sqrt(u) z) / u`` of ``H`` on ``{Q = 1}``.

    ``u(z)`` is the R_+ parameter moving ``z`` onto the level set, so
    ``F`` restricts to ``H`` on it and ``F(sqrt(c) z) = c F(z)``.
    """

    def F(z, t):
        u = ray_root(Q, z)
        return H_on_sigma(np.sqrt(u)[..., None] * np.asarray(z, dtype=complex)) / u

    return HamiltonianField(F, n, None, True, False, name)


def shift_extension(params: ShiftParams) -> HamiltonianField:
    """Closed form of the extension of ``-q_1`` from ``Y_s(E)``.

    Along the ray ``lam z`` the level condition is the quadratic
    ``A lam^2 - 2 B lam + (nu pi s^2 - 1) = 0`` with
    ``A = nu rho_1 + varrho`` and ``B = nu pi s p_1``; its positive root is
    unique because ``nu pi s^2 < 1``.  Then ``F_s = -q_1 / lam``.  The field
    is parametric in ``s``.
    """
    nu = params.nu
    n = params.n
    w = np.ones(n)
    w[0] = nu

    def parts(z, s):
        z = np.asarray(z, dtype=complex)
        s = np.asarray(s, dtype=float)
        A = np.pi * np.sum(w * np.abs(z) ** 2, axis=-1)
        B = nu * np.pi * s * z[..., 0].real
        C0 = nu * np.pi * s ** 2 - 1
        root = np.sqrt(B * B - A * C0)
        lam = (B + root) / A
        return z, s, A, B, lam, root

    def F(z, t, s):
        z, s, A, B, lam, root = parts(z, s)
        return -z[..., 0].imag / lam

    def grad(z, t, s):
        z, s, A, B, lam, root = parts(z, s)
        # d lam = -(lam^2 dA - 2 lam dB) / (2 A lam - 2 B)
        dA = 2 * np.pi * w * z  # complex gradient of A
        dB = np.zeros(z.shape, dtype=complex)
        dB[..., 0] = nu * np.pi * s
        den = 2 * root
        dlam = -(lam[..., None] ** 2 * dA - 2 * lam[..., None] * dB) / den[..., None]
        q1 = z[..., 0].imag
        g = (q1 / lam ** 2)[..., None] * dlam
        g[..., 0] += -1j / lam
        return g

    return HamiltonianField(F, n, grad, True, True, "F_s")


# ---------------------------------------------------------------------------
# the distinguished map


@dataclass
class DistinguishedMap:
    """Flow ``a^(s)``, ``s in [0, c]``, of the extended shift Hamiltonian.

    Trajectories start from unit-norm points and are rescaled afterwards,
    so ``a^(s)(k z) = k a^(s)(z)`` holds exactly for real ``k > 0``.
    """

    params: ShiftParams
    steps_per_unit: int = 512
    hamiltonian: Optional[HamiltonianField] = None
    diagnostics: Optional[dict] = None

    def __post_init__(self):
        if self.hamiltonian is None:
            self.hamiltonian = shift_extension(self.params)
        if self.diagnostics is None:
            self.diagnostics = {}

    # -- integration -----------------------------------------------------
    def _velocity(self, z, s):
        return 1j * self.hamiltonian.grad(z, 0.0, s)

    def flow(self, z, s_to, s_from=0.0, steps_per_unit: Optional[int] = None) -> np.ndarray:
        """Transport ``z`` from parameter ``s_from`` to ``s_to`` (arrays broadcast)."""
        z = np.asarray(z, dtype=complex)
        shape = z.shape[:-1]
        s_to = np.broadcast_to(np.asarray(s_to, dtype=float), shape)
        s_from = np.broadcast_to(np.asarray(s_from, dtype=float), shape)
        r = np.linalg.norm(z, axis=-1)
        x = z / np.where(r > 0, r, 1.0)[..., None]
        spu = steps_per_unit or self.steps_per_unit
        span = float(np.max(np.abs(s_to - s_from))) if z.size else 0.0
        N = int(np.ceil(spu * span))
        if N == 0:
            return z.copy()
        h = (s_to - s_from) / N
        s = s_from.copy()
        hh = h[..., None]
        for _ in range(N):
            k1 = self._velocity(x, s)
            k2 = self._velocity(x + 0.5 * hh * k1, s + 0.5 * h)
            k3 = self._velocity(x + 0.5 * hh * k2, s + 0.5 * h)
            k4 = self._velocity(x + hh * k3, s + h)
            x = x + hh / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
            s = s + h
        return r[..., None] * x

    def __call__(self, z, s=None) -> np.ndarray:
        """``a^(s)(z)``; ``s`` defaults to ``c``."""
        return self.flow(z, self.params.c if s is None else s, 0.0)

    def inverse(self, z, s=None) -> np.ndarray:
        """``(a^(s))^{-1}(z)`` by backward integration."""
        return self.flow(z, 0.0, self.params.c if s is None else s)

    def as_map(self, s=None) -> SmoothMap:
        return SmoothMap(lambda z: self(z, s), self.params.n, False, None, None,
                         lambda z: self.inverse(z, s), True,
                         f"a[s={'c' if s is None else s}]")

    # -- checks -----------------------------------------------------------
    def boundary_residual(self, count: int = 256, s_samples: int = 9, seed: int = 0) -> float:
        """``max |level_s(a^(s) x) - 1|`` over ``x`` on ``E``."""
        x = points_on_E(self.params, count, seed)
        svals = np.linspace(0, self.params.c, s_samples)
        X = np.repeat(x, len(svals), axis=0)
        S = np.tile(svals, len(x))
        y = self.flow(X, S)
        return float(np.max(np.abs(ellipsoid_level(self.params, y, S) - 1)))

    def richardson_gap(self, count: int = 64, seed: int = 1) -> float:
        """Relative change of ``a`` when the step count doubles."""
        u = sphere_points(self.params.n, count, seed)
        a1 = self(u)
        a2 = self.flow(u, self.params.c, 0.0, 2 * self.steps_per_unit)
        return float(np.max(np.linalg.norm(a1 - a2, axis=-1)))


def build_distinguished_map(params: ShiftParams, steps_per_unit: int = 512,
                            residual_tol: float = 1e-6, max_halvings: int = 3) -> DistinguishedMap:
    """Integrate ``a^(s)`` and verify ``a^(s)(E) = Y_s(E)``.

    The step count doubles until the boundary residual drops below
    ``residual_tol``.

    Raises
    ------
    RuntimeError
        When the residual stays above tolerance after ``max_halvings`` retries.
    """
    if not params.is_valid():
        raise ValueError("shift parameters violate the inclusion inequalities")
    spu = steps_per_unit
    for _ in range(max_halvings + 1):
        a = DistinguishedMap(params, spu)
        res = a.boundary_residual()
        if res < residual_tol:
            a.diagnostics = {"boundary_residual": res, "steps_per_unit": spu,
                             "richardson_gap": a.richardson_gap()}
            return a
        spu *= 2
    raise RuntimeError(f"boundary residual {res:.3e} above {residual_tol:.1e}")


def check_distinguished_map(a: DistinguishedMap, count: int = 1000, seed: int = 3,
                            tol_first_integral: float = 1e-5) -> dict:
    """Invariant checks for ``a``: first integral, inclusion into ``W``,
    equivariance, symplectic Jacobian.  Returns a dict of BoundReports."""
    p = a.params
    n = p.n
    out = {}
    start = time.perf_counter()
    u = sphere_points(n, count, seed)
    au = a(u)
    # first integral varrho
    r0 = radial_invariants(u).varrho
    r1 = radial_invariants(au).varrho
    err = np.abs(r1 - r0)
    k = int(np.argmax(err))
    out["first_integral"] = BoundReport(
        "|varrho(a z) - varrho(z)|, |z| = 1", float(-err[k]), {"z": u[k]},
        {"sphere_points": count, "seed": seed}, tol_first_integral,
        bool(err[k] < tol_first_integral), details={"max_error": float(err[k])})
    # inclusion a(dB) in interior W
    b = u / np.sqrt(rho(u))[..., None]
    lev = w_level(a(b), n)
    k = int(np.argmax(lev))
    out["inclusion_W"] = BoundReport(
        "1 - [(2n+1) varrho - (n-1) rho_1] on a(dB)", float(1 - lev[k]), {"z": b[k]},
        {"sphere_points": count, "seed": seed}, 0.0, bool(lev[k] < 1))
    # equivariance under R_+ with non-unit radii
    rng = np.random.default_rng(seed)
    kk = rng.uniform(0.25, 4.0, size=count)
    z = rng.uniform(0.5, 2.0, size=count)[..., None] * u
    lhs = a(kk[..., None] * z)
    rhs = kk[..., None] * a(z)
    e = np.linalg.norm(lhs - rhs, axis=-1) / np.linalg.norm(rhs, axis=-1)
    out["equivariance"] = BoundReport(
        "relative |a(k z) - k a(z)|", float(-np.max(e)), {}, {"points": count},
        1e-9, bool(np.max(e) < 1e-9), details={"max_error": float(np.max(e))})
    # symplecticity on a subsample
    m = min(count, 64)
    flat = lambda x: to_real(a(to_complex(x)))  # noqa: E731
    J = fd_jacobian(flat, to_real(u[:m]))
    d = symplectic_defect(J)
    out["symplectic"] = BoundReport(
        "max |J^T Omega J - Omega|", float(-np.max(d)), {}, {"points": m}, 1e-4,
        bool(np.max(d) < 1e-4), details={"max_defect": float(np.max(d))})
    for rep in out.values():
        rep.runtime = time.perf_counter() - start
    return out


# ---------------------------------------------------------------------------
# main loop


@dataclass
class MainLoop:
    """``phi_t = e_{-t} f_{3t} a e_t a^{-1}`` and its contraction.

    Stage Hamiltonians are evaluated through the substitution that moves the
    unitary factors onto the sample point, so ``a^{-1}`` is needed only once
    per sample direction.
    """

    a: DistinguishedMap
    n: int

    def __post_init__(self):
        self.gen = make_unitary_generators(self.n)
        self._cache = {}

    # -- loop and its Hamiltonian via the path calculus ---------------------
    def phi(self, t, z) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        e, f = self.gen["e"], self.gen["f"]
        w = self.a.inverse(z)
        w = self.a(e(t, w))
        return e(-t, f(3 * t, w))

    def hamiltonian(self, z, t) -> np.ndarray:
        """``Phi(z, t) = -rho(z) + 3 F(z) + rho(a^{-1} f_{-3t} e_t z)``."""
        z = np.asarray(z, dtype=complex)
        t = np.asarray(t, dtype=float)
        r = radial_invariants(z)
        F = (self.n - 1) * r.rho_j[..., 0] - r.varrho
        w = self.gen["f"](-3 * t, self.gen["e"](t, z))
        return -r.rho + 3 * F + rho(self.a.inverse(w))

    # -- stage ratios --------------------------------------------------------
    def _ainv_ratio(self, v: np.ndarray, s=None) -> np.ndarray:
        key = (v.tobytes(), None if s is None else float(s))
        if key not in self._cache:
            self._cache[key] = rho(self.a.inverse(v, s)) / rho(v)
        return self._cache[key]

    def stage_ratios(self, v: np.ndarray, times: np.ndarray, svals: np.ndarray):
        """Minimal ratios ``stage Hamiltonian / rho`` per stage.

        Returns
        -------
        dict
            For each stage an array over ``(s, t, v)`` of the Hamiltonian of
            the inner loop (without the ``e_{-t}`` factor) divided by ``rho``.
            The loop Hamiltonian ratio is this minus one.
        """
        n = self.n
        fvec = self.gen["f"]
        r = radial_invariants(v)
        rv = r.rho
        F = ((n - 1) * r.rho_j[..., 0] - r.varrho) / rv
        ainv = self._ainv_ratio(v)
        out = {}
        # Step 2: G^(s)(f^(s)_t y, t) = F^(s)(f^(s)_t y, t) + rho(a^{-1} y)
        st2 = np.empty((len(svals), len(times), len(v)))
        st1 = np.empty_like(st2)
        for i, s in enumerate(svals):
            fs = self.gen["fs"](n, s)
            Hs = fs.hamiltonian
            for j, t in enumerate(times):
                y = v
                Fs = Hs(fs(t, y), t) / rv
                st2[i, j] = Fs + ainv
                # Step 1: with y = f_t v, H^(s) = 2 F^(s)(f^(s)_{2t} y, 2t) + F(v) + rho(a^{-1} v)
                y1 = fvec(t, v)
                Fs2 = Hs(fs(2 * t, y1), 2 * t) / rv
                st1[i, j] = 2 * Fs2 + F + ainv
        out["step1"] = st1
        out["step2"] = st2
        # Step 3: rho((a^(s))^{-1} v) / rho(v) for s in [0, c]
        c = self.a.params.c
        st3 = np.empty((len(svals), 1, len(v)))
        for i, s in enumerate(svals):
            st3[i, 0] = self._ainv_ratio(v, s * c)
        out["step3"] = st3
        return out


def build_main_loop(a: DistinguishedMap, n: Optional[int] = None) -> MainLoop:
    n = a.params.n if n is None else n
    if n < 2:
        raise ValueError("need n >= 2")
    return MainLoop(a, n)


def _grid_directions(grid: SamplingGrid, n: int) -> np.ndarray:
    return grid.sphere(n)


def main_loop_bounds(loop: MainLoop, grid: SamplingGrid, tol: float = 1e-3) -> dict:
    """Bounds on the loop and its contraction stages, as BoundReports.

    * ``Phi >= (2n - 3 - tol) rho`` for the main loop;
    * ``H^(s) >= 0`` (first contraction step) and ``G^(s) >= 0`` (second);
    * loop closure ``|phi_1 z - z| <= 1e-5 |z|``.
    """
    start = time.perf_counter()
    n = loop.n
    v = _grid_directions(grid, n)
    times = grid.times()
    svals = grid.svalues()
    st = loop.stage_ratios(v, times, svals)
    gd = grid.as_dict()
    reps = {}
    phi = st["step1"][-1] - 1.0  # s = 1 slice
    k = np.unravel_index(argmin_first(phi), phi.shape)
    reps["positivity"] = BoundReport(
        "Phi / rho - (2n-3)", float(phi[k] - (2 * n - 3)),
        {"t": float(times[k[0]]), "v": v[k[1]]}, gd, tol,
        bool(phi[k] > 2 * n - 3 - tol))
    for name, key in (("step1_nonneg", "step1"), ("step2_nonneg", "step2")):
        arr = st[key]
        k = np.unravel_index(argmin_first(arr), arr.shape)
        reps[name] = BoundReport(
            f"{key} inner Hamiltonian / rho", float(arr[k]),
            {"s": float(svals[k[0]]), "t": float(times[k[1]]), "v": v[k[2]]}, gd,
            tol, bool(arr[k] >= -tol))
    # closure
    m = min(len(v), 128)
    z = v[:m]
    gap = np.linalg.norm(loop.phi(1.0, z) - z, axis=-1)
    gap0 = np.linalg.norm(loop.phi(0.0, z) - z, axis=-1)
    g = max(float(np.max(gap)), float(np.max(gap0)))
    reps["closure"] = BoundReport("|phi_1 z - z| / |z|", -g, {}, {"points": m}, 1e-5,
                                  bool(g <= 1e-5))
    for rep in reps.values():
        rep.runtime = time.perf_counter() - start
    return reps


def delta_mu_report(loop: MainLoop, grid: SamplingGrid, refine: int = 0) -> MuEstimate:
    """``mu_hat`` over the three contraction stages.

    The loop Hamiltonian of every stage is ``-rho(z) + K(e_t z)`` with ``K``
    the inner stage Hamiltonian, so its minimal ratio to ``rho`` equals the
    minimal inner ratio minus one.  ``refine > 0`` adds a local search of
    that many starts around the best grid directions (still a sampled value).
    """
    n = loop.n
    v = _grid_directions(grid, n)
    times = grid.times()
    svals = grid.svalues()
    st = loop.stage_ratios(v, times, svals)
    stages = {}
    best = None
    for key, arr in st.items():
        k = np.unravel_index(argmin_first(arr), arr.shape)
        val = float(arr[k]) - 1.0
        wit = {"s": float(svals[k[0]]) * (loop.a.params.c if key == "step3" else 1.0),
               "t": float(times[k[1]]) if key != "step3" else 0.0, "v": v[k[2]]}
        stages[key] = {"min_ratio": val, "witness": wit}
        if best is None or val < best[0]:
            best = (val, key, wit)
    if refine:
        val, key, wit = _refine_step3(loop, st["step3"], v, svals, refine)
        stages["step3_refined"] = {"min_ratio": val, "witness": wit}
        if val < best[0]:
            best = (val, "step3_refined", wit)
    return MuEstimate(-best[0], dict(best[2], stage=best[1]), grid.as_dict(), stages)


def _refine_step3(loop: MainLoop, arr, v, svals, starts):
    """Nelder-Mead on the sphere for ``rho((a^(s))^{-1} v) / rho(v) - 1``."""
    from scipy.optimize import minimize

    n = loop.n
    c = loop.a.params.c
    flat = arr.reshape(len(svals), -1)
    order = np.argsort(flat, axis=None)[:starts]
    best = (np.inf, None)
    for idx in order:
        i, j = np.unravel_index(idx, flat.shape)
        s = svals[i] * c

        def obj(x, s=s):
            w = to_complex(x)
            return float(rho(loop.a.inverse(w[None], s))[0] / rho(w[None])[0]) - 1.0

        res = minimize(obj, to_real(v[j]), method="Nelder-Mead",
                       options={"xatol": 1e-6, "fatol": 1e-9, "maxiter": 400})
        if res.fun < best[0]:
            w = to_complex(res.x)
            best = (float(res.fun), {"s": float(s), "t": 0.0, "v": w / np.linalg.norm(w)})
    return best


# ---------------------------------------------------------------------------
# flow cache


def _cache_key(params: ShiftParams, spu: int, v: np.ndarray, svals) -> str:
    h = hashlib.sha256()
    h.update(json.dumps({"version": CACHE_VERSION, "n": params.n, "nu": params.nu,
                         "c": params.c, "lam": params.lam, "spu": spu,
                         "s": [float(s) for s in svals]}, sort_keys=True).encode())
    h.update(np.ascontiguousarray(v).tobytes())
    return h.hexdigest()[:24]


def warm_cache(loop: MainLoop, v: np.ndarray, svals, cache_dir: Optional[Path]) -> bool:
    """Fill the inverse-flow table of ``loop`` from disk or compute and store it.

    The file holds ``rho((a^(s))^{-1} v) / rho(v)`` for the grid directions
    and the requested ``s`` values.  Returns True on a cache hit.
    """
    p = loop.a.params
    c = p.c
    s_all = [None] + [float(s) * c for s in svals]
    if cache_dir is None:
        for s in s_all:
            loop._ainv_ratio(v, s)
        return False
    cache_dir = Path(cache_dir)
    cache_dir.mkdir(parents=True, exist_ok=True)
    path = cache_dir / f"flow-{_cache_key(p, loop.a.steps_per_unit, v, svals)}.npz"
    if path.exists():
        data = np.load(path)
        if int(data["version"]) == CACHE_VERSION:
            table = data["ratios"]
            for s, row in zip(s_all, table):
                loop._cache[(v.tobytes(), s)] = row
            return True
    rows = np.stack([loop._ainv_ratio(v, s) for s in s_all])
    np.savez(path, version=CACHE_VERSION, ratios=rows)
    return False
