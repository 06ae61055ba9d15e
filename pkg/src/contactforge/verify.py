"""Grid verification of positivity, inequality bounds and the mu functional.

All minima are taken over finite samples; they are evidence, not proofs.
Reductions are deterministic: on ties the lowest flat grid index wins.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Optional, Sequence

import numpy as np

from .geometry import HamiltonianField, SamplingGrid, radial_invariants, rho
from .maps import (PathFamily, hamiltonian_at_image, make_squeeze_pair, make_shift,
                   make_unitary_generators, s3_loop, s3_loop_hamiltonian)
from .report import BoundReport, MuEstimate, argmin_first


def thread_count() -> int:
    """Worker cap from ``CONTACTFORGE_THREADS`` (default 1)."""
    try:
        return max(1, int(os.environ.get("CONTACTFORGE_THREADS", "1")))
    except ValueError:
        return 1


def sweep(func: Callable, chunks: Sequence) -> list:
    """Map ``func`` over ``chunks`` keeping input order."""
    workers = min(thread_count(), len(chunks))
    if workers <= 1:
        return [func(c) for c in chunks]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(func, chunks))


def _split(m: int, size: int = 65536):
    return [slice(i, min(i + size, m)) for i in range(0, m, size)]


# ---------------------------------------------------------------------------


def positivity_check(H: HamiltonianField, grid: SamplingGrid, margin: float = 0.0) -> BoundReport:
    """Pass iff ``H(z, t) > margin * pi |z|^2`` at every grid point."""
    start = time.perf_counter()
    z, t = grid.spacetime(H.n)

    def work(sl):
        with np.errstate(all="ignore"):
            return H(z[sl], t[sl]) / rho(z[sl])

    ratio = np.concatenate(sweep(work, _split(len(z))))
    bad = ~np.isfinite(ratio)
    ratio = np.where(bad, np.inf, ratio)
    k = argmin_first(ratio)
    return BoundReport(
        f"{H.name} / (pi |z|^2)", float(ratio[k]), {"z": z[k], "t": float(t[k])},
        grid.as_dict(), margin, bool(ratio[k] > margin), int(np.count_nonzero(bad)),
        time.perf_counter() - start, {"points": int(len(ratio))})


def loop_positivity_check(path: PathFamily, grid: SamplingGrid, margin: float = 0.0,
                          step: float = 1e-5) -> BoundReport:
    """Positivity of the extracted Hamiltonian of ``path`` at image points.

    For each grid point ``(y, t)`` evaluates ``H(f_t y, t) / rho(f_t y)``
    with ``H`` from the time derivative of the path.
    """
    start = time.perf_counter()
    y, t = grid.spacetime(path.n)

    def work(sl):
        x, Hx = hamiltonian_at_image(path, t[sl], y[sl], step)
        return Hx / rho(x)

    ratio = np.concatenate(sweep(work, _split(len(y))))
    k = argmin_first(ratio)
    return BoundReport(
        f"extracted H[{path.name}] / (pi |z|^2)", float(ratio[k]),
        {"y": y[k], "t": float(t[k])}, grid.as_dict(), margin, bool(ratio[k] > margin),
        0, time.perf_counter() - start, {"points": int(len(ratio)), "step": step})


def mu_estimate(F: HamiltonianField, grid: SamplingGrid) -> MuEstimate:
    """``mu_hat = -min F_s(z, t) / (pi |z|^2)`` over ``(z, t, s)`` samples.

    ``F`` is parametric in ``s in [0, 1]``.  A sampled minimum is never
    below the true minimum, so ``mu_hat`` is at most the true ``mu``.
    """
    z, t = grid.spacetime(F.n)
    r = rho(z)
    best = None
    for s in grid.svalues():
        ratio = F(z, t, s) / r
        k = argmin_first(ratio)
        if best is None or ratio[k] < best[0]:
            best = (float(ratio[k]), {"z": z[k], "t": float(t[k]), "s": float(s)})
    return MuEstimate(-best[0], best[1], grid.as_dict())


def fundamental_inequality_check(n: int, grid: SamplingGrid, tol: float = 1e-6,
                                 step: float = 1e-5) -> BoundReport:
    """``F^(s)(f^(s)_t z, t) + varrho(z) >= -tol (1 + rho(z))`` on the grid.

    ``F^(s)`` is extracted from the time derivative of the deformation
    ``f^(s)`` of the loop ``f``; the closed-form generator of the linear
    path is evaluated as well and the largest discrepancy is reported.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    start = time.perf_counter()
    gen = make_unitary_generators(n)
    z, t = grid.spacetime(n)
    r = radial_invariants(z)
    best = (np.inf, None)
    gap = 0.0
    count = 0
    for s in grid.svalues():
        fs = gen["fs"](n, s)
        x, Hx = hamiltonian_at_image(fs, t, z, step)
        gap = max(gap, float(np.max(np.abs(Hx - fs.hamiltonian(x, t)) / (1 + r.rho))))
        slack = (Hx + r.varrho) / (1 + r.rho)
        k = argmin_first(slack)
        count += len(slack)
        if slack[k] < best[0]:
            best = (float(slack[k]), {"z": z[k], "t": float(t[k]), "s": float(s)})
    return BoundReport(
        "(F^(s)(f^(s)_t z, t) + varrho(z)) / (1 + rho(z))", best[0], best[1],
        grid.as_dict(), tol, bool(best[0] >= -tol), 0, time.perf_counter() - start,
        {"points": count, "n": n, "closed_form_gap": gap})


def conjugated_rotation_check(n: int, grid: SamplingGrid, tol: float = 1e-6) -> BoundReport:
    """``H^(s)_j(h^(s)_{j,t} z, t) >= -pi |z_j|^2`` for every ``j``, and exact
    preservation of the coordinates other than ``1`` and ``j``."""
    start = time.perf_counter()
    gen = make_unitary_generators(n)
    z, t = grid.spacetime(n)
    r = radial_invariants(z)
    best = (np.inf, None)
    moved = 0.0
    for j in range(2, n + 1):
        for s in grid.svalues():
            h = gen["h"](j, s)
            x, Hx = hamiltonian_at_image(h, t, z)
            slack = (Hx + r.rho_j[..., j - 1]) / (1 + r.rho)
            others = [l for l in range(n) if l not in (0, j - 1)]
            if others:
                moved = max(moved, float(np.max(np.abs(x[..., others] - z[..., others]))))
            k = argmin_first(slack)
            if slack[k] < best[0]:
                best = (float(slack[k]), {"z": z[k], "t": float(t[k]), "s": float(s), "j": j})
    return BoundReport(
        "(H_j(h_j z) + pi |z_j|^2) / (1 + rho)", best[0], best[1], grid.as_dict(), tol,
        bool(best[0] >= -tol and moved == 0.0), 0, time.perf_counter() - start,
        {"max_untouched_coordinate_change": moved})


# ---------------------------------------------------------------------------
# cylinder squeezing


def squeeze_pipeline_check(n: int, K: np.ndarray, t: Optional[np.ndarray] = None,
                           shift: Optional[float] = None, tol: float = 1e-12) -> BoundReport:
    """Push a sample of the cylinder ``{rho_2 < 1}`` through shift, ``Psi``, ``Phi``.

    The shift must land in ``W = {(n+1) rho_2 + n(rho_3 + ...) - rho_1 < 1}``;
    if the supplied ``shift`` does not, it is enlarged and the report says so.
    Checks ``varrho < 1/n`` after ``Psi`` and ``rho <= 1/(n-1) + tol`` after ``Phi``.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    start = time.perf_counter()
    K = np.asarray(K, dtype=complex)
    t = np.zeros(K.shape[:-1]) if t is None else np.asarray(t, dtype=float)
    r = radial_invariants(K)
    if np.any(r.rho_j[..., 1] >= 1):
        raise ValueError("sample points must satisfy rho_2 < 1")
    need = (n + 1) * r.rho_j[..., 1] + n * r.rho_j[..., 2:].sum(axis=-1) - 1
    required = float(np.max(np.abs(K[..., 0]) + np.sqrt(np.maximum(need, 0) / np.pi)))
    required = 1.05 * required + 1e-3
    enlarged = False
    c = shift
    if c is None:
        c = required
    else:
        Y = make_shift(c, n)(K)
        if np.any(_w_cyl(Y, n) >= 1):
            c, enlarged = max(required, c), True
    Y = make_shift(c, n)(K)
    wl = _w_cyl(Y, n)
    Phi, Psi = make_squeeze_pair(n)
    u, tu = Psi(Y, t)
    vr = radial_invariants(u).varrho
    zf, _ = Phi(u, tu)
    rf = rho(zf)
    margins = np.stack([1 - wl, 1 / n - vr, 1 / (n - 1) + tol - rf])
    k = argmin_first(np.min(margins, axis=0))
    worst = float(np.min(margins))
    return BoundReport(
        "min margin of (W, varrho < 1/n, rho <= 1/(n-1)) along the chain", worst,
        {"z": K[k]}, {"points": int(len(K))}, tol,
        bool(np.all(margins[0] > 0) and np.all(margins[1] > 0) and np.all(margins[2] >= 0)),
        0, time.perf_counter() - start,
        {"shift": c, "shift_enlarged": enlarged, "max_varrho_after_Psi": float(np.max(vr)),
         "max_rho_after_Phi": float(np.max(rf)), "n": n})


def _w_cyl(z, n):
    r = radial_invariants(z)
    return (n + 1) * r.rho_j[..., 1] + n * r.rho_j[..., 2:].sum(axis=-1) - r.rho_j[..., 0]


def cylinder_sample(n: int, count: int, seed: int = 0, spread: float = 2.0) -> np.ndarray:
    """Random points of ``{rho_2 < 1}`` with other coordinates of size ``spread``."""
    rng = np.random.default_rng(seed)
    z = spread * (rng.normal(size=(count, n)) + 1j * rng.normal(size=(count, n)))
    r2 = rng.uniform(0, 1, size=count) ** 0.5 / np.sqrt(np.pi)
    ph = np.exp(2j * np.pi * rng.uniform(size=count))
    z[:, 1] = 0.999 * r2 * ph
    return z


# ---------------------------------------------------------------------------
# PU(2,1) loop on the three-sphere


def s3_loop_check(alpha: float, grid: SamplingGrid, step: float = 1e-6) -> BoundReport:
    """Positivity of the Hamiltonian of ``e_{-t} f_{3t} B e_t B^{-1}``.

    The closed-form Hamiltonian (path calculus) is evaluated at every grid
    point of the unit sphere times circle; the Hamiltonian extracted from
    the time derivative of the loop is evaluated at the same image points.
    Both minima must be positive.
    """
    start = time.perf_counter()
    H = s3_loop_hamiltonian(alpha)
    L = s3_loop(alpha)
    y, t = grid.spacetime(2)

    def work(sl):
        x, He = hamiltonian_at_image(L, t[sl], y[sl], step)
        r = rho(x)
        return np.stack([H(x, t[sl]) / r, He / r])

    both = np.concatenate(sweep(work, _split(len(y))), axis=1)
    k = argmin_first(both[0])
    ke = argmin_first(both[1])
    gap = float(np.max(np.abs(both[0] - both[1])))
    return BoundReport(
        f"s3-loop Hamiltonian / (pi |z|^2), alpha={alpha}", float(both[0, k]),
        {"y": y[k], "t": float(t[k])}, grid.as_dict(), 0.0,
        bool(both[0, k] > 0 and both[1, ke] > 0), 0, time.perf_counter() - start,
        {"extracted_min": float(both[1, ke]), "extraction_gap": gap, "alpha": alpha,
         "points": int(both.shape[1])})


def s3_threshold_table(alphas: Sequence[float], grid: SamplingGrid, bisect: int = 20) -> dict:
    """Minimal ratio per ``alpha`` and the empirical positivity threshold.

    The threshold is bracketed between the largest positive ``alpha`` and
    the next listed value, then refined by bisection on the same grid.
    """
    y, t = grid.spacetime(2)
    r = rho(y)

    def minratio(a):
        return float(np.min(s3_loop_hamiltonian(a)(y, t) / r))

    rows = [{"alpha": float(a), "min_ratio": minratio(a)} for a in alphas]
    for row in rows:
        row["positive"] = row["min_ratio"] > 0
    lo = hi = None
    for row in rows:
        if row["positive"]:
            lo = row["alpha"]
        elif lo is not None:
            hi = row["alpha"]
            break
    threshold = None
    if lo is not None and hi is not None:
        a, b = lo, hi
        for _ in range(bisect):
            m = 0.5 * (a + b)
            if minratio(m) > 0:
                a = m
            else:
                b = m
        threshold = 0.5 * (a + b)
    return {"rows": rows, "bracket": [lo, hi], "threshold": threshold,
            "grid": grid.as_dict()}
