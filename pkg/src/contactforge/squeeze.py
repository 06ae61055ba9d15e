"""Squeezing verdicts, the iteration planner, the reparameterized homotopy
and the capacity bracket.

Radii are in units of ``pi |z|^2``: ``B(R) = {pi |z|^2 < R}`` and
``C(R) = {pi |z_1|^2 < R}``, both times the circle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import numpy as np
from scipy.integrate import quad

from .anchors import anchor
from .geometry import HamiltonianField, SamplingGrid, phase, rho
from .report import BoundReport, argmin_first

NON_SQUEEZABLE = "non-squeezable"
SQUEEZABLE = "squeezable"
RESTRICTED = "restricted"
OPEN = "open"


@dataclass(frozen=True)
class SqueezeVerdict:
    verdict: str
    theorem: str
    params: dict = field(default_factory=dict)

    def __str__(self):
        return f"{self.verdict} ({self.theorem})"


def _integer_between(lo: float, hi: float) -> Optional[int]:
    """Smallest positive integer ``m`` with ``lo <= m <= hi``."""
    m = max(1, math.ceil(lo))
    return m if m <= hi else None


def _restricted_pair(R1: float, R2: float, R3: float, kmax: int = 64):
    """Integers ``m, k >= 2`` (``k``) with ``R2 <= m/k <= R1 < R3 < m/(k-1)``."""
    for k in range(2, kmax + 1):
        m = max(1, math.ceil(R2 * k - 1e-15))
        while Fraction(m, k) <= Fraction(R1):
            if Fraction(R2) <= Fraction(m, k) and R1 < R3 < m / (k - 1):
                return m, k
            m += 1
    return None


def squeezing_verdict(n: int, R1: float, R2: float, target: str = "ball",
                      R3: Optional[float] = None) -> SqueezeVerdict:
    """Decide whether ``B(R1)`` squeezes into ``B(R2)`` or ``C(R2)``.

    Order of the branches:

    1. an integer ``m`` with ``R2 <= m <= R1`` (non-strict) gives
       non-squeezable;
    2. with an ambient radius ``R3`` (ball target), integers ``m, k`` with
       ``R2 <= m/k <= R1 < R3 < m/(k-1)`` forbid squeezing inside ``B(R3)``;
    3. ``R1, R2 < 1`` (strict) and ``n >= 2`` gives squeezable;
    4. ``R2 > R1`` is the inclusion;
    5. otherwise the case is open.

    ``n = 1`` with ``R1 > R2`` is non-squeezable in every case.
    """
    if R1 <= 0 or R2 <= 0 or (R3 is not None and R3 <= 0):
        raise ValueError("radii must be positive")
    if target not in ("ball", "cylinder"):
        raise ValueError("target must be 'ball' or 'cylinder'")
    m = _integer_between(R2, R1)
    if m is not None:
        return SqueezeVerdict(NON_SQUEEZABLE, anchor("non_squeezing"), {"m": m})
    if R3 is not None and target == "ball":
        mk = _restricted_pair(R1, R2, R3)
        if mk is not None:
            m, k = mk
            return SqueezeVerdict(RESTRICTED, anchor("small_squeezing"),
                                  {"m": m, "k": k, "R3_window": [R1, m / (k - 1)]})
    if n == 1 and R1 > R2:
        return SqueezeVerdict(NON_SQUEEZABLE, anchor("one_dim"), {})
    if R1 < 1 and R2 < 1 and n >= 2:
        return SqueezeVerdict(SQUEEZABLE, anchor("squeezing"), {})
    if R2 > R1:
        return SqueezeVerdict(SQUEEZABLE, anchor("inclusion"), {})
    return SqueezeVerdict(OPEN, anchor("open_window"),
                          {"m": int(math.floor(R2))})


# ---------------------------------------------------------------------------


def iteration_plan(R1: float, R2: float, gamma: float):
    """Smallest ``N`` with ``v^N(R1) < R2`` for ``v(R) = R / (1 + gamma R)``.

    Uses ``v^N(R) = R / (1 + N gamma R)`` in exact rational arithmetic on the
    binary values of the inputs and checks it against literal iteration.

    Returns
    -------
    N : int
    trajectory : list of float
        ``v^k(R1)`` for ``k = 0..N``.
    """
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    a, b, g = Fraction(R1), Fraction(R2), Fraction(gamma)
    if b >= a:
        return 0, [float(a)]
    N = max(0, math.floor((a / b - 1) / (g * a)))
    while a / (1 + N * g * a) >= b:
        N += 1
    while N > 0 and a / (1 + (N - 1) * g * a) < b:
        N -= 1
    traj = [a]
    for _ in range(N):
        traj.append(traj[-1] / (1 + g * traj[-1]))
    if traj[-1] != a / (1 + N * g * a):
        raise ArithmeticError("closed form and iteration disagree")
    return N, [float(v) for v in traj]


# ---------------------------------------------------------------------------
# reparameterized homotopy


def _bump_exp(x):
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = np.exp(-1.0 / x[pos])
    return out


def smoothstep(x):
    """C-infinity ramp: 0 for ``x <= 0``, 1 for ``x >= 1``, from ``exp(-1/x)``."""
    a = _bump_exp(x)
    b = _bump_exp(1 - np.asarray(x, dtype=float))
    return a / (a + b)


@dataclass(frozen=True)
class Ramp:
    """Non-decreasing ``tau: [0,1] -> [0,1]`` with ``tau' = g / Z``.

    ``g(t) = S((t - w) / e) S((1 - w - t) / e)`` with ``S`` the smoothstep,
    so ``tau = 0`` on ``[0, w]``, ``tau = 1`` on ``[1 - w, 1]`` and
    ``max tau' = 1 / Z`` with ``Z = 1 - 2w - e``.
    """

    w: float
    e: float

    @property
    def Z(self) -> float:
        return 1 - 2 * self.w - self.e

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        return smoothstep((t - self.w) / self.e) * smoothstep((1 - self.w - t) / self.e) / self.Z

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        uniq, inv = np.unique(t, return_inverse=True)
        vals = np.array([self._scalar(float(x)) for x in uniq])
        return vals[inv].reshape(t.shape)

    def _scalar(self, t: float) -> float:
        w, e = self.w, self.e
        if t <= w:
            return 0.0
        if t >= 1 - w:
            return 1.0
        half = 0.5 * e  # integral of S over one transition
        if t <= w + e:
            val = quad(lambda x: float(smoothstep(x)), 0, (t - w) / e)[0] * e
        elif t <= 1 - w - e:
            val = half + (t - w - e)
        else:
            val = self.Z - quad(lambda x: float(smoothstep(x)), 0, (1 - w - t) / e)[0] * e
        return val / self.Z


def make_ramp(delta: float, plateau: float = 0.1, margin: float = 0.01) -> Ramp:
    """Ramp with ``max tau' <= (1 - margin)(1 + delta)``.

    The plateau and transition widths shrink when ``delta`` is too small
    for ``plateau``.

    Raises
    ------
    ValueError
        If ``(1 - margin)(1 + delta) <= 1``, where no ramp of this kind exists.
    """
    cap = (1 - margin) * (1 + delta)
    if cap <= 1:
        raise ValueError(f"delta={delta} too small: need (1-{margin})(1+delta) > 1")
    budget = 1 - 1 / cap  # allowed 2w + e
    w = min(plateau, 0.3 * budget)
    e = min((1 - 2 * w) / 2.5, 0.9 * budget - 2 * w)
    return Ramp(w, e)


@dataclass
class CorrespHomotopy:
    """Homotopy ``H_s``, ``s in [-1, 1]``, from ``R^{-1} E`` to a squeezing path.

    ``theta(t) = (1 + delta) t - delta tau(t)``.
    """

    delta: float
    R: float
    rho: float
    mu: float
    tau: Ramp
    E: HamiltonianField
    F: HamiltonianField
    flow: Callable
    reports: dict = field(default_factory=dict)

    def theta(self, t):
        return (1 + self.delta) * np.asarray(t, dtype=float) - self.delta * self.tau(t)

    def theta_prime(self, t):
        return 1 + self.delta - self.delta * self.tau.derivative(t)

    def hamiltonian(self, z, t, s):
        """``H_s(z, t)``."""
        z = np.asarray(z, dtype=complex)
        t = np.asarray(t, dtype=float)
        E = self.E(z, t)
        if s <= 0:
            return (-s + (s + 1) * self.theta_prime(t)) * E / self.R
        tp = self.tau.derivative(t)
        w = self.flow(-self.theta(t) / self.R, z)
        return self.theta_prime(t) * E / self.R + tp * self.F(w, self.tau(t), s)


def rotation_flow(t, z):
    """Flow of ``pi |z|^2``."""
    return phase(t)[..., None] * np.asarray(z, dtype=complex)


def build_corresp_homotopy(E: HamiltonianField, F: HamiltonianField, R: float,
                           rho_: float, mu: float, delta: float, grid: SamplingGrid,
                           flow: Callable = rotation_flow, plateau: float = 0.1) -> CorrespHomotopy:
    """Assemble ``H_s`` and verify its inclusion bounds on ``grid``.

    Parameters
    ----------
    E : HamiltonianField
        Positive Hamiltonian with flow ``flow``; ``A(r) = {E < r}``.
    F : HamiltonianField
        Parametric homotopy ``F_s``, ``s in [0, 1]``, of loop Hamiltonians.
    R, rho_, mu, delta : float
        ``A(R)`` is squeezed inside ``A(rho_)``; ``mu`` bounds ``-F_s / E``.

    Raises
    ------
    ValueError
        Naming the violated inequality on ``delta``.
    """
    if not delta ** 2 < 1 - R / rho_:
        raise ValueError("delta^2 < 1 - R/rho violated")
    if not (1 / R - mu) > 0 or not delta ** 2 < 1 - 1 / (rho_ * (1 / R - mu)):
        raise ValueError("delta^2 < 1 - 1/(rho (1/R - mu)) violated")
    tau = make_ramp(delta, plateau)
    hom = CorrespHomotopy(delta, R, rho_, mu, tau, E, F, flow)
    z, t = grid.spacetime(E.n)
    Ez = E(z, t)
    reps = {}
    # hypotheses on F
    worst_lower = np.inf
    for s in grid.svalues():
        worst_lower = min(worst_lower, float(np.min(F(z, t, s) / Ez)))
    f1 = float(np.min(F(z, t, 1.0) / Ez))
    reps["hypothesis_lower"] = BoundReport(
        "min F_s / E + (1 - delta) mu", worst_lower + (1 - delta) * mu, {}, grid.as_dict(),
        0.0, worst_lower > -(1 - delta) * mu)
    reps["hypothesis_positive"] = BoundReport(
        "min F_1 / E - delta / R", f1 - delta / R, {}, grid.as_dict(), 0.0, f1 > delta / R)
    # theta' bound
    tt = np.linspace(0, 1, 4001)
    tpmin = float(np.min(hom.theta_prime(tt)))
    reps["theta_prime"] = BoundReport(
        "min theta' - (1 - delta^2)", tpmin - (1 - delta ** 2), {}, {"t_samples": 4001},
        0.0, tpmin >= 1 - delta ** 2)
    taumax = float(np.max(tau.derivative(tt)))
    reps["tau_prime"] = BoundReport("1 + delta - max tau'", 1 + delta - taumax, {},
                                    {"t_samples": 4001}, 0.0, taumax < 1 + delta)
    # inclusion U(eps_s) in A(rho): H_s > E / rho
    best = (np.inf, None)
    svals = np.concatenate([-grid.svalues()[::-1], grid.svalues()[1:]])
    for s in svals:
        ratio = hom.hamiltonian(z, t, float(s)) / Ez - 1 / rho_
        k = argmin_first(ratio)
        if ratio[k] < best[0]:
            best = (float(ratio[k]), {"z": z[k], "t": float(t[k]), "s": float(s)})
    reps["inclusion_rho"] = BoundReport("min H_s / E - 1/rho", best[0], best[1],
                                        grid.as_dict(), 0.0, best[0] > 0)
    # equality holds on the plateaus of tau, where tau' = 0 and theta' = 1 + delta
    ratio = hom.hamiltonian(z, t, 1.0) / Ez - (1 + delta) / R
    k = argmin_first(ratio)
    slack = 1e-12 * (1 + delta) / R
    reps["final_inclusion"] = BoundReport(
        "min H_1 / E - (1 + delta)/R", float(ratio[k]), {"z": z[k], "t": float(t[k])},
        grid.as_dict(), slack, bool(ratio[k] >= -slack))
    hom.reports = reps
    return hom


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CapacityBracket:
    c_under: float
    c_over: float

    @property
    def window(self):
        return (self.c_under, self.c_over)

    @property
    def point(self) -> Optional[float]:
        return self.c_under if self.c_under == self.c_over else None

    def note(self) -> str:
        return (f"sq in [{self.c_under}, {self.c_over}]; the prequantization of "
                f"b^(-1/2) U is negligible for every b > {self.c_over}")


def capacity_bracket(c_under: float, c_over: float) -> CapacityBracket:
    """Book-keeping for ``c_under <= sq <= c_over`` (capacities are inputs)."""
    if not (0 < c_under <= c_over):
        raise ValueError("need 0 < c_under <= c_over")
    return CapacityBracket(float(c_under), float(c_over))
