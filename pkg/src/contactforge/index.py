"""Index computations for paths of symplectic matrices and ellipsoids.

Index convention
----------------
``cz_index`` follows the grading used for contact homology here:

* a path generated by a small nondegenerate quadratic Hamiltonian has index
  equal to the Morse index of that quadratic form,
* catenating with a loop of Maslov index ``m`` lowers the index by ``m``.

Both properties pin the index down to ``n - CZ_RS`` where ``CZ_RS`` is the
Robbin-Salamon index (which assigns ``+n`` to small positive-definite
rotations).  ``CZ_RS`` is evaluated as the winding of the Salamon-Zehnder
``rho`` map plus an endpoint correction read off the spectrum of ``A(1)``.

Profile functions
-----------------
A profile ``H(u)`` on ``(0, inf)`` is admissible when it is positive, constant
near ``0`` and near infinity, and ``H - u H' > 0``.  The transform ``H -> Hbar``
inverts ``phi_H(u) = u / H(u)`` and sets ``Hbar(v) = v / phi_H^{-1}(v)``.  For
piecewise linear profiles it maps the node ``(u, H)`` to ``(u / H, 1 / H)``,
which is exact in rational arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Real
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import expm, null_space
from scipy.optimize import brentq

from .geometry import complex_structure, complex_to_real_matrix, omega_matrix

SYMPLECTIC_TOL = 1e-8
EIGEN_TOL = 1e-7


class DegenerateEndpointError(ValueError):
    """The endpoint of a path has eigenvalue one."""


class ResonanceError(ValueError):
    """An ellipsoid violates the non-resonance condition."""


class AdmissibilityError(ValueError):
    """A profile function fails ``H - u H' > 0`` or positivity."""


# ---------------------------------------------------------------------------
# symplectic paths


@dataclass
class SymplecticPath:
    """Sampled path ``t -> A(t)`` of symplectic ``2n x 2n`` matrices.

    Parameters
    ----------
    matrices : ndarray, shape (K, 2n, 2n)
        Samples on an increasing grid of ``[0, 1]`` with ``A(0) = I``.
    times : ndarray, shape (K,), optional
        Sample times, defaults to ``linspace(0, 1, K)``.
    """

    matrices: np.ndarray
    times: Optional[np.ndarray] = None
    residual: float = field(init=False)

    def __post_init__(self):
        A = np.asarray(self.matrices, dtype=float)
        if A.ndim != 3 or A.shape[1] != A.shape[2] or A.shape[1] % 2:
            raise ValueError("matrices must have shape (K, 2n, 2n)")
        self.matrices = A
        if self.times is None:
            self.times = np.linspace(0.0, 1.0, A.shape[0])
        self.times = np.asarray(self.times, dtype=float)
        if not np.allclose(A[0], np.eye(A.shape[1]), atol=SYMPLECTIC_TOL):
            raise ValueError("path must start at the identity")
        Om = omega_matrix(self.n)
        defect = np.einsum("kji,jl,klm->kim", A, Om, A) - Om
        self.residual = float(np.abs(defect).max())
        if self.residual > SYMPLECTIC_TOL * max(1.0, np.abs(A).max() ** 2):
            raise ValueError(f"path is not symplectic (residual {self.residual:.2e})")

    @property
    def n(self) -> int:
        return self.matrices.shape[1] // 2

    @property
    def endpoint(self) -> np.ndarray:
        return self.matrices[-1]

    @property
    def is_loop(self) -> bool:
        return bool(np.allclose(self.endpoint, self.matrices[0], atol=1e-8))

    @classmethod
    def from_generator(cls, S: np.ndarray, samples: int = 1025) -> "SymplecticPath":
        """Linear flow of the quadratic Hamiltonian ``1/2 x^T S x``.

        With ``sgrad H = J grad H`` the flow is ``exp(t J S)``.
        """
        S = np.asarray(S, dtype=float)
        S = 0.5 * (S + S.T)
        gen = complex_structure(S.shape[0] // 2) @ S
        t = np.linspace(0.0, 1.0, samples)
        # step by a fixed propagator to keep the samples exactly consistent
        step = expm(gen * (t[1] - t[0]))
        A = np.empty((samples,) + S.shape)
        A[0] = np.eye(S.shape[0])
        for k in range(1, samples):
            A[k] = A[k - 1] @ step
        return cls(A, t)

    @classmethod
    def from_unitary(cls, func: Callable[[float], np.ndarray],
                     samples: int = 1025) -> "SymplecticPath":
        """Path of complex unitary matrices ``t -> U(t)`` in real form."""
        t = np.linspace(0.0, 1.0, samples)
        return cls(np.stack([complex_to_real_matrix(func(tk)) for tk in t]), t)

    @classmethod
    def rotation(cls, rates: Sequence[float], samples: int = 1025) -> "SymplecticPath":
        """Diagonal path ``diag(exp(2 pi i a_j t))``."""
        rates = np.asarray(rates, dtype=float)
        return cls.from_unitary(lambda s: np.diag(np.exp(2j * np.pi * rates * s)), samples)


def direct_sum(a: SymplecticPath, b: SymplecticPath) -> SymplecticPath:
    """Block sum on ``C^{n_a} x C^{n_b}`` in ``(p, q)`` ordering."""
    if a.matrices.shape[0] != b.matrices.shape[0] or not np.allclose(a.times, b.times):
        raise ValueError("paths must share their sample times")
    na, nb = a.n, b.n
    n = na + nb
    ia = np.r_[0:na, n:n + na]
    ib = np.r_[na:n, n + na:2 * n]
    A = np.zeros((a.matrices.shape[0], 2 * n, 2 * n))
    A[:, ia[:, None], ia] = a.matrices
    A[:, ib[:, None], ib] = b.matrices
    return SymplecticPath(A, a.times.copy())


def catenate(path: SymplecticPath, loop: SymplecticPath) -> SymplecticPath:
    """Pointwise product ``loop(t) path(t)``, homotopic to the catenation."""
    if not loop.is_loop:
        raise ValueError("second argument must be a loop")
    if path.matrices.shape != loop.matrices.shape:
        raise ValueError("paths must share dimension and sampling")
    return SymplecticPath(loop.matrices @ path.matrices, path.times.copy())


def unitary_part(A: np.ndarray) -> np.ndarray:
    """Complex unitary matrix of the orthogonal polar factor of ``A``."""
    W, _, Vt = np.linalg.svd(A)
    O = W @ Vt
    n = A.shape[-1] // 2
    return O[..., :n, :n] + 1j * O[..., n:, :n]


def maslov_index(loop: SymplecticPath) -> int:
    """Maslov index of a loop, calibrated so that ``exp(2 pi i t)`` gives 2.

    Computed as the total change of ``arg det`` of the unitary polar part,
    divided by ``pi``.
    """
    if not loop.is_loop:
        raise ValueError("Maslov index needs a closed path")
    dets = np.linalg.det(unitary_part(loop.matrices))
    angles = _unwrap_checked(np.angle(dets))
    value = (angles[-1] - angles[0]) / np.pi
    return _as_integer(value, "Maslov index")


def rho_map(A: np.ndarray) -> complex:
    """Salamon-Zehnder ``rho`` of a symplectic matrix.

    Product of ``lambda^{m+}`` over non-real unit eigenvalues, where ``m+`` is
    the number of positive squares of the Krein form ``i v^H Omega v`` on the
    generalized eigenspace, times ``(-1)^{m/2}`` for the ``m`` negative real
    eigenvalues.
    """
    value, _ = _rho_and_correction(A)
    return value


def _krein_clusters(A: np.ndarray):
    """Yield ``(lambda, m_plus)`` for clusters of non-real unit eigenvalues."""
    lam, vecs = np.linalg.eig(A)
    Om = omega_matrix(A.shape[0] // 2)
    used = np.zeros(lam.size, bool)
    clusters = []
    for i, li in enumerate(lam):
        if used[i]:
            continue
        close = np.abs(lam - li) < 1e-5
        used |= close
        on_circle = abs(abs(li) - 1.0) < 1e-6
        if not on_circle or abs(li.imag) < EIGEN_TOL:
            continue
        mult = int(close.sum())
        centre = lam[close].mean()
        centre /= abs(centre)
        if mult == 1:
            # simple eigenvalue: the Krein form is a scalar on its eigenvector
            v = vecs[:, i]
            krein = float(np.real(1j * (v.conj() @ Om @ v)))
            clusters.append((centre, int(krein > 0)))
            continue
        M = np.linalg.matrix_power(A - centre * np.eye(A.shape[0]), mult)
        V = null_space(M, rcond=1e-6)
        if V.shape[1] != mult:
            V = null_space(M, rcond=1e-4)
        form = 1j * (V.conj().T @ Om @ V)
        form = 0.5 * (form + form.conj().T)
        m_plus = int((np.linalg.eigvalsh(form) > 0).sum())
        clusters.append((centre, m_plus))
    return lam, clusters


def _rho_and_correction(A: np.ndarray) -> Tuple[complex, float]:
    lam, clusters = _krein_clusters(A)
    negative_real = int(((lam.real < 0) & (np.abs(lam.imag) < EIGEN_TOL)).sum())
    value = complex((-1.0) ** (negative_real // 2))
    correction = 0.0
    for centre, m_plus in clusters:
        value *= centre ** m_plus
        theta = float(np.mod(np.angle(centre), 2 * np.pi))
        correction += m_plus * (1.0 - theta / np.pi)
    return value, correction


def robbin_salamon_index(path: SymplecticPath) -> int:
    """Robbin-Salamon index of a path with nondegenerate endpoint."""
    A1 = path.endpoint
    if np.min(np.abs(np.linalg.eigvals(A1) - 1.0)) < 1e-6:
        raise DegenerateEndpointError("endpoint has eigenvalue 1")
    angles = np.array([np.angle(_rho_and_correction(A)[0]) for A in path.matrices])
    angles = _unwrap_checked(angles)
    winding = (angles[-1] - angles[0]) / np.pi
    _, correction = _rho_and_correction(A1)
    return _as_integer(winding + correction, "Conley-Zehnder index")


def cz_index(path: SymplecticPath) -> int:
    """Conley-Zehnder index in the grading convention of this package.

    Equals ``n - CZ_RS``: small quadratic generators give their Morse index
    and ``cz(path # loop) = cz(path) - maslov(loop)``.

    Raises
    ------
    DegenerateEndpointError
        If ``A(1)`` has eigenvalue one.
    """
    return path.n - robbin_salamon_index(path)


def _unwrap_checked(angles: np.ndarray) -> np.ndarray:
    jumps = np.abs(np.angle(np.exp(1j * np.diff(angles))))
    if jumps.size and jumps.max() > 0.75 * np.pi:
        raise ValueError("path is under-sampled for a reliable winding count")
    return np.unwrap(angles)


def _as_integer(value: float, what: str) -> int:
    k = int(round(value))
    if abs(value - k) > 1e-4:
        raise ArithmeticError(f"{what} evaluated to non-integer {value:.6f}")
    return k


# ---------------------------------------------------------------------------
# ellipsoids


@dataclass(frozen=True)
class EllipsoidSpec:
    """Ellipsoid ``pi |z_1|^2 + (pi/N) sum_{i>1} |z_i|^2 < R`` in ``C^n``."""

    n: int
    N: int
    R: float

    def __post_init__(self):
        if self.n < 1 or int(self.N) != self.N or self.N < 1 or not self.R > 0:
            raise ValueError("need n >= 1, integer N >= 1 and R > 0")

    def resonances(self) -> List[str]:
        bad = []
        if _is_natural(1.0 / self.R):
            bad.append("1/R is a natural number")
        if self.n > 1 and _is_natural(1.0 / (self.N * self.R)):
            bad.append("1/(N R) is a natural number")
        return bad

    def require_non_resonant(self):
        bad = self.resonances()
        if bad:
            raise ResonanceError(f"resonant ellipsoid {self}: " + "; ".join(bad))


def _is_natural(x: float) -> bool:
    return x >= 1 - 1e-12 and abs(x - round(x)) <= 1e-12 * max(1.0, x)


@dataclass
class GradedGroup:
    """Finitely supported map ``degree -> rank`` over ``Z_2``."""

    ranks: Dict[int, int]

    def __post_init__(self):
        if any(r < 0 for r in self.ranks.values()):
            raise ValueError("ranks must be non-negative")
        self.ranks = {int(k): int(v) for k, v in sorted(self.ranks.items()) if v}

    def rank(self, degree: int) -> int:
        return self.ranks.get(int(degree), 0)


def ellipsoid_degree(spec: EllipsoidSpec) -> int:
    """Degree ``-2[1/R] - 2(n-1)[1/(NR)]`` of the generator of contact homology."""
    spec.require_non_resonant()
    return -2 * math.floor(1.0 / spec.R) - 2 * (spec.n - 1) * math.floor(1.0 / (spec.N * spec.R))


def linearized_model_path(spec: EllipsoidSpec, rng: Optional[np.random.Generator] = None,
                          samples: int = 1025) -> SymplecticPath:
    """Linearized flow of ``pi [1/R]|z_1|^2 + pi [1/(NR)] sum |z_i|^2 + pi H``.

    ``H`` is a small positive-definite diagonal perturbation with random
    coefficients in ``(0, 1)``, drawn from ``rng``.
    """
    spec.require_non_resonant()
    rng = np.random.default_rng(0) if rng is None else rng
    frac = rng.uniform(0.05, 0.95, spec.n)
    base = np.array([math.floor(1.0 / spec.R)]
                    + [math.floor(1.0 / (spec.N * spec.R))] * (spec.n - 1), float)
    weights = 2 * np.pi * (base + frac)
    S = np.diag(np.concatenate([weights, weights]))
    needed = int(np.ceil(4 * weights.max() / np.pi)) + 64
    return SymplecticPath.from_generator(S, samples=max(samples, needed))


def ellipsoid_degree_by_flow(spec: EllipsoidSpec, rng=None) -> int:
    """Degree obtained from ``cz_index`` of the linearized model path."""
    return cz_index(linearized_model_path(spec, rng))


def ch_ellipsoid(spec: EllipsoidSpec) -> GradedGroup:
    """Contact homology of the ellipsoid: one ``Z_2`` in degree ``k(N, R)``."""
    return GradedGroup({ellipsoid_degree(spec): 1})


@dataclass
class InclusionCertificate:
    """Outcome of the ball-inclusion criterion.

    ``k`` is set when ``1/k < R1 <= R2 < 1/(k-1)``; otherwise ``separator``
    is an integer in ``[1/R2, 1/R1]``.
    """

    isomorphism: bool
    k: Optional[int] = None
    separator: Optional[int] = None


def ball_inclusion_iso(n: int, R1: float, R2: float) -> InclusionCertificate:
    """Whether the inclusion of balls of radii ``R1 <= R2`` is an isomorphism."""
    if not 0 < R1 <= R2:
        raise ValueError("need 0 < R1 <= R2")
    for R in (R1, R2):
        EllipsoidSpec(n, 1, R).require_non_resonant()
    k = math.floor(1.0 / R1) + 1
    if k == 1 or R2 < 1.0 / (k - 1):
        return InclusionCertificate(True, k=k)
    return InclusionCertificate(False, separator=math.ceil(1.0 / R2))


# ---------------------------------------------------------------------------
# action spectrum


@dataclass
class SpectrumSet:
    """Truncated action spectrum of the coordinate-plane Reeb orbits."""

    values: np.ndarray
    depth: int
    non_resonant: bool


def action_spectrum(spec: EllipsoidSpec, depth: int = 64) -> SpectrumSet:
    """Spectrum ``{-m R} u {-m N R}`` for ``m = 1..depth``.

    Only simple coordinate-plane orbits and their iterates are enumerated;
    resonant tori are not listed.
    """
    m = np.arange(1, depth + 1)
    vals = -m * spec.R
    if spec.n > 1:
        vals = np.concatenate([vals, -m * spec.N * spec.R])
    vals = np.unique(np.round(vals, 12))[::-1]
    resonant = bool(np.any(np.abs(vals + 1.0) <= 1e-12))
    if not resonant and depth * spec.R < 1:
        # the truncation does not reach -1, decide from the formula
        resonant = _is_natural(1.0 / spec.R)
    return SpectrumSet(vals, depth, not resonant)


def period_action_check(T: float, action: float, mu: float, C: float, P: float,
                        winding: int, tol: float = 1e-12) -> bool:
    """Check ``T = mu A + (P - mu C) w`` for a closed orbit.

    ``T`` is the period, ``A`` the action and ``w`` the winding in the circle
    direction of a Hamiltonian structure ``mu (dt - alpha) + (P - mu C) dt``.
    """
    if mu < 0 or P <= 0:
        raise ValueError("need mu >= 0 and P > 0")
    expected = mu * action + (P - mu * C) * winding
    return abs(T - expected) <= tol * max(1.0, abs(T), abs(expected))


# ---------------------------------------------------------------------------
# profile functions


Number = Real


@dataclass
class ProfileFunction:
    """Profile ``H(u)`` on ``(0, inf)``.

    Piecewise linear profiles are given by nodes ``(u_k, H_k)`` with
    ``0 < u_0 < u_1 < ...``; the profile is constant before the first and
    after the last node.  Smooth profiles are given by ``func`` and the
    interval ``[u_lo, u_hi]`` outside of which they are constant.
    """

    nodes: Optional[Tuple[Tuple[Number, Number], ...]] = None
    func: Optional[Callable[[np.ndarray], np.ndarray]] = None
    support: Tuple[float, float] = (0.0, 0.0)
    name: str = "H"

    def __post_init__(self):
        if (self.nodes is None) == (self.func is None):
            raise ValueError("give exactly one of nodes or func")
        if self.nodes is not None:
            self.nodes = tuple((u, h) for u, h in self.nodes)
            us = [u for u, _ in self.nodes]
            if us[0] <= 0 or any(b <= a for a, b in zip(us, us[1:])):
                raise ValueError("node abscissae must be positive and increasing")

    @property
    def piecewise_linear(self) -> bool:
        return self.nodes is not None

    def __call__(self, u):
        u = np.asarray(u, dtype=float)
        if self.nodes is not None:
            us = np.array([float(a) for a, _ in self.nodes])
            hs = np.array([float(b) for _, b in self.nodes])
            return np.interp(u, us, hs)
        lo, hi = self.support
        return self.func(np.clip(u, lo, hi))

    def exact(self, u: Number) -> Number:
        """Evaluate a piecewise linear profile in the nodes' arithmetic."""
        if self.nodes is None:
            raise TypeError("exact evaluation needs a piecewise linear profile")
        if u <= self.nodes[0][0]:
            return self.nodes[0][1]
        for (u0, h0), (u1, h1) in zip(self.nodes, self.nodes[1:]):
            if u <= u1:
                return h0 + (h1 - h0) * (u - u0) / (u1 - u0)
        return self.nodes[-1][1]

    def intercepts(self) -> List[Number]:
        """``H - u H'`` on every linear piece, including the constant ends."""
        if self.nodes is None:
            raise TypeError("intercepts need a piecewise linear profile")
        out = [self.nodes[0][1]]
        for (u0, h0), (u1, h1) in zip(self.nodes, self.nodes[1:]):
            out.append(h0 - u0 * (h1 - h0) / (u1 - u0))
        out.append(self.nodes[-1][1])
        return out

    def check_admissible(self, samples: int = 2001):
        """Raise ``AdmissibilityError`` unless ``H > 0`` and ``H - uH' > 0``."""
        if self.nodes is not None:
            if min(h for _, h in self.nodes) <= 0:
                raise AdmissibilityError(f"{self.name} is not positive")
            if min(self.intercepts()) <= 0:
                raise AdmissibilityError(f"{self.name} violates H - uH' > 0")
            return
        lo, hi = self.support
        u = np.linspace(lo, hi, samples)
        h = self.func(u)
        dh = np.gradient(h, u)
        if h.min() <= 0 or (h - u * dh).min() <= 0:
            raise AdmissibilityError(f"{self.name} violates H - uH' > 0")

    def shifted(self, c: Number) -> "ProfileFunction":
        """``H + c``; used to pass from ``Fbar`` to the ``G`` family."""
        if self.nodes is None:
            f = self.func
            return ProfileFunction(func=lambda u: f(u) + c, support=self.support,
                                   name=f"{self.name}+{c}")
        return ProfileFunction(tuple((u, h + c) for u, h in self.nodes),
                               name=f"{self.name}+{c}")


def profile_F(a: Number, b: Number, c: Number) -> ProfileFunction:
    """``F_{a,b,c}``: equal to ``c`` on ``(0, a)``, to 1 beyond ``b``, linear between."""
    if not 0 < a < b:
        raise ValueError("need 0 < a < b")
    return ProfileFunction(((a, c), (b, 1)), name="F")


def profile_G(mu: Number, nu: Number, kappa: Number) -> ProfileFunction:
    """``G_{mu,nu,kappa}``: equal to ``kappa`` on ``[0, mu]``, 0 beyond ``nu``."""
    if not (0 < mu < nu < 1 and kappa < 0):
        raise ValueError("need 0 < mu < nu < 1 and kappa < 0")
    return ProfileFunction(((mu, kappa), (nu, 0)), name="G")


def F_parameters(H: ProfileFunction) -> Tuple[Number, Number, Number]:
    """Recover ``(a, b, c)`` from a two-node profile ending at value 1."""
    if H.nodes is None or len(H.nodes) != 2 or H.nodes[1][1] != 1:
        raise ValueError("not an F profile")
    (a, c), (b, _) = H.nodes
    return a, b, c


def profile_transform(H: ProfileFunction, samples: int = 2001) -> ProfileFunction:
    """Transform ``H -> Hbar`` with ``phi_Hbar = phi_H^{-1}``.

    Piecewise linear profiles are mapped node by node, ``(u, h) -> (u/h, 1/h)``.
    Smooth profiles are inverted numerically on their support.

    Raises
    ------
    AdmissibilityError
        If ``H`` is not admissible.
    """
    H.check_admissible(samples)
    if H.nodes is not None:
        exact = all(isinstance(h, (int, Fraction)) for _, h in H.nodes)
        one = Fraction(1) if exact else 1.0
        nodes = tuple((u / h, one / h) for u, h in H.nodes)
        return ProfileFunction(nodes, name=f"bar({H.name})")
    lo, hi = H.support
    f = H.func
    v_lo, v_hi = lo / float(f(lo)), hi / float(f(hi))

    def phi_inv(v):
        v = np.atleast_1d(np.asarray(v, dtype=float))
        out = np.empty_like(v)
        for i, vi in enumerate(v):
            if vi <= v_lo:
                out[i] = vi * float(f(lo))
            elif vi >= v_hi:
                out[i] = vi * float(f(hi))
            else:
                out[i] = brentq(lambda u: u / f(u) - vi, lo, hi, xtol=1e-15, rtol=1e-15)
        return out

    def hbar(v):
        v = np.asarray(v, dtype=float)
        shape = v.shape
        v = v.ravel()
        vv = np.clip(v, v_lo, v_hi)
        return (vv / phi_inv(vv)).reshape(shape)

    return ProfileFunction(func=hbar, support=(v_lo, v_hi), name=f"bar({H.name})")


def phi_profile(H: ProfileFunction, u):
    """``phi_H(u) = u / H(u)``."""
    u = np.asarray(u, dtype=float)
    return u / H(u)
