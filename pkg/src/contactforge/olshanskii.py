"""Exact structure theory of su(2,1) and the invariant-cone orderability test.

Everything here runs over the rationals: complex matrix entries are Gaussian
rationals and no floating point enters any verdict.  The only floating point
code is ``contact_cone_crosscheck``, which recomputes the contact cone from
the projective action on the unit sphere.

Coordinates on ``h_Re = j h`` refer to the basis ``(j E_1, j E_2)``.  Roots are
represented by their duals under the normalized Killing form
``Q = [[2, 1], [1, 2]]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List, Sequence, Tuple

import numpy as np

Vec2 = Tuple[Fraction, Fraction]


class DegenerateConeError(ValueError):
    """A 2-D cone is a ray, a half-plane or the whole plane."""


# ---------------------------------------------------------------------------
# Gaussian rationals


@dataclass(frozen=True)
class GaussianRational:
    """Exact complex number ``re + i im`` with rational parts."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @staticmethod
    def of(x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, complex):
            return GaussianRational(Fraction(x.real), Fraction(x.imag))
        return GaussianRational(Fraction(x))

    def __add__(self, o):
        o = GaussianRational.of(o)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, o):
        return self + (-GaussianRational.of(o))

    def __rsub__(self, o):
        return GaussianRational.of(o) - self

    def __mul__(self, o):
        o = GaussianRational.of(o)
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = GaussianRational.of(o)
        d = o.re * o.re + o.im * o.im
        num = self * o.conj()
        return GaussianRational(num.re / d, num.im / d)

    def conj(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def __eq__(self, o):
        try:
            o = GaussianRational.of(o)
        except (TypeError, ValueError):
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0


I_UNIT = GaussianRational(0, 1)
ZERO = GaussianRational()
ONE = GaussianRational(1)


# ---------------------------------------------------------------------------
# exact matrices


@dataclass(frozen=True)
class RationalMatrix:
    """Square matrix with Gaussian-rational entries."""

    rows: Tuple[Tuple[GaussianRational, ...], ...]

    @staticmethod
    def of(entries) -> "RationalMatrix":
        return RationalMatrix(tuple(tuple(GaussianRational.of(x) for x in row)
                                    for row in entries))

    @staticmethod
    def zeros(n: int) -> "RationalMatrix":
        return RationalMatrix(tuple(tuple(ZERO for _ in range(n)) for _ in range(n)))

    @property
    def size(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __add__(self, o: "RationalMatrix") -> "RationalMatrix":
        return RationalMatrix(tuple(tuple(a + b for a, b in zip(r, s))
                                    for r, s in zip(self.rows, o.rows)))

    def __sub__(self, o: "RationalMatrix") -> "RationalMatrix":
        return RationalMatrix(tuple(tuple(a - b for a, b in zip(r, s))
                                    for r, s in zip(self.rows, o.rows)))

    def scale(self, c) -> "RationalMatrix":
        c = GaussianRational.of(c)
        return RationalMatrix(tuple(tuple(c * a for a in r) for r in self.rows))

    def __matmul__(self, o: "RationalMatrix") -> "RationalMatrix":
        n = self.size
        return RationalMatrix(tuple(
            tuple(sum((self.rows[i][k] * o.rows[k][j] for k in range(n)), ZERO)
                  for j in range(n)) for i in range(n)))

    def adjoint(self) -> "RationalMatrix":
        n = self.size
        return RationalMatrix(tuple(tuple(self.rows[j][i].conj() for j in range(n))
                                    for i in range(n)))

    def trace(self) -> GaussianRational:
        return sum((self.rows[i][i] for i in range(self.size)), ZERO)

    def is_zero(self) -> bool:
        return all(x.is_zero() for r in self.rows for x in r)

    def to_numpy(self) -> np.ndarray:
        return np.array([[complex(x) for x in r] for r in self.rows])


def commutator(X: RationalMatrix, Y: RationalMatrix) -> RationalMatrix:
    return X @ Y - Y @ X


FORM_I = RationalMatrix.of([[1, 0, 0], [0, 1, 0], [0, 0, -1]])

BASIS_NAMES = ("E1", "E2", "F", "Ft", "G1", "G1t", "G2", "G2t")

# blocks of the root decomposition, as index pairs into BASIS_NAMES
BLOCKS = ((2, 3), (4, 5), (6, 7))


@lru_cache(maxsize=None)
def basis_matrices() -> Tuple[RationalMatrix, ...]:
    i = I_UNIT
    return (
        RationalMatrix.of([[i, 0, 0], [0, 0, 0], [0, 0, -i]]),
        RationalMatrix.of([[0, 0, 0], [0, i, 0], [0, 0, -i]]),
        RationalMatrix.of([[0, 1, 0], [-1, 0, 0], [0, 0, 0]]),
        RationalMatrix.of([[0, i, 0], [i, 0, 0], [0, 0, 0]]),
        RationalMatrix.of([[0, 0, 1], [0, 0, 0], [1, 0, 0]]),
        RationalMatrix.of([[0, 0, i], [0, 0, 0], [-i, 0, 0]]),
        RationalMatrix.of([[0, 0, 0], [0, 0, 1], [0, 1, 0]]),
        RationalMatrix.of([[0, 0, 0], [0, 0, i], [0, -i, 0]]),
    )


def in_su21(X: RationalMatrix) -> bool:
    """Exact test of ``X^* I + I X = 0`` and ``tr X = 0``."""
    return (X.adjoint() @ FORM_I + FORM_I @ X).is_zero() and X.trace().is_zero()


def coordinates(X: RationalMatrix) -> Tuple[Fraction, ...]:
    """Real coordinates of ``X`` in the basis ``E1, E2, F, Ft, G1, G1t, G2, G2t``.

    Raises
    ------
    ValueError
        If ``X`` is not in ``su(2,1)``.
    """
    c = (X[0, 0].im, X[1, 1].im, X[0, 1].re, X[0, 1].im,
         X[0, 2].re, X[0, 2].im, X[1, 2].re, X[1, 2].im)
    rebuilt = combination(c)
    if not (rebuilt - X).is_zero():
        raise ValueError("matrix is not in su(2,1)")
    return c


def combination(coeffs: Sequence) -> RationalMatrix:
    out = RationalMatrix.zeros(3)
    for c, B in zip(coeffs, basis_matrices()):
        out = out + B.scale(c)
    return out


def ad_matrix(X: RationalMatrix) -> Tuple[Tuple[Fraction, ...], ...]:
    """Matrix of ``ad X`` on su(2,1) in the standard basis (columns = images)."""
    cols = [coordinates(commutator(X, B)) for B in basis_matrices()]
    return tuple(tuple(cols[j][i] for j in range(8)) for i in range(8))


def _matmul_q(A, B):
    n = len(A)
    return tuple(tuple(sum((A[i][k] * B[k][j] for k in range(n)), Fraction(0))
                       for j in range(n)) for i in range(n))


def _trace_q(A) -> Fraction:
    return sum((A[i][i] for i in range(len(A))), Fraction(0))


@dataclass
class Su21Structure:
    """Basis, adjoint operators on the Cartan subalgebra and the Killing form.

    ``killing_h`` is the Killing form of ``g`` restricted to ``h``;
    on ``h_Re = j h`` it changes sign.  ``Q = killing_Re / killing_scale``.
    """

    basis: Tuple[RationalMatrix, ...]
    ad_E1: Tuple[Tuple[Fraction, ...], ...]
    ad_E2: Tuple[Tuple[Fraction, ...], ...]
    killing_h: Tuple[Tuple[Fraction, ...], ...]
    killing_scale: Fraction
    Q: Tuple[Tuple[Fraction, ...], ...]


def block_sum(*blocks) -> Tuple[Tuple[Fraction, ...], ...]:
    """Exact block-diagonal matrix."""
    size = sum(len(b) for b in blocks)
    out = [[Fraction(0)] * size for _ in range(size)]
    k = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                out[k + i][k + j] = Fraction(x)
        k += len(b)
    return tuple(tuple(r) for r in out)


J2 = ((0, -1), (1, 0))


def scaled_J(c) -> Tuple[Tuple[Fraction, ...], ...]:
    return tuple(tuple(Fraction(c) * x for x in row) for row in J2)


@lru_cache(maxsize=None)
def su21_structure() -> Su21Structure:
    """Exact basis, ``ad(E1)``, ``ad(E2)`` and the normalized Killing form."""
    B = basis_matrices()
    for X in B:
        if not in_su21(X):
            raise AssertionError("basis matrix outside su(2,1)")
    ad1, ad2 = ad_matrix(B[0]), ad_matrix(B[1])
    ads = (ad1, ad2)
    kh = tuple(tuple(_trace_q(_matmul_q(ads[a], ads[b])) for b in range(2))
               for a in range(2))
    k_re = tuple(tuple(-x for x in row) for row in kh)
    # normalize so that the off-diagonal entry is 1
    scale = k_re[0][1]
    if scale <= 0:
        raise AssertionError("unexpected sign of the Killing form")
    Q = tuple(tuple(x / scale for x in row) for row in k_re)
    return Su21Structure(B, ad1, ad2, kh, scale, Q)


def qform(x: Sequence, y: Sequence, Q=None) -> Fraction:
    Q = su21_structure().Q if Q is None else Q
    return sum((Fraction(x[i]) * Q[i][j] * Fraction(y[j]) for i in range(2) for j in range(2)),
               Fraction(0))


def _solve2(M, rhs) -> Vec2:
    (a, b), (c, d) = M
    det = Fraction(a) * d - Fraction(b) * c
    if det == 0:
        raise ValueError("singular 2x2 system")
    return ((d * rhs[0] - b * rhs[1]) / det, (a * rhs[1] - c * rhs[0]) / det)


# ---------------------------------------------------------------------------
# roots


@dataclass(frozen=True)
class Root:
    """A root with its eigenvector in ``g_C = g + j g`` and compactness flag.

    ``functional`` holds the eigenvalues of ``ad(E1), ad(E2)`` divided by
    ``i``; ``vector`` is its dual under ``Q`` in ``h_Re`` coordinates.
    """

    vector: Vec2
    functional: Vec2
    eigen_real: RationalMatrix
    eigen_imag: RationalMatrix
    compact: bool
    noncompact: bool


def _cartan_parts(X: RationalMatrix) -> Tuple[RationalMatrix, RationalMatrix]:
    """Skew-Hermitian (``t``) and Hermitian (``p``) parts of ``X``."""
    half = Fraction(1, 2)
    return (X - X.adjoint()).scale(half), (X + X.adjoint()).scale(half)


@lru_cache(maxsize=None)
def root_system() -> Tuple[Root, ...]:
    """Six roots by exact simultaneous diagonalization of ``ad(h)``.

    On each 2-D block the two ad operators are multiples ``c J`` of the
    rotation ``J``, whose eigenvectors ``(1, -+i)`` have eigenvalues ``+-i``.
    """
    st = su21_structure()
    B = st.basis
    roots = []
    for a, b in BLOCKS:
        coeffs = []
        for ad in (st.ad_E1, st.ad_E2):
            blk = ((ad[a][a], ad[a][b]), (ad[b][a], ad[b][b]))
            c = blk[1][0]
            if blk != ((0, -c), (c, 0)):
                raise AssertionError("ad(h) block is not a multiple of J")
            for i in range(8):
                if i not in (a, b) and (ad[i][a] != 0 or ad[i][b] != 0):
                    raise AssertionError("blocks are not ad(h)-invariant")
            coeffs.append(c)
        for sign in (1, -1):
            # eigenvector X_a - sign j X_b of c J has eigenvalue sign * i * c
            X, Y = B[a], B[b].scale(-sign)
            for ad_idx, ad in enumerate((st.ad_E1, st.ad_E2)):
                blk = ((ad[a][a], ad[a][b]), (ad[b][a], ad[b][b]))
                v = (ONE, GaussianRational(0, -sign))
                lhs = (blk[0][0] * v[0] + blk[0][1] * v[1], blk[1][0] * v[0] + blk[1][1] * v[1])
                lam = GaussianRational(0, sign * coeffs[ad_idx])
                if lhs != (lam * v[0], lam * v[1]):
                    raise AssertionError("eigenvector check failed")
            functional = (sign * coeffs[0], sign * coeffs[1])
            vector = _solve2(st.Q, functional)
            tX, pX = _cartan_parts(X)
            tY, pY = _cartan_parts(Y)
            compact = pX.is_zero() and pY.is_zero()
            noncompact = tX.is_zero() and tY.is_zero()
            roots.append(Root(vector, functional, X, Y, compact, noncompact))
    return tuple(roots)


def root_vectors() -> List[Vec2]:
    return [r.vector for r in root_system()]


def weyl_reflection(x: Sequence, root: Sequence) -> Vec2:
    """Reflection of ``x`` in the hyperplane ``Q``-orthogonal to ``root``."""
    k = 2 * qform(x, root) / qform(root, root)
    return (Fraction(x[0]) - k * root[0], Fraction(x[1]) - k * root[1])


# ---------------------------------------------------------------------------
# cones


def _cross(u: Sequence, v: Sequence) -> Fraction:
    return Fraction(u[0]) * v[1] - Fraction(u[1]) * v[0]


def _dot(u: Sequence, v: Sequence) -> Fraction:
    return Fraction(u[0]) * v[0] + Fraction(u[1]) * v[1]


def _normalize(v: Sequence) -> Vec2:
    m = max(abs(Fraction(v[0])), abs(Fraction(v[1])))
    if m == 0:
        raise DegenerateConeError("zero vector")
    return (Fraction(v[0]) / m, Fraction(v[1]) / m)


@dataclass(frozen=True)
class RationalCone2:
    """Closed pointed cone in ``Q^2`` with nonempty interior.

    Stored both by its generators ``g1, g2`` (counter-clockwise) and by the
    inner normals ``n1, n2`` with cone ``= {x : n_i . x >= 0}``.
    """

    g1: Vec2
    g2: Vec2
    n1: Vec2
    n2: Vec2

    @staticmethod
    def from_generators(u: Sequence, v: Sequence) -> "RationalCone2":
        u, v = _normalize(u), _normalize(v)
        cr = _cross(u, v)
        if cr == 0:
            raise DegenerateConeError("generators are parallel or opposite")
        if cr < 0:
            u, v = v, u
        # inner normals: rotate each edge towards the other generator
        n1 = _normalize((-u[1], u[0]))
        n2 = _normalize((v[1], -v[0]))
        cone = RationalCone2(u, v, n1, n2)
        cone.validate()
        return cone

    @staticmethod
    def from_inequalities(a: Sequence, b: Sequence) -> "RationalCone2":
        """Cone ``{x : a . x >= 0, b . x >= 0}``."""
        a, b = _normalize(a), _normalize(b)
        if _cross(a, b) == 0:
            raise DegenerateConeError("inequalities define a half-plane or a line")
        candidates = []
        for n, other in ((a, b), (b, a)):
            edge = (-n[1], n[0])
            if _dot(other, edge) < 0:
                edge = (n[1], -n[0])
            candidates.append(edge)
        cone = RationalCone2.from_generators(*candidates)
        if not (cone.contains(_sum(candidates)) and _dot(a, cone.g1) >= 0 and _dot(b, cone.g2) >= 0
                and _dot(a, cone.g2) >= 0 and _dot(b, cone.g1) >= 0):
            raise DegenerateConeError("inequalities do not define a pointed cone")
        return cone

    def validate(self):
        for n in (self.n1, self.n2):
            for g in (self.g1, self.g2):
                if _dot(n, g) < 0:
                    raise AssertionError("normals inconsistent with generators")
        if _dot(self.n1, self.g1) != 0 or _dot(self.n2, self.g2) != 0:
            raise AssertionError("normals are not edge normals")

    def contains(self, x: Sequence) -> bool:
        return _dot(self.n1, x) >= 0 and _dot(self.n2, x) >= 0

    def contains_cone(self, other: "RationalCone2") -> bool:
        return self.contains(other.g1) and self.contains(other.g2)

    def __neg__(self) -> "RationalCone2":
        return RationalCone2.from_generators((-self.g1[0], -self.g1[1]),
                                             (-self.g2[0], -self.g2[1]))

    def same_as(self, other: "RationalCone2") -> bool:
        return self.contains_cone(other) and other.contains_cone(self)

    def as_dict(self) -> dict:
        return {"generators": [list(self.g1), list(self.g2)],
                "inner_normals": [list(self.n1), list(self.n2)]}


def _sum(vs) -> Vec2:
    return (sum((Fraction(v[0]) for v in vs), Fraction(0)),
            sum((Fraction(v[1]) for v in vs), Fraction(0)))


def cone_hull(vectors: Sequence[Sequence]) -> RationalCone2:
    """Smallest closed cone containing the given vectors.

    Raises
    ------
    DegenerateConeError
        If the hull is not pointed or has empty interior.
    """
    vs = [_normalize(v) for v in vectors]
    for u in vs:
        for v in vs:
            if _cross(u, v) == 0 and _dot(u, v) < 0:
                raise DegenerateConeError("hull contains a line")
    # extreme rays: u such that all others lie on one side
    left = [u for u in vs if all(_cross(u, v) >= 0 for v in vs)]
    right = [v for v in vs if all(_cross(u, v) >= 0 for u in vs)]
    if not left or not right:
        raise DegenerateConeError("hull is not pointed")
    cone = RationalCone2.from_generators(left[0], right[0])
    if not all(cone.contains(v) for v in vs):
        raise DegenerateConeError("hull is not pointed")
    return cone


def dual_cone(cone: RationalCone2, Q=None) -> RationalCone2:
    """``{x : Q(x, y) >= 0 for all y in cone}``, computed exactly.

    Raises
    ------
    DegenerateConeError
        If ``Q`` is degenerate or the cone is not pointed.
    """
    Q = su21_structure().Q if Q is None else tuple(tuple(Fraction(x) for x in r) for r in Q)
    if Q[0][0] * Q[1][1] - Q[0][1] * Q[1][0] == 0:
        raise DegenerateConeError("form is degenerate")
    normals = [tuple(sum((Q[i][j] * g[i] for i in range(2)), Fraction(0)) for j in range(2))
               for g in (cone.g1, cone.g2)]
    return RationalCone2.from_inequalities(*normals)


# ---------------------------------------------------------------------------
# the c_0 construction


@dataclass
class C0Construction:
    """Intermediate data of the construction of ``c_0``."""

    orthogonal_roots: List[Vec2]
    H1: Vec2
    Z: Vec2
    H0: Vec2
    weyl_orbit_H0: List[Vec2]
    c_min: RationalCone2
    c1: RationalCone2
    c0: RationalCone2


def positive_roots() -> List[Root]:
    """Positive system ``gamma = (1,-1), alpha_1 = (1,0), alpha_2 = (0,1)``.

    Chosen as the roots with positive ``Q``-pairing against ``(2, 1)``, a
    regular element.
    """
    return [r for r in root_system() if qform(r.vector, (2, 1)) > 0]


def build_c0() -> C0Construction:
    """Construct ``c_0`` from the structure theory, exactly."""
    pos = positive_roots()
    noncompact = sorted((r.vector for r in pos if r.noncompact), reverse=True)
    compact = [r.vector for r in pos if r.compact]
    # step 1: greedy maximal set of Q-orthogonal positive non-compact roots
    chosen: List[Vec2] = []
    for v in noncompact:
        if all(qform(v, w) == 0 for w in chosen):
            chosen.append(v)
    H1 = _sum([tuple(2 * x / qform(a, a) for x in a) for a in chosen])
    # step 2: Z spans the centre of t (kernel of the compact roots)
    gamma = compact[0]
    direction = (qform((0, 1), gamma), -qform((1, 0), gamma))
    a1 = noncompact[0]
    s = Fraction(2) / qform(a1, direction)
    Z = (s * direction[0], s * direction[1])
    for a in noncompact:
        if qform(a, Z) != 2:
            raise AssertionError("Z does not pair to 2 with every non-compact root")
    H0 = (Z[0] - H1[0], Z[1] - H1[1])
    orbit = [H0]
    for g in compact:
        orbit.append(weyl_reflection(H0, g))
    c_min = cone_hull(noncompact)
    c1 = cone_hull(orbit + [c_min.g1, c_min.g2])
    c0 = dual_cone(c1)
    return C0Construction(chosen, H1, Z, H0, orbit, c_min, c1, c0)


def contact_cone() -> RationalCone2:
    """The cone ``{2a + b >= 0, a + 2b >= 0}`` of non-negative generators."""
    return RationalCone2.from_inequalities((2, 1), (1, 2))


@dataclass
class OrderabilityVerdict:
    verdict: str
    in_plus_c0: bool
    in_minus_c0: bool
    witness: Vec2

    def as_dict(self) -> dict:
        return {"verdict": self.verdict, "in_plus_c0": self.in_plus_c0,
                "in_minus_c0": self.in_minus_c0, "witness": list(self.witness)}


def orderability_verdict(cone: RationalCone2, c0: RationalCone2 = None) -> OrderabilityVerdict:
    """Compare a cone in ``h_Re`` with ``+c_0`` and ``-c_0``.

    The induced order is genuine only if the cone lies in one of them.  The
    witness is a generator of ``cone`` outside ``c_0``.
    """
    c0 = build_c0().c0 if c0 is None else c0
    plus = c0.contains_cone(cone)
    minus = (-c0).contains_cone(cone)
    outside = [g for g in (cone.g1, cone.g2) if not c0.contains(g)]
    witness = outside[0] if outside else cone.g1
    verdict = "order-compatible" if plus or minus else "non-orderable"
    return OrderabilityVerdict(verdict, plus, minus, witness)


# ---------------------------------------------------------------------------
# geometric cross-check


def projective_generator_hamiltonian(a: float, b: float, z: np.ndarray) -> np.ndarray:
    """Contact Hamiltonian of the flow of ``a E1 + b E2`` on ``C^2``.

    The flow acts on ``z = (u_1/u_3, u_2/u_3)``.  Differentiating at ``t = 0``
    gives ``dz_k = (E u)_k - z_k (E u)_3`` with ``u = (z, 1)``, and the
    Hamiltonian is ``alpha_z(dz) = 1/2 Im(conj(z) . dz)``.
    """
    M = combination((Fraction(a), Fraction(b), 0, 0, 0, 0, 0, 0)).to_numpy()
    z = np.asarray(z, dtype=complex)
    u = np.concatenate([z, np.ones(z.shape[:-1] + (1,))], axis=-1)
    du = u @ M.T
    dz = du[..., :2] - z * du[..., 2:3]
    return 0.5 * np.imag(np.sum(np.conj(z) * dz, axis=-1))


def contact_cone_crosscheck(pairs: Sequence[Tuple], count: int = 512, seed: int = 0) -> dict:
    """Recompute the contact cone from the flow on the unit sphere.

    For each ``(a, b)`` the projective Hamiltonian is compared with the
    diagonal linear path ``diag(exp(i(2a+b)t), exp(i(a+2b)t))`` through
    ``maps.linear_path``, and the sign of its minimum on the sphere is
    compared with exact membership in ``contact_cone()``.
    """
    from .geometry import sphere_points
    from .maps import linear_path

    z = sphere_points(2, count, seed)
    cone = contact_cone()
    max_err = 0.0
    agree = True
    rows = []
    for a, b in pairs:
        w = np.array([2 * float(a) + float(b), float(a) + 2 * float(b)])

        def matrix(t, w=w):
            t = np.asarray(t, dtype=float)
            ph = np.exp(1j * t[..., None] * w)
            return ph[..., :, None] * np.eye(2), (1j * w * ph)[..., :, None] * np.eye(2)

        path = linear_path(matrix, 2, False, "h")
        h_lin = path.hamiltonian(z, np.zeros(count))
        h_proj = projective_generator_hamiltonian(a, b, z)
        max_err = max(max_err, float(np.abs(h_lin - h_proj).max()))
        nonneg = bool(h_proj.min() >= -1e-12)
        exact = cone.contains((Fraction(a), Fraction(b)))
        agree &= nonneg == exact
        rows.append({"a": a, "b": b, "min_H": float(h_proj.min()), "in_cone": exact})
    return {"max_error": max_err, "agree": agree, "rows": rows}
