"""B-spline and NURBS bases, tensor-product surfaces and refinement.

Conventions
-----------
Control nets are stored as arrays of shape ``(n, m, ...)`` where the first
axis runs along the ``xi`` (``u``) direction and the second along ``eta``
(``v``). The flat control point index used by the assembly is
``i * m + j``.
"""
from __future__ import annotations

import bisect
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, RefinementError

_END_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class KnotVector:
    """Open knot vector of a univariate B-spline basis.

    Parameters
    ----------
    degree : int
        Polynomial degree ``p >= 1``.
    knots : array_like
        Non-decreasing parameter values. The first and last values must be
        repeated exactly ``p + 1`` times and interior values at most ``p``
        times.
    """

    degree: int
    knots: np.ndarray

    def __post_init__(self):
        knots = np.array(self.knots, dtype=float)
        knots.setflags(write=False)
        object.__setattr__(self, "knots", knots)
        p = int(self.degree)
        object.__setattr__(self, "degree", p)
        if p < 1:
            raise ValueError(f"degree must be >= 1, got {p}")
        if knots.ndim != 1 or np.any(np.diff(knots) < 0):
            raise ValueError("knots must be a non-decreasing sequence")
        if self.n_basis < p + 1:
            raise ValueError(f"too few knots ({knots.size}) for degree {p}")
        values, counts = np.unique(knots, return_counts=True)
        if counts[0] != p + 1 or counts[-1] != p + 1:
            raise ValueError("knot vector must be open (end multiplicity p+1)")
        if np.any(counts[1:-1] > p):
            raise ValueError("interior knot multiplicity exceeds the degree")

    @property
    def n_basis(self) -> int:
        return self.knots.size - self.degree - 1

    @property
    def domain(self) -> tuple[float, float]:
        return float(self.knots[0]), float(self.knots[-1])

    def unique_knots(self) -> np.ndarray:
        return np.unique(self.knots)

    def multiplicity(self, value: float) -> int:
        return int(np.count_nonzero(self.knots == value))

    def spans(self) -> list[tuple[int, float, float]]:
        """Nonempty knot spans as ``(span index, left, right)``."""
        k = self.knots
        return [(i, float(k[i]), float(k[i + 1]))
                for i in range(self.degree, self.n_basis) if k[i + 1] > k[i]]

    def greville(self) -> np.ndarray:
        """Greville abscissae (knot averages), one per basis function."""
        p = self.degree
        k = self.knots
        return np.array([k[i + 1:i + p + 1].mean() for i in range(self.n_basis)])

    def __eq__(self, other):
        if not isinstance(other, KnotVector):
            return NotImplemented
        return self.degree == other.degree and np.array_equal(self.knots, other.knots)

    def __repr__(self):
        return f"KnotVector(degree={self.degree}, knots={self.knots.tolist()})"


def open_uniform(degree: int, nel: int, lo: float = 0.0, hi: float = 1.0) -> KnotVector:
    """Open uniform knot vector with ``nel`` equal spans on ``[lo, hi]``."""
    inner = np.linspace(lo, hi, nel + 1)[1:-1]
    knots = np.concatenate([np.full(degree + 1, lo), inner, np.full(degree + 1, hi)])
    return KnotVector(degree, knots)


@dataclass(frozen=True)
class BasisEval:
    """Nonzero univariate basis values at one parameter.

    ``values[k]`` and ``derivs[k]`` belong to basis function
    ``first_index + k``.
    """

    first_index: int
    values: np.ndarray
    derivs: np.ndarray


def find_span(kv: KnotVector, xi: float) -> int:
    """Index ``i`` with ``knots[i] <= xi < knots[i+1]``.

    The right end of the domain is mapped into the last nonempty span.
    """
    lo, hi = kv.domain
    if xi < lo - _END_TOL or xi > hi + _END_TOL or not np.isfinite(xi):
        raise DomainError(f"parameter {xi!r} outside knot range [{lo}, {hi}]")
    n = kv.n_basis
    if xi >= kv.knots[n]:
        return n - 1
    if xi <= lo:
        return kv.degree
    return bisect.bisect_right(kv.knots, xi, kv.degree, n) - 1


def _basis_ders(knots: np.ndarray, p: int, span: int, xi: float) -> tuple[np.ndarray, np.ndarray]:
    # Cox-de Boor triangle with first derivatives; 0/0 terms vanish
    left = np.zeros(p + 1)
    right = np.zeros(p + 1)
    ndu = np.zeros((p + 1, p + 1))
    ndu[0, 0] = 1.0
    for j in range(1, p + 1):
        left[j] = xi - knots[span + 1 - j]
        right[j] = knots[span + j] - xi
        saved = 0.0
        for r in range(j):
            ndu[j, r] = right[r + 1] + left[j - r]
            temp = ndu[r, j - 1] / ndu[j, r]
            ndu[r, j] = saved + right[r + 1] * temp
            saved = left[j - r] * temp
        ndu[j, j] = saved
    values = ndu[:, p].copy()
    derivs = np.zeros(p + 1)
    for r in range(p + 1):
        d = 0.0
        if r >= 1:
            d += ndu[r - 1, p - 1] / ndu[p, r - 1]
        if r <= p - 1:
            d -= ndu[r, p - 1] / ndu[p, r]
        derivs[r] = p * d
    return values, derivs


def eval_basis(kv: KnotVector, xi: float) -> BasisEval:
    """Evaluate the ``p + 1`` nonzero basis functions and their derivatives."""
    span = find_span(kv, xi)
    xi = min(max(float(xi), kv.knots[0]), kv.knots[-1])
    values, derivs = _basis_ders(kv.knots, kv.degree, span, xi)
    return BasisEval(span - kv.degree, values, derivs)


def basis_matrix(kv: KnotVector, params) -> np.ndarray:
    """Dense collocation matrix ``B[k, i] = N_i(params[k])``."""
    params = np.atleast_1d(np.asarray(params, dtype=float))
    out = np.zeros((params.size, kv.n_basis))
    for k, xi in enumerate(params):
        be = eval_basis(kv, xi)
        out[k, be.first_index:be.first_index + kv.degree + 1] = be.values
    return out


@dataclass(frozen=True)
class SurfaceEval:
    """Geometry and rational basis of a patch at one parametric point.

    ``indices`` are flat control point indices; ``dR`` has shape
    ``(2, nloc)`` holding derivatives with respect to ``(xi, eta)``.
    """

    point: np.ndarray
    indices: np.ndarray
    R: np.ndarray
    dR: np.ndarray
    dpoint: np.ndarray  # 2x2, columns are d/dxi and d/deta


@dataclass(frozen=True, eq=False)
class NurbsPatch:
    """Planar tensor-product NURBS patch.

    Attributes
    ----------
    knot_u, knot_v : KnotVector
    control_points : ndarray, shape (n, m, 2)
    weights : ndarray, shape (n, m)
    """

    knot_u: KnotVector
    knot_v: KnotVector
    control_points: np.ndarray
    weights: np.ndarray = field(default=None)

    def __post_init__(self):
        cp = np.array(self.control_points, dtype=float)
        n, m = self.knot_u.n_basis, self.knot_v.n_basis
        if cp.shape != (n, m, 2):
            raise ValueError(f"control net shape {cp.shape} does not match bases ({n}, {m}, 2)")
        w = np.ones((n, m)) if self.weights is None else np.array(self.weights, dtype=float)
        if w.shape != (n, m):
            raise ValueError(f"weight grid shape {w.shape} does not match bases ({n}, {m})")
        if np.any(w <= 0):
            raise ValueError("all weights must be strictly positive")
        cp.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "control_points", cp)
        object.__setattr__(self, "weights", w)

    @property
    def shape(self) -> tuple[int, int]:
        return self.knot_u.n_basis, self.knot_v.n_basis

    @property
    def n_control(self) -> int:
        n, m = self.shape
        return n * m

    @property
    def degrees(self) -> tuple[int, int]:
        return self.knot_u.degree, self.knot_v.degree

    def knot(self, direction: int) -> KnotVector:
        return (self.knot_u, self.knot_v)[direction]

    def elements(self) -> list[tuple[tuple[int, float, float], tuple[int, float, float]]]:
        """Nonempty parametric elements as pairs of ``(span, lo, hi)``."""
        return [(su, sv) for su in self.knot_u.spans() for sv in self.knot_v.spans()]

    def boundary_indices(self) -> dict[str, np.ndarray]:
        """Flat control point indices on each edge of the net.

        Keys are ``"xi0"``, ``"xi1"`` (first/last row along ``xi``) and
        ``"eta0"``, ``"eta1"``.
        """
        n, m = self.shape
        idx = np.arange(n * m).reshape(n, m)
        return {"xi0": idx[0, :], "xi1": idx[-1, :], "eta0": idx[:, 0], "eta1": idx[:, -1]}

    def evaluate(self, xi: float, eta: float) -> SurfaceEval:
        return surface_point(self, xi, eta)

    def homogeneous(self) -> np.ndarray:
        """Control net in homogeneous form ``(w x, w y, w)``."""
        w = self.weights[..., None]
        return np.concatenate([self.control_points * w, w], axis=-1)

    @classmethod
    def from_homogeneous(cls, knot_u: KnotVector, knot_v: KnotVector, pw: np.ndarray) -> "NurbsPatch":
        w = pw[..., -1]
        return cls(knot_u, knot_v, pw[..., :-1] / w[..., None], w)


def rational_basis(patch: NurbsPatch, bu: BasisEval, bv: BasisEval):
    """Tensor-product rational basis from two univariate evaluations.

    Returns flat indices, values ``R`` and derivatives ``dR`` (2, nloc).
    """
    n, m = patch.shape
    p, q = patch.degrees
    iu = bu.first_index + np.arange(p + 1)
    iv = bv.first_index + np.arange(q + 1)
    w = patch.weights[np.ix_(iu, iv)]
    N = np.outer(bu.values, bv.values) * w
    Nu = np.outer(bu.derivs, bv.values) * w
    Nv = np.outer(bu.values, bv.derivs) * w
    W = N.sum()
    if not W > 0:
        raise FloatingPointError("non-positive NURBS weight function")
    Wu, Wv = Nu.sum(), Nv.sum()
    R = N / W
    Ru = (Nu - R * Wu) / W
    Rv = (Nv - R * Wv) / W
    indices = (iu[:, None] * m + iv[None, :]).ravel()
    return indices, R.ravel(), np.stack([Ru.ravel(), Rv.ravel()])


def surface_point(patch: NurbsPatch, xi: float, eta: float) -> SurfaceEval:
    """Point on the patch plus rational basis values and parametric derivatives."""
    bu = eval_basis(patch.knot_u, xi)
    bv = eval_basis(patch.knot_v, eta)
    indices, R, dR = rational_basis(patch, bu, bv)
    P = patch.control_points.reshape(-1, 2)[indices]
    return SurfaceEval(R @ P, indices, R, dR, (dR @ P).T)


def _insert_1d(kv: KnotVector, pw: np.ndarray, u: float) -> tuple[KnotVector, np.ndarray]:
    # Boehm single insertion; pw has the basis axis first
    p = kv.degree
    lo, hi = kv.domain
    if not lo < u < hi:
        raise RefinementError(f"knot {u!r} must lie strictly inside ({lo}, {hi})")
    s = kv.multiplicity(u)
    if s + 1 > p:
        raise RefinementError(f"inserting {u!r} would raise its multiplicity to {s + 1} > degree {p}")
    k = find_span(kv, u)
    U = kv.knots
    n = kv.n_basis
    q = np.empty((n + 1,) + pw.shape[1:])
    q[:k - p + 1] = pw[:k - p + 1]
    for i in range(k - p + 1, k - s + 1):
        alpha = (u - U[i]) / (U[i + p] - U[i])
        q[i] = alpha * pw[i] + (1.0 - alpha) * pw[i - 1]
    q[k - s + 1:] = pw[k - s:]
    return KnotVector(p, np.insert(U, k + 1, u)), q


def insert_knot(patch: NurbsPatch, direction: int, xi_new: float) -> NurbsPatch:
    """Insert one knot in ``direction`` (0 = xi, 1 = eta); geometry is unchanged."""
    pw = patch.homogeneous()
    if direction == 0:
        kv, q = _insert_1d(patch.knot_u, pw, xi_new)
        return NurbsPatch.from_homogeneous(kv, patch.knot_v, q)
    if direction == 1:
        kv, q = _insert_1d(patch.knot_v, np.swapaxes(pw, 0, 1), xi_new)
        return NurbsPatch.from_homogeneous(patch.knot_u, kv, np.swapaxes(q, 0, 1))
    raise ValueError(f"direction must be 0 or 1, got {direction!r}")


def _elevate_1d(kv: KnotVector, pw: np.ndarray, times: int) -> tuple[KnotVector, np.ndarray]:
    # The elevated space contains the old one, so collocation at the new
    # Greville points recovers the exact control net.
    values, counts = np.unique(kv.knots, return_counts=True)
    new = KnotVector(kv.degree + times, np.repeat(values, counts + times))
    g = new.greville()
    A = basis_matrix(new, g)
    B = basis_matrix(kv, g)
    flat = pw.reshape(pw.shape[0], -1)
    q = np.linalg.solve(A, B @ flat)
    return new, q.reshape((new.n_basis,) + pw.shape[1:])


def elevate_degree(patch: NurbsPatch, direction: int, times: int = 1) -> NurbsPatch:
    """Raise the degree in ``direction`` by ``times`` without changing the geometry."""
    if times < 1:
        raise ValueError(f"times must be >= 1, got {times}")
    pw = patch.homogeneous()
    if direction == 0:
        kv, q = _elevate_1d(patch.knot_u, pw, times)
        return NurbsPatch.from_homogeneous(kv, patch.knot_v, q)
    if direction == 1:
        kv, q = _elevate_1d(patch.knot_v, np.swapaxes(pw, 0, 1), times)
        return NurbsPatch.from_homogeneous(patch.knot_u, kv, np.swapaxes(q, 0, 1))
    raise ValueError(f"direction must be 0 or 1, got {direction!r}")


def refine_uniform(patch: NurbsPatch, nel_u: int, nel_v: int | None = None) -> NurbsPatch:
    """Insert knots so each direction has ``nel`` equal parametric spans.

    Existing interior knots that are not on the target grid are kept.
    """
    nel_v = nel_u if nel_v is None else nel_v
    for direction, nel in ((0, nel_u), (1, nel_v)):
        lo, hi = patch.knot(direction).domain
        for u in np.linspace(lo, hi, nel + 1)[1:-1]:
            if not np.any(np.isclose(patch.knot(direction).knots, u, rtol=0, atol=1e-14)):
                patch = insert_knot(patch, direction, float(u))
    return patch


def make_square_patch(a: float, p: int, nel: int) -> NurbsPatch:
    """Square ``[0, a]^2`` with ``nel x nel`` uniform elements of degree ``p``.

    Control points sit at the Greville abscissae, so the parametric map is
    affine and the Jacobian is constant.
    """
    if a <= 0:
        raise ValueError(f"side length must be positive, got {a}")
    kv = open_uniform(p, nel)
    g = kv.greville() * a
    X, Y = np.meshgrid(g, g, indexing="ij")
    return NurbsPatch(kv, kv, np.stack([X, Y], axis=-1))


def make_circle_patch(radius: float = 0.5) -> NurbsPatch:
    """Single quadratic patch describing a disc, 3x3 control net.

    With ``radius=0.5`` the net is the tabulated one: corners at
    ``(+-sqrt2/4, +-sqrt2/4)`` with weight 1, edge midpoints at distance
    ``sqrt2/2`` with weight ``sqrt2/2`` and the centre with weight 1.
    """
    s = np.sqrt(2.0)
    c = radius * s / 2.0  # corner coordinate
    e = radius * s  # edge control point distance
    pts = np.array([
        [[-c, c], [-e, 0.0], [-c, -c]],
        [[0.0, e], [0.0, 0.0], [0.0, -e]],
        [[c, c], [e, 0.0], [c, -c]],
    ])
    w = np.array([[1.0, s / 2, 1.0], [s / 2, 1.0, s / 2], [1.0, s / 2, 1.0]])
    kv = KnotVector(2, [0, 0, 0, 1, 1, 1])
    return NurbsPatch(kv, kv, pts, w)


def make_circle_mesh(radius: float = 0.5, degree: int = 3, nel: int = 13) -> NurbsPatch:
    """Elevate the quadratic disc patch to ``degree`` then refine to ``nel`` spans."""
    patch = make_circle_patch(radius)
    if degree > 2:
        patch = elevate_degree(patch, 0, degree - 2)
        patch = elevate_degree(patch, 1, degree - 2)
    return refine_uniform(patch, nel)
