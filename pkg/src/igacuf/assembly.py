"""Global stiffness, mass and load assembly over a NURBS patch."""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
import scipy.sparse as sps

from .cuf import LaminateNuclei, ThicknessExpansion, laminate_nuclei
from .errors import MeshError
from .laminate import Layup
from .nurbs import BasisEval, NurbsPatch, _basis_ders, rational_basis, surface_point

BOUNDARY_KINDS = ("simply_supported", "clamped", "free")


@dataclass(frozen=True)
class Stabilization:
    """Transverse-shear scaling ``h^2 / (h^2 + alpha^2 l^2)``."""

    enabled: bool = True
    alpha: float = 0.1


def shear_stabilizer(h: float, ell: float, alpha: float) -> float:
    """Shear-locking factor in ``(0, 1]`` for thickness ``h`` and element size ``ell``."""
    if h <= 0 or ell <= 0:
        raise ValueError(f"h and ell must be positive, got h={h}, ell={ell}")
    if alpha < 0:
        raise ValueError(f"alpha must be non-negative, got {alpha}")
    return h * h / (h * h + alpha * alpha * ell * ell)


@dataclass(frozen=True, eq=False)
class ElementQuadrature:
    """Gauss points of one element in parametric space.

    ``weights`` include the parametric span Jacobian but not the geometric one.
    """

    span_u: int
    span_v: int
    bounds: tuple[float, float, float, float]
    xi: np.ndarray
    eta: np.ndarray
    weights: np.ndarray
    shape: tuple[int, int]


def _gauss(n: int, lo: float, hi: float) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(n)
    half = 0.5 * (hi - lo)
    return lo + half * (x + 1.0), half * w


def quadrature_rule(patch: NurbsPatch, n_u: int | None = None, n_v: int | None = None) -> list[ElementQuadrature]:
    """``(p+1) x (q+1)`` Gauss-Legendre points on every nonempty element."""
    p, q = patch.degrees
    n_u = p + 1 if n_u is None else n_u
    n_v = q + 1 if n_v is None else n_v
    rule = []
    for (su, u0, u1), (sv, v0, v1) in patch.elements():
        xu, wu = _gauss(n_u, u0, u1)
        xv, wv = _gauss(n_v, v0, v1)
        XI, ETA = np.meshgrid(xu, xv, indexing="ij")
        rule.append(ElementQuadrature(su, sv, (u0, u1, v0, v1), XI.ravel(), ETA.ravel(),
                                      np.outer(wu, wv).ravel(), (n_u, n_v)))
    return rule


@dataclass(frozen=True, eq=False)
class ElementBasis:
    """Rational basis of one element at its quadrature points.

    ``G[q, d, i]`` holds value (d=0), d/dx (d=1) and d/dy (d=2) of local
    function ``i``; ``dA`` is the physical area weight of each point.
    """

    indices: np.ndarray
    G: np.ndarray
    dA: np.ndarray
    points: np.ndarray


def _univariate(kv, span: int, params: np.ndarray) -> list[BasisEval]:
    p = kv.degree
    return [BasisEval(span - p, *_basis_ders(kv.knots, p, span, float(x))) for x in params]


def element_basis(patch: NurbsPatch, eq: ElementQuadrature) -> ElementBasis:
    nu, nv = eq.shape
    bu = _univariate(patch.knot_u, eq.span_u, eq.xi.reshape(nu, nv)[:, 0])
    bv = _univariate(patch.knot_v, eq.span_v, eq.eta.reshape(nu, nv)[0, :])
    P = patch.control_points.reshape(-1, 2)
    G, dA, pts = [], [], []
    indices = None
    for a in range(nu):
        for b in range(nv):
            idx, R, dR = rational_basis(patch, bu[a], bv[b])
            indices = idx
            X = P[idx]
            J = dR @ X  # J[d, k] = d x_k / d param_d
            det = abs(np.linalg.det(J))
            if not det > 1e-14 * max(np.abs(J).max() ** 2, 1e-300):
                raise MeshError(f"singular Jacobian {det:.3e} in element "
                                f"({eq.span_u}, {eq.span_v})")
            dRdx = np.linalg.solve(J, dR)
            G.append(np.vstack([R, dRdx]))
            dA.append(det)
            pts.append(R @ X)
    return ElementBasis(indices, np.array(G), np.array(dA) * eq.weights, np.array(pts))


def element_size(patch: NurbsPatch, eq: ElementQuadrature) -> float:
    """Longest straight edge between the element's four physical corners."""
    u0, u1, v0, v1 = eq.bounds
    c = [surface_point(patch, u, v).point for u, v in ((u0, v0), (u1, v0), (u1, v1), (u0, v1))]
    return max(np.linalg.norm(c[k] - c[(k + 1) % 4]) for k in range(4))


@dataclass(frozen=True, eq=False)
class DofMap:
    """Global numbering ``dof = control_point * n_fields + field``."""

    n_control: int
    expansion: ThicknessExpansion
    constrained: frozenset = field(default_factory=frozenset)

    @property
    def n_fields(self) -> int:
        return self.expansion.n_fields

    @property
    def n_dofs(self) -> int:
        return self.n_control * self.n_fields

    def dof(self, cp: int, component: int, tau: int) -> int:
        return cp * self.n_fields + self.expansion.field_index(component, tau)

    def component_dofs(self, cps, components) -> np.ndarray:
        cps = np.asarray(cps, dtype=int)
        comp = self.expansion.component_of()
        fields = np.flatnonzero(np.isin(comp, list(components)))
        return (cps[:, None] * self.n_fields + fields[None, :]).ravel()

    @property
    def free(self) -> np.ndarray:
        mask = np.ones(self.n_dofs, dtype=bool)
        mask[list(self.constrained)] = False
        return np.flatnonzero(mask)


@dataclass(frozen=True, eq=False)
class GlobalSystem:
    """Assembled matrices before constraint elimination."""

    K: sps.csr_matrix
    M: sps.csr_matrix
    P: np.ndarray
    dof_map: DofMap
    boundary: str = "free"

    @property
    def free(self) -> np.ndarray:
        return self.dof_map.free

    def reduced(self):
        """``(K_ff, M_ff, P_f)`` after eliminating constrained rows and columns."""
        f = self.free
        return self.K[f][:, f], self.M[f][:, f], self.P[f]

    def expand(self, u_free: np.ndarray) -> np.ndarray:
        u = np.zeros(self.dof_map.n_dofs) if u_free.ndim == 1 else np.zeros((self.dof_map.n_dofs, u_free.shape[1]))
        u[self.free] = u_free
        return u


def _scatter(blocks, dofs, n):
    rows = np.concatenate([np.repeat(d, d.size) for d in dofs])
    cols = np.concatenate([np.tile(d, d.size) for d in dofs])
    vals = np.concatenate([b.ravel() for b in blocks])
    return sps.coo_matrix((vals, (rows, cols)), shape=(n, n)).tocsr()


def _element_dofs(eb: ElementBasis, nf: int) -> np.ndarray:
    return (eb.indices[:, None] * nf + np.arange(nf)[None, :]).ravel()


def _basis_products(eb: ElementBasis) -> np.ndarray:
    return np.einsum("q,qai,qbj->abij", eb.dA, eb.G, eb.G)


def element_stiffness(nuclei: LaminateNuclei, eb: ElementBasis, shear_factor: float = 1.0) -> np.ndarray:
    N = nuclei.stiffness(shear_factor)
    A = _basis_products(eb)
    nloc, nf = eb.indices.size, N.shape[0]
    Ke = np.einsum("fgab,abij->ifjg", N, A).reshape(nloc * nf, nloc * nf)
    return 0.5 * (Ke + Ke.T)


def element_mass(nuclei: LaminateNuclei, eb: ElementBasis) -> np.ndarray:
    A0 = np.einsum("q,qi,qj->ij", eb.dA, eb.G[:, 0], eb.G[:, 0])
    nloc, nf = eb.indices.size, nuclei.mass.shape[0]
    Me = np.einsum("fg,ij->ifjg", nuclei.mass, A0).reshape(nloc * nf, nloc * nf)
    return 0.5 * (Me + Me.T)


def element_shear_factors(patch: NurbsPatch, h: float, stab: Stabilization,
                          rule: list[ElementQuadrature] | None = None) -> np.ndarray:
    rule = quadrature_rule(patch) if rule is None else rule
    if not stab.enabled:
        return np.ones(len(rule))
    return np.array([shear_stabilizer(h, element_size(patch, eq), stab.alpha) for eq in rule])


def assemble_stiffness(patch: NurbsPatch, layup: Layup, expansion: ThicknessExpansion,
                       stabilization: Stabilization = Stabilization(),
                       nuclei: LaminateNuclei | None = None) -> sps.csr_matrix:
    """Global stiffness from the laminate nuclei, one element at a time."""
    nuclei = laminate_nuclei(layup, expansion) if nuclei is None else nuclei
    rule = quadrature_rule(patch)
    factors = element_shear_factors(patch, layup.thickness, stabilization, rule)
    nf = expansion.n_fields
    blocks, dofs = [], []
    for eq, f in zip(rule, factors):
        eb = element_basis(patch, eq)
        blocks.append(element_stiffness(nuclei, eb, f))
        dofs.append(_element_dofs(eb, nf))
    K = _scatter(blocks, dofs, patch.n_control * nf)
    return ((K + K.T) * 0.5).tocsr()


def assemble_mass(patch: NurbsPatch, layup: Layup, expansion: ThicknessExpansion,
                  nuclei: LaminateNuclei | None = None) -> sps.csr_matrix:
    nuclei = laminate_nuclei(layup, expansion) if nuclei is None else nuclei
    nf = expansion.n_fields
    blocks, dofs = [], []
    for eq in quadrature_rule(patch):
        eb = element_basis(patch, eq)
        blocks.append(element_mass(nuclei, eb))
        dofs.append(_element_dofs(eb, nf))
    M = _scatter(blocks, dofs, patch.n_control * nf)
    return ((M + M.T) * 0.5).tocsr()


def pressure_field(kind: str, P0: float, a: float):
    if kind == "sinusoidal":
        return lambda x, y: P0 * np.sin(np.pi * x / a) * np.sin(np.pi * y / a)
    if kind == "uniform":
        return lambda x, y: np.full(np.shape(x), float(P0))
    raise ValueError(f"unknown load kind {kind!r}")


def consistent_load(patch: NurbsPatch, expansion: ThicknessExpansion, P0: float, a: float,
                    kind: str = "sinusoidal", z: float = 0.0, n_extra: int = 2) -> np.ndarray:
    """Work-equivalent nodal loads of a transverse pressure acting at height ``z``.

    The pressure does work on ``w(x, y, z) = sum_tau F_tau^w(z) w_tau``; at the
    midplane only ``w_0`` is loaded for the usual expansions. ``n_extra``
    adds Gauss points per direction beyond ``p + 1`` because the
    sinusoidal pressure is not polynomial.
    """
    p, q = patch.degrees
    load = pressure_field(kind, P0, a)
    nf = expansion.n_fields
    F, _ = expansion.evaluate(np.array([z]))
    wfields = np.flatnonzero(expansion.component_of() == 2)
    P = np.zeros(patch.n_control * nf)
    for eq in quadrature_rule(patch, p + 1 + n_extra, q + 1 + n_extra):
        eb = element_basis(patch, eq)
        px = load(eb.points[:, 0], eb.points[:, 1])
        nodal = (eb.G[:, 0] * (px * eb.dA)[:, None]).sum(axis=0)
        for f in wfields:
            P[eb.indices * nf + f] += F[f, 0] * nodal
    return P


def boundary_dofs(patch: NurbsPatch, dof_map: DofMap, kind: str) -> frozenset:
    """Constrained DOFs for a boundary condition family.

    ``simply_supported``: on the ``xi`` edges (x = 0, a for the square) the
    v and w families are fixed, on the ``eta`` edges the u and w families.
    ``clamped``: every family on every boundary control point.
    """
    edges = patch.boundary_indices()
    if kind == "simply_supported":
        fixed = [dof_map.component_dofs(edges[e], (1, 2)) for e in ("xi0", "xi1")]
        fixed += [dof_map.component_dofs(edges[e], (0, 2)) for e in ("eta0", "eta1")]
    elif kind == "clamped":
        fixed = [dof_map.component_dofs(edges[e], (0, 1, 2)) for e in edges]
    elif kind == "free":
        fixed = []
    else:
        raise ValueError(f"unknown boundary kind {kind!r}; expected one of {BOUNDARY_KINDS}")
    return frozenset(int(d) for arr in fixed for d in arr)


def apply_boundary(system: GlobalSystem, kind: str, patch: NurbsPatch) -> GlobalSystem:
    """Attach the constrained DOF set; elimination happens in :meth:`GlobalSystem.reduced`."""
    constrained = boundary_dofs(patch, system.dof_map, kind)
    return replace(system, dof_map=replace(system.dof_map, constrained=constrained), boundary=kind)


def assemble_system(patch: NurbsPatch, layup: Layup, expansion: ThicknessExpansion,
                    stabilization: Stabilization = Stabilization(), P0: float = 0.0,
                    a: float = 1.0, load: str = "sinusoidal") -> GlobalSystem:
    nuclei = laminate_nuclei(layup, expansion)
    K = assemble_stiffness(patch, layup, expansion, stabilization, nuclei)
    M = assemble_mass(patch, layup, expansion, nuclei)
    P = consistent_load(patch, expansion, P0, a, load) if P0 else np.zeros(K.shape[0])
    return GlobalSystem(K, M, P, DofMap(patch.n_control, expansion))
