"""Static and modal solvers plus displacement/stress recovery."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sps
import scipy.sparse.linalg as spla

from .assembly import GlobalSystem
from .cuf import STRAIN_TERMS, ThicknessExpansion
from .errors import DomainError, SingularSystemError
from .laminate import Layup
from .nurbs import NurbsPatch, surface_point

DENSE_LIMIT = 2000


def _dense(A) -> np.ndarray:
    return A.toarray() if sps.issparse(A) else np.asarray(A)


@dataclass(frozen=True, eq=False)
class StaticResult:
    u: np.ndarray
    system: GlobalSystem
    residual: float


@dataclass(frozen=True, eq=False)
class ModalResult:
    """Ascending eigenvalues ``omega^2`` with mass-normalized modes (columns)."""

    omega2: np.ndarray
    modes: np.ndarray
    system: GlobalSystem

    @property
    def omega(self) -> np.ndarray:
        return np.sqrt(self.omega2)


def solve_static(system: GlobalSystem) -> StaticResult:
    """Solve ``K u = P`` on the free DOFs by symmetric factorization."""
    K, _, P = system.reduced()
    if not np.any(P):
        return StaticResult(np.zeros(system.dof_map.n_dofs), system, 0.0)
    if K.shape[0] <= DENSE_LIMIT:
        Kd = _dense(K)
        try:
            c = sla.cho_factor(Kd)
        except sla.LinAlgError:
            w = sla.eigvalsh(Kd, subset_by_index=[0, min(5, Kd.shape[0] - 1)])
            raise SingularSystemError(
                f"stiffness not positive definite; smallest eigenvalues {w}") from None
        uf = sla.cho_solve(c, P)
    else:
        uf = spla.spsolve(K.tocsc(), P)
        if not np.all(np.isfinite(uf)):
            raise SingularSystemError("sparse factorization produced non-finite values")
    residual = float(np.linalg.norm(K @ uf - P) / np.linalg.norm(P))
    return StaticResult(system.expand(uf), system, residual)


def solve_modes(system: GlobalSystem, count: int = 10) -> ModalResult:
    """Smallest ``count`` eigenpairs of ``K phi = omega^2 M phi``."""
    K, M, _ = system.reduced()
    n = K.shape[0]
    count = min(count, n)
    if n <= DENSE_LIMIT:
        Kd, Md = _dense(K), _dense(M)
        try:
            w, V = sla.eigh(Kd, Md, subset_by_index=[0, count - 1])
        except sla.LinAlgError as exc:
            raise SingularSystemError(f"mass matrix not positive definite: {exc}") from None
    else:
        w, V = spla.eigsh(K.tocsc(), k=count, M=M.tocsc(), sigma=0.0, which="LM")
        order = np.argsort(w)
        w, V = w[order], V[:, order]
        V = V / np.sqrt(np.einsum("ik,ik->k", V, M @ V))
    return ModalResult(w, system.expand(V), system)


def transverse_fraction(modal: ModalResult, component: int = 2, tau: int = 0) -> np.ndarray:
    """Share of each mode's kinetic energy carried by one field family.

    With the default arguments this is the midplane transverse translation,
    used to tell flexural modes from in-plane and thickness modes.
    """
    system = modal.system
    dm = system.dof_map
    dofs = np.arange(dm.n_control) * dm.n_fields + dm.expansion.field_index(component, tau)
    M = system.M
    V = modal.modes
    total = np.einsum("ik,ik->k", V, M @ V)
    Vw = V[dofs]
    part = np.einsum("ik,ik->k", Vw, M[dofs][:, dofs] @ Vw)
    return part / total


def flexural_modes(modal: ModalResult, threshold: float = 0.5) -> np.ndarray:
    """Indices of modes dominated by midplane transverse motion."""
    return np.flatnonzero(transverse_fraction(modal) > threshold)


def locate(patch: NurbsPatch, x: float, y: float, tol: float = 1e-13, max_iter: int = 50) -> tuple[float, float]:
    """Parameters ``(xi, eta)`` of a physical point, by Newton iteration."""
    target = np.array([x, y], dtype=float)
    (u0, u1), (v0, v1) = patch.knot_u.domain, patch.knot_v.domain
    grid = np.linspace(0.0, 1.0, 9)
    best = min(((u0 + a * (u1 - u0), v0 + b * (v1 - v0)) for a in grid for b in grid),
               key=lambda uv: np.linalg.norm(surface_point(patch, *uv).point - target))
    uv = np.array(best)
    scale = max(np.ptp(patch.control_points.reshape(-1, 2), axis=0).max(), 1e-300)
    for _ in range(max_iter):
        ev = surface_point(patch, *uv)
        r = ev.point - target
        if np.linalg.norm(r) <= tol * scale:
            return float(uv[0]), float(uv[1])
        try:
            step = np.linalg.solve(ev.dpoint, r)
        except np.linalg.LinAlgError:
            break
        uv = np.clip(uv - step, [u0, v0], [u1, v1])
    ev = surface_point(patch, *uv)
    if np.linalg.norm(ev.point - target) > 1e-9 * scale:
        raise DomainError(f"point ({x}, {y}) is outside the patch")
    return float(uv[0]), float(uv[1])


def _in_plane_fields(patch: NurbsPatch, u: np.ndarray, nf: int, x: float, y: float):
    # field values and physical derivatives at (x, y): arrays (3, nf)
    xi, eta = locate(patch, x, y)
    ev = surface_point(patch, xi, eta)
    dRdx = np.linalg.solve(ev.dpoint.T, ev.dR)
    G = np.vstack([ev.R, dRdx])
    U = u.reshape(-1, nf)[ev.indices]
    return G @ U


def recover_displacement(u: np.ndarray, patch: NurbsPatch, expansion: ThicknessExpansion,
                         x: float, y: float, z: float) -> np.ndarray:
    """``(u, v, w)`` at a point of the plate."""
    h = expansion.thickness
    if abs(z) > h / 2 * (1 + 1e-12):
        raise DomainError(f"z={z} outside [-h/2, h/2]")
    fields = _in_plane_fields(patch, u, expansion.n_fields, x, y)[0]
    F, _ = expansion.evaluate(np.array([z]))
    comp = expansion.component_of()
    return np.array([np.sum(F[comp == c, 0] * fields[comp == c]) for c in range(3)])


def strain_at(u: np.ndarray, patch: NurbsPatch, expansion: ThicknessExpansion,
              x: float, y: float, z: float) -> np.ndarray:
    """Engineering strains ``(xx, yy, xy, xz, yz, zz)`` at a point."""
    G = _in_plane_fields(patch, u, expansion.n_fields, x, y)
    F, dF = expansion.evaluate(np.array([z]))
    thick = (F[:, 0], dF[:, 0])
    comp = expansion.component_of()
    eps = np.zeros(6)
    for j, c, d, a in STRAIN_TERMS:
        sel = comp == c
        eps[j] += np.sum(thick[a][sel] * G[d, sel])
    return eps


def recover_stress(u: np.ndarray, patch: NurbsPatch, layup: Layup, expansion: ThicknessExpansion,
                   x: float, y: float, z: float, shear_factor: float = 1.0,
                   layer: int | None = None) -> np.ndarray:
    """Stresses ``(sxx, syy, txy, txz, tyz, szz)`` from the ply's constitutive law.

    ``layer`` overrides the ply chosen by :meth:`Layup.layer_at`.
    ``shear_factor`` scales the transverse shear moduli as in assembly.
    """
    k = layup.layer_at(z) if layer is None else layer
    C = layup.blocks(k).with_shear_factor(shear_factor).full()
    return C @ strain_at(u, patch, expansion, x, y, z)


NONDIM_KINDS = ("w", "sxx", "syy", "txz", "omega")


def _scale(kind: str, a: float, h: float, E2: float, P0: float | None, rho: float | None) -> float:
    if kind == "w":
        return 100.0 * h ** 3 * E2 / (P0 * a ** 4)
    if kind in ("sxx", "syy"):
        return h * h / (P0 * a * a)
    if kind == "txz":
        return h / (P0 * a)
    if kind == "omega":
        return a * a / h * np.sqrt(rho / E2)
    raise ValueError(f"unknown quantity kind {kind!r}; expected one of {NONDIM_KINDS}")


def nondimensionalize(value: float, kind: str, a: float, h: float, E2: float,
                      P0: float | None = None, rho: float | None = None) -> float:
    """Scale a raw deflection, stress or circular frequency to its benchmark form."""
    return value * _scale(kind, a, h, E2, P0, rho)


def dimensionalize(value: float, kind: str, a: float, h: float, E2: float,
                   P0: float | None = None, rho: float | None = None) -> float:
    return value / _scale(kind, a, h, E2, P0, rho)
