"""Run benchmark cases through the full pipeline."""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field, replace

import numpy as np

from ..assembly import Stabilization, apply_boundary, assemble_system, shear_stabilizer, element_size, quadrature_rule
from ..cuf import sinus_w2, taylor
from ..errors import CaseError, IgaCufError
from ..laminate import Lamina, Layup
from ..nurbs import find_span, make_circle_mesh, make_square_patch
from ..solve import flexural_modes, locate, nondimensionalize, recover_displacement, recover_stress, solve_modes, solve_static
from .cases import CaseSpec, MaterialSpec

log = logging.getLogger(__name__)

BC_CONVENTION = {
    "simply_supported": "x=0,a: v_tau=w_tau=0; y=0,a: u_tau=w_tau=0 (all tau)",
    "clamped": "all fields fixed on boundary control points",
}
INTERFACE_RULE = "ply nearer the midplane"


@dataclass
class QuantityResult:
    name: str
    kind: str
    value: float
    reference: float | None
    citation: str
    tolerance: float | None = None

    @property
    def deviation(self) -> float | None:
        if self.reference is None:
            return None
        return abs(self.value - self.reference) / abs(self.reference)


@dataclass
class CaseResult:
    spec: CaseSpec
    quantities: list[QuantityResult]
    runtime: float
    metadata: dict = field(default_factory=dict)

    @property
    def name(self) -> str:
        return self.spec.name


def make_lamina(m: MaterialSpec) -> Lamina:
    return Lamina.transversely_isotropic(m.E1, m.E2, m.G12, m.G13, m.G23, m.nu12,
                                         E3=m.E3, nu13=m.nu13, nu23=m.nu23, rho=m.rho)


def make_expansion(name: str, h: float):
    if name == "sinus-w2":
        return sinus_w2(h)
    if name.startswith("esl-"):
        return taylor(h, int(name.split("-", 1)[1]))
    raise CaseError(f"unknown theory {name!r}")


def make_patch(spec: CaseSpec):
    if spec.geometry == "square":
        return make_square_patch(spec.size, spec.degree, spec.mesh)
    return make_circle_mesh(spec.size, spec.degree, spec.mesh)


def _physical_point(spec: CaseSpec, frac):
    h = spec.thickness
    return frac[0] * spec.size, frac[1] * spec.size, frac[2] * h


def _local_shear_factor(spec: CaseSpec, patch, x: float, y: float) -> float:
    if not spec.stabilization:
        return 1.0
    xi, eta = locate(patch, x, y)
    su, sv = find_span(patch.knot_u, xi), find_span(patch.knot_v, eta)
    eq = next(e for e in quadrature_rule(patch, 1, 1) if e.span_u == su and e.span_v == sv)
    return shear_stabilizer(spec.thickness, element_size(patch, eq), spec.alpha)


def _frequency_length(spec: CaseSpec) -> float:
    if spec.frequency_length == "side":
        return spec.size
    if spec.frequency_length == "radius":
        return spec.size
    if spec.frequency_length == "diameter":
        return 2.0 * spec.size
    raise CaseError(f"unknown frequency length {spec.frequency_length!r}")


def apply_overrides(spec: CaseSpec, mesh=None, degree=None, alpha=None, stabilization=None) -> CaseSpec:
    changes = {}
    if mesh is not None:
        changes["mesh"] = mesh
    if degree is not None:
        changes["degree"] = degree
    if alpha is not None:
        changes["alpha"] = alpha
    if stabilization is not None:
        changes["stabilization"] = stabilization
    return replace(spec, **changes) if changes else spec


def run_case(spec: CaseSpec) -> CaseResult:
    """Geometry, material, expansion, assembly, solve and post-processing for one case."""
    start = time.perf_counter()
    try:
        result = _run(spec)
    except IgaCufError as exc:
        raise type(exc)(f"case {spec.name}: {exc}") from exc
    result.runtime = time.perf_counter() - start
    log.info("%s finished in %.2f s", spec.name, result.runtime)
    return result


def _run(spec: CaseSpec) -> CaseResult:
    h = spec.thickness
    lamina = make_lamina(spec.material)
    layup = Layup.equal(lamina, np.radians(spec.angles_deg), h)
    expansion = make_expansion(spec.theory, h)
    patch = make_patch(spec)
    stab = Stabilization(spec.stabilization, spec.alpha)
    a = spec.size
    P0 = spec.P0 if spec.analysis == "static" else 0.0
    system = assemble_system(patch, layup, expansion, stab, P0=P0, a=a, load=spec.load)
    system = apply_boundary(system, spec.boundary, patch)
    E2 = spec.material.E2
    meta = {
        "boundary": spec.boundary,
        "bc_convention": BC_CONVENTION.get(spec.boundary, spec.boundary),
        "stabilization": spec.stabilization,
        "alpha": spec.alpha,
        "theory": spec.theory,
        "degree": spec.degree,
        "mesh": f"{spec.mesh}x{spec.mesh}",
        "free_dofs": int(system.free.size),
        "completed_constants": spec.material.completed(),
    }
    quantities = []
    if spec.analysis == "static":
        res = solve_static(system)
        meta["residual"] = res.residual
        meta["interface_rule"] = INTERFACE_RULE
        for q in spec.quantities:
            x, y, z = _physical_point(spec, q.point)
            if q.kind == "w":
                raw = recover_displacement(res.u, patch, expansion, x, y, z)[2]
            else:
                idx = {"sxx": 0, "syy": 1, "txz": 3}[q.kind]
                f = _local_shear_factor(spec, patch, x, y)
                raw = recover_stress(res.u, patch, layup, expansion, x, y, z, f)[idx]
                k = layup.layer_at(z)
                zk = layup.interfaces
                on_interface = np.any(np.isclose(zk[1:-1], z, rtol=0, atol=1e-12 * h))
                if on_interface:
                    other = k + 1 if z >= 0 else k - 1
                    other = min(max(other, 0), layup.n_layers - 1)
                    if other != k:
                        alt = recover_stress(res.u, patch, layup, expansion, x, y, z, f, layer=other)[idx]
                        meta[f"{q.name}_other_ply"] = nondimensionalize(alt, q.kind, a, h, E2, P0=spec.P0)
                meta[f"{q.name}_ply"] = k
            value = nondimensionalize(raw, q.kind, a, h, E2, P0=spec.P0)
            quantities.append(QuantityResult(q.name, q.kind, value, q.reference, q.citation, q.tolerance))
    else:
        count = max(spec.modes, max((q.mode for q in spec.quantities), default=0) + 1)
        modal = solve_modes(system, min(count * 2, system.free.size))
        flex = flexural_modes(modal)
        meta["flexural_mode_indices"] = flex[:count].tolist()
        length = _frequency_length(spec)
        meta["frequency_length"] = spec.frequency_length
        rho = spec.material.rho
        for q in spec.quantities:
            if q.mode >= flex.size:
                raise CaseError(f"only {flex.size} flexural modes found; increase 'modes'")
            omega = float(np.sqrt(modal.omega2[flex[q.mode]]))
            value = nondimensionalize(omega, "omega", length, h, E2, rho=rho)
            if spec.geometry == "circle":
                for label, L in (("radius", spec.size), ("diameter", 2 * spec.size)):
                    meta[f"{q.name}_{label}"] = nondimensionalize(omega, "omega", L, h, E2, rho=rho)
            quantities.append(QuantityResult(q.name, q.kind, value, q.reference, q.citation, q.tolerance))
    return CaseResult(spec, quantities, 0.0, meta)
