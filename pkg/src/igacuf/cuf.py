"""Thickness expansions, thickness integrals and fundamental nuclei.

Each displacement component ``c`` in ``(u, v, w)`` is written as
``sum_tau F_tau^c(z) * c_tau(x, y)`` with its own list of thickness
functions. The unknown fields at a control point are the pairs
``(c, tau)``; their flat ordering ("field index") is component-major.

Derivative codes used by the nuclei: ``0`` is the function value, ``1`` is
``d/dx`` and ``2`` is ``d/dy``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .laminate import ConstitutiveBlocks, Layup

COMPONENTS = ("u", "v", "w")
VALUE, DX, DY = 0, 1, 2

# (strain row, component, in-plane derivative, uses dF/dz) for
# strains ordered (xx, yy, xy, xz, yz, zz)
STRAIN_TERMS = (
    (0, 0, DX, 0),
    (1, 1, DY, 0),
    (2, 0, DY, 0),
    (2, 1, DX, 0),
    (3, 0, VALUE, 1),
    (3, 2, DX, 0),
    (4, 1, VALUE, 1),
    (4, 2, DY, 0),
    (5, 2, VALUE, 1),
)

ThicknessFn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class ThicknessExpansion:
    """Per-component thickness functions and their z-derivatives.

    ``functions[c]`` is a tuple of ``(F, dF)`` callables for component ``c``
    (0 = u, 1 = v, 2 = w). ``labels`` name each term for reporting.
    """

    thickness: float
    functions: tuple[tuple[tuple[ThicknessFn, ThicknessFn], ...], ...]
    labels: tuple[tuple[str, ...], ...]
    name: str = "custom"

    @property
    def fields(self) -> list[tuple[int, int]]:
        return [(c, t) for c in range(3) for t in range(len(self.functions[c]))]

    @property
    def n_fields(self) -> int:
        return sum(len(f) for f in self.functions)

    def field_index(self, component: int, tau: int) -> int:
        if not 0 <= component < 3 or not 0 <= tau < len(self.functions[component]):
            raise IndexError(f"no expansion term ({component}, {tau})")
        return sum(len(self.functions[c]) for c in range(component)) + tau

    def evaluate(self, z) -> tuple[np.ndarray, np.ndarray]:
        """Values and z-derivatives of every field's thickness function.

        Returns arrays of shape ``(n_fields,) + np.shape(z)``.
        """
        z = np.asarray(z, dtype=float)
        F = [np.broadcast_to(f(z), z.shape) for c in range(3) for f, _ in self.functions[c]]
        dF = [np.broadcast_to(d(z), z.shape) for c in range(3) for _, d in self.functions[c]]
        return np.array(F, dtype=float), np.array(dF, dtype=float)

    def component_of(self) -> np.ndarray:
        return np.array([c for c, _ in self.fields])


def _const(value):
    return lambda z: np.full(np.shape(z), value, dtype=float)


def sinus_w2(h: float) -> ThicknessExpansion:
    """``u, v ~ {1, z, sin(pi z / h)}`` and ``w ~ {1, z, z^2}``."""
    if h <= 0:
        raise ValueError(f"thickness must be positive, got {h}")
    k = np.pi / h
    inplane = (
        (_const(1.0), _const(0.0)),
        (lambda z: np.asarray(z, dtype=float), _const(1.0)),
        (lambda z: np.sin(k * np.asarray(z)), lambda z: k * np.cos(k * np.asarray(z))),
    )
    transverse = (
        (_const(1.0), _const(0.0)),
        (lambda z: np.asarray(z, dtype=float), _const(1.0)),
        (lambda z: np.asarray(z, dtype=float) ** 2, lambda z: 2.0 * np.asarray(z)),
    )
    ip_labels = ("0", "1", "sin")
    return ThicknessExpansion(h, (inplane, inplane, transverse),
                              (ip_labels, ip_labels, ("0", "1", "2")), "sinus-w2")


def taylor(h: float, order: int) -> ThicknessExpansion:
    """Equivalent single layer Taylor expansion ``{1, z, ..., z^N}`` for all components."""
    terms = tuple((lambda z, n=n: np.asarray(z, dtype=float) ** n,
                   (lambda z, n=n: n * np.asarray(z, dtype=float) ** (n - 1)) if n else _const(0.0))
                  for n in range(order + 1))
    labels = tuple(str(n) for n in range(order + 1))
    return ThicknessExpansion(h, (terms, terms, terms), (labels,) * 3, f"esl-{order}")


@dataclass(frozen=True, eq=False)
class ThicknessIntegralTable:
    """Per-layer integrals of products of thickness functions.

    ``data[k, a, b, f, g]`` is the integral over ply ``k`` of
    ``d^a F_f / dz^a * d^b F_g / dz^b`` where ``f, g`` are field indices.
    """

    data: np.ndarray
    expansion: ThicknessExpansion

    def get(self, k: int, a: int, b: int, comp_r: int, tau_r: int, comp_c: int, tau_c: int) -> float:
        f = self.expansion.field_index(comp_r, tau_r)
        g = self.expansion.field_index(comp_c, tau_c)
        return float(self.data[k, a, b, f, g])

    @property
    def n_layers(self) -> int:
        return self.data.shape[0]


def integrate_thickness(layup: Layup, exp: ThicknessExpansion, n_gauss_z: int = 10) -> ThicknessIntegralTable:
    """Gauss-Legendre integration of all thickness-function products per ply."""
    if n_gauss_z < 4:
        raise ValueError(f"n_gauss_z must be >= 4, got {n_gauss_z}")
    xg, wg = np.polynomial.legendre.leggauss(n_gauss_z)
    zk = layup.interfaces
    nf = exp.n_fields
    data = np.zeros((layup.n_layers, 2, 2, nf, nf))
    for k in range(layup.n_layers):
        half = 0.5 * (zk[k + 1] - zk[k])
        z = 0.5 * (zk[k + 1] + zk[k]) + half * xg
        w = half * wg
        F, dF = exp.evaluate(z)
        both = (F, dF)
        for a in range(2):
            for b in range(2):
                data[k, a, b] = (both[a] * w) @ both[b].T
    return ThicknessIntegralTable(data, exp)


def _layer_nucleus(C: np.ndarray, I: np.ndarray, comp: np.ndarray) -> np.ndarray:
    """Full nucleus of one ply: ``N[f, g, d_test, d_trial]``."""
    nf = comp.size
    N = np.zeros((nf, nf, 3, 3))
    for j1, c1, d1, a in STRAIN_TERMS:
        rows = comp == c1
        for j2, c2, d2, b in STRAIN_TERMS:
            if C[j1, j2] == 0.0:
                continue
            cols = comp == c2
            N[np.ix_(rows, cols, [d1], [d2])] += C[j1, j2] * I[a, b][np.ix_(rows, cols)][..., None, None]
    return N


def stiffness_nucleus(blocks: ConstitutiveBlocks, table: ThicknessIntegralTable, k: int,
                      tau: int, s: int) -> np.ndarray:
    """3x3 nucleus of ply ``k`` for trial term ``tau`` and test term ``s``.

    Returns ``coef[r, c, d_test, d_trial]``: the weak-form coefficient
    multiplying ``D_{d_test} phi_i * D_{d_trial} phi_j`` for test component
    ``r`` (term ``s``) and trial component ``c`` (term ``tau``).
    """
    if not 0 <= k < table.n_layers:
        raise IndexError(f"layer {k} out of range")
    exp = table.expansion
    f = [exp.field_index(r, s) for r in range(3)]
    g = [exp.field_index(c, tau) for c in range(3)]
    N = _layer_nucleus(blocks.full(), table.data[k], exp.component_of())
    return N[np.ix_(f, g)]


def mass_nucleus(rho: float, table: ThicknessIntegralTable, k: int, tau: int, s: int) -> np.ndarray:
    """Diagonal 3x3 inertia nucleus ``rho * int F_s F_tau`` of ply ``k``."""
    if not 0 <= k < table.n_layers:
        raise IndexError(f"layer {k} out of range")
    exp = table.expansion
    out = np.zeros((3, 3))
    for c in range(3):
        out[c, c] = rho * table.data[k, 0, 0, exp.field_index(c, s), exp.field_index(c, tau)]
    return out


@dataclass(frozen=True, eq=False)
class LaminateNuclei:
    """Nuclei summed over all plies, split so the shear factor can vary per element.

    ``stiffness(f)`` returns ``N[f_test, g_trial, d_test, d_trial]``.
    """

    base: np.ndarray
    shear: np.ndarray
    mass: np.ndarray

    def stiffness(self, shear_factor: float = 1.0) -> np.ndarray:
        return self.base + shear_factor * self.shear


def laminate_nuclei(layup: Layup, exp: ThicknessExpansion,
                    table: ThicknessIntegralTable | None = None) -> LaminateNuclei:
    table = integrate_thickness(layup, exp) if table is None else table
    comp = exp.component_of()
    nf = exp.n_fields
    base = np.zeros((nf, nf, 3, 3))
    shear = np.zeros_like(base)
    mass = np.zeros((nf, nf))
    same = comp[:, None] == comp[None, :]
    for k, blocks in enumerate(layup.all_blocks()):
        C = blocks.full()
        Cs = np.zeros_like(C)
        Cs[3:5, 3:5] = C[3:5, 3:5]
        base += _layer_nucleus(C - Cs, table.data[k], comp)
        shear += _layer_nucleus(Cs, table.data[k], comp)
        mass += layup.plies[k].lamina.rho * np.where(same, table.data[k, 0, 0], 0.0)
    return LaminateNuclei(base, shear, mass)
