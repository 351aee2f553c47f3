"""Orthotropic laminae, layups and rotated 3D constitutive blocks.

Strain and stress components are ordered ``(xx, yy, xy | xz, yz, zz)``
throughout, so the in-plane block is ``C[:3, :3]`` and the transverse block
is ``C[3:, 3:]``.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .errors import MaterialError

# positions of the classical contracted indices within the ordering above
VOIGT = {"11": (0, 0), "12": (0, 1), "16": (0, 2), "13": (0, 5),
         "22": (1, 1), "26": (1, 2), "23": (1, 5),
         "66": (2, 2), "36": (2, 5),
         "55": (3, 3), "45": (3, 4), "44": (4, 4),
         "33": (5, 5)}

SHEAR = slice(3, 5)


@dataclass(frozen=True)
class Lamina:
    """Orthotropic material in its principal axes (1 = fibre)."""

    E1: float
    E2: float
    E3: float
    G12: float
    G13: float
    G23: float
    nu12: float
    nu13: float
    nu23: float
    rho: float = 1.0

    @classmethod
    def transversely_isotropic(cls, E1, E2, G12, G13, G23, nu12,
                               E3=None, nu13=None, nu23=None, rho=1.0) -> "Lamina":
        """Fill unlisted constants with ``E3 = E2`` and ``nu13 = nu23 = nu12``."""
        return cls(E1, E2, E2 if E3 is None else E3, G12, G13, G23, nu12,
                   nu12 if nu13 is None else nu13, nu12 if nu23 is None else nu23, rho)

    def as_dict(self) -> dict:
        return asdict(self)


def compliance_3d(lam: Lamina) -> np.ndarray:
    S = np.zeros((6, 6))
    S[0, 0] = 1.0 / lam.E1
    S[1, 1] = 1.0 / lam.E2
    S[5, 5] = 1.0 / lam.E3
    S[0, 1] = S[1, 0] = -lam.nu12 / lam.E1
    S[0, 5] = S[5, 0] = -lam.nu13 / lam.E1
    S[1, 5] = S[5, 1] = -lam.nu23 / lam.E2
    S[2, 2] = 1.0 / lam.G12
    S[3, 3] = 1.0 / lam.G13
    S[4, 4] = 1.0 / lam.G23
    return S


def stiffness_3d(lam: Lamina) -> np.ndarray:
    """6x6 stiffness in material axes obtained by inverting the compliance."""
    moduli = (lam.E1, lam.E2, lam.E3, lam.G12, lam.G13, lam.G23)
    if min(moduli) <= 0 or lam.rho <= 0:
        raise MaterialError(f"moduli and density must be positive: {lam}")
    S = compliance_3d(lam)
    try:
        np.linalg.cholesky(S)
    except np.linalg.LinAlgError:
        raise MaterialError(
            f"compliance not positive definite for nu12={lam.nu12}, nu13={lam.nu13}, "
            f"nu23={lam.nu23} with E1={lam.E1}, E2={lam.E2}, E3={lam.E3}") from None
    C = np.linalg.inv(S)
    return 0.5 * (C + C.T)


def strain_rotation(theta: float) -> np.ndarray:
    """Matrix mapping laminate-axis engineering strains to material axes.

    ``theta`` is the angle from the laminate x axis to the fibre direction.
    """
    m, n = np.cos(theta), np.sin(theta)
    T = np.zeros((6, 6))
    T[0, :3] = [m * m, n * n, m * n]
    T[1, :3] = [n * n, m * m, -m * n]
    T[2, :3] = [-2 * m * n, 2 * m * n, m * m - n * n]
    T[3, 3:5] = [m, n]
    T[4, 3:5] = [-n, m]
    T[5, 5] = 1.0
    return T


@dataclass(frozen=True, eq=False)
class ConstitutiveBlocks:
    """Laminate-axis stiffness split into in-plane (p) and normal (n) parts."""

    Cpp: np.ndarray
    Cpn: np.ndarray
    Cnp: np.ndarray
    Cnn: np.ndarray

    @classmethod
    def from_full(cls, C: np.ndarray) -> "ConstitutiveBlocks":
        return cls(C[:3, :3].copy(), C[:3, 3:].copy(), C[3:, :3].copy(), C[3:, 3:].copy())

    def full(self) -> np.ndarray:
        return np.block([[self.Cpp, self.Cpn], [self.Cnp, self.Cnn]])

    def with_shear_factor(self, factor: float) -> "ConstitutiveBlocks":
        """Scale the transverse shear sub-block (C55, C45, C44)."""
        Cnn = self.Cnn.copy()
        Cnn[:2, :2] *= factor
        return ConstitutiveBlocks(self.Cpp, self.Cpn, self.Cnp, Cnn)


def rotate_to_laminate(C: np.ndarray, theta: float) -> ConstitutiveBlocks:
    """Rotate a material-axis stiffness by ``theta`` about z and partition it."""
    T = strain_rotation(theta)
    Cr = T.T @ C @ T
    Cr = 0.5 * (Cr + Cr.T)
    return ConstitutiveBlocks.from_full(Cr)


@dataclass(frozen=True)
class Ply:
    lamina: Lamina
    angle: float  # radians
    fraction: float


@dataclass(frozen=True)
class Layup:
    """Ordered plies from bottom (``z = -h/2``) to top (``z = +h/2``)."""

    plies: tuple[Ply, ...]
    thickness: float

    def __post_init__(self):
        object.__setattr__(self, "plies", tuple(self.plies))
        if self.thickness <= 0:
            raise ValueError(f"thickness must be positive, got {self.thickness}")
        if not self.plies:
            raise ValueError("layup needs at least one ply")
        total = sum(p.fraction for p in self.plies)
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"ply thickness fractions sum to {total}, expected 1")
        if any(p.fraction <= 0 for p in self.plies):
            raise ValueError("ply thickness fractions must be positive")

    @classmethod
    def equal(cls, lamina: Lamina, angles, thickness: float) -> "Layup":
        """Equally thick plies of one material at the given angles (radians)."""
        angles = list(angles)
        frac = [1.0 / len(angles)] * len(angles)
        frac[-1] = 1.0 - sum(frac[:-1])
        return cls(tuple(Ply(lamina, float(t), f) for t, f in zip(angles, frac)), thickness)

    @property
    def n_layers(self) -> int:
        return len(self.plies)

    @property
    def interfaces(self) -> np.ndarray:
        h = self.thickness
        z = -h / 2 + h * np.concatenate([[0.0], np.cumsum([p.fraction for p in self.plies])])
        z[-1] = h / 2
        return z

    def blocks(self, k: int) -> ConstitutiveBlocks:
        ply = self.plies[k]
        return rotate_to_laminate(stiffness_3d(ply.lamina), ply.angle)

    def all_blocks(self) -> list[ConstitutiveBlocks]:
        return [self.blocks(k) for k in range(self.n_layers)]

    def layer_at(self, z: float, tol: float = 1e-12) -> int:
        """Index of the ply containing ``z``.

        On an interface the ply nearer the midplane is chosen; exactly at
        ``z = 0`` the ply below wins.
        """
        zk = self.interfaces
        h = self.thickness
        if z < zk[0] - tol * h or z > zk[-1] + tol * h:
            raise ValueError(f"z={z} outside laminate [{zk[0]}, {zk[-1]}]")
        for k in range(1, self.n_layers):
            if abs(z - zk[k]) <= tol * h:
                return k - 1 if zk[k] >= 0 else k
        k = int(np.searchsorted(zk, z, side="right")) - 1
        return min(max(k, 0), self.n_layers - 1)

    def densities(self) -> np.ndarray:
        return np.array([p.lamina.rho for p in self.plies])
