"""Independent reference implementations used by the test-suite.

Nothing here imports from the package under test: the constitutive law,
the ply rotation, the thickness functions and the element basis are all
coded again from first principles.
"""
from __future__ import annotations

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import comb

# engineering strain order used throughout: xx, yy, xy, xz, yz, zz
_VOIGT_PAIRS = [(0, 0), (1, 1), (0, 1), (0, 2), (1, 2), (2, 2)]


def orthotropic_stiffness(E1, E2, E3, G12, G13, G23, nu12, nu13, nu23):
    """6x6 stiffness in (xx, yy, xy, xz, yz, zz) order by direct inversion of the compliance."""
    S = np.zeros((6, 6))
    S[0, 0], S[1, 1], S[5, 5] = 1 / E1, 1 / E2, 1 / E3
    S[0, 1] = S[1, 0] = -nu12 / E1
    S[0, 5] = S[5, 0] = -nu13 / E1
    S[1, 5] = S[5, 1] = -nu23 / E2
    S[2, 2], S[3, 3], S[4, 4] = 1 / G12, 1 / G13, 1 / G23
    return np.linalg.inv(S)


def voigt_to_tensor(C):
    T = np.zeros((3, 3, 3, 3))
    for I, (i, j) in enumerate(_VOIGT_PAIRS):
        for J, (k, l) in enumerate(_VOIGT_PAIRS):
            for a, b in {(i, j), (j, i)}:
                for c, d in {(k, l), (l, k)}:
                    T[a, b, c, d] = C[I, J]
    return T


def tensor_to_voigt(T):
    C = np.zeros((6, 6))
    for I, (i, j) in enumerate(_VOIGT_PAIRS):
        for J, (k, l) in enumerate(_VOIGT_PAIRS):
            C[I, J] = T[i, j, k, l]
    return C


def rotate_tensor(C, theta):
    """Rotate a material stiffness by ``theta`` about z using the 4th-order tensor rule."""
    c, s = np.cos(theta), np.sin(theta)
    Q = np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
    T = np.einsum("ai,bj,ck,dl,ijkl->abcd", Q, Q, Q, Q, voigt_to_tensor(C))
    return tensor_to_voigt(T)


def sinus_w2_functions(h):
    """Values and z-derivatives of the nine thickness functions in (u, v, w) x tau order."""
    k = np.pi / h

    def F(z):
        ip = [1.0, z, np.sin(k * z)]
        return np.array(ip + ip + [1.0, z, z * z])

    def dF(z):
        ip = [0.0, 1.0, k * np.cos(k * z)]
        return np.array(ip + ip + [0.0, 1.0, 2 * z])

    return F, dF


def bernstein(p, t):
    """Bernstein values and d/dt on [0, 1]; equal to the B-splines of one open element."""
    i = np.arange(p + 1)
    B = comb(p, i) * t ** i * (1 - t) ** (p - i)
    dB = np.zeros(p + 1)
    for j in range(p + 1):
        left = j * t ** (j - 1) * (1 - t) ** (p - j) if j > 0 else 0.0
        right = (p - j) * t ** j * (1 - t) ** (p - j - 1) if j < p else 0.0
        dB[j] = comb(p, j) * (left - right)
    return B, dB


def brute_force_element(p, a, h, layer_C, rho=1.0, n_xy=None, n_z=24, shear_factor=1.0):
    """K and M of a single degree-``p`` element on ``[0, a]^2`` by 3D quadrature.

    ``layer_C`` lists each ply's rotated 6x6 stiffness, bottom to top, equal
    thicknesses. DOFs are ordered ``(i * (p + 1) + j) * 9 + field`` with ``i``
    along x, fields ``(u0, u1, u2, v0, v1, v2, w0, w1, w2)``.
    """
    n_xy = n_xy or p + 2
    nl = len(layer_C)
    F, dF = sinus_w2_functions(h)
    gx, wx = leggauss(n_xy)
    gz, wz = leggauss(n_z)
    nb = (p + 1) ** 2
    ndof = nb * 9
    K = np.zeros((ndof, ndof))
    M = np.zeros((ndof, ndof))
    zs = np.linspace(-h / 2, h / 2, nl + 1)
    comp = np.repeat([0, 1, 2], 3)
    for xq, wxq in zip(gx, wx):
        x = a * (xq + 1) / 2
        Bx, dBx = bernstein(p, x / a)
        dBx = dBx / a
        for yq, wyq in zip(gx, wx):
            y = a * (yq + 1) / 2
            By, dBy = bernstein(p, y / a)
            dBy = dBy / a
            N = np.outer(Bx, By).ravel()
            Nx = np.outer(dBx, By).ravel()
            Ny = np.outer(Bx, dBy).ravel()
            wxy = wxq * wyq * a * a / 4
            for k in range(nl):
                Cs = layer_C[k].copy()
                Cs[3:5, 3:5] *= shear_factor
                for zq, wzq in zip(gz, wz):
                    z = (zs[k] + zs[k + 1]) / 2 + (zs[k + 1] - zs[k]) / 2 * zq
                    w = wxy * wzq * (zs[k + 1] - zs[k]) / 2
                    f, df = F(z), dF(z)
                    B = np.zeros((6, ndof))
                    U = np.zeros((3, ndof))
                    for fld in range(9):
                        cols = np.arange(nb) * 9 + fld
                        c = comp[fld]
                        U[c, cols] = f[fld] * N
                        if c == 0:
                            B[0, cols] += f[fld] * Nx
                            B[2, cols] += f[fld] * Ny
                            B[3, cols] += df[fld] * N
                        elif c == 1:
                            B[1, cols] += f[fld] * Ny
                            B[2, cols] += f[fld] * Nx
                            B[4, cols] += df[fld] * N
                        else:
                            B[3, cols] += f[fld] * Nx
                            B[4, cols] += f[fld] * Ny
                            B[5, cols] += df[fld] * N
                    K += w * B.T @ Cs @ B
                    M += w * rho * U.T @ U
    return K, M


def navier_sinus_w2(layer_C, h, a=1.0, rho=1.0, n_z=16):
    """Closed-form (m, n) = (1, 1) solution of the nine-field plate theory.

    Exact for simply supported cross-ply plates with the support convention
    v = w = 0 on x-edges and u = w = 0 on y-edges. Returns the 9x9 modal
    stiffness and mass; displacement amplitudes follow
    ``u ~ cos(pi x/a) sin(pi y/a)``, ``v ~ sin cos``, ``w ~ sin sin``.
    """
    al = be = np.pi / a
    nl = len(layer_C)
    zs = np.linspace(-h / 2, h / 2, nl + 1)
    F, dF = sinus_w2_functions(h)
    g, wg = leggauss(n_z)
    K = np.zeros((9, 9))
    M = np.zeros((9, 9))
    for k, C in enumerate(layer_C):
        for gq, wq in zip(g, wg):
            z = (zs[k] + zs[k + 1]) / 2 + (zs[k + 1] - zs[k]) / 2 * gq
            wz = wq * (zs[k + 1] - zs[k]) / 2
            f, df = F(z), dF(z)
            B = np.zeros((6, 9))
            N = np.zeros((3, 9))
            for t in range(3):
                B[0, t] = -al * f[t]
                B[1, 3 + t] = -be * f[3 + t]
                B[2, t] = be * f[t]
                B[2, 3 + t] = al * f[3 + t]
                B[3, t] = df[t]
                B[3, 6 + t] = al * f[6 + t]
                B[4, 3 + t] = df[3 + t]
                B[4, 6 + t] = be * f[6 + t]
                B[5, 6 + t] = df[6 + t]
                N[0, t], N[1, 3 + t], N[2, 6 + t] = f[t], f[3 + t], f[6 + t]
            K += wz * B.T @ C @ B
            M += wz * rho * N.T @ N
    return K, M


def navier_center_deflection(layer_C, h, a=1.0, P0=1.0, z=0.0):
    """Center deflection at height ``z`` under a midplane sinusoidal pressure ``P0``."""
    K, _ = navier_sinus_w2(layer_C, h, a)
    P = np.zeros(9)
    P[6] = P0
    U = np.linalg.solve(K, P)
    return U[6] + z * U[7] + z * z * U[8]


def navier_frequencies(layer_C, h, a=1.0, rho=1.0):
    import scipy.linalg as sla

    K, M = navier_sinus_w2(layer_C, h, a, rho)
    return np.sqrt(sla.eigh(K, M, eigvals_only=True))
