"""Ternary Ginzburg-Landau energy, chemical potentials and capillary force.

Phase fields are stored as one ``(3, nx, ny)`` array.  The energy density is

    Psi = (12/eps) * sum_i (sigma_i/2) c_i^2 (1-c_i)^2
          + sum_i (3/8) eps sigma_i |grad c_i|^2

and the chemical potentials are ``mu_i = dPsi/dc_i + beta`` with the
pointwise Lagrange multiplier ``beta`` fixed so that
``sum_i mu_i / sigma_i = 0``.  With the phase mobilities ``M / sigma_i``
this keeps ``c_1 + c_2 + c_3 = 1`` exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import (FaceVector, Grid, face_average, gradient, integrate,
                   integrate_faces, laplacian, sync_ghosts, zero_wall_faces)
from .material import MaterialParams
from .wetting import normal_gradients


@dataclass
class ChemPot:
    mu: np.ndarray
    beta: np.ndarray


def _col(a, ndim):
    return np.asarray(a, dtype=float).reshape((3,) + (1,) * (ndim - 1))


def bulk_density(c: np.ndarray, params: MaterialParams) -> np.ndarray:
    """Double-well density ``F = sum_i (sigma_i/2) c_i^2 (1-c_i)^2`` (unscaled)."""
    s = _col(params.sigmas, c.ndim)
    return np.sum(0.5 * s * c**2 * (1.0 - c) ** 2, axis=0)


def bulk_derivative(ci, sigma_i):
    """``dF/dc_i = sigma_i c (1-c) (1-2c)``."""
    return sigma_i * ci * (1.0 - ci) * (1.0 - 2.0 * ci)


def free_energy(c: np.ndarray, params: MaterialParams, grid: Grid) -> float:
    """Integral of the Ginzburg-Landau density over the fluid domain.

    The gradient part is summed over interior faces; on wall faces the
    boundary behaviour is carried by the wall energy instead.
    """
    total = integrate(12.0 / params.epsilon * bulk_density(c, params), grid)
    for ci, k in zip(c, params.kappa):
        g = gradient(sync_ghosts(ci, grid), grid)
        total += 0.5 * k * integrate_faces(g, g, grid)
    return total


def variational_derivative(ci, sigma_i, params: MaterialParams, grid: Grid,
                           normal_gradient=None):
    """``(12/eps) dF/dc_i - (3/4) eps sigma_i lap(c_i)`` with the given wall rule."""
    cp = sync_ghosts(ci, grid, normal_gradient)
    return (12.0 / params.epsilon * bulk_derivative(ci, sigma_i)
            - 0.75 * params.epsilon * sigma_i * laplacian(cp, grid))


def lagrange_multiplier(d, sigmas):
    """Pointwise ``beta = -(sum_j d_j/sigma_j) / (sum_j 1/sigma_j)``."""
    w = 1.0 / np.asarray(sigmas, dtype=float)
    d = np.asarray(d)
    return -np.tensordot(w, d, axes=1) / w.sum()


def chemical_potentials(c: np.ndarray, params: MaterialParams, grid: Grid,
                        walls: dict | None = None) -> ChemPot:
    """Chemical potentials of all three phases and the multiplier ``beta``."""
    rules = normal_gradients(c, grid, walls, params)
    d = np.stack([variational_derivative(c[i], params.sigmas[i], params, grid, rules[i])
                  for i in range(3)])
    beta = lagrange_multiplier(d, params.sigmas)
    return ChemPot(d + beta, beta)


def capillary_force(c: np.ndarray, mu: np.ndarray, grid: Grid) -> FaceVector:
    """Potential form of the capillary force, ``sum_i mu_i grad c_i``, on faces.

    ``mu`` is averaged to the faces.  Wall-normal components are zeroed
    since the velocity there is prescribed.
    """
    f = FaceVector.zeros(grid)
    for ci, mi in zip(c, mu):
        g = gradient(sync_ghosts(ci, grid), grid)
        m = face_average(sync_ghosts(mi, grid), grid)
        f.x += m.x * g.x
        f.y += m.y * g.y
    return zero_wall_faces(f, grid)


def chemical_dissipation(mu: np.ndarray, params: MaterialParams, grid: Grid) -> float:
    """``integral of sum_i (M/sigma_i) |grad mu_i|^2`` (zero-flux walls)."""
    total = 0.0
    for mi, s in zip(mu, params.sigmas):
        g = gradient(sync_ghosts(mi, grid), grid)
        total += params.mobility / s * integrate_faces(g, g, grid)
    return total


# Collocated central differences used to evaluate the stress identity at
# cell centres, independently of the staggered solver operators.

def _cdiff(f, axis, h, periodic):
    if periodic:
        return (np.roll(f, -1, axis=axis) - np.roll(f, 1, axis=axis)) / (2.0 * h)
    out = np.full_like(f, np.nan)
    sl = [slice(None)] * f.ndim
    lo, hi, mid = list(sl), list(sl), list(sl)
    mid[axis], hi[axis], lo[axis] = slice(1, -1), slice(2, None), slice(None, -2)
    out[tuple(mid)] = (f[tuple(hi)] - f[tuple(lo)]) / (2.0 * h)
    return out


def collocated_gradient(f, grid: Grid):
    return (_cdiff(f, 0, grid.hx, grid.periodic_x), _cdiff(f, 1, grid.hy, grid.periodic_y))


def energy_density(c, params: MaterialParams, grid: Grid):
    """Pointwise Ginzburg-Landau density with collocated gradients."""
    psi = 12.0 / params.epsilon * bulk_density(c, params)
    for ci, s in zip(c, params.sigmas):
        gx, gy = collocated_gradient(ci, grid)
        psi = psi + 0.375 * params.epsilon * s * (gx**2 + gy**2)
    return psi


def korteweg_divergence(c, params: MaterialParams, grid: Grid):
    """``div( sum_i (3/4) eps sigma_i grad c_i (x) grad c_i )`` at cell centres."""
    fx = np.zeros(grid.shape)
    fy = np.zeros(grid.shape)
    for ci, k in zip(c, params.kappa):
        gx, gy = collocated_gradient(ci, grid)
        fx += k * (collocated_gradient(gx * gx, grid)[0] + collocated_gradient(gx * gy, grid)[1])
        fy += k * (collocated_gradient(gy * gx, grid)[0] + collocated_gradient(gy * gy, grid)[1])
    return fx, fy
