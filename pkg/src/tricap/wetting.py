"""Wall wettability: solid-fluid surface energy and the static-wetting flux.

The solid-fluid energy per unit wall length is interpolated between the
three pure-phase values with the cubic Hermite polynomial
``g(c) = c**2 * (3 - 2c)``, whose derivative vanishes at pure phases.  The
wetting flux ``h_i`` is the outward normal derivative of ``c_i`` that makes
the diffuse-interface boundary flux cancel the wall-energy derivative.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import Grid


def interpolation(c):
    return c * c * (3.0 - 2.0 * c)


def interpolation_derivative(c):
    return 6.0 * c * (1.0 - c)


@dataclass(frozen=True)
class WallEnergyModel:
    gamma_s: tuple = (0.0, 0.0, 0.0)

    @property
    def coefficients(self) -> np.ndarray:
        return np.asarray(self.gamma_s, dtype=float)

    @property
    def is_neutral(self) -> bool:
        return not np.any(self.coefficients)

    def gauged(self, i: int, j: int, sigmas) -> "WallEnergyModel":
        """Shift all three energies by one constant so phases ``i``, ``j`` pair up cleanly.

        On the two-phase edge ``c_i + c_j = 1`` a common shift leaves the wall
        energy unchanged, and the shifted values satisfy
        ``gamma_si / sigma_i + gamma_sj / sigma_j = 0``.  The wetting fluxes of
        the two phases then sum to zero, so an absent third phase is not
        created at the wall.
        """
        g = self.coefficients
        s = np.asarray(sigmas, dtype=float)
        shift = -(g[i] / s[i] + g[j] / s[j]) / (1.0 / s[i] + 1.0 / s[j])
        return WallEnergyModel(tuple(float(v) for v in g + shift))

    def max_curvature(self) -> float:
        """Upper bound of ``|d^2 gamma_sf / d c_i^2|`` over ``c`` in [0, 1]."""
        return 6.0 * float(np.abs(self.coefficients).max())


def wall_energy(c_wall, model: WallEnergyModel):
    """Surface energy density ``sum_i gamma_si g(c_i)`` at wall cells.

    ``c_wall`` has shape ``(3, n)`` (phase, position along the wall).
    """
    gs = model.coefficients.reshape((3,) + (1,) * (np.ndim(c_wall) - 1))
    return np.sum(gs * interpolation(np.asarray(c_wall)), axis=0)


def wall_energy_derivative(c_wall, model: WallEnergyModel):
    gs = model.coefficients.reshape((3,) + (1,) * (np.ndim(c_wall) - 1))
    return gs * interpolation_derivative(np.asarray(c_wall))


def wetting_flux(c_wall, params, model: WallEnergyModel):
    """Outward normal derivative ``h_i`` of each phase field at the wall.

    Solves ``(3/4) eps sigma_i h_i + d gamma_sf / d c_i = 0`` for ``h_i``.
    """
    kappa = params.kappa.reshape((3,) + (1,) * (np.ndim(c_wall) - 1))
    return -wall_energy_derivative(c_wall, model) / kappa


def normal_gradients(c, grid: Grid, walls: dict | None, params):
    """Per-phase dictionaries ``side -> h_i`` for :func:`grid.sync_ghosts`.

    Sides without a wall model (or with all-zero energies) get no entry,
    which means zero normal gradient.
    """
    out = [{}, {}, {}]
    for side, model in (walls or {}).items():
        if side not in grid.wall_sides or model.is_neutral:
            continue
        h = wetting_flux(grid.boundary_values(c, side), params, model)
        for i in range(3):
            out[i][side] = h[i]
    return out


def total_wall_energy(c, grid: Grid, walls: dict | None) -> float:
    """Line integral of the wall energy over every wall side."""
    total = 0.0
    for side, model in (walls or {}).items():
        if side not in grid.wall_sides:
            continue
        gamma = wall_energy(grid.boundary_values(c, side), model)
        total += float(np.sum(gamma)) * grid.wall_length_element(side)
    return total


def _wall_normal_derivative(f, grid: Grid, side: str):
    """Outward normal derivative at a wall from three interior cells (second order)."""
    h = grid.normal_spacing(side)
    if side == "left":
        a, b, c = f[..., 0, :], f[..., 1, :], f[..., 2, :]
    elif side == "right":
        a, b, c = f[..., -1, :], f[..., -2, :], f[..., -3, :]
    elif side == "bottom":
        a, b, c = f[..., :, 0], f[..., :, 1], f[..., :, 2]
    else:
        a, b, c = f[..., :, -1], f[..., :, -2], f[..., :, -3]
    inward = (-23.0 * a + 26.0 * b - 3.0 * c) / (24.0 * h)
    wall_value = (15.0 * a - 10.0 * b + 3.0 * c) / 8.0
    return -inward, wall_value


def static_wetting_residual(c, grid: Grid, walls: dict, params) -> float:
    """Max over walls of ``|(3/4) eps sigma_i dn c_i + d gamma_sf/d c_i|``.

    Uses interior values only, so it measures how well the discrete
    solution satisfies the continuous wetting condition.
    """
    worst = 0.0
    kappa = params.kappa[:, None]
    for side, model in walls.items():
        if side not in grid.wall_sides:
            continue
        dn, cw = _wall_normal_derivative(c, grid, side)
        r = kappa * dn + wall_energy_derivative(cw, model)
        worst = max(worst, float(np.abs(r).max()))
    return worst
