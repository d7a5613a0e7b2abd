"""Time stepping for the ternary Navier-Stokes-Cahn-Hilliard system.

One step is a first-order splitting:

1. Cahn-Hilliard update of the three phases.  Advection is explicit in
   conservative form, the gradient-energy Laplacian is implicit, the double
   well and the wall-energy derivative are explicit with a linear
   stabilisation ``S_i (c^{n+1} - c^n)``.  The three phases are coupled only
   through ``beta``; on the constant-coefficient grid the whole system is a
   3x3 solve per transform mode.
2. Momentum: explicit advection and capillary force, implicit viscosity.
3. Pressure projection onto discretely divergence-free velocities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .energy import ChemPot, bulk_derivative, capillary_force, chemical_potentials
from .errors import CflViolation, InvalidParameter
from .grid import (FaceVector, Grid, divergence, face_average, laplacian,
                   sync_ghosts, zero_wall_faces)
from .material import MaterialParams
from .solvers import PoissonSolver, interior_slices, scalar_basis, velocity_bases
from .wetting import normal_gradients

CFL_ADVECTIVE = 0.25
# The stabilised scheme is robust well past the explicit capillary-wave
# bound; steps beyond this multiple of it are refused outright.
CAPILLARY_FACTOR = 16.0


@dataclass
class FluidState:
    time: float
    c: np.ndarray
    v: FaceVector
    p: np.ndarray
    grid: Grid
    params: MaterialParams
    walls: dict = field(default_factory=dict)
    step: int = 0

    def copy(self) -> "FluidState":
        return replace(self, c=self.c.copy(), v=self.v.copy(), p=self.p.copy())


def quiescent_state(c, grid: Grid, params: MaterialParams, walls=None) -> FluidState:
    return FluidState(0.0, np.asarray(c, dtype=float), FaceVector.zeros(grid),
                      np.zeros(grid.shape), grid, params, dict(walls or {}))


def stabilization(params: MaterialParams, grid: Grid, walls: dict | None = None) -> np.ndarray:
    """Per-phase stabilisation constants ``S_i = s * sigma_i``.

    ``s = 24/eps`` covers twice the Lipschitz constant of the double-well
    derivative.  Wetting walls add the curvature of the explicit wall energy,
    spread over one wall cell.
    """
    s = 24.0 / params.epsilon
    sig = params.sigmas
    extra = 0.0
    for side, model in (walls or {}).items():
        if side in grid.wall_sides and not model.is_neutral:
            h = grid.normal_spacing(side)
            extra = max(extra, float(np.max(0.5 * 6.0 * np.abs(model.coefficients) / (sig * h))))
    return (s + extra) * sig


def advection(u: FaceVector, grid: Grid) -> FaceVector:
    """Divergence-form momentum advection ``div(v v)`` on the MAC grid."""
    ax = _advect_component(u.x, u.y, grid.hx, grid.hy, grid.periodic_x, grid.periodic_y)
    ay = _advect_component(u.y.T, u.x.T, grid.hy, grid.hx,
                           grid.periodic_y, grid.periodic_x).T
    return zero_wall_faces(FaceVector(ax, ay), grid)


def _advect_component(a, b, ha, hb, per_a, per_b):
    # a: normal component on faces along axis 0; b: the other component,
    # cells along axis 0 and faces along axis 1.
    ap = np.pad(a, 1)
    if per_a:
        ap[0, 1:-1], ap[-1, 1:-1] = a[-1], a[0]
    if per_b:
        ap[:, 0], ap[:, -1] = ap[:, -2], ap[:, 1]
    else:
        ap[:, 0], ap[:, -1] = -ap[:, 1], -ap[:, -2]
    bp = np.pad(b, 1)
    if per_a:
        bp[0, 1:-1], bp[-1, 1:-1] = b[-1], b[0]
    else:
        bp[0, 1:-1], bp[-1, 1:-1] = -b[0], -b[-1]
    if per_b:
        bp[:, 0], bp[:, -1] = bp[:, -2], bp[:, 1]
    na, nb = a.shape
    c = ap[1:-1, 1:-1]
    ae = 0.5 * (ap[2:, 1:-1] + c)
    aw = 0.5 * (ap[:-2, 1:-1] + c)
    an = 0.5 * (ap[1:-1, 2:] + c)
    as_ = 0.5 * (ap[1:-1, :-2] + c)
    bn = 0.5 * (bp[0:na, 2:nb + 2] + bp[1:na + 1, 2:nb + 2])
    bs = 0.5 * (bp[0:na, 1:nb + 1] + bp[1:na + 1, 1:nb + 1])
    return (ae * ae - aw * aw) / ha + (an * bn - as_ * bs) / hb


def viscous_dissipation(u: FaceVector, grid: Grid, eta: float) -> float:
    """``integral of 2 eta D(v):D(v)`` with ``D`` the symmetric gradient."""
    if grid.periodic_x:
        dudx = (np.roll(u.x, -1, axis=0) - u.x) / grid.hx
    else:
        dudx = (u.x[1:] - u.x[:-1]) / grid.hx
    if grid.periodic_y:
        dvdy = (np.roll(u.y, -1, axis=1) - u.y) / grid.hy
    else:
        dvdy = (u.y[:, 1:] - u.y[:, :-1]) / grid.hy
    # Shear rate at cell corners, using no-slip ghosts on walls.
    up = np.pad(u.x, ((0, 0), (1, 1)))
    if grid.periodic_y:
        up[:, 0], up[:, -1] = u.x[:, -1], u.x[:, 0]
    else:
        up[:, 0], up[:, -1] = -u.x[:, 0], -u.x[:, -1]
    dudy = (up[:, 1:] - up[:, :-1]) / grid.hy          # (nxf, ny+1)
    vp = np.pad(u.y, ((1, 1), (0, 0)))
    if grid.periodic_x:
        vp[0], vp[-1] = u.y[-1], u.y[0]
    else:
        vp[0], vp[-1] = -u.y[0], -u.y[-1]
    dvdx = (vp[1:] - vp[:-1]) / grid.hx                # (nx+1, nyf)
    if grid.periodic_x:
        dvdx = dvdx[:-1]
    if grid.periodic_y:
        dudy = dudy[:, :-1]
    shear = dudy + dvdx
    w = np.ones(shear.shape)
    if not grid.periodic_x:
        w[0] *= 0.5
        w[-1] *= 0.5
    if not grid.periodic_y:
        w[:, 0] *= 0.5
        w[:, -1] *= 0.5
    area = grid.cell_area
    return float(2.0 * eta * area * (np.sum(dudx**2) + np.sum(dvdy**2)
                                     + 0.5 * np.sum(w * shear**2)))


def kinetic_energy(u: FaceVector, grid: Grid, rho: float) -> float:
    return float(0.5 * rho * grid.cell_area * (np.sum(u.x**2) + np.sum(u.y**2)))


def advective_dt_limit(u: FaceVector, grid: Grid) -> float:
    vmax = u.max_abs()
    if vmax == 0.0:
        return math.inf
    return CFL_ADVECTIVE * min(grid.hx, grid.hy) / vmax


def capillary_dt_limit(grid: Grid, params: MaterialParams) -> float:
    """Explicit capillary-wave bound ``sqrt(rho h^3 / (2 pi gamma_max))``."""
    h = min(grid.hx, grid.hy)
    gmax = max(params.gamma12, params.gamma13, params.gamma23)
    return math.sqrt(params.rho * h**3 / (2.0 * math.pi * gmax))


class Stepper:
    """Advances a :class:`FluidState`; caches the per-``dt`` transform solves."""

    def __init__(self, grid: Grid, params: MaterialParams, walls: dict | None = None,
                 solve_flow: bool = True, poisson: str = "spectral"):
        self.grid = grid
        self.params = params
        self.walls = dict(walls or {})
        self.solve_flow = solve_flow
        self.basis = scalar_basis(grid)
        self.poisson = PoissonSolver(grid, poisson)
        self.vbases = velocity_bases(grid)
        self.S = stabilization(params, grid, self.walls)
        self._dt = None

    def _prepare(self, dt):
        if dt == self._dt:
            return
        p = self.params
        lam = self.basis.eigenvalues
        w = 1.0 / p.sigmas
        q = np.eye(3) - np.outer(np.ones(3), w) / w.sum()
        wq = w[:, None] * q
        a = self.S[None, None, :] - p.kappa[None, None, :] * lam[..., None]
        g = dt * p.mobility * lam[..., None, None] * wq
        self._G = g
        self._Q = q
        self._a = a
        self._Ainv = np.linalg.inv(np.eye(3) - g * a[..., None, :])
        nu = p.eta / p.rho
        self._helm = [1.0 / (1.0 - dt * nu * b.eigenvalues) for b in self.vbases]
        self._dt = dt

    # Individual substeps -------------------------------------------------

    def phase_step(self, state: FluidState, dt: float):
        """Return ``(c_new, mu_new)``; ``mu_new`` is the potential that drove the update."""
        self._prepare(dt)
        grid, p = self.grid, self.params
        c = state.c
        b = np.empty_like(c)
        r = np.empty_like(c)
        rules = normal_gradients(c, grid, self.walls, p)
        for i in range(3):
            cp = sync_ghosts(c[i], grid)
            flux = face_average(cp, grid)
            flux.x *= state.v.x
            flux.y *= state.v.y
            b[i] = c[i] - dt * divergence(flux, grid)
            r[i] = 12.0 / p.epsilon * bulk_derivative(c[i], p.sigmas[i]) - self.S[i] * c[i]
            if rules[i]:
                wall = laplacian(sync_ghosts(c[i], grid, rules[i]), grid) - laplacian(cp, grid)
                r[i] -= p.kappa[i] * wall
        bh = self.basis.forward(b)
        rh = self.basis.forward(r)
        rhs = bh + np.einsum("xyij,jxy->ixy", self._G, rh)
        ch = np.einsum("xyij,jxy->ixy", self._Ainv, rhs)
        dh = np.moveaxis(self._a, -1, 0) * ch + rh
        muh = np.einsum("ij,jxy->ixy", self._Q, dh)
        return self.basis.inverse(ch), self.basis.inverse(muh)

    def momentum_step(self, state: FluidState, c_new, mu_new, dt: float) -> FaceVector:
        """Provisional velocity: explicit advection and capillary force, implicit viscosity."""
        self._prepare(dt)
        grid, p = self.grid, self.params
        force = capillary_force(c_new, mu_new, grid)
        rhs = state.v - advection(state.v, grid) * dt + force * (dt / p.rho)
        out = FaceVector.zeros(grid)
        sx, sy = interior_slices(grid)
        bx, by = self.vbases
        out.x[sx] = bx.inverse(bx.forward(rhs.x[sx]) * self._helm[0])
        out.y[sy] = by.inverse(by.forward(rhs.y[sy]) * self._helm[1])
        return out

    def pressure_project(self, v_star: FaceVector, dt: float):
        """Return the divergence-free velocity and the pressure."""
        return self.poisson.project(v_star, scale=dt / self.params.rho)

    def check_dt(self, state: FluidState, dt: float):
        if not (dt > 0 and math.isfinite(dt)):
            raise InvalidParameter("dt", f"time step must be positive, got {dt!r}")
        limit = advective_dt_limit(state.v, self.grid)
        if dt > limit:
            raise CflViolation(f"dt={dt:.3e} exceeds advective limit {limit:.3e} "
                               f"at t={state.time:.6g}")
        if self.solve_flow:
            cap = CAPILLARY_FACTOR * capillary_dt_limit(self.grid, self.params)
            if dt > cap:
                raise CflViolation(f"dt={dt:.3e} exceeds {CAPILLARY_FACTOR:g}x the "
                                   f"capillary-wave limit ({cap:.3e})")

    def step(self, state: FluidState, dt: float) -> FluidState:
        self.check_dt(state, dt)
        c_new, mu_new = self.phase_step(state, dt)
        if self.solve_flow:
            v_star = self.momentum_step(state, c_new, mu_new, dt)
            v_new, p_new = self.pressure_project(v_star, dt)
        else:
            v_new, p_new = state.v.copy(), state.p.copy()
        return replace(state, time=state.time + dt, c=c_new, v=v_new, p=p_new,
                       step=state.step + 1)

    def chemical_potentials(self, state: FluidState) -> ChemPot:
        return chemical_potentials(state.c, self.params, self.grid, self.walls)


def step(state: FluidState, dt: float, **options) -> FluidState:
    """Advance ``state`` by one step, building a throwaway :class:`Stepper`."""
    return Stepper(state.grid, state.params, state.walls, **options).step(state, dt)
