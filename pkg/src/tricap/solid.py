"""Standalone Lagrangian solver for a compressible neo-Hookean solid.

Bilinear quadrilaterals on a uniform referential mesh, 2x2 Gauss quadrature,
lumped mass and explicit central differences (velocity Verlet form).
Supported sides carry rollers (zero normal displacement, free tangential
traction); traction sides carry a prescribed dead-load traction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .errors import CflViolation, InvalidParameter, Inverted

SIDES = ("left", "right", "bottom", "top")
_NORMAL_AXIS = {"left": 0, "right": 0, "bottom": 1, "top": 1}

_GAUSS = np.array([-1.0, 1.0]) / math.sqrt(3.0)


@dataclass(frozen=True)
class SolidParams:
    mu: float = 1.0
    lam: float = 1.0
    rho0: float = 1.0

    @property
    def wave_speed(self) -> float:
        """Dilatational wave speed ``c_p = sqrt((lam + 2 mu) / rho0)``."""
        return math.sqrt((self.lam + 2.0 * self.mu) / self.rho0)

    @property
    def plane_modulus(self) -> float:
        """Young's modulus of a 2D sheet with free lateral sides."""
        return 4.0 * self.mu * (self.lam + self.mu) / (self.lam + 2.0 * self.mu)


def validate_solid(p: SolidParams) -> SolidParams:
    for name in ("mu", "rho0"):
        v = getattr(p, name)
        if not (math.isfinite(v) and v > 0):
            raise InvalidParameter(name, f"{name} must be positive, got {v!r}")
    if not (math.isfinite(p.lam) and p.lam + p.mu > 0):
        raise InvalidParameter("lam", f"lam + mu must be positive, got lam={p.lam!r}")
    return p


class SolidMesh:
    """Uniform ``nx x ny`` quad mesh of ``[0, lx] x [0, ly]``.

    Node ``(i, j)`` has index ``i * (ny + 1) + j``.
    """

    def __init__(self, nx: int, ny: int, lx: float = 1.0, ly: float = 1.0):
        if nx < 1 or ny < 1:
            raise InvalidParameter("grid", "solid mesh needs at least one element per axis")
        self.nx, self.ny, self.lx, self.ly = nx, ny, lx, ly
        self.hx, self.hy = lx / nx, ly / ny
        xi, yj = np.meshgrid(np.linspace(0, lx, nx + 1), np.linspace(0, ly, ny + 1), indexing="ij")
        self.X = np.column_stack([xi.ravel(), yj.ravel()])
        node = np.arange((nx + 1) * (ny + 1)).reshape(nx + 1, ny + 1)
        # Counter-clockwise: (0,0), (1,0), (1,1), (0,1) in local coordinates.
        self.conn = np.stack([node[:-1, :-1], node[1:, :-1], node[1:, 1:], node[:-1, 1:]],
                             axis=-1).reshape(-1, 4)
        self.dN, self.N = _shape_data(self.hx, self.hy)
        self.weight = 0.25 * self.hx * self.hy
        self._node = node

    @property
    def n_nodes(self) -> int:
        return len(self.X)

    @property
    def area(self) -> float:
        return self.lx * self.ly

    @property
    def h_min(self) -> float:
        return min(self.hx, self.hy)

    def side_nodes(self, side: str) -> np.ndarray:
        node = self._node
        return {"left": node[0], "right": node[-1], "bottom": node[:, 0], "top": node[:, -1]}[side]

    def lumped_mass(self, rho0: float) -> np.ndarray:
        m = np.zeros(self.n_nodes)
        np.add.at(m, self.conn.ravel(), 0.25 * rho0 * self.hx * self.hy)
        return m

    def side_load_weights(self, side: str) -> np.ndarray:
        """Nodal weights of a constant line load along ``side`` (trapezoid rule)."""
        h = self.hy if side in ("left", "right") else self.hx
        nodes = self.side_nodes(side)
        w = np.full(len(nodes), h)
        w[0] = w[-1] = 0.5 * h
        return w


def _shape_data(hx, hy):
    # Gradients of the four bilinear shape functions at the 2x2 Gauss points.
    sgn = np.array([[-1, -1], [1, -1], [1, 1], [-1, 1]], dtype=float)
    dN = np.empty((4, 4, 2))
    N = np.empty((4, 4))
    for g, (xi, eta) in enumerate((a, b) for b in _GAUSS for a in _GAUSS):
        for a, (sx, sy) in enumerate(sgn):
            N[g, a] = 0.25 * (1 + sx * xi) * (1 + sy * eta)
            dN[g, a, 0] = 0.25 * sx * (1 + sy * eta) * 2.0 / hx
            dN[g, a, 1] = 0.25 * sy * (1 + sx * xi) * 2.0 / hy
    return dN, N


# Constitutive law -------------------------------------------------------

def _det(F):
    return F[..., 0, 0] * F[..., 1, 1] - F[..., 0, 1] * F[..., 1, 0]


def _inv_t(F, J):
    out = np.empty_like(F)
    out[..., 0, 0] = F[..., 1, 1]
    out[..., 1, 1] = F[..., 0, 0]
    out[..., 0, 1] = -F[..., 1, 0]
    out[..., 1, 0] = -F[..., 0, 1]
    return out / J[..., None, None]


def _jacobian(F):
    J = _det(F)
    if np.any(~(J > 0)):
        raise Inverted(f"element inverted: min det F = {np.min(J):.3e}")
    return J


def strain_energy_density(F, params: SolidParams):
    """``W = mu/2 (tr F^T F - 2) - mu ln J + lam/2 (ln J)^2``."""
    F = np.asarray(F, dtype=float)
    lnJ = np.log(_jacobian(F))
    trC = np.sum(F * F, axis=(-2, -1))
    return 0.5 * params.mu * (trC - 2.0) - params.mu * lnJ + 0.5 * params.lam * lnJ**2


def first_piola(F, params: SolidParams):
    """``P = mu (F - F^{-T}) + lam ln(J) F^{-T}``; raises Inverted if ``J <= 0``."""
    F = np.asarray(F, dtype=float)
    J = _jacobian(F)
    Fit = _inv_t(F, J)
    return params.mu * (F - Fit) + params.lam * np.log(J)[..., None, None] * Fit


def cauchy_stress(F, params: SolidParams):
    """Diagnostic push-forward ``sigma = J^{-1} P F^T``."""
    F = np.asarray(F, dtype=float)
    P = first_piola(F, params)
    return np.einsum("...ij,...kj->...ik", P, F) / _det(F)[..., None, None]


# Solver -----------------------------------------------------------------

@dataclass
class SolidState:
    time: float
    u: np.ndarray
    udot: np.ndarray
    mesh: SolidMesh
    params: SolidParams
    supports: tuple = ()
    tractions: dict = field(default_factory=dict)
    step: int = 0

    def copy(self) -> "SolidState":
        return replace(self, u=self.u.copy(), udot=self.udot.copy())

    def traction(self, side: str, t: float | None = None) -> np.ndarray:
        fn = self.tractions.get(side)
        if fn is None:
            return np.zeros(2)
        return np.asarray(fn(self.time if t is None else t), dtype=float)


def rest_state(mesh: SolidMesh, params: SolidParams, supports=(), tractions=None) -> SolidState:
    n = mesh.n_nodes
    return SolidState(0.0, np.zeros((n, 2)), np.zeros((n, 2)), mesh, validate_solid(params),
                      tuple(supports), dict(tractions or {}))


def constrained(state: SolidState) -> np.ndarray:
    """Boolean ``(n_nodes, 2)`` mask of displacement components held at zero."""
    mask = np.zeros((state.mesh.n_nodes, 2), dtype=bool)
    for side in state.supports:
        mask[state.mesh.side_nodes(side), _NORMAL_AXIS[side]] = True
    return mask


def deformation_gradient(u, mesh: SolidMesh):
    """``F = I + grad_X u`` at every element quadrature point, shape ``(ne, 4, 2, 2)``."""
    ue = np.asarray(u)[mesh.conn]
    return np.eye(2) + np.einsum("eai,gaj->egij", ue, mesh.dN)


def internal_forces(u, mesh: SolidMesh, params: SolidParams):
    """Galerkin internal force ``-integral P : grad_X N_a``, per node."""
    P = first_piola(deformation_gradient(u, mesh), params)
    fe = -mesh.weight * np.einsum("egij,gaj->eai", P, mesh.dN)
    f = np.zeros((mesh.n_nodes, 2))
    np.add.at(f, mesh.conn.ravel(), fe.reshape(-1, 2))
    return f


def external_forces(state: SolidState, t: float | None = None):
    f = np.zeros((state.mesh.n_nodes, 2))
    for side in state.tractions:
        nodes = state.mesh.side_nodes(side)
        f[nodes] += state.mesh.side_load_weights(side)[:, None] * state.traction(side, t)
    return f


def assemble_forces(state: SolidState, t: float | None = None):
    """Total nodal force with constrained components zeroed."""
    f = internal_forces(state.u, state.mesh, state.params) + external_forces(state, t)
    f[constrained(state)] = 0.0
    return f


def stable_dt(mesh: SolidMesh, params: SolidParams) -> float:
    return 0.8 * mesh.h_min / params.wave_speed


def advance_solid(state: SolidState, dt: float) -> SolidState:
    """One central-difference step."""
    if not (dt > 0 and math.isfinite(dt)):
        raise InvalidParameter("dt", f"time step must be positive, got {dt!r}")
    limit = stable_dt(state.mesh, state.params)
    if dt > limit:
        raise CflViolation(f"dt={dt:.3e} exceeds solid limit {limit:.3e}")
    m = state.mesh.lumped_mass(state.params.rho0)[:, None]
    fixed = constrained(state)
    a0 = assemble_forces(state) / m
    vhalf = state.udot + 0.5 * dt * a0
    vhalf[fixed] = 0.0
    new = replace(state, time=state.time + dt, u=state.u + dt * vhalf, udot=vhalf,
                  step=state.step + 1)
    a1 = assemble_forces(new) / m
    new.udot = vhalf + 0.5 * dt * a1
    new.udot[fixed] = 0.0
    new.u[fixed] = 0.0
    return new


def solid_energy(state: SolidState):
    """``(kinetic, strain)``: lumped-mass kinetic energy and quadrature of ``W``."""
    m = state.mesh.lumped_mass(state.params.rho0)
    ke = 0.5 * float(np.sum(m[:, None] * state.udot**2))
    W = strain_energy_density(deformation_gradient(state.u, state.mesh), state.params)
    return ke, float(state.mesh.weight * np.sum(W))


def traction_power(state: SolidState) -> float:
    """Power of the applied boundary tractions, ``sum_a f_a . udot_a``."""
    return float(np.sum(external_forces(state) * state.udot))


def smooth_ramp(t_ramp: float, amplitude) -> Callable[[float], np.ndarray]:
    """Traction rising as ``sin^2`` from 0 to ``amplitude`` over ``t_ramp``, then held."""
    amp = np.asarray(amplitude, dtype=float)

    def traction(t):
        s = min(max(t / t_ramp, 0.0), 1.0)
        return amp * math.sin(0.5 * math.pi * s) ** 2

    return traction


def tip_displacement(state: SolidState, side: str = "right", axis: int = 0) -> float:
    return float(np.mean(state.u[state.mesh.side_nodes(side), axis]))
