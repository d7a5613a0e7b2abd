"""Initial states and per-scenario defaults."""

from __future__ import annotations

import math

import numpy as np

from .grid import Grid
from .solid import SolidMesh, rest_state, smooth_ramp
from .stepper import quiescent_state
from .wetting import WallEnergyModel

_FLUID = {("grid", "lx"): 1.0, ("grid", "ly"): 1.0, ("flow", "enabled"): True,
          ("material", "eta"): 0.1, ("output", "cadence"): 100}

DEFAULTS = {
    "spinodal": {**_FLUID, ("grid", "nx"): 64, ("grid", "ny"): 64,
                 ("grid", "x_bc"): "periodic", ("grid", "y_bc"): "periodic",
                 ("material", "epsilon"): 0.05, ("material", "mobility"): 1e-2,
                 ("time", "dt"): 2e-4, ("time", "end_time"): 0.1,
                 ("init", "amplitude"): 0.01},
    "interface1d": {**_FLUID, ("grid", "nx"): 128, ("grid", "ny"): 4,
                    ("grid", "ly"): 4.0 / 128, ("grid", "x_bc"): "wall",
                    ("grid", "y_bc"): "periodic", ("material", "epsilon"): 0.05,
                    ("material", "mobility"): 1e-2, ("time", "dt"): 1e-3,
                    ("time", "end_time"): 2.0, ("output", "cadence"): 500},
    "lens": {**_FLUID, ("grid", "nx"): 128, ("grid", "ny"): 128,
             ("grid", "x_bc"): "periodic", ("grid", "y_bc"): "wall",
             ("material", "epsilon"): 0.03, ("material", "mobility"): 1e-3,
             ("material", "eta"): 0.02, ("time", "dt"): 2e-3, ("time", "end_time"): 6.0,
             ("init", "radius"): 0.2, ("init", "center"): (0.5, 0.5), ("init", "level"): 0.5,
             ("monitor", "energy_tol"): 1e-6, ("output", "cadence"): 500},
    "sessile_drop": {**_FLUID, ("grid", "nx"): 128, ("grid", "ny"): 128,
                     ("grid", "x_bc"): "periodic", ("grid", "y_bc"): "wall",
                     ("material", "epsilon"): 0.03, ("material", "mobility"): 1e-3,
                     ("material", "eta"): 0.02, ("time", "dt"): 2e-3,
                     ("time", "end_time"): 8.0, ("init", "radius"): 0.25,
                     ("init", "center"): (0.5, 0.0), ("monitor", "energy_tol"): 1e-6,
                     ("output", "cadence"): 500},
    "stokes_decay": {**_FLUID, ("grid", "nx"): 32, ("grid", "ny"): 32,
                     ("grid", "x_bc"): "periodic", ("grid", "y_bc"): "periodic",
                     ("material", "epsilon"): 0.05, ("material", "mobility"): 1e-3,
                     ("time", "dt"): 1e-3, ("time", "end_time"): 0.5,
                     ("init", "amplitude"): 1.0},
    "solid_vibration": {("grid", "nx"): 40, ("grid", "ny"): 4, ("grid", "lx"): 1.0,
                        ("grid", "ly"): 0.1, ("time", "dt"): None,
                        ("time", "end_time"): 10 * 4.0 / math.sqrt(8.0 / 3.0),
                        ("init", "amplitude"): 1e-3, ("output", "cadence"): 1000},
    "solid_traction": {("grid", "nx"): 20, ("grid", "ny"): 4, ("grid", "lx"): 1.0,
                       ("grid", "ly"): 0.2, ("time", "dt"): None, ("time", "end_time"): 2.0,
                       ("solid", "traction"): (0.2, 0.05), ("solid", "ramp"): 1.0,
                       ("output", "cadence"): 100},
}


def make_grid(cfg) -> Grid:
    g = cfg.section("grid")
    x0 = -0.5 * g["lx"] if cfg.scenario == "interface1d" else 0.0
    return Grid(g["nx"], g["ny"], g["lx"], g["ly"], g["x_bc"], g["y_bc"], x0, 0.0)


def make_walls(cfg, grid: Grid, params) -> dict:
    """Wall-energy models for the wall sides that have one configured."""
    walls = {}
    gauge = cfg.get("walls", "gauge")
    for side in grid.wall_sides:
        gs = cfg.get("walls", side)
        if gs is None:
            continue
        model = WallEnergyModel(tuple(gs))
        walls[side] = model.gauged(0, 1, params.sigmas) if gauge else model
    return walls


def _tanh(d, eps):
    return 0.5 * (1.0 + np.tanh(2.0 * d / eps))


def build_initial_state(cfg):
    """Initial :class:`FluidState` or :class:`SolidState` for a scenario."""
    if cfg.is_solid:
        return _solid_state(cfg)
    grid = make_grid(cfg)
    params = cfg.material()
    walls = make_walls(cfg, grid, params)
    eps = params.epsilon
    X, Y = grid.cell_centers()
    init = cfg.section("init")
    name = cfg.scenario
    if name == "spinodal":
        rng = np.random.default_rng(cfg.seed)
        amp = init["amplitude"]
        if init["binary"]:
            c1 = 0.5 + amp * rng.uniform(-1.0, 1.0, grid.shape)
            c = np.stack([c1, 1.0 - c1, np.zeros(grid.shape)])
        else:
            c1 = 1.0 / 3.0 + amp * rng.uniform(-1.0, 1.0, grid.shape)
            c2 = 1.0 / 3.0 + amp * rng.uniform(-1.0, 1.0, grid.shape)
            c = np.stack([c1, c2, 1.0 - c1 - c2])
    elif name == "interface1d":
        c1 = _tanh(X, eps)
        c = np.stack([c1, 1.0 - c1, np.zeros(grid.shape)])
    elif name == "lens":
        xc, yc = init["center"]
        c1 = _tanh(init["radius"] - np.hypot(X - xc, Y - yc), eps)
        upper = _tanh(Y - init["level"], eps)
        c = np.stack([c1, (1.0 - c1) * upper, (1.0 - c1) * (1.0 - upper)])
    elif name == "sessile_drop":
        xc, yc = init["center"]
        c1 = _tanh(init["radius"] - np.hypot(X - xc, Y - yc), eps)
        c = np.stack([c1, 1.0 - c1, np.zeros(grid.shape)])
    elif name == "stokes_decay":
        c = np.stack([np.ones(grid.shape), np.zeros(grid.shape), np.zeros(grid.shape)])
    else:  # pragma: no cover - guarded by parse_config
        raise ValueError(name)
    state = quiescent_state(c, grid, params, walls)
    if name == "stokes_decay":
        _, yf = grid.xface_centers()
        state.v.x[:] = init["amplitude"] * np.sin(2.0 * math.pi * (yf - grid.y0) / grid.ly)
    return state


def _solid_state(cfg):
    g = cfg.section("grid")
    mesh = SolidMesh(g["nx"], g["ny"], g["lx"], g["ly"])
    params = cfg.solid()
    if cfg.scenario == "solid_vibration":
        state = rest_state(mesh, params, supports=("left",))
        k = math.pi / (2.0 * mesh.lx)
        state.udot[:, 0] = cfg.get("init", "amplitude") * np.sin(k * mesh.X[:, 0])
        return state
    s = cfg.section("solid")
    return rest_state(mesh, params, supports=("left", "bottom"),
                      tractions={"right": smooth_ramp(s["ramp"], s["traction"])})


def vibration_period(mesh: SolidMesh, params) -> float:
    """Fundamental period ``4 L / c`` of a fixed-free bar with free lateral sides."""
    return 4.0 * mesh.lx / math.sqrt(params.plane_modulus / params.rho0)
