"""Uniform staggered (MAC) grid and second-order difference operators.

Scalars live at cell centres as ``(nx, ny)`` arrays.  Vector fields store
the x-component on vertical faces and the y-component on horizontal faces.
Along a periodic axis there are ``n`` faces (face ``i`` sits on the low side
of cell ``i``); along a wall axis there are ``n + 1`` faces, the first and
last of which lie on the walls.

Ghost cells are never stored with a field.  :func:`sync_ghosts` returns a
padded copy with one ghost layer consistent with the boundary rule, and the
operators act on such padded arrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameter

PERIODIC = "periodic"
WALL = "wall"
SIDES = ("left", "right", "bottom", "top")


@dataclass(frozen=True)
class Grid:
    nx: int
    ny: int
    lx: float = 1.0
    ly: float = 1.0
    x_bc: str = PERIODIC
    y_bc: str = PERIODIC
    x0: float = 0.0
    y0: float = 0.0

    def __post_init__(self):
        if self.nx < 4 or self.ny < 4:
            raise InvalidParameter("grid", f"need nx, ny >= 4, got {self.nx}x{self.ny}")
        if not (self.lx > 0 and self.ly > 0):
            raise InvalidParameter("grid", "domain lengths must be positive")
        for bc in (self.x_bc, self.y_bc):
            if bc not in (PERIODIC, WALL):
                raise InvalidParameter("grid", f"unknown boundary kind {bc!r}")

    @property
    def hx(self) -> float:
        return self.lx / self.nx

    @property
    def hy(self) -> float:
        return self.ly / self.ny

    @property
    def cell_area(self) -> float:
        return self.hx * self.hy

    @property
    def periodic_x(self) -> bool:
        return self.x_bc == PERIODIC

    @property
    def periodic_y(self) -> bool:
        return self.y_bc == PERIODIC

    @property
    def shape(self):
        return (self.nx, self.ny)

    @property
    def xface_shape(self):
        return (self.nx if self.periodic_x else self.nx + 1, self.ny)

    @property
    def yface_shape(self):
        return (self.nx, self.ny if self.periodic_y else self.ny + 1)

    @property
    def wall_sides(self):
        sides = []
        if not self.periodic_x:
            sides += ["left", "right"]
        if not self.periodic_y:
            sides += ["bottom", "top"]
        return tuple(sides)

    @property
    def xc(self) -> np.ndarray:
        return self.x0 + (np.arange(self.nx) + 0.5) * self.hx

    @property
    def yc(self) -> np.ndarray:
        return self.y0 + (np.arange(self.ny) + 0.5) * self.hy

    @property
    def xf(self) -> np.ndarray:
        """x-coordinates of the vertical faces."""
        n = self.xface_shape[0]
        return self.x0 + np.arange(n) * self.hx

    @property
    def yf(self) -> np.ndarray:
        n = self.yface_shape[1]
        return self.y0 + np.arange(n) * self.hy

    def cell_centers(self):
        return np.meshgrid(self.xc, self.yc, indexing="ij")

    def xface_centers(self):
        return np.meshgrid(self.xf, self.yc, indexing="ij")

    def yface_centers(self):
        return np.meshgrid(self.xc, self.yf, indexing="ij")

    def normal_spacing(self, side: str) -> float:
        return self.hx if side in ("left", "right") else self.hy

    def wall_length_element(self, side: str) -> float:
        return self.hy if side in ("left", "right") else self.hx

    def boundary_values(self, f: np.ndarray, side: str) -> np.ndarray:
        """Cell values adjacent to a wall side (trailing axes preserved)."""
        return {
            "left": lambda: f[..., 0, :],
            "right": lambda: f[..., -1, :],
            "bottom": lambda: f[..., :, 0],
            "top": lambda: f[..., :, -1],
        }[side]()


@dataclass
class FaceVector:
    """Staggered vector field: ``x`` on vertical faces, ``y`` on horizontal faces."""

    x: np.ndarray
    y: np.ndarray

    @classmethod
    def zeros(cls, grid: Grid) -> "FaceVector":
        return cls(np.zeros(grid.xface_shape), np.zeros(grid.yface_shape))

    def copy(self) -> "FaceVector":
        return FaceVector(self.x.copy(), self.y.copy())

    def __add__(self, other):
        return FaceVector(self.x + other.x, self.y + other.y)

    def __sub__(self, other):
        return FaceVector(self.x - other.x, self.y - other.y)

    def __mul__(self, a):
        return FaceVector(self.x * a, self.y * a)

    __rmul__ = __mul__

    def max_abs(self) -> float:
        return float(max(np.abs(self.x).max(initial=0.0), np.abs(self.y).max(initial=0.0)))


def sync_ghosts(f: np.ndarray, grid: Grid, normal_gradient: dict | None = None) -> np.ndarray:
    """Return ``f`` padded with one ghost layer.

    Periodic axes wrap around.  On wall sides the ghost is chosen so that the
    one-sided difference across the wall equals the prescribed outward normal
    derivative ``normal_gradient[side]`` (zero when absent), i.e.
    ``ghost = interior + h * dn``.
    """
    normal_gradient = normal_gradient or {}
    nx, ny = f.shape
    p = np.empty((nx + 2, ny + 2), dtype=f.dtype)
    p[1:-1, 1:-1] = f
    if grid.periodic_x:
        p[0, 1:-1] = f[-1]
        p[-1, 1:-1] = f[0]
    else:
        p[0, 1:-1] = f[0] + grid.hx * normal_gradient.get("left", 0.0)
        p[-1, 1:-1] = f[-1] + grid.hx * normal_gradient.get("right", 0.0)
    if grid.periodic_y:
        p[:, 0] = p[:, -2]
        p[:, -1] = p[:, 1]
    else:
        bottom = normal_gradient.get("bottom", 0.0)
        top = normal_gradient.get("top", 0.0)
        p[1:-1, 0] = f[:, 0] + grid.hy * bottom
        p[1:-1, -1] = f[:, -1] + grid.hy * top
        p[0, 0], p[-1, 0] = p[0, 1], p[-1, 1]
        p[0, -1], p[-1, -1] = p[0, -2], p[-1, -2]
    return p


def gradient(fp: np.ndarray, grid: Grid) -> FaceVector:
    """Face-centred gradient of a ghost-padded scalar."""
    gx = (fp[1:, 1:-1] - fp[:-1, 1:-1]) / grid.hx
    gy = (fp[1:-1, 1:] - fp[1:-1, :-1]) / grid.hy
    if grid.periodic_x:
        gx = gx[:-1]
    if grid.periodic_y:
        gy = gy[:, :-1]
    return FaceVector(gx, gy)


def divergence(u: FaceVector, grid: Grid) -> np.ndarray:
    """Cell-centred divergence of a staggered vector field."""
    if grid.periodic_x:
        dx = (np.roll(u.x, -1, axis=0) - u.x) / grid.hx
    else:
        dx = (u.x[1:] - u.x[:-1]) / grid.hx
    if grid.periodic_y:
        dy = (np.roll(u.y, -1, axis=1) - u.y) / grid.hy
    else:
        dy = (u.y[:, 1:] - u.y[:, :-1]) / grid.hy
    return dx + dy


def laplacian(fp: np.ndarray, grid: Grid) -> np.ndarray:
    """Five-point Laplacian of a ghost-padded scalar."""
    c = fp[1:-1, 1:-1]
    return ((fp[2:, 1:-1] - 2.0 * c + fp[:-2, 1:-1]) / grid.hx**2
            + (fp[1:-1, 2:] - 2.0 * c + fp[1:-1, :-2]) / grid.hy**2)


def integrate(f, grid: Grid) -> float:
    """Midpoint-rule integral over the physical cells."""
    return float(np.sum(f) * grid.cell_area)


def interior_face_weights(grid: Grid):
    """Quadrature weights for face fields: 1 on interior faces, 0 on walls."""
    wx = np.ones(grid.xface_shape)
    wy = np.ones(grid.yface_shape)
    if not grid.periodic_x:
        wx[0] = wx[-1] = 0.0
    if not grid.periodic_y:
        wy[:, 0] = wy[:, -1] = 0.0
    return wx, wy


def integrate_faces(u: FaceVector, w: FaceVector, grid: Grid) -> float:
    """Sum of ``u . w`` over interior faces times the cell area."""
    wx, wy = interior_face_weights(grid)
    return float((np.sum(wx * u.x * w.x) + np.sum(wy * u.y * w.y)) * grid.cell_area)


def face_average(fp: np.ndarray, grid: Grid) -> FaceVector:
    """Arithmetic average of a padded scalar onto the faces."""
    ax = 0.5 * (fp[1:, 1:-1] + fp[:-1, 1:-1])
    ay = 0.5 * (fp[1:-1, 1:] + fp[1:-1, :-1])
    if grid.periodic_x:
        ax = ax[:-1]
    if grid.periodic_y:
        ay = ay[:, :-1]
    return FaceVector(ax, ay)


def zero_wall_faces(u: FaceVector, grid: Grid) -> FaceVector:
    """Zero the wall-normal component on wall faces (in place)."""
    if not grid.periodic_x:
        u.x[0] = 0.0
        u.x[-1] = 0.0
    if not grid.periodic_y:
        u.y[:, 0] = 0.0
        u.y[:, -1] = 0.0
    return u


def to_cell_centers(u: FaceVector, grid: Grid):
    """Average a staggered vector to cell centres, for output only."""
    if grid.periodic_x:
        ux = 0.5 * (u.x + np.roll(u.x, -1, axis=0))
    else:
        ux = 0.5 * (u.x[1:] + u.x[:-1])
    if grid.periodic_y:
        uy = 0.5 * (u.y + np.roll(u.y, -1, axis=1))
    else:
        uy = 0.5 * (u.y[:, 1:] + u.y[:, :-1])
    return ux, uy
