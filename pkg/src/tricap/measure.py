"""Post-processing of snapshots: contact angles, lens angles, interface energy.

Interfaces are located as iso-lines of the phase fields.  At equilibrium
every fluid-fluid interface is a circular arc (or a straight line), so the
angles are read off circles fitted away from the contact region, where the
diffuse-interface structure of the junction would bias a local estimate.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.ndimage import map_coordinates
from skimage.measure import find_contours

from .energy import free_energy
from .errors import ContourNotFound
from .grid import Grid
from .material import MaterialParams, validate


def contour_points(f, grid: Grid, level=0.5):
    """All points of the ``f = level`` iso-lines, in physical coordinates."""
    pts = [p for p in find_contours(f, level) if len(p)]
    if not pts:
        raise ContourNotFound(f"no iso-line at level {level}")
    p = np.concatenate(pts)
    return np.column_stack([grid.x0 + (p[:, 0] + 0.5) * grid.hx,
                            grid.y0 + (p[:, 1] + 0.5) * grid.hy])


def sample(f, grid: Grid, pts):
    """Bilinear interpolation of a cell-centred field at physical points."""
    i = (pts[:, 0] - grid.x0) / grid.hx - 0.5
    j = (pts[:, 1] - grid.y0) / grid.hy - 0.5
    return map_coordinates(f, [i, j], order=1, mode="nearest")


def fit_circle(pts):
    """Algebraic least-squares circle ``(xc, yc, R)`` through ``pts``."""
    if len(pts) < 3:
        raise ContourNotFound("too few points to fit an interface arc")
    x, y = pts[:, 0], pts[:, 1]
    a = np.column_stack([x, y, np.ones_like(x)])
    b = x**2 + y**2
    (d, e, f), *_ = np.linalg.lstsq(a, b, rcond=None)
    xc, yc = d / 2.0, e / 2.0
    return xc, yc, math.sqrt(f + xc**2 + yc**2)


def contact_angle(c, grid: Grid, epsilon: float, phase: int = 0, side: str = "bottom",
                  exclusion: float = 3.0) -> float:
    """Contact angle (degrees, measured inside ``phase``) of a drop on a wall.

    A circle is fitted to the ``c = 1/2`` iso-line of the drop, ignoring
    points closer than ``exclusion * epsilon`` to the wall.
    """
    if side != "bottom":
        raise ValueError("only bottom-wall drops are supported")
    pts = contour_points(c[phase], grid)
    wall = grid.y0
    pts = pts[pts[:, 1] > wall + exclusion * epsilon]
    xc, yc, r = fit_circle(pts)
    cos_theta = np.clip(-(yc - wall) / r, -1.0, 1.0)
    return math.degrees(math.acos(cos_theta))


def _unit(v):
    return v / np.linalg.norm(v)


def _circle_intersections(c1, c2):
    (x1, y1, r1), (x2, y2, r2) = c1, c2
    d = math.hypot(x2 - x1, y2 - y1)
    if d == 0 or d > r1 + r2 or d < abs(r1 - r2):
        raise ContourNotFound("lens arcs do not intersect")
    a = (r1**2 - r2**2 + d**2) / (2 * d)
    h = math.sqrt(max(r1**2 - a**2, 0.0))
    xm, ym = x1 + a * (x2 - x1) / d, y1 + a * (y2 - y1) / d
    ox, oy = h * (y2 - y1) / d, -h * (x2 - x1) / d
    return np.array([xm + ox, ym + oy]), np.array([xm - ox, ym - oy])


def _arc_tangent(circle, point, toward):
    xc, yc, _ = circle
    radial = point - np.array([xc, yc])
    t = _unit(np.array([-radial[1], radial[0]]))
    return t if np.dot(t, toward - point) > 0 else -t


def _line_or_arc_tangent(pts, point):
    # Straight-line fit (principal direction); the 2|3 interface is flat at
    # equilibrium and a circle fit is ill-conditioned there.
    centre = pts.mean(axis=0)
    _, _, vt = np.linalg.svd(pts - centre)
    t = vt[0]
    return t if np.dot(t, centre - point) > 0 else -t


def lens_angles(c, grid: Grid, epsilon: float, threshold: float = 0.05,
                exclusion: float = 3.0):
    """Angles (degrees) of phases 1, 2, 3 at the two triple junctions of a lens.

    Phase 1 is the lens, phase 2 lies above it and phase 3 below.  Returns a
    list with one ``(theta1, theta2, theta3)`` tuple per junction, ordered
    left to right.
    """
    p1 = contour_points(c[0], grid)
    c2s, c3s = sample(c[1], grid, p1), sample(c[2], grid, p1)
    upper = p1[(c3s < threshold) & (c2s > c3s)]
    lower = p1[(c2s < threshold) & (c3s > c2s)]
    diff = c[1] - c[2]
    p23 = contour_points(diff, grid, 0.0)
    p23 = p23[sample(c[0], grid, p23) < threshold]
    if len(upper) < 3 or len(lower) < 3 or len(p23) < 3:
        raise ContourNotFound("could not separate the three interfaces of the lens")
    circ12 = fit_circle(upper)
    circ13 = fit_circle(lower)
    junctions = sorted(_circle_intersections(circ12, circ13), key=lambda q: q[0])
    out = []
    for jpt in junctions:
        def near(pts):
            d = np.hypot(pts[:, 0] - jpt[0], pts[:, 1] - jpt[1])
            keep = d > exclusion * epsilon
            return pts[keep], d[keep]

        up, _ = near(upper)
        lo, _ = near(lower)
        mid, dmid = near(p23)
        # Only the 2|3 points on this junction's side of the lens.
        side = np.sign(jpt[0] - 0.5 * (circ12[0] + circ13[0]))
        mid = mid[np.sign(mid[:, 0] - jpt[0]) == side]
        if len(mid) < 3:
            raise ContourNotFound("no 2|3 interface next to the junction")
        mid = mid[np.argsort(np.hypot(*(mid - jpt).T))][: max(3, len(mid) // 2)]
        t12 = _arc_tangent(circ12, jpt, up.mean(axis=0))
        t13 = _arc_tangent(circ13, jpt, lo.mean(axis=0))
        t23 = _line_or_arc_tangent(mid, jpt)
        out.append(_wedge_angles(t12, t13, t23))
    return out


def _wedge_angles(t12, t13, t23):
    """Angles of the wedges bounded by three rays: phases 1, 2, 3."""
    ang = {k: math.atan2(v[1], v[0]) for k, v in (("12", t12), ("13", t13), ("23", t23))}
    order = sorted(ang, key=ang.get)
    wedges = {}
    for a, b in zip(order, order[1:] + order[:1]):
        span = (ang[b] - ang[a]) % (2 * math.pi)
        shared = (set(a) & set(b)).pop()
        wedges[int(shared)] = math.degrees(span)
    return wedges[1], wedges[2], wedges[3]


def interface_energy(c, grid: Grid, params: MaterialParams, length: float | None = None):
    """Free energy per unit interface length for a planar interface."""
    return free_energy(c, params, grid) / (length if length is not None else grid.ly)


def measure_snapshot(snapshot, quantity: str):
    """Dispatch for the ``measure`` command."""
    eps = float(snapshot.meta.get("epsilon", 0.05))
    c = snapshot.c
    if quantity == "angle":
        return {"theta": contact_angle(c, snapshot.grid, eps)}
    if quantity == "lens":
        res = lens_angles(c, snapshot.grid, eps)
        return {f"junction{k}_theta{i + 1}": v for k, th in enumerate(res) for i, v in enumerate(th)}
    if quantity == "sigma":
        m = snapshot.meta
        params = validate(MaterialParams(m["gamma12"], m["gamma13"], m["gamma23"], epsilon=eps))
        return {"sigma": interface_energy(c, snapshot.grid, params)}
    raise ValueError(f"unknown quantity {quantity!r}")
