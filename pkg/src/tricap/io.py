"""Snapshot output: legacy ASCII VTK structured points and CSV slices."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .errors import IoFailure, ParseError
from .grid import Grid, to_cell_centers

# Metadata written into the VTK title line so a snapshot is self-describing.
_META_KEYS = ("t", "step", "epsilon", "gamma12", "gamma13", "gamma23", "x_bc", "y_bc")


@dataclass
class Snapshot:
    grid: Grid
    meta: dict
    scalars: dict = field(default_factory=dict)
    vectors: dict = field(default_factory=dict)

    @property
    def c(self) -> np.ndarray:
        return np.stack([self.scalars["c1"], self.scalars["c2"], self.scalars["c3"]])


def write_vtk(path, grid: Grid, scalars: dict, vectors: dict | None = None, meta: dict | None = None):
    """Write cell-centred fields to a legacy ASCII ``STRUCTURED_POINTS`` file."""
    meta = dict(meta or {})
    meta.setdefault("x_bc", grid.x_bc)
    meta.setdefault("y_bc", grid.y_bc)
    title = "tricap " + " ".join(f"{k}={meta[k]}" for k in _META_KEYS if k in meta)
    lines = ["# vtk DataFile Version 3.0", title[:255], "ASCII", "DATASET STRUCTURED_POINTS",
             f"DIMENSIONS {grid.nx + 1} {grid.ny + 1} 1",
             f"ORIGIN {grid.x0:.17g} {grid.y0:.17g} 0",
             f"SPACING {grid.hx:.17g} {grid.hy:.17g} 1",
             f"CELL_DATA {grid.nx * grid.ny}"]
    for name, f in scalars.items():
        lines += [f"SCALARS {name} double 1", "LOOKUP_TABLE default"]
        lines += [f"{v:.17g}" for v in np.asarray(f).T.ravel()]
    for name, (fx, fy) in (vectors or {}).items():
        lines.append(f"VECTORS {name} double")
        lines += [f"{a:.17g} {b:.17g} 0" for a, b in zip(np.asarray(fx).T.ravel(),
                                                           np.asarray(fy).T.ravel())]
    try:
        with open(path, "w") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def write_state(path, state, mu=None):
    """Snapshot of a fluid state: phases, optional potentials, pressure, velocity."""
    grid = state.grid
    scalars = {f"c{i + 1}": state.c[i] for i in range(3)}
    if mu is not None:
        scalars.update({f"mu{i + 1}": mu[i] for i in range(3)})
    scalars["p"] = state.p
    p = state.params
    meta = {"t": f"{state.time:.17g}", "step": state.step, "epsilon": p.epsilon,
            "gamma12": p.gamma12, "gamma13": p.gamma13, "gamma23": p.gamma23}
    write_vtk(path, grid, scalars, {"velocity": to_cell_centers(state.v, grid)}, meta)


def read_vtk(path) -> Snapshot:
    """Read a snapshot written by :func:`write_vtk`."""
    try:
        with open(path) as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    if not lines or not lines[0].startswith("# vtk"):
        raise ParseError(f"{path}: not a legacy VTK file", line=1)
    meta = {}
    for tok in lines[1].split()[1:]:
        if "=" in tok:
            k, v = tok.split("=", 1)
            meta[k] = v
    header = {}
    k = 3
    while k < len(lines) and not lines[k].startswith("CELL_DATA"):
        parts = lines[k].split()
        if parts:
            header[parts[0]] = parts[1:]
        k += 1
    nx, ny = int(header["DIMENSIONS"][0]) - 1, int(header["DIMENSIONS"][1]) - 1
    x0, y0 = (float(v) for v in header["ORIGIN"][:2])
    hx, hy = (float(v) for v in header["SPACING"][:2])
    grid = Grid(nx, ny, nx * hx, ny * hy, meta.get("x_bc", "periodic"),
                meta.get("y_bc", "periodic"), x0, y0)
    n = nx * ny
    scalars, vectors = {}, {}
    k += 1
    while k < len(lines):
        parts = lines[k].split()
        if not parts:
            k += 1
            continue
        if parts[0] == "SCALARS":
            vals = np.array([float(v) for v in lines[k + 2:k + 2 + n]])
            scalars[parts[1]] = vals.reshape(ny, nx).T
            k += 2 + n
        elif parts[0] == "VECTORS":
            vals = np.array([[float(v) for v in ln.split()] for ln in lines[k + 1:k + 1 + n]])
            vectors[parts[1]] = (vals[:, 0].reshape(ny, nx).T, vals[:, 1].reshape(ny, nx).T)
            k += 1 + n
        else:
            raise ParseError(f"{path}: unexpected section {parts[0]!r}", line=k + 1)
    for key in ("t", "epsilon", "gamma12", "gamma13", "gamma23"):
        if key in meta:
            meta[key] = float(meta[key])
    return Snapshot(grid, meta, scalars, vectors)


def write_slice_csv(path, coords, columns: dict, coord: str = "x"):
    """Write a 1D slice: first column the coordinate, then one column per field."""
    try:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow([coord] + list(columns))
            for k, x in enumerate(coords):
                w.writerow([f"{x:.17g}"] + [f"{columns[name][k]:.17g}" for name in columns])
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc
