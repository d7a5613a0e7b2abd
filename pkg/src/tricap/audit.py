"""Energy bookkeeping: every term of the total energy, the dissipation
rates, the discrete balance residual and a check of the capillary stress
identity.  The audit only observes; it never feeds back into the solver.
"""

from __future__ import annotations

import csv
import math
from dataclasses import asdict, dataclass

import numpy as np

from .energy import (chemical_dissipation, chemical_potentials, collocated_gradient,
                     energy_density, free_energy, korteweg_divergence)
from .errors import IoFailure
from .stepper import FluidState, kinetic_energy, viscous_dissipation
from .wetting import total_wall_energy

CSV_COLUMNS = ("t", "ke_fluid", "free_energy", "wall_energy", "ke_solid", "strain_solid",
               "total", "d_chem", "d_visc", "residual", "residual_rel")


@dataclass
class EnergyLedger:
    t: float
    ke_fluid: float = 0.0
    free_energy: float = 0.0
    wall_energy: float = 0.0
    ke_solid: float = 0.0
    strain_solid: float = 0.0
    d_chem: float = 0.0
    d_visc: float = 0.0
    residual: float = math.nan
    residual_rel: float = math.nan
    power: float = 0.0  # external power (solid traction); not a CSV column

    @property
    def total(self) -> float:
        return (self.ke_fluid + self.free_energy + self.wall_energy
                + self.ke_solid + self.strain_solid)

    @property
    def dissipation(self) -> float:
        return self.d_chem + self.d_visc

    def row(self) -> dict:
        d = asdict(self)
        d["total"] = self.total
        return {k: d[k] for k in CSV_COLUMNS}


def ledger(state: FluidState | None = None, solid=None, t=None) -> EnergyLedger:
    """Evaluate every energy component and dissipation rate of one state."""
    if state is None and solid is None:
        raise ValueError("need a fluid state, a solid state, or both")
    out = EnergyLedger(t if t is not None else (state.time if state is not None else solid.time))
    if state is not None:
        g, p = state.grid, state.params
        out.ke_fluid = kinetic_energy(state.v, g, p.rho)
        out.free_energy = free_energy(state.c, p, g)
        out.wall_energy = total_wall_energy(state.c, g, state.walls)
        mu = chemical_potentials(state.c, p, g, state.walls).mu
        out.d_chem = chemical_dissipation(mu, p, g)
        out.d_visc = viscous_dissipation(state.v, g, p.eta)
    if solid is not None:
        from .solid import solid_energy, traction_power
        out.ke_solid, out.strain_solid = solid_energy(solid)
        out.power = traction_power(solid)
    return out


def balance_residual(before: EnergyLedger, after: EnergyLedger, dt: float):
    """Discrete residual of the dissipation law over one step.

    ``r = (E1 - E0)/dt + (D0 + D1)/2 - (P0 + P1)/2`` where ``D`` is the total
    dissipation rate and ``P`` any external power input.  Returns ``r`` and
    ``r / |E1|``.
    """
    r = ((after.total - before.total) / dt
         + 0.5 * (before.dissipation + after.dissipation)
         - 0.5 * (before.power + after.power))
    scale = abs(after.total)
    return r, (r / scale if scale > 0 else math.inf if r else 0.0)


def record_residual(before: EnergyLedger, after: EnergyLedger, dt: float) -> EnergyLedger:
    after.residual, after.residual_rel = balance_residual(before, after, dt)
    return after


def identity_residual(c, params, grid):
    """Pointwise residual of the capillary stress identity at cell centres.

    ``div(sum_i (3/4) eps sigma_i grad c_i (x) grad c_i) - grad(Psi)
    + sum_i mu_i grad c_i`` with ``mu_i`` from the chemical potentials.
    Entries within two cells of a wall are NaN.
    """
    mu = chemical_potentials(c, params, grid).mu
    kx, ky = korteweg_divergence(c, params, grid)
    px, py = collocated_gradient(energy_density(c, params, grid), grid)
    rx, ry = kx - px, ky - py
    for ci, mi in zip(c, mu):
        gx, gy = collocated_gradient(ci, grid)
        rx = rx + mi * gx
        ry = ry + mi * gy
    return rx, ry


def identity_check(c, params, grid) -> float:
    """Interior L-infinity norm of :func:`identity_residual`."""
    rx, ry = identity_residual(c, params, grid)
    return float(np.nanmax(np.hypot(rx, ry)))


def emit(ledgers, path) -> None:
    """Write ledgers as CSV with a header row and 17 significant digits."""
    try:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(CSV_COLUMNS)
            for led in ledgers:
                row = led.row()
                w.writerow([f"{row[k]:.17g}" for k in CSV_COLUMNS])
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


class CsvEmitter:
    """Streaming variant of :func:`emit`, one row per ledger."""

    def __init__(self, path):
        try:
            self._fh = open(path, "w", newline="")
        except OSError as exc:
            raise IoFailure(f"cannot write {path}: {exc}") from exc
        self._w = csv.writer(self._fh)
        self._w.writerow(CSV_COLUMNS)

    def write(self, led: EnergyLedger):
        row = led.row()
        self._w.writerow([f"{row[k]:.17g}" for k in CSV_COLUMNS])

    def close(self):
        self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def read_csv(path):
    """Parse an ``energy.csv`` back into a dict of float arrays."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    data = np.array([[float(x) for x in r] for r in body]).reshape(len(body), len(header))
    return {k: data[:, i] for i, k in enumerate(header)}

