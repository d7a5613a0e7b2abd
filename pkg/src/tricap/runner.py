"""Execution loop: stepping, energy ledger, invariant monitors and output files."""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field

import numpy as np

from .audit import CsvEmitter, ledger, record_residual
from .errors import InvariantBreach, IoFailure, TricapError
from .io import write_slice_csv, write_state
from .scenarios import build_initial_state
from .solid import advance_solid, stable_dt, tip_displacement
from .stepper import Stepper, advective_dt_limit, capillary_dt_limit


@dataclass
class RunResult:
    status: int
    out_dir: str
    steps: int = 0
    time: float = 0.0
    reason: str = ""
    ledgers: list = field(default_factory=list)
    state: object = None


def _ensure_dir(path):
    try:
        os.makedirs(path, exist_ok=True)
    except OSError as exc:
        raise IoFailure(f"cannot create {path}: {exc}") from exc


def _plan(cfg, steps_override):
    steps = steps_override if steps_override is not None else cfg.get("time", "steps")
    return steps, cfg.get("time", "end_time")


def _done(k, t, steps, end):
    if steps is not None:
        return k >= steps
    return t >= end * (1.0 - 1e-12)


def _fluid_dt(cfg, stepper, state, end, steps):
    dt = cfg.get("time", "dt")
    if dt is None:
        dt = 0.5 * min(advective_dt_limit(state.v, state.grid),
                       capillary_dt_limit(state.grid, state.params))
    if steps is None:
        dt = min(dt, end - state.time)
    return dt


def _check_fluid(cfg, before, after, state):
    where = f"{cfg.scenario} t={state.time:.6g} step={state.step}"
    if not (np.all(np.isfinite(state.c)) and math.isfinite(state.v.max_abs())):
        raise InvariantBreach(f"NAN: non-finite field at {where}")
    err = float(np.max(np.abs(1.0 - state.c.sum(axis=0))))
    if err > cfg.get("monitor", "sum_tol"):
        raise InvariantBreach(f"SUM: |1 - sum c| = {err:.3e} at {where}")
    if cfg.get("monitor", "check_energy"):
        tol = cfg.get("monitor", "energy_tol")
        if after.total > before.total + tol * abs(before.total):
            raise InvariantBreach(f"ENERGY: E rose from {before.total:.17g} to "
                                  f"{after.total:.17g} at {where}")


def run(cfg, out_dir=None, steps=None, keep_ledgers=False) -> RunResult:
    """Run a scenario and write ``energy.csv``, snapshots and ``run.json``.

    Errors raised inside the loop are recorded in the manifest and re-raised.
    """
    out = out_dir or cfg.get("output", "dir")
    _ensure_dir(out)
    steps, end = _plan(cfg, steps)
    result = RunResult(0, out)
    manifest = {"scenario": cfg.scenario, "seed": cfg.seed}
    try:
        if cfg.is_solid:
            _run_solid(cfg, out, steps, end, result, keep_ledgers)
        else:
            _run_fluid(cfg, out, steps, end, result, keep_ledgers)
    except TricapError as exc:
        result.status = 1
        result.reason = f"{exc.code}: {exc}"
        raise
    finally:
        manifest.update(status=result.status, reason=result.reason, steps=result.steps,
                        time=result.time)
        if result.ledgers:
            last = result.ledgers[-1]
            manifest.update(final_energy=last.total)
        manifest["energy_csv"] = "energy.csv"
        try:
            with open(os.path.join(out, "run.json"), "w") as fh:
                json.dump(manifest, fh, indent=1, sort_keys=True)
                fh.write("\n")
        except OSError as exc:
            raise IoFailure(f"cannot write run manifest: {exc}") from exc
    return result


def _run_fluid(cfg, out, steps, end, result, keep):
    state = build_initial_state(cfg)
    stepper = Stepper(state.grid, state.params, state.walls,
                      solve_flow=cfg.get("flow", "enabled"), poisson=cfg.get("flow", "poisson"))
    cadence = cfg.get("output", "cadence")
    prev = ledger(state)
    prev.residual = prev.residual_rel = 0.0
    result.ledgers = [prev]
    result.state = state

    def snapshot(s):
        write_state(os.path.join(out, f"fields_{s.step:06d}.vtk"), s,
                    stepper.chemical_potentials(s).mu)

    snapshot(state)
    with CsvEmitter(os.path.join(out, "energy.csv")) as csv:
        csv.write(prev)
        while not _done(state.step, state.time, steps, end):
            dt = _fluid_dt(cfg, stepper, state, end, steps)
            state = stepper.step(state, dt)
            led = record_residual(prev, ledger(state), dt)
            csv.write(led)
            result.steps, result.time, result.state = state.step, state.time, state
            if keep:
                result.ledgers.append(led)
            else:
                result.ledgers = [led]
            _check_fluid(cfg, prev, led, state)
            prev = led
            if state.step % cadence == 0:
                snapshot(state)
    if state.step % cadence:
        snapshot(state)


def _run_solid(cfg, out, steps, end, result, keep):
    state = build_initial_state(cfg)
    dt = cfg.get("time", "dt") or 0.5 * stable_dt(state.mesh, state.params)
    prev = ledger(solid=state)
    prev.residual = prev.residual_rel = 0.0
    result.ledgers = [prev]
    result.state = state
    tips = [(state.time, tip_displacement(state, axis=0), tip_displacement(state, axis=1))]
    with CsvEmitter(os.path.join(out, "energy.csv")) as csv:
        csv.write(prev)
        while not _done(state.step, state.time, steps, end):
            h = dt if steps is not None else min(dt, end - state.time)
            state = advance_solid(state, h)
            if not (np.all(np.isfinite(state.u)) and np.all(np.isfinite(state.udot))):
                raise InvariantBreach(f"NAN: non-finite displacement at "
                                      f"{cfg.scenario} t={state.time:.6g}")
            led = record_residual(prev, ledger(solid=state), h)
            csv.write(led)
            tips.append((state.time, tip_displacement(state, axis=0),
                         tip_displacement(state, axis=1)))
            result.steps, result.time, result.state = state.step, state.time, state
            if keep:
                result.ledgers.append(led)
            else:
                result.ledgers = [led]
            prev = led
    t, tx, ty = (np.array(v) for v in zip(*tips))
    write_slice_csv(os.path.join(out, "tip.csv"), t, {"tip_x": tx, "tip_y": ty}, coord="t")
