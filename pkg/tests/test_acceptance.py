"""Acceptance criteria.  Each test prints one ``criterion N: PASS|FAIL`` line;
the lines are repeated in the pytest terminal summary."""

import math
import time

import numpy as np
import pytest

from tricap.audit import identity_check, ledger, record_residual
from tricap.config import parse_config
from tricap.energy import free_energy, variational_derivative
from tricap.grid import Grid, integrate
from tricap.material import MaterialParams, validate
from tricap.measure import contact_angle, interface_energy, lens_angles
from tricap.runner import run
from tricap.scenarios import build_initial_state, vibration_period
from tricap.solid import (SolidParams, advance_solid, first_piola, solid_energy,
                          strain_energy_density, tip_displacement, traction_power)
from tricap.stepper import Stepper

RESULTS = {}


def report(n, ok, detail):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} {detail}"
    RESULTS[n] = line
    print(line)
    assert ok, line


def simulate(text, dt=None, steps=None):
    """Step a fluid scenario, returning per-step ledgers and monitored invariants."""
    cfg = parse_config(text)
    state = build_initial_state(cfg)
    st = Stepper(state.grid, state.params, state.walls, solve_flow=cfg.get("flow", "enabled"))
    dt = dt or cfg.get("time", "dt")
    steps = steps or cfg.get("time", "steps")
    mass0 = np.array([integrate(ci, state.grid) for ci in state.c])
    # an absent phase has no mass of its own; measure its drift against the domain
    scale = np.where(mass0 != 0, np.abs(mass0), state.grid.lx * state.grid.ly)
    prev = ledger(state)
    out = {"ledgers": [prev], "sum_err": 0.0, "mass_err": 0.0, "c3": np.abs(state.c[2]).max()}
    for _ in range(steps):
        state = st.step(state, dt)
        led = record_residual(prev, ledger(state), dt)
        out["ledgers"].append(led)
        mass = np.array([integrate(ci, state.grid) for ci in state.c])
        out["sum_err"] = max(out["sum_err"], float(np.abs(1 - state.c.sum(axis=0)).max()))
        out["mass_err"] = max(out["mass_err"], float(np.max(np.abs(mass - mass0) / scale)))
        out["c3"] = max(out["c3"], float(np.abs(state.c[2]).max()))
        prev = led
    out["state"] = state
    return out


SPINODAL = "[scenario]\nname = spinodal\nseed = 1\n[grid]\nnx = 64\nny = 64\n"


@pytest.fixture(scope="module")
def spinodal_run():
    t0 = time.perf_counter()
    res = simulate(SPINODAL, dt=2e-4, steps=500)
    res["elapsed"] = time.perf_counter() - t0
    return res


def integrated_residual(res, dt):
    return sum(abs(led.residual) for led in res["ledgers"][1:]) * dt


def test_criterion_1_dissipation_law(spinodal_run):
    e = np.array([led.total for led in spinodal_run["ledgers"]])
    worst = float(np.max((e[1:] - e[:-1]) / np.abs(e[:-1])))
    half = simulate(SPINODAL, dt=1e-4, steps=1000)
    ratio = integrated_residual(spinodal_run, 2e-4) / integrated_residual(half, 1e-4)
    ok = worst <= 1e-10 and ratio >= 1.8 and spinodal_run["elapsed"] <= 120
    report(1, ok, f"max relative energy increase {worst:.2e} (<= 1e-10), "
                  f"residual ratio dt/(dt/2) {ratio:.3f} (>= 1.8), "
                  f"runtime {spinodal_run['elapsed']:.1f}s (<= 120s)")


def test_criterion_2_sum_and_mass(spinodal_run):
    s, m = spinodal_run["sum_err"], spinodal_run["mass_err"]
    report(2, s <= 1e-10 and m <= 1e-12,
           f"max|1 - sum c| {s:.2e} (<= 1e-10), relative mass drift {m:.2e} (<= 1e-12)")


def test_criterion_3_variational_derivative():
    grid = Grid(32, 32)
    p = validate(MaterialParams(2.0, 3.0, 4.0, epsilon=0.1))
    rng = np.random.default_rng(11)
    X, Y = grid.cell_centers()
    worst = 0.0
    for _ in range(5):
        a = rng.uniform(0, 2 * np.pi, 6)
        c1 = 0.4 + 0.2 * np.sin(2 * np.pi * X + a[0]) * np.cos(2 * np.pi * Y + a[1])
        c2 = 0.3 + 0.1 * np.sin(4 * np.pi * X + a[2]) + 0.05 * np.cos(2 * np.pi * Y + a[3])
        c = np.stack([c1, c2, 1 - c1 - c2])
        for i in range(3):
            dc = np.zeros_like(c)
            dc[i] = np.exp(np.cos(2 * np.pi * X + a[4]) * np.sin(4 * np.pi * Y + a[5]))
            theta = 1e-5
            fd = (free_energy(c + theta * dc, p, grid) - free_energy(c - theta * dc, p, grid)) / (2 * theta)
            exact = integrate(variational_derivative(c[i], p.sigmas[i], p, grid) * dc[i], grid)
            worst = max(worst, abs(fd - exact) / abs(exact))
    report(3, worst <= 1e-6, f"max relative mismatch {worst:.2e} (<= 1e-6)")


def test_criterion_4_stress_identity():
    p = validate(MaterialParams(2.0, 3.0, 4.0, epsilon=0.2))
    errs = []
    for n in (32, 64, 128, 256):
        grid = Grid(n, n)
        X, Y = grid.cell_centers()
        c1 = 0.4 + 0.2 * np.sin(2 * np.pi * X) * np.cos(2 * np.pi * Y)
        c2 = 0.3 + 0.15 * np.cos(2 * np.pi * (X + 2 * Y))
        errs.append(identity_check(np.stack([c1, c2, 1 - c1 - c2]), p, grid))
    orders = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    ok = bool(np.all(np.abs(orders - 2.0) <= 0.3))
    report(4, ok, "orders over 32->64->128->256: " + ", ".join(f"{o:.3f}" for o in orders)
           + " (2.0 +- 0.3)")


@pytest.fixture(scope="module")
def interface_run():
    return simulate("[scenario]\nname = interface1d\n", steps=2000)


def test_criterion_5_interface_profile(interface_run):
    s = interface_run["state"]
    eps = s.params.epsilon
    exact = 0.5 * (1 + np.tanh(2 * s.grid.xc / eps))
    linf = float(np.abs(s.c[0] - exact[:, None]).max())
    sigma = interface_energy(s.c, s.grid, s.params)
    err = abs(sigma - s.params.gamma12) / s.params.gamma12
    report(5, linf <= 0.02 and err <= 0.02,
           f"profile L-inf {linf:.4f} (<= 0.02), excess energy {sigma:.4f} vs gamma12 "
           f"{s.params.gamma12} (rel {err:.4f} <= 0.02)")


def test_criterion_6_neumann_triangle(tmp_path):
    t0 = time.perf_counter()
    res = run(parse_config("[scenario]\nname = lens\n"), out_dir=tmp_path)
    elapsed = time.perf_counter() - t0
    s = res.state
    angles = lens_angles(s.c, s.grid, s.params.epsilon)
    flat = [a for junction in angles for a in junction]
    worst = max(abs(a - 120.0) for a in flat)
    text = "; ".join("(" + ", ".join(f"{a:.2f}" for a in j) + ")" for j in angles)
    report(6, worst <= 5.0 and elapsed <= 600,
           f"angles {text} deg, max deviation {worst:.2f} (<= 5), runtime {elapsed:.0f}s (<= 600s)")


YOUNG = {}


@pytest.mark.parametrize("delta", [0.0, 0.5, -0.5])
def test_criterion_7_young(delta, tmp_path):
    text = f"[scenario]\nname = sessile_drop\n[walls]\nbottom = 0, {delta}, 0\n"
    res = run(parse_config(text), out_dir=tmp_path)
    s = res.state
    theta = contact_angle(s.c, s.grid, s.params.epsilon)
    YOUNG[delta] = (math.cos(math.radians(theta)), theta)
    ok = abs(YOUNG[delta][0] - delta) <= 0.1
    if len(YOUNG) == 3 or not ok:
        ok = ok and all(abs(v[0] - d) <= 0.1 for d, v in YOUNG.items())
        report(7, ok, "; ".join(f"target {d:+.1f}: cos {v[0]:+.3f} (theta {v[1]:.1f} deg)"
                                for d, v in sorted(YOUNG.items())) + " (tolerance 0.1)")


def test_criterion_8_well_balanced():
    res = simulate("[scenario]\nname = interface1d\n", steps=100)
    vmax = max(res["state"].v.max_abs(), 0.0)
    report(8, vmax <= 1e-10, f"max|v| after 100 steps {vmax:.2e} (<= 1e-10)")


def test_criterion_9_stokes_decay():
    res = simulate("[scenario]\nname = stokes_decay\n", steps=500)
    t = np.array([led.t for led in res["ledgers"]])
    ke = np.array([led.ke_fluid for led in res["ledgers"]])
    rate = -np.polyfit(t, np.log(ke), 1)[0]
    p = res["state"].params
    expect = 2 * p.eta * (2 * math.pi) ** 2 / p.rho
    err = abs(rate - expect) / expect
    report(9, err <= 0.02, f"decay rate {rate:.4f} vs {expect:.4f} (rel {err:.4f} <= 0.02)")


def _traction_mismatch(refine):
    cfg = parse_config("[scenario]\nname = solid_traction\n")
    s = build_initial_state(cfg)
    end = cfg.get("time", "end_time")
    n = 200 * refine
    dt = end / n
    e0, p0, work = sum(solid_energy(s)), traction_power(s), 0.0
    for _ in range(n):
        s = advance_solid(s, dt)
        p1 = traction_power(s)
        work += 0.5 * dt * (p0 + p1)
        p0 = p1
    return abs(sum(solid_energy(s)) - e0 - work)


def test_criterion_10_solid_energy():
    errs = [_traction_mismatch(r) for r in (1, 2, 4)]
    orders = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    cfg = parse_config("[scenario]\nname = solid_vibration\n")
    s = build_initial_state(cfg)
    period = vibration_period(s.mesh, s.params)
    e0 = sum(solid_energy(s))
    dt = 0.5 * 0.8 * s.mesh.h_min / s.params.wave_speed
    t, tip, drift = [], [], 0.0
    while s.time < 10 * period:
        s = advance_solid(s, dt)
        t.append(s.time)
        tip.append(tip_displacement(s))
        drift = max(drift, abs(sum(solid_energy(s)) - e0) / e0)
    tip = np.array(tip)
    k = np.where((tip[:-1] < 0) & (tip[1:] >= 0))[0]
    tt = np.array(t)
    cross = tt[k] - tip[k] * (tt[k + 1] - tt[k]) / (tip[k + 1] - tip[k])
    measured = float(np.mean(np.diff(cross)))
    perr = abs(measured - period) / period
    rng = np.random.default_rng(5)
    p = SolidParams(1.3, 2.1, 1.0)
    fd_err = 0.0
    for _ in range(20):
        F = np.eye(2) + 0.3 * rng.standard_normal((2, 2))
        if np.linalg.det(F) < 0.2:
            continue
        P = first_piola(F, p)
        fd = np.zeros((2, 2))
        for i in range(2):
            for j in range(2):
                d = np.zeros((2, 2))
                d[i, j] = 1e-6
                fd[i, j] = (strain_energy_density(F + d, p) - strain_energy_density(F - d, p)) / 2e-6
        fd_err = max(fd_err, np.abs(fd - P).max() / np.abs(P).max())
    ok = bool(np.all(np.abs(orders - 2.0) <= 0.3)) and drift <= 0.01 and perr <= 0.03 and fd_err <= 1e-6
    report(10, ok, "traction identity orders " + ", ".join(f"{o:.3f}" for o in orders)
           + f" (2 +- 0.3); vibration drift {drift:.2e} over 10 periods (<= 0.01), "
             f"period error {perr:.4f} (<= 0.03); dP/dF mismatch {fd_err:.2e} (<= 1e-6)")


def test_criterion_11_binary_reduction():
    res = simulate(SPINODAL + "[init]\nbinary = true\n", dt=2e-4, steps=500)
    report(11, res["c3"] <= 1e-8, f"max|c3| {res['c3']:.2e} (<= 1e-8)")
