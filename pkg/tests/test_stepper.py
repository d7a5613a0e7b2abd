import dataclasses

import numpy as np
import pytest

from tricap.errors import CflViolation, InvalidParameter
from tricap.grid import Grid, divergence, integrate
from tricap.material import MaterialParams, validate
from tricap.stepper import Stepper, kinetic_energy, quiescent_state, step
from tricap.audit import ledger


def spinodal(n=32, seed=0, **kw):
    grid = Grid(n, n)
    p = validate(MaterialParams(epsilon=0.05, mobility=1e-2, **kw))
    rng = np.random.default_rng(seed)
    c1 = 1 / 3 + 0.01 * rng.uniform(-1, 1, grid.shape)
    c2 = 1 / 3 + 0.01 * rng.uniform(-1, 1, grid.shape)
    return quiescent_state(np.stack([c1, c2, 1 - c1 - c2]), grid, p)


def test_pure_phase_is_fixed_point():
    grid = Grid(16, 16, 1, 1, "wall", "periodic")
    c = np.stack([np.ones(grid.shape), np.zeros(grid.shape), np.zeros(grid.shape)])
    s0 = quiescent_state(c, grid, validate(MaterialParams()))
    s1 = step(s0, 1e-3)
    assert np.abs(s1.c - s0.c).max() < 1e-13
    assert s1.v.max_abs() < 1e-13
    assert s1.time == pytest.approx(1e-3)


def test_mass_sum_and_divergence():
    s = spinodal()
    st = Stepper(s.grid, s.params)
    m0 = np.array([integrate(ci, s.grid) for ci in s.c])
    for _ in range(40):
        s = st.step(s, 5e-4)
        m = np.array([integrate(ci, s.grid) for ci in s.c])
        assert np.abs(m - m0).max() <= 1e-12 * np.abs(m0).max()
        assert np.abs(1 - s.c.sum(axis=0)).max() <= 1e-10
        assert np.abs(divergence(s.v, s.grid)).max() <= 1e-10 * max(s.v.max_abs(), 1e-30) / s.grid.hx


def test_poisson_routes_agree():
    s = spinodal(16)
    a = Stepper(s.grid, s.params, poisson="spectral")
    b = Stepper(s.grid, s.params, poisson="cg")
    sa, sb = s, s
    for _ in range(10):
        sa, sb = a.step(sa, 5e-4), b.step(sb, 5e-4)
    assert np.abs(sa.c - sb.c).max() < 1e-10
    assert (sa.v - sb.v).max_abs() < 1e-10


def test_energy_decreases():
    s = spinodal()
    st = Stepper(s.grid, s.params)
    e = ledger(s).total
    for _ in range(50):
        s = st.step(s, 5e-4)
        e1 = ledger(s).total
        assert e1 <= e + 1e-10 * abs(e)
        e = e1


def _translation_error(n):
    # M = 0 and a uniform velocity: the phase step is pure conservative transport
    grid = Grid(n, 4, 1.0, 4.0 / n)
    p = dataclasses.replace(validate(MaterialParams(epsilon=0.1)), mobility=0.0)
    X, _ = grid.cell_centers()
    blob = 0.5 + 0.25 * np.sin(2 * np.pi * X)
    s = quiescent_state(np.stack([blob, 1 - blob, 0 * X]), grid, p)
    s.v.x[:] = 1.0
    st = Stepper(grid, p, solve_flow=False)
    dt = 0.25 * grid.hx**2
    nsteps = round(1.0 / dt)
    for _ in range(nsteps):
        s = st.step(s, dt)
    return np.abs(s.c[0] - blob).max()


def test_translation_second_order():
    e1, e2 = _translation_error(16), _translation_error(32)
    assert e1 < 0.05
    assert e1 / e2 == pytest.approx(4.0, rel=0.15)


def _conservative_drift(dt, T=0.05):
    s = spinodal(16, seed=2)
    p = dataclasses.replace(s.params, mobility=0.0, eta=0.0)
    X, Y = s.grid.cell_centers()
    c1 = 0.5 + 0.3 * np.sin(2 * np.pi * X) * np.sin(2 * np.pi * Y)
    s = quiescent_state(np.stack([c1, 1 - c1, 0 * c1]), s.grid, p)
    xf, yf = s.grid.xface_centers()
    s.v.x[:] = 0.2 * np.sin(2 * np.pi * yf)
    st = Stepper(s.grid, p)
    e0 = ledger(s).total
    for _ in range(round(T / dt)):
        s = st.step(s, dt)
    return abs(ledger(s).total - e0)


def test_conservative_limit_converges():
    d1, d2 = _conservative_drift(1e-3), _conservative_drift(5e-4)
    assert d2 < 0.6 * d1


def test_dt_guards():
    s = spinodal(16)
    st = Stepper(s.grid, s.params)
    with pytest.raises(InvalidParameter):
        st.step(s, 0.0)
    with pytest.raises(CflViolation):
        st.step(s, 10.0)
    s.v.x[:] = 100.0
    with pytest.raises(CflViolation):
        st.step(s, 1e-3)


def test_kinetic_energy_rigid_translation():
    grid = Grid(8, 8, 2.0, 1.0)
    s = quiescent_state(np.stack([np.ones(grid.shape)] + [np.zeros(grid.shape)] * 2),
                        grid, validate(MaterialParams(rho=3.0)))
    s.v.x[:] = 0.5
    assert kinetic_energy(s.v, grid, 3.0) == pytest.approx(0.5 * 3.0 * 0.25 * 2.0)
