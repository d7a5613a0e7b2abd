import numpy as np
import pytest
from scipy.integrate import quad, solve_ivp

from tricap.energy import (bulk_density, bulk_derivative, capillary_force, chemical_potentials,
                           free_energy, lagrange_multiplier, variational_derivative)
from tricap.grid import Grid, integrate
from tricap.material import MaterialParams, validate


def params(g=(1.0, 1.0, 1.0), eps=0.1):
    return validate(MaterialParams(*g, epsilon=eps))


def uniform(grid, values):
    return np.stack([np.full(grid.shape, v) for v in values])


def smooth_phases(grid, seed=0):
    rng = np.random.default_rng(seed)
    X, Y = grid.cell_centers()
    a = rng.uniform(0, 2 * np.pi, 4)
    c1 = 0.4 + 0.2 * np.sin(2 * np.pi * X + a[0]) * np.cos(2 * np.pi * Y + a[1])
    c2 = 0.3 + 0.15 * np.cos(4 * np.pi * X + a[2]) + 0.1 * np.sin(2 * np.pi * Y + a[3])
    return np.stack([c1, c2, 1 - c1 - c2])


def test_bulk_density_examples():
    g = Grid(4, 4)
    assert np.all(bulk_density(uniform(g, (1, 0, 0)), params()) == 0)
    assert np.allclose(bulk_density(uniform(g, (0.5, 0.5, 0)), params()), 1 / 16)
    third = uniform(g, (1 / 3, 1 / 3, 1 / 3))
    assert np.allclose(bulk_density(third, params((2, 3, 4))), 2 / 9)


def test_bulk_derivative_examples():
    assert bulk_derivative(0.5, 1.0) == 0
    assert bulk_derivative(0.25, 2.0) == pytest.approx(0.1875)
    assert bulk_derivative(0.0, 3.0) == 0 and bulk_derivative(1.0, 3.0) == 0


def test_variational_derivative_uniform():
    g = Grid(8, 8)
    p = params(eps=0.1)
    assert np.allclose(variational_derivative(np.full(g.shape, 0.5), 1.0, p, g), 0.0)
    assert np.allclose(variational_derivative(np.full(g.shape, 0.25), 2.0, p, g), 22.5)


def test_lagrange_multiplier_examples():
    assert lagrange_multiplier(np.zeros(3), (1, 1, 1)) == 0
    assert lagrange_multiplier(np.array([1.0, 2.0, 6.0]), (1, 1, 1)) == pytest.approx(-3.0)
    assert lagrange_multiplier(np.array([1.0, 0, 0]), (1, 3, 5)) == pytest.approx(-15 / 23)


def test_chemical_potentials_uniform():
    g = Grid(8, 8)
    cp = chemical_potentials(uniform(g, (1, 0, 0)), params(), g)
    assert np.all(cp.mu == 0) and np.all(cp.beta == 0)
    cp = chemical_potentials(uniform(g, (1 / 3,) * 3), params(), g)
    assert np.abs(cp.mu).max() < 1e-12


@pytest.mark.parametrize("bcs", [("periodic", "periodic"), ("wall", "wall")])
def test_mu_weighted_sum_vanishes(bcs):
    g = Grid(24, 16, 1, 1, *bcs)
    p = params((2, 3, 4))
    mu = chemical_potentials(smooth_phases(g), p, g).mu
    assert np.abs(np.tensordot(1 / p.sigmas, mu, axes=1)).max() < 1e-10


def tanh_profile_oracle(eps):
    """Energy per length of the binary equilibrium profile from c' = (4/eps) c (1-c)."""
    sol = solve_ivp(lambda x, c: 4 / eps * c * (1 - c), (0, 6 * eps), [0.5],
                    rtol=1e-12, atol=1e-14, dense_output=True)

    def density(x):
        c = sol.sol(abs(x))[0]
        if x < 0:
            c = 1 - c
        dc = 4 / eps * c * (1 - c)
        # sigma1 = sigma2 = 1, c2 = 1 - c: two identical wells and gradients
        return 12 / eps * c**2 * (1 - c) ** 2 + 2 * 0.375 * eps * dc**2
    return quad(density, -6 * eps, 6 * eps, limit=200, epsabs=1e-13)[0]


def test_tanh_interface_energy():
    eps = 0.05
    oracle = tanh_profile_oracle(eps)
    assert oracle == pytest.approx(1.0, abs=1e-6)
    g = Grid(256, 4, 1.0, 4 / 256, "wall", "periodic", -0.5)
    X, _ = g.cell_centers()
    c1 = 0.5 * (1 + np.tanh(2 * X / eps))
    c = np.stack([c1, 1 - c1, 0 * c1])
    assert free_energy(c, params(eps=eps), g) / g.ly == pytest.approx(oracle, rel=0.01)
    assert free_energy(c, params(eps=2 * eps), g) != pytest.approx(oracle, rel=0.01)


def test_free_energy_nonnegative_and_zero_for_pure():
    g = Grid(16, 16)
    assert free_energy(uniform(g, (0, 1, 0)), params(), g) == 0
    assert free_energy(smooth_phases(g), params((2, 3, 4)), g) > 0


@pytest.mark.parametrize("bcs", [("periodic", "periodic"), ("wall", "wall")])
def test_functional_derivative(bcs):
    g = Grid(32, 32, 1, 1, *bcs)
    p = params((2, 3, 4), eps=0.1)
    c = smooth_phases(g, 3)
    X, Y = g.cell_centers()
    bump = np.sin(np.pi * X) ** 4 * np.sin(np.pi * Y) ** 4
    theta = 1e-5
    for i in range(3):
        dc = np.zeros_like(c)
        dc[i] = bump * (1 + 0.5 * np.cos(6 * X))
        fd = (free_energy(c + theta * dc, p, g) - free_energy(c - theta * dc, p, g)) / (2 * theta)
        exact = integrate(variational_derivative(c[i], p.sigmas[i], p, g) * dc[i], g)
        assert fd == pytest.approx(exact, rel=1e-6)


def test_capillary_force_uniform_is_zero():
    g = Grid(8, 8, 1, 1, "wall", "periodic")
    c = uniform(g, (0.2, 0.3, 0.5))
    mu = chemical_potentials(c, params(), g).mu
    assert capillary_force(c, mu, g).max_abs() == 0


def test_permutation_equivariance():
    g = Grid(16, 16)
    c = smooth_phases(g, 5)
    p = params((2, 3, 4))       # sigmas (1, 3, 5)
    q = params((3, 2, 4))       # fluids 2 and 3 swapped: sigmas (1, 5, 3)
    mu = chemical_potentials(c, p, g).mu
    mu_swapped = chemical_potentials(c[[0, 2, 1]], q, g).mu
    assert np.allclose(mu_swapped, mu[[0, 2, 1]], atol=1e-10)


def _interface_mu_spread(n):
    eps = 0.1
    g = Grid(n, 4, 1.0, 4 / n, "wall", "periodic", -0.5)
    X, _ = g.cell_centers()
    c1 = 0.5 * (1 + np.tanh(2 * X / eps))
    mu = chemical_potentials(np.stack([c1, 1 - c1, 0 * c1]), params(eps=eps), g).mu
    return max(np.ptp(mu[0]), np.ptp(mu[1]))


def test_equilibrium_profile_has_constant_mu():
    e1, e2 = _interface_mu_spread(64), _interface_mu_spread(128)
    assert e2 < e1 / 3
