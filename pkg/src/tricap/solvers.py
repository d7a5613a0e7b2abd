"""Linear solvers for the constant-coefficient grid operators.

Two independent routes are provided:

* :class:`Basis2D` diagonalises the five-point Laplacian with discrete
  Fourier / cosine / sine transforms, so Poisson, Helmholtz and the coupled
  three-phase Cahn-Hilliard systems reduce to tiny per-mode solves.
* :func:`conjugate_gradient` is a plain matrix-free CG used as a fallback
  and as a cross-check of the transform solvers.
"""

from __future__ import annotations

import numpy as np
import scipy.fft as sfft

from .errors import LinearSolveFailure, PoissonSolveFailure
from .grid import Grid, divergence, gradient, laplacian, sync_ghosts

# Axis kinds, named after where the unknowns sit and which ghost rule they use.
#   periodic        n unknowns, wrap-around
#   neumann         n cell-centred unknowns, mirrored ghost (zero normal flux)
#   dirichlet_cell  n cell-centred unknowns, antisymmetric ghost (zero on wall)
#   dirichlet_face  n-1 interior face unknowns, zero on both wall faces
AXIS_KINDS = ("periodic", "neumann", "dirichlet_cell", "dirichlet_face")


def axis_eigenvalues(kind: str, n: int, h: float) -> np.ndarray:
    """Eigenvalues of the 1D second difference for ``n`` cells of size ``h``."""
    if kind == "periodic":
        theta = 2.0 * np.pi * np.arange(n) / n
    elif kind == "neumann":
        theta = np.pi * np.arange(n) / n
    elif kind == "dirichlet_cell":
        theta = np.pi * np.arange(1, n + 1) / n
    elif kind == "dirichlet_face":
        theta = np.pi * np.arange(1, n) / n
    else:
        raise ValueError(f"unknown axis kind {kind!r}")
    return -(2.0 - 2.0 * np.cos(theta)) / h**2


def _forward(a, kind, axis):
    if kind == "periodic":
        return np.fft.fft(a, axis=axis)
    if kind == "neumann":
        return sfft.dct(a, type=2, axis=axis, norm="ortho")
    if kind == "dirichlet_cell":
        return sfft.dst(a, type=2, axis=axis, norm="ortho")
    return sfft.dst(a, type=1, axis=axis, norm="ortho")


def _inverse(a, kind, axis):
    if kind == "periodic":
        return np.fft.ifft(a, axis=axis)
    if kind == "neumann":
        return sfft.idct(a, type=2, axis=axis, norm="ortho")
    if kind == "dirichlet_cell":
        return sfft.idst(a, type=2, axis=axis, norm="ortho")
    return sfft.idst(a, type=1, axis=axis, norm="ortho")


class Basis2D:
    """Tensor-product eigenbasis of the 2D five-point Laplacian."""

    def __init__(self, kinds, n_cells, spacing):
        self.kinds = tuple(kinds)
        ex = axis_eigenvalues(self.kinds[0], n_cells[0], spacing[0])
        ey = axis_eigenvalues(self.kinds[1], n_cells[1], spacing[1])
        self.eigenvalues = ex[:, None] + ey[None, :]
        self.complex = "periodic" in self.kinds

    @property
    def shape(self):
        return self.eigenvalues.shape

    def forward(self, f):
        """Transform the trailing two axes of ``f``."""
        a = _forward(f, self.kinds[0], -2)
        return _forward(a, self.kinds[1], -1)

    def inverse(self, a):
        f = _inverse(a, self.kinds[1], -1)
        f = _inverse(f, self.kinds[0], -2)
        return f.real if self.complex else f


def scalar_basis(grid: Grid) -> Basis2D:
    """Basis for cell-centred scalars with zero-flux walls."""
    kinds = ("periodic" if grid.periodic_x else "neumann",
             "periodic" if grid.periodic_y else "neumann")
    return Basis2D(kinds, (grid.nx, grid.ny), (grid.hx, grid.hy))


def velocity_bases(grid: Grid):
    """Bases for the interior unknowns of the two no-slip velocity components."""
    bx = Basis2D(("periodic" if grid.periodic_x else "dirichlet_face",
                  "periodic" if grid.periodic_y else "dirichlet_cell"),
                 (grid.nx, grid.ny), (grid.hx, grid.hy))
    by = Basis2D(("periodic" if grid.periodic_x else "dirichlet_cell",
                  "periodic" if grid.periodic_y else "dirichlet_face"),
                 (grid.nx, grid.ny), (grid.hx, grid.hy))
    return bx, by


def interior_slices(grid: Grid):
    """Index slices selecting the unknown (non-wall) entries of each face array."""
    sx = (slice(None) if grid.periodic_x else slice(1, -1), slice(None))
    sy = (slice(None), slice(None) if grid.periodic_y else slice(1, -1))
    return sx, sy


def conjugate_gradient(apply_a, b, x0=None, rtol=1e-10, maxiter=None, project=None):
    """Solve ``A x = b`` for symmetric positive (semi-)definite ``A``.

    ``project`` optionally removes null-space components (e.g. the mean for a
    pure-Neumann problem) from the residual each iteration.  Raises
    :class:`LinearSolveFailure` if the relative residual does not reach
    ``rtol`` within ``maxiter`` iterations.
    """
    b = np.asarray(b, dtype=float)
    if project is not None:
        b = project(b)
    x = np.zeros_like(b) if x0 is None else np.array(x0, dtype=float)
    maxiter = maxiter or 10 * b.size
    r = b - apply_a(x)
    if project is not None:
        r = project(r)
    bnorm = np.linalg.norm(b)
    if bnorm == 0.0:
        return np.zeros_like(b), 0
    d = r.copy()
    rr = np.vdot(r, r)
    for k in range(1, maxiter + 1):
        ad = apply_a(d)
        alpha = rr / np.vdot(d, ad)
        x += alpha * d
        r -= alpha * ad
        if project is not None:
            r = project(r)
        rr_new = np.vdot(r, r)
        if np.sqrt(rr_new) <= rtol * bnorm:
            return x, k
        d = r + (rr_new / rr) * d
        rr = rr_new
    raise LinearSolveFailure(
        f"CG stalled at relative residual {np.sqrt(rr) / bnorm:.3e} after {maxiter} iterations")


class PoissonSolver:
    """Solve the zero-flux Poisson problem ``L phi = g`` for cell-centred ``phi``.

    ``L`` is ``divergence(gradient(.))`` on the MAC grid, which with zero
    wall flux is the Neumann five-point Laplacian.  The solution is returned
    with zero mean.
    """

    def __init__(self, grid: Grid, method: str = "spectral", rtol: float = 1e-12):
        self.grid = grid
        self.method = method
        self.rtol = rtol
        if method == "spectral":
            self.basis = scalar_basis(grid)
            lam = self.basis.eigenvalues.copy()
            lam.flat[0] = 1.0
            self._inv = 1.0 / lam
            self._inv.flat[0] = 0.0
        elif method != "cg":
            raise ValueError(f"unknown Poisson method {method!r}")

    def solve(self, g: np.ndarray) -> np.ndarray:
        g = g - g.mean()
        if self.method == "spectral":
            phi = self.basis.inverse(self.basis.forward(g) * self._inv)
            return phi - phi.mean()
        grid = self.grid

        def neg_lap(x):
            return -laplacian(sync_ghosts(x, grid), grid)

        def zero_mean(x):
            return x - x.mean()

        try:
            phi, _ = conjugate_gradient(neg_lap, -g, rtol=self.rtol,
                                        maxiter=10 * (grid.nx + grid.ny), project=zero_mean)
        except LinearSolveFailure as exc:
            raise PoissonSolveFailure(str(exc)) from exc
        return phi - phi.mean()

    def project(self, u, scale: float = 1.0):
        """Helmholtz-project a staggered field onto discretely divergence-free fields.

        Returns ``(u_new, phi)`` with ``L phi = div(u) / scale`` and
        ``u_new = u - scale * grad(phi)``.
        """
        grid = self.grid
        phi = self.solve(divergence(u, grid) / scale)
        g = gradient(sync_ghosts(phi, grid), grid)
        out = u - g * scale
        if not grid.periodic_x:
            out.x[0] = out.x[-1] = 0.0
        if not grid.periodic_y:
            out.y[:, 0] = out.y[:, -1] = 0.0
        return out, phi
