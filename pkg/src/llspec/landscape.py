"""Localization landscape: solve H u = 1 on the periodic lattice.

The discretization is the Hamiltonian stencil of `eigensolve`, so the
effective potential V_u = 1/u lives on the same footing as the eigenlevels.
When the spectrum reaches zero or below (Gaussian disorder), V is shifted by
s = -E0 + eps before solving and V_u is reported un-shifted, V_u = 1/u - s.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .disorder import Potential
from .eigensolve import apply_hamiltonian, ground_energy, stencil
from .grid import Grid, NumericalError, ParameterError

RESIDUAL_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class Landscape:
    grid: Grid
    u: np.ndarray
    v_u: np.ndarray
    shift: float
    epsilon: float
    ground_energy_used: float
    residual: float

    @property
    def n(self) -> int:
        return self.grid.n


def landscape_residual(potential: Potential, u: np.ndarray, shift: float = 0.0) -> float:
    """max_n |((H + s) u)_n - 1|."""
    return float(np.max(np.abs(apply_hamiltonian(potential, u) + shift * u - 1.0)))


def solve_landscape(
    potential: Potential,
    epsilon_fraction: float = 0.1,
    *,
    shift: float | None = None,
    e0: float | None = None,
) -> Landscape:
    """Landscape u and effective potential of one realization.

    `shift` forces a given s (skipping the ground-state test); `e0` supplies a
    precomputed ground energy.
    """
    if not epsilon_fraction > 0:
        raise ParameterError(f"epsilon fraction must be positive, got {epsilon_fraction}")
    eps = epsilon_fraction * potential.v0
    used = math.nan
    if shift is None:
        e0 = ground_energy(potential) if e0 is None else float(e0)
        if e0 <= 0:
            shift, used = -e0 + eps, e0
        else:
            shift = 0.0
    diag, beta = stencil(potential)
    diag = diag + shift
    rhs = np.ones(potential.grid.n)
    u = _kernels.cyclic_solve(diag, beta, rhs)
    # one step of iterative refinement
    r = rhs - (apply_hamiltonian(potential, u) + shift * u)
    u = u + _kernels.cyclic_solve(diag, beta, r)
    res = landscape_residual(potential, u, shift)
    if not np.all(np.isfinite(u)) or np.any(u <= 0) or res > RESIDUAL_TOL:
        raise NumericalError(
            f"landscape solve failed (min u={np.min(u):.3g}, residual={res:.3g}); "
            "the shifted operator is not positive, increase epsilon"
        )
    u.setflags(write=False)
    v_u = 1.0 / u - shift
    v_u.setflags(write=False)
    return Landscape(potential.grid, u, v_u, float(shift), eps, used, res)


def idos_weyl(v, grid: Grid, energy: float) -> float:
    """Phase-space volume of {k^2/2 + v(x) <= E} over 2*pi (a state count).

    Divide by L for the count per unit length.
    """
    if not np.isfinite(energy):
        raise ParameterError(f"energy must be finite, got {energy}")
    v = np.asarray(v, dtype=float)
    kmax = np.sqrt(2.0 * np.maximum(energy - v, 0.0))
    return float(grid.dx * np.sum(2.0 * kmax) / (2 * np.pi))
