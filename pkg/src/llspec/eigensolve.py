"""Periodic finite-difference Hamiltonian: assembly, eigenpairs, overlaps.

Stencil: (2 psi_n - psi_{n-1} - psi_{n+1}) / (2 dx^2) + V_n psi_n, indices
mod N.  Eigenvectors are normalized with the lattice measure,
dx * sum |phi|^2 = 1, so Riemann sums reproduce continuum integrals.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse
import scipy.sparse.linalg

from . import _kernels
from .disorder import Potential
from .grid import Grid, NumericalError, ParameterError


def stencil(potential: Potential) -> tuple[np.ndarray, float]:
    """(diagonal, hopping) of the periodic Hamiltonian."""
    dx = potential.grid.dx
    return 1.0 / dx**2 + potential.samples, -0.5 / dx**2


def hamiltonian_matrix(potential: Potential) -> np.ndarray:
    diag, beta = stencil(potential)
    n = diag.size
    h = np.diag(diag)
    i = np.arange(n)
    h[i, (i + 1) % n] += beta
    h[(i + 1) % n, i] += beta
    return h


def hamiltonian_sparse(potential: Potential):
    diag, beta = stencil(potential)
    n = diag.size
    i = np.arange(n)
    rows = np.concatenate([i, i, (i + 1) % n])
    cols = np.concatenate([i, (i + 1) % n, i])
    vals = np.concatenate([diag, np.full(n, beta), np.full(n, beta)])
    return scipy.sparse.csr_matrix((vals, (rows, cols)), shape=(n, n))


def apply_hamiltonian(potential: Potential, psi: np.ndarray) -> np.ndarray:
    """H psi for a vector or a stack of column vectors (axis 0 = lattice)."""
    diag, beta = stencil(potential)
    d = diag if psi.ndim == 1 else diag[:, None]
    return d * psi + beta * (np.roll(psi, 1, axis=0) + np.roll(psi, -1, axis=0))


def spectrum_bounds(potential: Potential) -> tuple[float, float]:
    """Gershgorin-type bounds [min V, 2/dx^2 + max V]."""
    v = potential.samples
    return float(v.min()), 2.0 / potential.grid.dx**2 + float(v.max())


@dataclass(frozen=True, eq=False)
class EigenSolution:
    grid: Grid
    energies: np.ndarray
    states: np.ndarray  # columns, dx-normalized
    window: tuple[float, float] | None = None

    def __len__(self):
        return self.energies.size

    def select(self, lo: float, hi: float) -> "EigenSolution":
        m = (self.energies >= lo) & (self.energies <= hi)
        return EigenSolution(self.grid, self.energies[m], self.states[:, m], (lo, hi))


def _check_window(window):
    if window is not None and not window[0] < window[1]:
        raise ParameterError(f"window needs E_lo < E_hi, got {window}")


def eigs(potential: Potential, window=None, method: str = "dense") -> EigenSolution:
    """Eigenpairs of the periodic Hamiltonian, optionally restricted to a window.

    method="dense" diagonalizes the full matrix (LAPACK); method="bisect"
    finds only the eigenvalues inside the window by inertia-count bisection
    and their vectors by inverse iteration, O(N) per eigenpair. The bisect
    path falls back to dense if any residual check fails.
    """
    _check_window(window)
    grid = potential.grid
    if method == "bisect" and window is not None:
        sol = _eigs_bisect(potential, window)
        if sol is not None:
            return sol
    elif method not in ("dense", "bisect"):
        raise ParameterError(f"unknown eigen method {method!r}")
    w, v = np.linalg.eigh(hamiltonian_matrix(potential))
    v = v / np.sqrt(grid.dx)
    sol = EigenSolution(grid, w, v)
    return sol.select(*window) if window is not None else sol


def _eigs_bisect(potential: Potential, window) -> EigenSolution | None:
    grid = potential.grid
    diag, beta = stencil(potential)
    lo, hi = float(window[0]), float(window[1])
    c = _kernels.count_below_many(diag, beta, np.array([lo, np.nextafter(hi, np.inf)]))
    first, count = int(c[0]), int(c[1] - c[0])
    if count == 0:
        return EigenSolution(grid, np.empty(0), np.empty((grid.n, 0)), (lo, hi))
    # coarse bracketing is enough: the Rayleigh quotient after inverse
    # iteration restores full accuracy
    lams = _kernels.bisect_eigenvalues(diag, beta, lo, np.nextafter(hi, np.inf), first, count, 1e-9)
    w, v, res = _kernels.inverse_iteration(diag, beta, lams, 1e-7, 3)
    order = np.argsort(w, kind="stable")
    w, v, res = w[order], v[order].T, res[order]
    if not np.all(res <= 1e-9 * (np.abs(w) + 1)):
        return None
    # the refined values must stay inside the window they were counted in
    w = np.clip(w, lo, hi)
    v = v * np.sign(v[np.argmax(np.abs(v), axis=0), np.arange(v.shape[1])]) / np.sqrt(grid.dx)
    return EigenSolution(grid, w, v, (lo, hi))


def count_below(potential: Potential, energies) -> np.ndarray:
    """Number of eigenvalues strictly below each energy (inertia count)."""
    diag, beta = stencil(potential)
    return _kernels.count_below_many(diag, beta, np.atleast_1d(np.asarray(energies, dtype=float)))


def ground_energy(potential: Potential) -> float:
    """Lowest eigenvalue, to 1e-8 absolute, by bisection on the inertia count."""
    diag, beta = stencil(potential)
    lo, hi = spectrum_bounds(potential)
    lo, hi = lo - 1e-9 * max(1.0, abs(lo)), np.nextafter(hi, np.inf)
    lam = _kernels.bisect_eigenvalues(diag, beta, lo, hi, 0, 1, 1e-13)
    return float(lam[0])


def momentum_overlap(solution: EigenSolution, k0: float) -> np.ndarray:
    """|<k0|phi_a>|^2 with <k0|phi> = dx/sqrt(L) sum_n exp(-i k0 x_n) phi_n.

    Equivalent to sqrt(dx/L) sum_n ... applied to unit-norm vectors.
    """
    grid = solution.grid
    grid.momentum_index(k0)
    wave = np.exp(-1j * k0 * grid.x) * (grid.dx / np.sqrt(grid.length))
    return np.abs(wave @ solution.states) ** 2


def sturm_count(potential: Potential, energy: float) -> int:
    """Independent count: sign changes of leading-minor determinants of H - E.

    Uses the LDL^T inertia of the full dense matrix (scipy ldl), which does
    not share code with the compiled counter.
    """
    h = hamiltonian_matrix(potential) - energy * np.eye(potential.grid.n)
    _, d, _ = scipy.linalg.ldl(h)
    ev = np.linalg.eigvalsh(d)
    return int(np.sum(ev < 0))


def ground_energy_sparse(potential: Potential) -> float:
    """Lowest eigenvalue via shift-invert Lanczos (used as a cross-check)."""
    h = hamiltonian_sparse(potential)
    sigma = spectrum_bounds(potential)[0] - 1.0
    try:
        w = scipy.sparse.linalg.eigsh(h, k=1, sigma=sigma, which="LM", return_eigenvectors=False, tol=0)
    except scipy.sparse.linalg.ArpackError as exc:  # pragma: no cover
        raise NumericalError(str(exc)) from exc
    return float(w[0])
