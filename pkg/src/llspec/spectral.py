"""Spectral functions A_k(E) = <k| delta(E - H) |k> on uniform energy bins.

Routes
  eigen      exact: eigenpairs weighted by plane-wave overlaps
  cheb       kernel polynomial expansion with Jackson damping
  ll         landscape estimate, histogram of V_u shifted by k^2/2
  classical  histogram of V (deep classical limit at k = 0)
  trappe     Gaussian disorder with its leading quantum correction

Every curve stores bin densities plus the mass that fell outside the bins,
so sum(density * width) + outside = 1.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .disorder import Potential
from .eigensolve import eigs, momentum_overlap, spectrum_bounds, stencil
from .grid import Histogram, ParameterError, bin_weights, uniform_edges
from .landscape import Landscape

METHODS = ("eigen", "cheb", "ll", "classical", "trappe")
CHEB_PAD = 0.01


@dataclass
class SpectralCurve(Histogram):
    k0: float = 0.0
    method: str = "eigen"
    realizations: int = 1
    resolution_warning: bool = False

    def __post_init__(self):
        if self.method not in METHODS:
            raise ParameterError(f"unknown spectral method {self.method!r}")

    def mass(self) -> np.ndarray:
        return self.density * self.width


def default_edges(v0: float, vmin: float, vmax: float, width: float | None = None) -> np.ndarray:
    """Bins of width V0/100 spanning [vmin - V0, vmax + 5 V0]."""
    return uniform_edges(vmin - v0, vmax + 5 * v0, width or v0 / 100)


def _curve(edges, mass, outside, k0, method, **kw) -> SpectralCurve:
    edges = np.asarray(edges, dtype=float)
    width = edges[1] - edges[0]
    return SpectralCurve(edges, np.asarray(mass, dtype=float) / width, count=len(mass),
                         outside=float(outside), k0=float(k0), method=method, **kw)


def _check_edges(edges):
    edges = np.asarray(edges, dtype=float)
    if edges.ndim != 1 or edges.size < 2:
        raise ParameterError("need at least two bin edges")
    w = np.diff(edges)
    if not np.all(w > 0) or np.ptp(w) > 1e-9 * w[0]:
        raise ParameterError("bin edges must be uniform and increasing")
    return edges


def spectral_eigen(potential: Potential, k0: float, edges, method: str = "bisect") -> SpectralCurve:
    """Single-realization A_k0(E) from eigenpairs inside the bin range.

    Only states inside the bins are computed; by completeness the remaining
    weight is reported as `outside`.
    """
    edges = _check_edges(edges)
    potential.grid.momentum_index(k0)
    sol = eigs(potential, (edges[0], edges[-1]), method=method)
    w = momentum_overlap(sol, k0)
    mass, out = bin_weights(sol.energies, w, edges)
    outside = max(0.0, 1.0 - float(np.sum(mass))) + out
    return _curve(edges, mass, outside, k0, "eigen")


# ------------------------------------------------------------ Chebyshev

def jackson_kernel(order: int) -> np.ndarray:
    m = np.arange(order)
    q = np.pi / (order + 1)
    return ((order - m + 1) * np.cos(q * m) + np.sin(q * m) / np.tan(q)) / (order + 1)


def cheb_scale(potential: Potential, pad: float = CHEB_PAD) -> tuple[float, float]:
    """(a, b) with H = a*X + b mapping the analytic spectrum bounds into [-1+pad, 1-pad]."""
    lo, hi = spectrum_bounds(potential)
    return (hi - lo) / (2 * (1 - pad)), (hi + lo) / 2


def cheb_moments(apply, v0: np.ndarray, order: int) -> np.ndarray:
    """mu_m = <v0|T_m(X)|v0>, m < order, for a symmetric operator `apply` = X.

    Uses T_{2m} and T_{2m+1} from products of T_m v0 and T_{m+1} v0 so only
    order/2 operator applications are needed.
    """
    if order < 2:
        raise ParameterError("order must be at least 2")
    mu = np.zeros(order)
    r0 = v0
    r1 = apply(v0)
    mu0 = np.vdot(v0, v0).real
    mu1 = np.vdot(r1, v0).real
    mu[0], mu[1] = mu0, mu1
    for m in range(1, (order + 1) // 2):
        r2 = 2 * apply(r1) - r0
        r0, r1 = r1, r2
        # r0 = T_m v0, r1 = T_{m+1} v0
        if 2 * m < order:
            mu[2 * m] = 2 * np.vdot(r0, r0).real - mu0
        if 2 * m + 1 < order:
            mu[2 * m + 1] = 2 * np.vdot(r1, r0).real - mu1
    return mu


def cheb_cumulative(mu: np.ndarray, g: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Integral of the damped expansion from -1 to x (x in [-1, 1])."""
    theta = np.arccos(np.clip(x, -1.0, 1.0))
    m = np.arange(1, mu.size)
    s = np.sin(np.outer(theta, m)) @ (g[1:] * mu[1:] / m)
    return (g[0] * mu[0] * (np.pi - theta) - 2 * s) / np.pi


def jackson_sigma(order: int, x0) -> np.ndarray:
    """Root-mean-square spread about x0 of a Jackson-damped delta at x0 (scaled units)."""
    g = jackson_kernel(max(order, 3))
    x0 = np.asarray(x0, dtype=float)
    var = (1 - g[2]) / 2 + x0**2 * (g[2] - 2 * g[1] + 1)
    return np.sqrt(np.maximum(var, 0.0))


def spectral_cheb(potential: Potential, k0: float, edges, order: int = 1024) -> SpectralCurve:
    """A_k0(E) by the kernel polynomial method (no matrix is formed)."""
    if order < 64:
        raise ParameterError(f"Chebyshev order must be >= 64, got {order}")
    edges = _check_edges(edges)
    grid = potential.grid
    grid.momentum_index(k0)
    a, b = cheb_scale(potential)
    diag, beta = stencil(potential)
    dscaled = (diag - b) / a
    bscaled = beta / a

    def apply(v):
        return dscaled * v + bscaled * (np.roll(v, 1) + np.roll(v, -1))

    v0 = np.exp(1j * k0 * grid.x) / np.sqrt(grid.n)
    mu = cheb_moments(apply, v0, order)
    g = jackson_kernel(order)
    cum = cheb_cumulative(mu, g, (edges - b) / a)
    mass = np.diff(cum)
    outside = 1.0 - float(cum[-1] - cum[0])
    warn = np.pi * a / order > edges[1] - edges[0]
    return _curve(edges, mass, outside, k0, "cheb", resolution_warning=bool(warn),
                  meta={"order": order, "a": a, "b": b})


def cheb_l1_bound(potential: Potential, k0: float, edges, order: int, method: str = "bisect") -> float:
    """Expected L1 gap between the exact and Jackson-broadened binned curves.

    Each exact level of weight w at E spills about w * sigma_J(E) / h of its
    mass out of its bin (h = bin width), and the L1 distance counts the
    spill twice.
    """
    edges = _check_edges(edges)
    a, b = cheb_scale(potential)
    sol = eigs(potential, (edges[0], edges[-1]), method=method)
    w = momentum_overlap(sol, k0)
    sig = a * jackson_sigma(order, (sol.energies - b) / a)
    h = edges[1] - edges[0]
    return float(min(2.0, 2 * np.sum(w * np.minimum(1.0, sig / h))))


# ------------------------------------------------------------ estimators

def spectral_ll(landscape: Landscape, k0: float, edges) -> SpectralCurve:
    """A_k0(E) = P(E - k0^2/2), P the value density of V_u."""
    edges = _check_edges(edges)
    n = landscape.v_u.size
    mass, out = bin_weights(np.asarray(landscape.v_u) + 0.5 * k0**2, 1.0 / n, edges)
    return _curve(edges, mass, out, k0, "ll")


def _samples(ensemble):
    if isinstance(ensemble, Potential):
        ensemble = [ensemble]
    vals = [np.asarray(p.samples if isinstance(p, Potential) else p, dtype=float).ravel() for p in ensemble]
    if not vals:
        raise ParameterError("empty ensemble")
    return vals


def baseline_classical(ensemble, edges) -> SpectralCurve:
    """Pooled value density of V (potentials or raw arrays)."""
    edges = _check_edges(edges)
    vals = _samples(ensemble)
    total = sum(v.size for v in vals)
    mass = np.zeros(edges.size - 1)
    out = 0.0
    for v in vals:
        m, o = bin_weights(v, 1.0 / total, edges)
        mass += m
        out += o
    return _curve(edges, mass, out, 0.0, "classical", realizations=len(vals))


def trappe_density(energy, v0: float) -> np.ndarray:
    """Gaussian disorder at k = 0 with its first quantum correction.

    A(E) = exp(-E^2 / 2V0^2) / (sqrt(2 pi) V0) * (1 - E (3 V0^2 - E^2) / (12 V0^4)).
    """
    e = np.asarray(energy, dtype=float)
    gauss = np.exp(-(e**2) / (2 * v0**2)) / (np.sqrt(2 * np.pi) * v0)
    return gauss * (1 - e * (3 * v0**2 - e**2) / (12 * v0**4))


def baseline_trappe(v0: float, edges) -> SpectralCurve:
    """Corrected Gaussian evaluated at the bin centres."""
    if not v0 > 0:
        raise ParameterError(f"V0 must be positive, got {v0}")
    edges = _check_edges(edges)
    centres = 0.5 * (edges[1:] + edges[:-1])
    dens = trappe_density(centres, v0)
    width = edges[1] - edges[0]
    return SpectralCurve(edges, dens, count=dens.size, outside=max(0.0, 1 - float(np.sum(dens) * width)),
                         k0=0.0, method="trappe")


def l1_distance(a: Histogram, b: Histogram) -> float:
    """Integral of |A - B| over the shared bins."""
    if a.edges.shape != b.edges.shape or not np.allclose(a.edges, b.edges, rtol=0, atol=1e-12):
        raise ParameterError("curves must share identical bins")
    return float(np.sum(np.abs(a.density - b.density)) * a.width)
