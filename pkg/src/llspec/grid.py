"""Periodic 1D lattice and binned densities.

Units: hbar = m = 1 and the disorder correlation length sigma = 1, so the
correlation energy is 1 and the disorder strength eta equals V0.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class ParameterError(ValueError):
    """Invalid user-supplied parameter (CLI exit code 2)."""


class NumericalError(RuntimeError):
    """A solve that cannot produce a valid result (CLI exit code 3)."""


@dataclass(frozen=True)
class Grid:
    """Periodic lattice x_n = n*dx, n = 0..N-1, with N = round(L/dx) even."""

    length: float
    dx: float

    def __post_init__(self):
        if not (self.length > 0 and self.dx > 0):
            raise ParameterError(f"grid needs L > 0 and dx > 0, got L={self.length}, dx={self.dx}")
        n = int(round(self.length / self.dx))
        if n < 2 or abs(n * self.dx - self.length) > 1e-9 * self.length:
            raise ParameterError(f"L={self.length} is not an integer multiple of dx={self.dx}")
        if n % 2:
            raise ParameterError(f"point count N={n} must be even")

    @classmethod
    def from_points(cls, n: int, dx: float) -> "Grid":
        return cls(n * dx, dx)

    @property
    def n(self) -> int:
        return int(round(self.length / self.dx))

    @property
    def x(self) -> np.ndarray:
        return np.arange(self.n) * self.dx

    @property
    def dk(self) -> float:
        return 2 * np.pi / self.length

    @property
    def k(self) -> np.ndarray:
        """Momentum lattice 2*pi*j/L for j in [-N/2, N/2), ascending."""
        return self.dk * np.arange(-self.n // 2, self.n // 2)

    @property
    def volume(self) -> float:
        return self.length

    def momentum_index(self, k0: float) -> int:
        """Integer j with k0 = 2*pi*j/L; raises if k0 is off the lattice."""
        j = k0 / self.dk
        ji = int(round(j))
        if abs(j - ji) > 1e-8 * max(1.0, abs(j)) or not (-self.n // 2 <= ji < self.n // 2):
            raise ParameterError(f"k0={k0} is not on the momentum lattice (dk={self.dk})")
        return ji


@dataclass
class Histogram:
    """Uniform-bin density.

    `density` integrates to the in-range mass; `outside` holds the mass that
    fell beyond the edges, so sum(density*width) + outside == 1.
    """

    edges: np.ndarray
    density: np.ndarray
    count: int = 0
    outside: float = 0.0
    meta: dict = field(default_factory=dict)

    @property
    def width(self) -> float:
        return float(self.edges[1] - self.edges[0])

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.edges[1:] + self.edges[:-1])

    def total(self) -> float:
        return float(np.sum(self.density) * self.width)

    def mean(self) -> float:
        return float(np.sum(self.centers * self.density) * self.width / self.total())


def uniform_edges(lo: float, hi: float, width: float) -> np.ndarray:
    """Edges of width `width` starting at lo and covering [lo, hi]."""
    if not width > 0 or not hi > lo:
        raise ParameterError(f"bad bin spec lo={lo} hi={hi} width={width}")
    nbins = max(1, int(np.ceil((hi - lo) / width - 1e-9)))
    return lo + width * np.arange(nbins + 1)


def bin_weights(values, weights, edges) -> tuple[np.ndarray, float]:
    """Sum `weights` into uniform bins; returns (per-bin mass, outside mass).

    The last bin is closed on the right; everything else is [a, b).
    """
    values = np.asarray(values, dtype=float)
    weights = np.broadcast_to(np.asarray(weights, dtype=float), values.shape).ravel()
    values = values.ravel()
    lo, w = edges[0], edges[1] - edges[0]
    nb = len(edges) - 1
    inside = (values >= edges[0]) & (values <= edges[-1])
    # membership by comparison; the index may round one past the last bin
    idx = np.clip(np.floor((values[inside] - lo) / w).astype(np.int64), 0, nb - 1)
    mass = np.bincount(idx, weights=weights[inside], minlength=nb)
    return mass, float(np.sum(weights[~inside]))


def histogram(values, edges=None, *, weights=None, width=None) -> Histogram:
    """Normalized density of `values` (optionally weighted).

    With no edges, bins of `width` (default: range/64) cover all values; a
    constant sample lands in a single bin of width 1 centred on it.
    """
    values = np.asarray(values, dtype=float).ravel()
    if weights is None:
        weights = np.ones_like(values)
    weights = np.asarray(weights, dtype=float).ravel()
    if edges is None:
        lo, hi = float(values.min()), float(values.max())
        if hi - lo <= 1e-12 * max(1.0, abs(lo)):
            w = width or 1.0
            edges = np.array([lo - w / 2, lo + w / 2])
        else:
            w = width or (hi - lo) / 64
            edges = uniform_edges(lo, hi, w)
            if edges[-1] < hi:
                edges = np.append(edges, edges[-1] + w)
    edges = np.asarray(edges, dtype=float)
    total = float(np.sum(weights))
    mass, out = bin_weights(values, weights, edges)
    width_ = edges[1] - edges[0]
    return Histogram(edges, mass / (total * width_), count=values.size, outside=out / total)
