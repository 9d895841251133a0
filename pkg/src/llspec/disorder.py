"""Correlated random potentials built by Fourier filtering of white noise.

Three ensembles are supported:

* ``speckle-gauss``: |E|^2 of a complex Gaussian field with field correlation
  exp(-x^2/4), giving exponential P(V) and g(x) = V0^2 exp(-x^2/2).
* ``speckle-sinc``: same with a top-hat spectrum on |k| <= 1, so the field
  correlation is sin(x)/x and g(x) = V0^2 sinc^2(x).
* ``gauss-gauss``: real Gaussian field, zero mean, std V0, g(x) = V0^2 exp(-x^2/2).

All correlations wrap around the periodic box; keep L >= 50 (in units of
the correlation length) for them to be meaningful.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import Grid, Histogram, ParameterError, histogram

KINDS = ("speckle-gauss", "speckle-sinc", "gauss-gauss")

_MASK64 = (1 << 64) - 1


def mix_seed(base: int, index: int) -> int:
    """SplitMix64 finalizer of base + (index+1)*golden; seed of realization `index`."""
    z = (int(base) + (int(index) + 1) * 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


@dataclass(frozen=True)
class DisorderKind:
    tag: str
    v0: float

    def __post_init__(self):
        if self.tag not in KINDS:
            raise ParameterError(f"unknown disorder kind {self.tag!r}; choose from {KINDS}")
        if not self.v0 > 0:
            raise ParameterError(f"V0 must be positive, got {self.v0}")

    @property
    def is_speckle(self) -> bool:
        return self.tag.startswith("speckle")


@dataclass(frozen=True, eq=False)
class Potential:
    grid: Grid
    samples: np.ndarray
    kind: DisorderKind
    seed: int

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=float)
        if s.shape != (self.grid.n,):
            raise ParameterError(f"expected {self.grid.n} samples, got shape {s.shape}")
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)

    @classmethod
    def constant(cls, grid: Grid, value: float, kind: DisorderKind | None = None) -> "Potential":
        kind = kind or DisorderKind("gauss-gauss", max(abs(value), 1.0))
        return cls(grid, np.full(grid.n, float(value)), kind, 0)

    @classmethod
    def from_array(cls, grid: Grid, values, kind: DisorderKind | None = None, seed: int = 0):
        values = np.asarray(values, dtype=float)
        kind = kind or DisorderKind("gauss-gauss", max(float(np.std(values)), 1.0))
        return cls(grid, values, kind, seed)

    @property
    def v0(self) -> float:
        return self.kind.v0


def power_spectrum(grid: Grid, tag: str) -> np.ndarray:
    """|filter|^2 on the FFT-ordered momentum lattice."""
    k = 2 * np.pi * np.fft.fftfreq(grid.n, grid.dx)
    if tag == "speckle-gauss":
        return np.exp(-k**2)
    if tag == "speckle-sinc":
        p = (np.abs(k) < 1.0).astype(float)
        # boundary mode at |k| == 1 counts half (trapezoid edge)
        p[np.isclose(np.abs(k), 1.0, rtol=0, atol=1e-9)] = 0.5
        return p
    if tag == "gauss-gauss":
        return np.exp(-k**2 / 2)
    raise ParameterError(f"unknown disorder kind {tag!r}")


def white_noise(grid: Grid, tag: str, seed: int) -> np.ndarray:
    """The raw draws for one realization.

    Complex kinds draw a (2, N) standard-normal block, real = row 0,
    imag = row 1, scaled so E|w|^2 = 1. Real kinds draw N standard normals.
    """
    rng = np.random.default_rng(seed)
    if tag.startswith("speckle"):
        z = rng.standard_normal((2, grid.n))
        return (z[0] + 1j * z[1]) / np.sqrt(2)
    return rng.standard_normal(grid.n)


def gen_potential(grid: Grid, kind: DisorderKind, seed: int) -> Potential:
    p = power_spectrum(grid, kind.tag)
    amp = np.sqrt(p)
    # analytic field variance on the lattice: E|f_n|^2 = mean(|F_k|^2)
    var = float(np.mean(p))
    w = white_noise(grid, kind.tag, seed)
    field = np.fft.ifft(amp * np.fft.fft(w))
    if kind.is_speckle:
        v = kind.v0 * np.abs(field) ** 2 / var
    else:
        v = kind.v0 * field.real / np.sqrt(var)
    return Potential(grid, v, kind, int(seed))


def gen_ensemble(grid: Grid, kind: DisorderKind, base_seed: int, count: int, start: int = 0):
    for i in range(start, start + count):
        yield gen_potential(grid, kind, mix_seed(base_seed, i))


@dataclass
class DisorderStats:
    histogram: Histogram
    x: np.ndarray
    g: np.ndarray
    mean: float
    realizations: int


def estimate_stats(ensemble, bins=None, width=None) -> DisorderStats:
    """Pooled value histogram and circular autocovariance g(x), x in [0, L/2]."""
    ensemble = list(ensemble)
    if not ensemble:
        raise ParameterError("empty ensemble")
    grid, tag = ensemble[0].grid, ensemble[0].kind.tag
    for p in ensemble:
        if p.grid != grid or p.kind.tag != tag:
            raise ParameterError("ensemble mixes grids or disorder kinds")
    n = grid.n
    vals = np.stack([p.samples for p in ensemble])
    spec = np.abs(np.fft.fft(vals, axis=1)) ** 2
    acf = np.fft.ifft(spec.mean(axis=0)).real / n
    mean = float(vals.mean())
    g = acf[: n // 2 + 1] - mean**2
    hist = histogram(vals, bins, width=width)
    return DisorderStats(hist, grid.x[: n // 2 + 1], g, mean, len(ensemble))


def correlation_model(tag: str, x) -> np.ndarray:
    """g(x)/V0^2 of the target ensemble."""
    x = np.asarray(x, dtype=float)
    if tag == "speckle-sinc":
        return np.sinc(x / np.pi) ** 2
    return np.exp(-x**2 / 2)
