"""Discrete Wigner-Weyl analysis on the periodic lattice.

Layout convention: every phase-space matrix is indexed [j, n], rows are the
momenta k_j = 2*pi*j/L (j = -N/2..N/2-1, ascending) and columns the sites
x_n = n*dx.  Cell measure is dx * dk with dk = 2*pi/L.

Wigner transform
    W(x_n, k_j) = dx/(2 pi) sum_m exp(-i k_j m dx) psi*(x_n - m dx/2) psi(x_n + m dx/2),
with m running over one period [-N/2, N/2).  Half-step samples come from the
band-limited (trigonometric) interpolant of psi; the Nyquist coefficient is
kept on a single side so the interpolant reproduces both marginals exactly.
The unpaired m = -N/2 term is symmetrised with its mirror, which makes W real
by construction.

With this normalisation the lattice overlap identity reads
    2 pi * sum W1 W2 dx dk = |<psi1|psi2>|^2
(the factor 2 pi = h is the usual phase-space cell of hbar = 1).  It is exact
only for states whose self-correlation fits inside half a period and whose
spectrum avoids the Nyquist edge; generic full-band vectors miss it at the
1e-2 level because an N x N lattice cannot hold the full 2N x 2N Wigner data.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .eigensolve import EigenSolution
from .grid import Grid, Histogram, ParameterError, bin_weights
from .landscape import Landscape

NORM_TOL = 1e-10


class EmptyWindowError(ParameterError):
    """No eigenstate inside the requested energy window."""


@dataclass(frozen=True, eq=False)
class WignerMap:
    grid: Grid
    values: np.ndarray  # [k, x]
    normalization: float
    renormalized: bool = False
    states: int = 1

    def marginal_x(self) -> np.ndarray:
        """Integral over k: |psi(x)|^2."""
        return self.values.sum(axis=0) * self.grid.dk

    def marginal_k(self) -> np.ndarray:
        """Integral over x: |chi(k)|^2, chi(k) = (2 pi)^(-1/2) int psi e^{-ikx} dx."""
        return self.values.sum(axis=1) * self.grid.dx

    def integral(self, weight=None) -> float:
        w = self.values if weight is None else self.values * weight
        return float(np.sum(w) * self.grid.dx * self.grid.dk)


@dataclass(frozen=True, eq=False)
class WeylSymbol:
    grid: Grid
    values: np.ndarray  # [k, x], k^2/2 + v(x)
    v: np.ndarray


@dataclass
class ContourSet:
    level: float
    polylines: list = field(default_factory=list)  # arrays of (x, k) points
    closed: list = field(default_factory=list)

    def __len__(self):
        return len(self.polylines)


def _state(psi, grid: Grid):
    psi = np.asarray(psi)
    if psi.shape != (grid.n,):
        raise ParameterError(f"state must have {grid.n} samples, got {psi.shape}")
    norm = float(grid.dx * np.sum(np.abs(psi) ** 2))
    if not norm > 0:
        raise ParameterError("state has zero norm")
    if abs(norm - 1) > NORM_TOL:
        return psi / np.sqrt(norm), norm, True
    return psi, norm, False


def half_step(psi) -> np.ndarray:
    """Band-limited interpolant on the 2N lattice x = m dx/2; f[2n] = psi[n]."""
    n = psi.shape[0]
    c = np.fft.fft(psi)
    cf = np.zeros(2 * n, dtype=complex)
    cf[: n // 2] = c[: n // 2]
    cf[-n // 2 + 1 :] = c[n // 2 + 1 :]
    cf[-n // 2] = c[n // 2]
    return np.fft.ifft(cf) * 2


def _wigner_values(psi, grid: Grid) -> np.ndarray:
    n = grid.n
    f = half_step(psi)
    m = np.arange(-n // 2, n // 2)
    sites = 2 * np.arange(n)[:, None]
    corr = np.conj(f[(sites - m) % (2 * n)]) * f[(sites + m) % (2 * n)]
    spec = np.fft.fft(np.fft.ifftshift(corr, axes=1), axis=1)
    spec = np.fft.fftshift(spec, axes=1)
    return (grid.dx / (2 * np.pi)) * spec.real.T


def wigner(psi, grid: Grid) -> WignerMap:
    """Wigner function of one state (normalized internally if needed)."""
    psi, norm, flag = _state(psi, grid)
    w = _wigner_values(psi, grid)
    return WignerMap(grid, w, float(np.sum(w) * grid.dx * grid.dk), flag)


def wigner_overlap(w1: WignerMap, w2: WignerMap) -> float:
    """2 pi * integral W1 W2 dx dk, the phase-space form of |<psi1|psi2>|^2."""
    g = w1.grid
    return float(2 * np.pi * np.sum(w1.values * w2.values) * g.dx * g.dk)


def energy_window(energy: float, alpha: float) -> tuple[float, float]:
    half = abs(alpha * energy)
    return energy - half, energy + half


def average_wigner(solution: EigenSolution, energy: float, alpha: float = 0.2) -> WignerMap:
    """F_E: mean Wigner map of the eigenstates with E_a in [E - aE, E + aE]."""
    lo, hi = energy_window(energy, alpha)
    sel = np.flatnonzero((solution.energies >= lo) & (solution.energies <= hi))
    if sel.size == 0:
        raise EmptyWindowError(f"no eigenstate in [{lo:.6g}, {hi:.6g}]")
    grid = solution.grid
    acc = np.zeros((grid.n, grid.n))
    for a in sel:
        psi, _, _ = _state(solution.states[:, a], grid)
        acc += _wigner_values(psi, grid)
    acc /= sel.size
    return WignerMap(grid, acc, float(np.sum(acc) * grid.dx * grid.dk), False, int(sel.size))


def weyl_symbol(v, grid: Grid) -> WeylSymbol:
    """k^2/2 + v(x) on the phase-space lattice (continuum kinetic term)."""
    v = np.asarray(v, dtype=float)
    if v.shape != (grid.n,):
        raise ParameterError(f"v must have {grid.n} samples, got {v.shape}")
    return WeylSymbol(grid, 0.5 * grid.k[:, None] ** 2 + v[None, :], v.copy())


def expectation(psi, symbol: WeylSymbol) -> float:
    """Phase-space average of the symbol over the state's Wigner function."""
    return wigner(psi, symbol.grid).integral(symbol.values)


def ll_energy_distribution(psi, landscape: Landscape, edges) -> Histogram:
    """Signed density of H1 = k^2/2 + V_u under the state's Wigner function."""
    grid = landscape.grid
    w = wigner(psi, grid)
    h1 = weyl_symbol(landscape.v_u, grid).values
    return _signed_histogram(h1, w.values * grid.dx * grid.dk, edges)


def _signed_histogram(values, weights, edges) -> Histogram:
    edges = np.asarray(edges, dtype=float)
    mass, outside = bin_weights(values, weights, edges)
    total = float(np.sum(weights))
    width = edges[1] - edges[0]
    return Histogram(edges, mass / (total * width), count=np.size(values), outside=outside / total)


def capture_efficiency(fmap: WignerMap, symbol: WeylSymbol, level: float) -> float:
    """Positive F mass inside {symbol <= level} per unit phase-space area."""
    g = fmap.grid
    inside = symbol.values <= level
    area = np.count_nonzero(inside) * g.dx * g.dk
    if area == 0:
        return 0.0
    mass = np.sum(np.maximum(fmap.values, 0.0)[inside]) * g.dx * g.dk
    return float(mass / area)


def ghost_mass(wmap: WignerMap, k0: float) -> float:
    """|W| mass in the half Brillouin zone centred on k0 + pi/dx (the mirror zone)."""
    g = wmap.grid
    period = 2 * np.pi / g.dx
    d = np.abs((g.k - k0 + period / 2) % period - period / 2)
    rows = d > period / 4
    return float(np.sum(np.abs(wmap.values[rows])) * g.dx * g.dk)


# ---------------------------------------------------------------- contours

# cell corners: a=(j,n) b=(j,n+1) c=(j+1,n+1) d=(j+1,n)
# edges: 0 bottom a-b, 1 right b-c, 2 top d-c, 3 left a-d
_EDGE_CORNERS = ((0, 1), (1, 2), (3, 2), (0, 3))


def level_set(symbol: WeylSymbol, level: float) -> ContourSet:
    """Marching-squares contours of symbol == level, periodic in x.

    Points carry unwrapped x so every polyline is continuous; a polyline is
    closed when it returns to its start modulo L in x.  Saddle cells are
    split by the sign of the cell average.
    """
    g = symbol.grid
    s = symbol.values - level
    out = ContourSet(float(level))
    if not (s.min() < 0 < s.max()):
        return out
    nk, nx = s.shape
    k, x = g.k, g.x
    sa = s[:-1, :]
    sb = np.roll(s, -1, axis=1)[:-1, :]
    sc = np.roll(s, -1, axis=1)[1:, :]
    sd = s[1:, :]
    case = (sa < 0) * 1 + (sb < 0) * 2 + (sc < 0) * 4 + (sd < 0) * 8
    cells = np.argwhere((case != 0) & (case != 15))

    def edge_key(j, n, e):
        if e == 0:
            return ("h", j, n)
        if e == 1:
            return ("v", j, (n + 1) % nx)
        if e == 2:
            return ("h", j + 1, n)
        return ("v", j, n)

    points = {}
    links: dict = {}

    def point(j, n, e, vals):
        key = edge_key(j, n, e)
        if key not in points:
            p, q = _EDGE_CORNERS[e]
            t = vals[p] / (vals[p] - vals[q])
            xs = (x[n], x[n] + g.dx, x[n] + g.dx, x[n])
            ks = (k[j], k[j], k[j + 1], k[j + 1])
            points[key] = (xs[p] + t * (xs[q] - xs[p]), ks[p] + t * (ks[q] - ks[p]))
        return key

    def link(a, b):
        links.setdefault(a, []).append(b)
        links.setdefault(b, []).append(a)

    for j, n in cells:
        vals = (sa[j, n], sb[j, n], sc[j, n], sd[j, n])
        neg = [v < 0 for v in vals]
        crossing = [e for e in range(4) if neg[_EDGE_CORNERS[e][0]] != neg[_EDGE_CORNERS[e][1]]]
        keys = {e: point(j, n, e, vals) for e in crossing}
        if len(crossing) == 2:
            link(keys[crossing[0]], keys[crossing[1]])
            continue
        # saddle: a,c share a sign opposite to b,d
        centre_neg = (sum(vals) / 4) < 0
        if centre_neg == neg[0]:
            link(keys[0], keys[1])  # isolate corner b
            link(keys[3], keys[2])  # isolate corner d
        else:
            link(keys[0], keys[3])  # isolate corner a
            link(keys[1], keys[2])  # isolate corner c

    seen = set()
    length = g.length

    def walk(start):
        chain = [start]
        seen.add(start)
        prev, cur = None, start
        while True:
            nxt = [p for p in links[cur] if p != prev and (p not in seen or (p == start and len(chain) > 2))]
            if not nxt:
                return chain, False
            if nxt[0] == start:
                return chain, True
            prev, cur = cur, nxt[0]
            chain.append(cur)
            seen.add(cur)

    # open chains start at endpoints (degree 1), then the remaining loops
    starts = [p for p, nb in links.items() if len(nb) == 1] + list(links)
    for st in starts:
        if st in seen:
            continue
        chain, closed = walk(st)
        xy = np.array([points[p] for p in chain])
        # unwrap x along the chain
        jumps = np.round(np.diff(xy[:, 0]) / length)
        xy[1:, 0] -= length * np.cumsum(jumps)
        if closed:
            xy = np.vstack([xy, xy[:1]])
            shift = np.round((xy[-2, 0] - xy[0, 0]) / length) * length
            xy[-1, 0] += shift
        out.polylines.append(xy)
        out.closed.append(bool(closed))
    return out

