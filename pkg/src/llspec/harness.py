"""Ensemble campaigns: seeding, worker pool, bit-stable aggregation.

Realization i always uses seed mix_seed(base_seed, i).  Realizations are
grouped into fixed chunks of `chunk` consecutive indices; each chunk sums its
per-realization vectors in index order with compensated (Neumaier)
summation, and the chunk partials are combined per bin with math.fsum in
chunk order.  The chunk layout does not depend on the worker count, so the
aggregate is bit-identical for any --threads value and completion order.
"""
from __future__ import annotations

import dataclasses
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .disorder import KINDS, DisorderKind, gen_potential, mix_seed
from .eigensolve import count_below, eigs
from .grid import Grid, Histogram, NumericalError, ParameterError, bin_weights, uniform_edges
from .landscape import idos_weyl, solve_landscape
from .phasespace import (EmptyWindowError, average_wigner, capture_efficiency, energy_window,
                         weyl_symbol)
from .spectral import SpectralCurve, baseline_trappe, spectral_cheb, spectral_eigen, spectral_ll

TASKS = ("spectral", "wigner-map", "stats", "idos")
FAILURE_CAP = 0.01


@dataclass(frozen=True)
class CampaignSpec:
    kind: str = "speckle-gauss"
    eta: float = 1.0
    length: float = 100.0
    dx: float = 0.05
    realizations: int = 1
    base_seed: int = 0
    task: str = "spectral"
    k0: float = 0.0
    energy: float | None = None
    alpha: float = 0.2
    bin_width: float | None = None
    e_min: float | None = None
    e_max: float | None = None
    order: int | None = None
    epsilon_frac: float = 0.1
    trappe: bool | None = None
    eig_method: str = "bisect"
    energies: tuple | None = None
    chunk: int = 32

    def __post_init__(self):
        if self.task not in TASKS:
            raise ParameterError(f"unknown task {self.task!r}; choose from {TASKS}")
        if self.kind not in KINDS:
            raise ParameterError(f"unknown disorder kind {self.kind!r}")
        if int(self.realizations) < 1:
            raise ParameterError("realizations must be >= 1")
        if self.chunk < 1:
            raise ParameterError("chunk must be >= 1")
        if self.task == "wigner-map" and self.energy is None:
            raise ParameterError("wigner-map needs an energy E")
        if self.order is not None and self.order < 64:
            raise ParameterError("Chebyshev order must be >= 64")
        if self.eig_method not in ("dense", "bisect"):
            raise ParameterError(f"unknown eigen method {self.eig_method!r}")
        DisorderKind(self.kind, self.eta)
        g = self.grid
        if self.task in ("spectral",):
            g.momentum_index(self.k0)

    @property
    def grid(self) -> Grid:
        return Grid(self.length, self.dx)

    @property
    def disorder(self) -> DisorderKind:
        return DisorderKind(self.kind, self.eta)

    def edges(self) -> np.ndarray:
        """Shared energy bins (default width V0/100 over [min - V0, max + 5 V0] of the support)."""
        v0 = self.eta
        if self.kind.startswith("speckle"):
            vmin, vmax = 0.0, 10 * v0
        else:
            vmin, vmax = -4 * v0, 4 * v0
        shift = 0.5 * self.k0**2 if self.task == "spectral" else 0.0
        lo = self.e_min if self.e_min is not None else vmin - v0 + shift
        hi = self.e_max if self.e_max is not None else vmax + 5 * v0 + shift
        return uniform_edges(lo, hi, self.bin_width or v0 / 100)

    def idos_energies(self) -> np.ndarray:
        if self.energies is not None:
            return np.asarray(self.energies, dtype=float)
        return np.linspace(0.2, 2.0, 20) * self.eta

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        if d["energies"] is not None:
            d["energies"] = list(d["energies"])
        return d


@dataclass
class CampaignResult:
    spec: CampaignSpec
    curves: dict = field(default_factory=dict)
    arrays: dict = field(default_factory=dict)
    completed: int = 0
    failed: int = 0
    failures: list = field(default_factory=list)
    per_realization: dict = field(default_factory=dict)
    wall_time: float = 0.0


# ------------------------------------------------------------ per realization

def realization_vectors(spec: CampaignSpec, index: int) -> dict:
    """Named float vectors for one realization; the campaign sums them."""
    pot = gen_potential(spec.grid, spec.disorder, mix_seed(spec.base_seed, index))
    if spec.task == "spectral":
        return _spectral_vectors(spec, pot)
    if spec.task == "stats":
        return _stats_vectors(spec, pot)
    if spec.task == "idos":
        return _idos_vectors(spec, pot)
    return _wigner_vectors(spec, pot)


def _packed(curve) -> np.ndarray:
    return np.append(curve.density * curve.width, curve.outside)


def _spectral_vectors(spec, pot):
    edges = spec.edges()
    land = solve_landscape(pot, spec.epsilon_frac)
    eig = spectral_eigen(pot, spec.k0, edges, method=spec.eig_method)
    ll = spectral_ll(land, spec.k0, edges)
    mass, out = bin_weights(pot.samples + 0.5 * spec.k0**2, 1.0 / pot.grid.n, edges)
    out_v = {"eigen": _packed(eig), "ll": _packed(ll), "classical": np.append(mass, out)}
    if spec.order:
        out_v["cheb"] = _packed(spectral_cheb(pot, spec.k0, edges, spec.order))
    centres = eig.centers
    out_v["moments"] = np.array([np.sum(eig.mass() * centres), np.sum(ll.mass() * centres)])
    return out_v


def _stats_vectors(spec, pot):
    edges = spec.edges()
    v = pot.samples
    mass, out = bin_weights(v, 1.0 / v.size, edges)
    return {"hist": np.append(mass, out), "power": np.abs(np.fft.fft(v)) ** 2,
            "moments": np.array([v.mean(), (v**2).mean()])}


def _idos_vectors(spec, pot):
    grid = pot.grid
    es = spec.idos_energies()
    land = solve_landscape(pot, spec.epsilon_frac)
    exact = count_below(pot, es).astype(float) / grid.length
    wv = np.array([idos_weyl(pot.samples, grid, e) for e in es]) / grid.length
    wu = np.array([idos_weyl(land.v_u, grid, e) for e in es]) / grid.length
    return {"exact": exact, "weyl_v": wv, "weyl_vu": wu,
            "abs_err_v": np.abs(wv - exact), "abs_err_vu": np.abs(wu - exact)}


def _wigner_vectors(spec, pot):
    grid = pot.grid
    lo, hi = energy_window(spec.energy, spec.alpha)
    sol = eigs(pot, (lo, hi), method=spec.eig_method)
    try:
        fmap = average_wigner(sol, spec.energy, spec.alpha)
    except EmptyWindowError as exc:
        raise NumericalError(str(exc)) from exc
    land = solve_landscape(pot, spec.epsilon_frac)
    level = hi
    eff_h = capture_efficiency(fmap, weyl_symbol(pot.samples, grid), level)
    eff_h1 = capture_efficiency(fmap, weyl_symbol(land.v_u, grid), level)
    return {"map": fmap.values.ravel(), "efficiency": np.array([eff_h, eff_h1]),
            "states": np.array([float(fmap.states)])}


# ------------------------------------------------------------ aggregation

def _neumaier_add(s, c, x):
    t = s + x
    big = np.abs(s) >= np.abs(x)
    c = c + np.where(big, (s - t) + x, (x - t) + s)
    return t, c


def _run_chunk(args):
    spec, start, stop = args
    sums: dict = {}
    per: dict = {}
    failures = []
    for i in range(start, stop):
        try:
            vec = realization_vectors(spec, i)
        except (NumericalError, np.linalg.LinAlgError, FloatingPointError) as exc:
            failures.append((i, str(exc)))
            continue
        for name, x in vec.items():
            if name not in sums:
                sums[name] = [np.zeros_like(x), np.zeros_like(x)]
            sums[name][0], sums[name][1] = _neumaier_add(sums[name][0], sums[name][1], x)
            if name in ("moments", "efficiency"):
                per.setdefault(name, []).append((i, x.copy()))
    return start, sums, failures, per


def _fsum_merge(parts: list) -> np.ndarray:
    """Per-element exactly rounded sum over chunk partials (sum and compensation)."""
    stack = np.stack([p for pair in parts for p in pair])
    return np.array([math.fsum(col) for col in stack.reshape(stack.shape[0], -1).T]).reshape(stack.shape[1:])


def run_campaign(spec: CampaignSpec, threads: int = 1) -> CampaignResult:
    t0 = time.perf_counter()
    r = int(spec.realizations)
    jobs = [(spec, s, min(s + spec.chunk, r)) for s in range(0, r, spec.chunk)]
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(_run_chunk, jobs))
    else:
        chunks = [_run_chunk(j) for j in jobs]
    chunks.sort(key=lambda c: c[0])
    failures = [f for c in chunks for f in c[2]]
    done = r - len(failures)
    if done == 0 or len(failures) > FAILURE_CAP * r:
        raise NumericalError(f"{len(failures)} of {r} realizations failed; first: {failures[:1]}")
    names = []
    for c in chunks:
        names.extend(n for n in c[1] if n not in names)
    totals = {n: _fsum_merge([c[1][n] for c in chunks if n in c[1]]) for n in names}
    per = {}
    for c in chunks:
        for n, items in c[3].items():
            per.setdefault(n, []).extend(items)
    per = {n: np.array([x for _, x in sorted(items, key=lambda t: t[0])]) for n, items in per.items()}
    res = CampaignResult(spec, completed=done, failed=len(failures), failures=failures, per_realization=per)
    _finish(res, totals, done)
    res.wall_time = time.perf_counter() - t0
    return res


def _unpack_curve(edges, packed, done, method, k0, **kw):
    width = edges[1] - edges[0]
    return SpectralCurve(edges, packed[:-1] / done / width, count=edges.size - 1,
                         outside=float(packed[-1] / done), k0=k0, method=method, realizations=done, **kw)


def _finish(res: CampaignResult, totals: dict, done: int):
    spec = res.spec
    if spec.task == "spectral":
        edges = spec.edges()
        for m in ("eigen", "ll", "classical", "cheb"):
            if m in totals:
                meta = {"order": spec.order} if m == "cheb" else {}
                res.curves[m] = _unpack_curve(edges, totals[m], done, m, spec.k0, meta=meta)
        trappe = spec.trappe if spec.trappe is not None else (spec.kind == "gauss-gauss" and spec.k0 == 0)
        if trappe:
            res.curves["trappe"] = baseline_trappe(spec.eta, edges)
        res.arrays["moments"] = totals["moments"] / done
    elif spec.task == "stats":
        edges = spec.edges()
        h = totals["hist"] / done
        width = edges[1] - edges[0]
        res.curves["histogram"] = Histogram(edges, h[:-1] / width, count=done * spec.grid.n, outside=float(h[-1]))
        n = spec.grid.n
        mean, second = totals["moments"] / done
        acf = np.fft.ifft(totals["power"] / done).real / n
        res.arrays["x"] = spec.grid.x[: n // 2 + 1]
        res.arrays["g"] = acf[: n // 2 + 1] - mean**2
        res.arrays["mean"] = np.array([mean])
        res.arrays["variance"] = np.array([second - mean**2])
    elif spec.task == "idos":
        res.arrays["E"] = spec.idos_energies()
        for n in ("exact", "weyl_v", "weyl_vu", "abs_err_v", "abs_err_vu"):
            res.arrays[n] = totals[n] / done
    else:
        n = spec.grid.n
        res.arrays["map"] = (totals["map"] / done).reshape(n, n)
        res.arrays["efficiency"] = totals["efficiency"] / done
        res.arrays["states"] = totals["states"]
