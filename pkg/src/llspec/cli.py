"""Command-line front end.

    llspec gen|landscape|eigs|wigner-map|spectral|stats|idos [flags]

Any flag may also come from a JSON file given by --config (keys are the long
flag names, dashes or underscores); explicit flags win over the file, and
LLSPEC_THREADS supplies --threads when neither sets it.
Exit codes: 0 success, 2 bad parameters, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import output
from .disorder import KINDS, correlation_model, gen_potential, mix_seed
from .eigensolve import eigs
from .grid import NumericalError, ParameterError
from .harness import CampaignSpec, run_campaign
from .landscape import solve_landscape
from .phasespace import level_set, weyl_symbol

DEFAULTS = {
    "kind": "speckle-gauss", "eta": 1.0, "L": 100.0, "dx": 0.05, "seed": 0, "realizations": 1,
    "k0": 0.0, "E": None, "alpha": 0.2, "bins": None, "order": None, "epsilon_frac": 0.1,
    "out": ".", "threads": None, "emit_svg": False, "method": "bisect", "chunk": 32,
}
COMMANDS = ("gen", "landscape", "eigs", "wigner-map", "spectral", "stats", "idos")


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    a = common.add_argument
    a("--config", help="JSON file supplying any of the flags below")
    a("--kind", choices=KINDS, default=None, help="disorder ensemble")
    a("--eta", type=float, default=None, help="disorder strength V0 (units of the correlation energy)")
    a("--L", type=float, default=None, help="system length")
    a("--dx", type=float, default=None, help="lattice step")
    a("--seed", type=int, default=None, help="base seed; realization i uses mix(seed, i)")
    a("--realizations", type=int, default=None, help="ensemble size R")
    a("--k0", type=float, default=None, help="plane-wave momentum (on the lattice 2 pi j / L)")
    a("--E", type=float, default=None, help="target energy for wigner-map / eigs windows")
    a("--alpha", type=float, default=None, help="relative window half-width")
    a("--bins", default=None, help="bin WIDTH or LO:HI:WIDTH")
    a("--order", type=int, default=None, help="Chebyshev order (adds the polynomial route)")
    a("--epsilon-frac", dest="epsilon_frac", type=float, default=None, help="landscape shift eps / V0")
    a("--method", choices=("bisect", "dense"), default=None, help="exact eigen route")
    a("--chunk", type=int, default=None, help="realizations per aggregation chunk")
    a("--out", default=None, help="output directory")
    a("--threads", type=int, default=None, help="worker processes")
    a("--emit-svg", dest="emit_svg", action="store_const", const=True, default=None, help="also write SVG plots")
    p = argparse.ArgumentParser(prog="llspec", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True)
    helps = {
        "gen": "write one disorder realization (x,V)",
        "landscape": "write the landscape u and effective potential V_u",
        "eigs": "write the eigenvalues (optionally inside [E - aE, E + aE])",
        "wigner-map": "averaged Wigner map F_E plus H and H1 level sets",
        "spectral": "spectral-function comparison campaign",
        "stats": "disorder statistics campaign",
        "idos": "Weyl-law IDOS comparison campaign",
    }
    for c in COMMANDS:
        sub.add_parser(c, parents=[common], help=helps[c], description=helps[c])
    return p


def _settings(args) -> dict:
    conf = {}
    if args.config:
        try:
            conf = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ParameterError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(conf, dict):
            raise ParameterError("config must be a JSON object")
        conf = {k.replace("-", "_"): v for k, v in conf.items()}
        unknown = set(conf) - set(DEFAULTS)
        if unknown:
            raise ParameterError(f"unknown config keys: {sorted(unknown)}")
    s = dict(DEFAULTS)
    s.update(conf)
    for k in DEFAULTS:
        v = getattr(args, k, None)
        if v is not None:
            s[k] = v
    if s["threads"] is None:
        s["threads"] = output.env_threads(1)
    if s["kind"] not in KINDS:
        raise ParameterError(f"unknown kind {s['kind']!r}")
    return s


def _bins(spec_bins):
    """(width, lo, hi) from 'WIDTH' or 'LO:HI:WIDTH'."""
    if spec_bins is None:
        return None, None, None
    parts = str(spec_bins).split(":")
    try:
        vals = [float(x) for x in parts]
    except ValueError as exc:
        raise ParameterError(f"bad --bins {spec_bins!r}") from exc
    if len(vals) == 1:
        return vals[0], None, None
    if len(vals) == 3:
        return vals[2], vals[0], vals[1]
    raise ParameterError(f"bad --bins {spec_bins!r}; use WIDTH or LO:HI:WIDTH")


def _spec(s, task) -> CampaignSpec:
    width, lo, hi = _bins(s["bins"])
    return CampaignSpec(kind=s["kind"], eta=float(s["eta"]), length=float(s["L"]), dx=float(s["dx"]),
                        realizations=int(s["realizations"]), base_seed=int(s["seed"]), task=task,
                        k0=float(s["k0"]), energy=s["E"], alpha=float(s["alpha"]), bin_width=width,
                        e_min=lo, e_max=hi, order=s["order"], epsilon_frac=float(s["epsilon_frac"]),
                        eig_method=s["method"], chunk=int(s["chunk"]))


def _meta(spec: CampaignSpec, **extra) -> dict:
    d = {k: v for k, v in spec.to_dict().items() if v is not None}
    d.update(extra)
    return d


def _single(s):
    spec = _spec(s, "spectral" if s["command"] != "wigner-map" else "wigner-map")
    pot = gen_potential(spec.grid, spec.disorder, mix_seed(spec.base_seed, 0))
    return spec, pot


def cmd_gen(s, out: Path):
    spec, pot = _single(s)
    output.write_potential(out / "potential.csv", pot, {"base_seed": spec.base_seed, "index": 0})
    if s["emit_svg"]:
        output.svg_lines(out / "potential.svg", pot.grid.x, {"V": pot.samples}, title="V(x)")


def cmd_landscape(s, out: Path):
    spec, pot = _single(s)
    land = solve_landscape(pot, spec.epsilon_frac)
    output.write_landscape(out / "landscape.csv", pot, land, {"base_seed": spec.base_seed})
    if s["emit_svg"]:
        output.svg_lines(out / "landscape.svg", pot.grid.x, {"V": pot.samples, "V_u": land.v_u}, title="V and V_u")


def cmd_eigs(s, out: Path):
    spec, pot = _single(s)
    window = None
    if s["E"] is not None:
        half = abs(spec.alpha * s["E"])
        window = (s["E"] - half, s["E"] + half)
    sol = eigs(pot, window, method=spec.eig_method if window else "dense")
    meta = _meta(spec, window="" if window is None else f"{window[0]!r}:{window[1]!r}")
    output.write_eigs(out / "eigs.csv", sol.energies, meta)


def cmd_wigner(s, out: Path):
    spec = _spec(s, "wigner-map")
    res = run_campaign(spec, threads=int(s["threads"]))
    grid = spec.grid
    pot = gen_potential(grid, spec.disorder, mix_seed(spec.base_seed, 0))
    land = solve_landscape(pot, spec.epsilon_frac)
    eff = res.arrays["efficiency"]
    meta = _meta(spec, completed=res.completed, failed=res.failed, states=int(res.arrays["states"][0]),
                 efficiency_H=float(eff[0]), efficiency_H1=float(eff[1]),
                 rows="k ascending from -pi/dx", cols="x from 0")
    output.write_matrix(out / "wigner_map.csv", res.arrays["map"], meta)
    cs_h = level_set(weyl_symbol(pot.samples, grid), spec.energy)
    cs_h1 = level_set(weyl_symbol(land.v_u, grid), spec.energy)
    output.write_contours(out / "contours_H.csv", cs_h, {"symbol": "H", **_meta(spec)})
    output.write_contours(out / "contours_H1.csv", cs_h1, {"symbol": "H1", **_meta(spec)})
    if s["emit_svg"]:
        kmax = 3 * np.sqrt(2 * max(abs(spec.energy), 1e-3))
        rows = np.abs(grid.k) <= kmax
        k = grid.k[rows]
        output.svg_heatmap(out / "wigner_map.svg", res.arrays["map"][rows],
                           (0.0, grid.length, k[0], k[-1]), (cs_h, cs_h1), title=f"F_E, E={spec.energy}")


def cmd_spectral(s, out: Path):
    spec = _spec(s, "spectral")
    res = run_campaign(spec, threads=int(s["threads"]))
    meta = _meta(spec, completed=res.completed, failed=res.failed)
    for name, curve in res.curves.items():
        output.write_curve(out / f"spectral_{name}.csv", curve, meta)
    output.write_error_curve(out / "spectral_error.csv", res.curves["eigen"], res.curves["ll"], meta)
    if s["emit_svg"]:
        c = res.curves
        output.svg_lines(out / "spectral.svg", c["eigen"].centers, {n: v.density for n, v in c.items()},
                         title=f"A(E), {spec.kind}, eta={spec.eta}")


def cmd_stats(s, out: Path):
    spec = _spec(s, "stats")
    res = run_campaign(spec, threads=int(s["threads"]))
    meta = _meta(spec, completed=res.completed, mean=float(res.arrays["mean"][0]),
                 variance=float(res.arrays["variance"][0]))
    output.write_histogram(out / "histogram.csv", res.curves["histogram"], meta)
    x, g = res.arrays["x"], res.arrays["g"]
    model = spec.eta**2 * correlation_model(spec.kind, x)
    output.write_csv(out / "correlation.csv", meta, ["x", "g", "model"], np.column_stack([x, g, model]))
    if s["emit_svg"]:
        output.svg_lines(out / "correlation.svg", x, {"g": g, "model": model}, title="g(x)")


def cmd_idos(s, out: Path):
    spec = _spec(s, "idos")
    res = run_campaign(spec, threads=int(s["threads"]))
    a = res.arrays
    meta = _meta(spec, completed=res.completed)
    cols = ["E", "exact", "weyl_v", "weyl_vu", "abs_err_v", "abs_err_vu"]
    output.write_csv(out / "idos.csv", meta, cols, np.column_stack([a[c] for c in cols]))


HANDLERS = {"gen": cmd_gen, "landscape": cmd_landscape, "eigs": cmd_eigs, "wigner-map": cmd_wigner,
            "spectral": cmd_spectral, "stats": cmd_stats, "idos": cmd_idos}


def main(argv=None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        s = _settings(args)
        s["command"] = args.command
        out = Path(s["out"])
        out.mkdir(parents=True, exist_ok=True)
        HANDLERS[args.command](s, out)
    except ParameterError as exc:
        print(f"llspec: error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"llspec: numerical failure: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
