#!/usr/bin/env python
"""Averaged Wigner map F_E with the H and H1 level sets (one realization)."""
import argparse
from pathlib import Path

import numpy as np

from llspec.disorder import DisorderKind, gen_potential, mix_seed
from llspec.eigensolve import eigs
from llspec.grid import Grid
from llspec.landscape import solve_landscape
from llspec.output import svg_heatmap, write_contours, write_matrix
from llspec.phasespace import average_wigner, capture_efficiency, energy_window, level_set, weyl_symbol


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--eta", type=float, default=0.1)
    ap.add_argument("--E", type=float, default=0.07)
    ap.add_argument("--alpha", type=float, default=0.2)
    ap.add_argument("--L", type=float, default=200.0)
    ap.add_argument("--dx", type=float, default=0.2)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="out/wigner")
    a = ap.parse_args()
    out = Path(a.out)
    out.mkdir(parents=True, exist_ok=True)

    g = Grid(a.L, a.dx)
    pot = gen_potential(g, DisorderKind("speckle-gauss", a.eta), mix_seed(a.seed, 0))
    land = solve_landscape(pot)
    lo, hi = energy_window(a.E, a.alpha)
    fmap = average_wigner(eigs(pot, (lo, hi), method="bisect"), a.E, a.alpha)
    h, h1 = weyl_symbol(pot.samples, g), weyl_symbol(land.v_u, g)
    eff = capture_efficiency(fmap, h, hi), capture_efficiency(fmap, h1, hi)
    print(f"{fmap.states} states in [{lo:.4g}, {hi:.4g}]  efficiency H={eff[0]:.4g} H1={eff[1]:.4g}")

    cs = level_set(h, a.E), level_set(h1, a.E)
    meta = {"eta": a.eta, "E": a.E, "alpha": a.alpha, "seed": a.seed}
    write_matrix(out / "wigner_map.csv", fmap.values, meta)
    write_contours(out / "contours_H.csv", cs[0], meta)
    write_contours(out / "contours_H1.csv", cs[1], meta)
    kmax = 3 * np.sqrt(2 * a.E)
    rows = np.abs(g.k) <= kmax
    svg_heatmap(out / "wigner_map.svg", fmap.values[rows], (0.0, g.length, g.k[rows][0], g.k[rows][-1]), cs,
                title=f"F_E  eta={a.eta}  E={a.E}")


if __name__ == "__main__":
    main()
