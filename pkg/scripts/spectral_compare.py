#!/usr/bin/env python
"""Ensemble spectral functions (exact, landscape, classical, Trappe) over a sweep of eta."""
import argparse
from pathlib import Path

from llspec.harness import CampaignSpec, run_campaign
from llspec.output import env_threads, svg_lines, write_curve
from llspec.spectral import l1_distance


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--kind", default="speckle-gauss")
    ap.add_argument("--etas", type=float, nargs="+", default=[0.5, 1.0, 5.0, 10.0])
    ap.add_argument("--realizations", type=int, default=200)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--threads", type=int, default=env_threads(1))
    ap.add_argument("--out", default="out/spectral")
    a = ap.parse_args()
    out = Path(a.out)
    out.mkdir(parents=True, exist_ok=True)

    print("eta      L1(ll)   L1(classical)  L1(trappe)")
    for eta in a.etas:
        lo, hi = (-eta, 8 * eta) if a.kind.startswith("speckle") else (-5 * eta, 5 * eta)
        spec = CampaignSpec(kind=a.kind, eta=eta, realizations=a.realizations, base_seed=a.seed,
                            bin_width=eta / 20, e_min=lo, e_max=hi)
        res = run_campaign(spec, threads=a.threads)
        c = res.curves
        d = {n: l1_distance(c[n], c["eigen"]) for n in c if n != "eigen"}
        print(f"{eta:<8g} {d['ll']:.4f}   {d['classical']:.4f}         "
              f"{d['trappe']:.4f}" if "trappe" in d else f"{eta:<8g} {d['ll']:.4f}   {d['classical']:.4f}")
        for n, curve in c.items():
            write_curve(out / f"{a.kind}_eta{eta:g}_{n}.csv", curve, {"kind": a.kind, "eta": eta})
        svg_lines(out / f"{a.kind}_eta{eta:g}.svg", c["eigen"].centers, {n: v.density for n, v in c.items()},
                  title=f"A(E) {a.kind} eta={eta:g} R={res.completed}")


if __name__ == "__main__":
    main()
