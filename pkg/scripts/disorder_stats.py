#!/usr/bin/env python
"""Value histograms and autocorrelations of the disorder ensembles against their models."""
import argparse
from pathlib import Path

import numpy as np

from llspec.disorder import KINDS, correlation_model
from llspec.harness import CampaignSpec, run_campaign
from llspec.output import env_threads, svg_lines


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--realizations", type=int, default=1000)
    ap.add_argument("--L", type=float, default=64 * np.pi)
    ap.add_argument("--n", type=int, default=2048)
    ap.add_argument("--threads", type=int, default=env_threads(1))
    ap.add_argument("--out", default="out/stats")
    a = ap.parse_args()
    out = Path(a.out)
    out.mkdir(parents=True, exist_ok=True)

    for kind in KINDS:
        spec = CampaignSpec(kind=kind, eta=1.0, length=a.L, dx=a.L / a.n, task="stats",
                            realizations=a.realizations, bin_width=0.05)
        r = run_campaign(spec, threads=a.threads)
        x, g = r.arrays["x"], r.arrays["g"]
        model = correlation_model(kind, x)
        err = np.max(np.abs(g - model))
        print(f"{kind:14s} mean {r.arrays['mean'][0]:.4f} var {r.arrays['variance'][0]:.4f} "
              f"max |g - model| {err:.4f}")
        m = x <= 6
        svg_lines(out / f"{kind}_g.svg", x[m], {"g": g[m], "model": model[m]}, title=f"g(x) {kind}")
        h = r.curves["histogram"]
        svg_lines(out / f"{kind}_hist.svg", h.centers, {"P(V)": h.density}, title=f"P(V) {kind}")


if __name__ == "__main__":
    main()
