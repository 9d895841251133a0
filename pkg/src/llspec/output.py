"""CSV (with `#key=value` headers) and minimal SVG emitters.

Floats are written with 17 significant digits so a file round-trips to the
exact binary values; identical inputs therefore give byte-identical files.
"""
from __future__ import annotations

import os
from pathlib import Path

import numpy as np


def _fmt(v) -> str:
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def write_csv(path, meta: dict, columns, data) -> Path:
    """Write `#key=value` lines, a `#`-prefixed column line, then the rows."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    data = np.asarray(data)
    lines = [f"#{k}={_fmt(v)}" for k, v in meta.items()]
    if columns:
        lines.append("#" + ",".join(columns))
    if data.size:
        rows = data.reshape(data.shape[0], -1)
        lines.extend(",".join(repr(float(x)) for x in row) for row in rows)
    path.write_text("\n".join(lines) + "\n")
    return path


def read_csv(path) -> tuple[dict, list, np.ndarray]:
    """Inverse of write_csv: (meta, column names, 2D array)."""
    meta, columns, rows = {}, [], []
    for line in Path(path).read_text().splitlines():
        if line.startswith("#"):
            body = line[1:]
            if "=" in body:
                k, v = body.split("=", 1)
                meta[k] = v
            else:
                columns = body.split(",")
        elif line.strip():
            rows.append([float(x) for x in line.split(",")])
    return meta, columns, np.array(rows)


def write_potential(path, potential, extra=None):
    meta = {"kind": potential.kind.tag, "V0": potential.v0, "L": potential.grid.length,
            "dx": potential.grid.dx, "seed": potential.seed, **(extra or {})}
    return write_csv(path, meta, ["x", "V"], np.column_stack([potential.grid.x, potential.samples]))


def write_landscape(path, potential, land, extra=None):
    meta = {"seed": potential.seed, "kind": potential.kind.tag, "eta": potential.v0,
            "epsilon": land.epsilon, "shift": land.shift, "E0": land.ground_energy_used, **(extra or {})}
    return write_csv(path, meta, ["x", "u", "Vu"], np.column_stack([land.grid.x, land.u, land.v_u]))


def write_eigs(path, energies, meta):
    e = np.asarray(energies)
    return write_csv(path, meta, ["alpha", "E"], np.column_stack([np.arange(e.size), e]))


def write_histogram(path, hist, meta):
    meta = {**meta, "outside": hist.outside, "count": hist.count}
    return write_csv(path, meta, ["E", "density"], np.column_stack([hist.centers, hist.density]))


def write_curve(path, curve, meta):
    meta = {"method": curve.method, "k0": curve.k0, "realizations": curve.realizations,
            "bins": f"{float(curve.edges[0])!r}:{float(curve.edges[-1])!r}:{curve.width!r}",
            "outside": curve.outside, **curve.meta, **meta}
    return write_csv(path, meta, ["E", "A"], np.column_stack([curve.centers, curve.density]))


def write_error_curve(path, exact, estimate, meta):
    d = estimate.density - exact.density
    meta = {"exact": exact.method, "estimate": estimate.method, **meta}
    return write_csv(path, meta, ["E", "A_exact", "A_est", "diff"],
                     np.column_stack([exact.centers, exact.density, estimate.density, d]))


def write_matrix(path, matrix, meta):
    """One CSV row per matrix row (for phase-space maps, row = fixed k)."""
    return write_csv(path, meta, [], matrix)


def write_contours(path, contours, meta):
    rows = [np.column_stack([np.full(len(p), i), p]) for i, p in enumerate(contours.polylines)]
    data = np.vstack(rows) if rows else np.empty((0, 3))
    return write_csv(path, {"level": contours.level, **meta}, ["polyline_id", "x", "k"], data)


# ------------------------------------------------------------------ SVG

_COLORS = ("#000000", "#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e")


def svg_lines(path, x, curves: dict, title="", width=640, height=400):
    """Line plot of named curves sharing abscissa x."""
    x = np.asarray(x, dtype=float)
    ys = [np.asarray(v, dtype=float) for v in curves.values()]
    ymin = min(float(np.min(y)) for y in ys)
    ymax = max(float(np.max(y)) for y in ys)
    if ymax <= ymin:
        ymax = ymin + 1
    pad = 40

    def px(v):
        return pad + (v - x[0]) / (x[-1] - x[0]) * (width - 2 * pad)

    def py(v):
        return height - pad - (v - ymin) / (ymax - ymin) * (height - 2 * pad)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
           f'<text x="{pad}" y="20" font-size="14">{title}</text>',
           f'<rect x="{pad}" y="{pad}" width="{width - 2 * pad}" height="{height - 2 * pad}" '
           'fill="none" stroke="#888"/>']
    for i, (name, y) in enumerate(zip(curves, ys)):
        pts = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(x, y))
        c = _COLORS[i % len(_COLORS)]
        out.append(f'<polyline fill="none" stroke="{c}" stroke-width="1.2" points="{pts}"/>')
        out.append(f'<text x="{width - 150}" y="{pad + 16 * (i + 1)}" fill="{c}" font-size="12">{name}</text>')
    out.append("</svg>")
    Path(path).write_text("\n".join(out) + "\n")
    return Path(path)


def svg_heatmap(path, matrix, extent, contours=(), title="", cells=160, size=480):
    """Coarse heatmap of a [k, x] matrix with optional contour overlays."""
    m = np.asarray(matrix, dtype=float)
    sj = max(1, m.shape[0] // cells)
    sn = max(1, m.shape[1] // cells)
    m = m[: m.shape[0] // sj * sj, : m.shape[1] // sn * sn]
    m = m.reshape(m.shape[0] // sj, sj, m.shape[1] // sn, sn).mean(axis=(1, 3))
    lim = float(np.max(np.abs(m))) or 1.0
    x0, x1, k0, k1 = extent
    nj, nn = m.shape
    cw, ch = size / nn, size / nj
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size + 30}">',
           f'<text x="4" y="18" font-size="14">{title}</text>', '<g transform="translate(0,30)">']
    for j in range(nj):
        for n in range(nn):
            t = m[j, n] / lim
            r, b = (255, int(255 * (1 - t))) if t >= 0 else (int(255 * (1 + t)), 255)
            g = int(255 * (1 - abs(t)))
            out.append(f'<rect x="{n * cw:.2f}" y="{(nj - 1 - j) * ch:.2f}" width="{cw + 0.5:.2f}" '
                       f'height="{ch + 0.5:.2f}" fill="rgb({r},{g},{b})"/>')
    for i, cs in enumerate(contours):
        c = _COLORS[i % len(_COLORS)]
        for p in cs.polylines:
            xs = ((p[:, 0] - x0) % (x1 - x0)) / (x1 - x0) * size
            ks = size - (p[:, 1] - k0) / (k1 - k0) * size
            # break the path where x wraps
            cut = np.flatnonzero(np.abs(np.diff(xs)) > size / 2) + 1
            for seg_x, seg_k in zip(np.split(xs, cut), np.split(ks, cut)):
                pts = " ".join(f"{a:.1f},{b:.1f}" for a, b in zip(seg_x, seg_k))
                out.append(f'<polyline fill="none" stroke="{c}" stroke-width="1" points="{pts}"/>')
    out.append("</g></svg>")
    Path(path).write_text("\n".join(out) + "\n")
    return Path(path)


def env_threads(default: int = 1) -> int:
    v = os.environ.get("LLSPEC_THREADS")
    return int(v) if v else default
