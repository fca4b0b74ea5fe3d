"""Optional figure rendering for the CSV files the CLI emits.

Import cost is deferred: matplotlib is only touched when a render function
runs, and the Agg backend is forced so this works headless.
"""
from __future__ import annotations

import csv
import math


def _pyplot():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


def _read_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [r for r in reader if r]
    return header, rows


def render_trajectories(csv_path, out_path) -> None:
    """Hamming-weight series per trajectory; a ratio inset when the file
    carries the exact-series column."""
    plt = _pyplot()
    header, rows = _read_csv(csv_path)
    has_ratio = "ratio_to_haar" in header
    by_id: dict[int, list[tuple[int, int]]] = {}
    ratio: dict[int, float] = {}
    for r in rows:
        tid, t, w = int(r[0]), int(r[1]), int(r[2])
        by_id.setdefault(tid, []).append((t, w))
        if has_ratio and r[3]:
            ratio[t] = float(r[3])

    fig, ax = plt.subplots(figsize=(7, 4.5))
    for tid, pts in by_id.items():
        pts.sort()
        ax.plot([p[0] for p in pts], [p[1] for p in pts], lw=0.8, alpha=0.7)
    ax.set_xlabel("step")
    ax.set_ylabel("Hamming weight")
    if ratio:
        ts = sorted(ratio)
        inset = ax.inset_axes([0.55, 0.55, 0.42, 0.4])
        inset.semilogy(ts, [ratio[t] for t in ts], "k-", lw=1)
        inset.axhline(2.0, color="gray", ls="--", lw=0.8)
        inset.set_ylabel("Z / Z_H", fontsize=8)
        inset.tick_params(labelsize=7)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def render_series(csv_path, out_path) -> None:
    """ratio-to-Haar versus circuit size, log scale, threshold line at 2."""
    plt = _pyplot()
    header, rows = _read_csv(csv_path)
    si = header.index("s")
    ri = header.index("ratio_to_haar")
    s = [float(r[si]) for r in rows]
    ratio = [float(r[ri]) for r in rows]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.semilogy(s, ratio, "-", lw=1.2)
    ax.axhline(2.0, color="gray", ls="--", lw=0.8)
    ax.set_xlabel("s")
    ax.set_ylabel("Z / Z_H")
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def render_sweep(csv_path, out_path) -> None:
    """Threshold size versus n, with the n log n normalization alongside."""
    plt = _pyplot()
    header, rows = _read_csv(csv_path)
    ni = header.index("n")
    si = header.index("s_ac")
    ns = [int(r[ni]) for r in rows]
    sac = [int(r[si]) for r in rows]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 4))
    ax1.loglog(ns, sac, "o-", ms=4)
    ax1.set_xlabel("n")
    ax1.set_ylabel("s_ac")
    ax2.plot(ns, [s / (n * math.log(n)) for n, s in zip(ns, sac)], "o-", ms=4)
    ax2.set_xlabel("n")
    ax2.set_ylabel("s_ac / (n ln n)")
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
