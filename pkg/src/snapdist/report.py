"""Rendered reports: CSV tables and matplotlib figures for one framework.

``write_report`` runs the full pipeline (critical-point enumeration,
snappability of every undeformed realization, transition graph) and
writes, into a target directory:

* ``critical_points.csv``  — one row per classified critical point
* ``snappability.csv``     — s per undeformed realization
* ``energy_levels.png``    — critical values by classification
* ``transition_graph.png`` — saddle-to-minimum descent graph
* ``length_changes.png``   — per-edge length changes of the minimal snap
* ``transitions.dot``      — the graph in DOT format
* ``report.json``          — the full numeric report
"""

from __future__ import annotations

import csv
import json
import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np  # noqa: E402

from .critical import transition_graph, transition_graph_dot  # noqa: E402
from .density import DensityFunction  # noqa: E402
from .polysolve import TrackerConfig  # noqa: E402
from .snap import (deformation_statistics, global_snappability,  # noqa: E402
                   lower_bound)

__all__ = ["write_report"]

_KIND_COLOR = {"minimum": "tab:green", "saddle": "tab:orange",
               "maximum": "tab:red", "degenerate": "tab:gray"}


def _energy_figure(cs, path: str) -> None:
    fig, ax = plt.subplots(figsize=(7, 4))
    for kind in ("minimum", "saddle", "maximum", "degenerate"):
        idx = [i for i, p in enumerate(cs.points) if p.kind == kind]
        if not idx:
            continue
        ax.scatter(idx, [cs.points[i].u for i in idx],
                   color=_KIND_COLOR[kind], label=kind, zorder=3)
    ax.set_xlabel("critical point (sorted by energy)")
    ax.set_ylabel("u / E")
    ax.set_yscale("symlog", linthresh=1e-12)
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _graph_figure(cs, edges, path: str) -> None:
    """Minima on the bottom rank, saddles on top, arrows downward."""
    minima = [i for i, p in enumerate(cs.points) if p.kind == "minimum"]
    saddles = [i for i, p in enumerate(cs.points) if p.kind == "saddle"]
    pos = {}
    for col, i in enumerate(minima):
        pos[i] = (col, 0.0)
    for col, i in enumerate(saddles):
        pos[i] = (col * max(len(minima) - 1, 1)
                  / max(len(saddles) - 1, 1), 1.0)
    fig, ax = plt.subplots(figsize=(7, 4))
    drawn = set()
    for e in edges:
        a, b = e["saddle"], e["target"]
        if b is None or (a, b) in drawn or a not in pos or b not in pos:
            continue
        drawn.add((a, b))
        ax.annotate("", xy=pos[b], xytext=pos[a],
                    arrowprops=dict(arrowstyle="-|>", color="0.4"))
    for i, (x, y) in pos.items():
        p = cs.points[i]
        ax.scatter([x], [y], s=600, color=_KIND_COLOR[p.kind], zorder=3)
        ax.annotate(p.label or f"P{i}", pos[i], ha="center", va="center",
                    zorder=4, fontsize=8)
    ax.set_ylim(-0.5, 1.5)
    ax.set_yticks([0.0, 1.0], ["minima", "saddles"])
    ax.set_xticks([])
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _length_figure(L, Lp, path: str) -> None:
    fig, ax = plt.subplots(figsize=(7, 4))
    x = np.arange(len(L))
    ax.bar(x, Lp - L, color="tab:blue")
    ax.set_xlabel("edge")
    ax.set_ylabel("length change at the snap saddle")
    ax.grid(True, axis="y", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def write_report(prob, nu: float, engine: str, budget: int,
                 cfg: TrackerConfig, outdir: str,
                 admissible=None) -> list[str]:
    """Run the pipeline for ``prob`` (a CLI problem bundle) and render all
    artifacts into ``outdir``; returns the written paths."""
    from .cli import _enumerate

    os.makedirs(outdir, exist_ok=True)
    written = []

    def out(name):
        path = os.path.join(outdir, name)
        written.append(path)
        return path

    df = DensityFunction(prob.framework, nu=nu)
    cs = _enumerate(prob, df, engine, budget, cfg)
    s_global, results = global_snappability(
        df, prob.chart, cs, constraints=prob.constraints, cfg=cfg,
        admissible=admissible)
    o_bound = lower_bound(df, cs, admissible=admissible)
    edges = transition_graph(df, prob.chart, cs,
                             constraints=prob.constraints)

    with open(out("critical_points.csv"), "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["index", "kind", "n_negative", "u_over_E", "shaky",
                    "min_separation"]
                   + [f"theta{k}" for k in range(prob.chart.n_params)])
        for i, p in enumerate(cs.points):
            w.writerow([i, p.kind, p.n_negative, repr(p.u), p.shaky,
                        repr(p.min_separation)]
                       + [repr(t) for t in p.theta])

    with open(out("snappability.csv"), "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["realization", "s", "mode", "saddle_shaky",
                    "monotone"])
        for i, r in enumerate(results):
            w.writerow([i, repr(r.s) if np.isfinite(r.s) else "inf",
                        r.mode, r.saddle_shaky,
                        r.path.monotone if r.path else ""])

    _energy_figure(cs, out("energy_levels.png"))
    _graph_figure(cs, edges, out("transition_graph.png"))

    stats = None
    best = min((r for r in results if np.isfinite(r.s)),
               key=lambda r: r.s, default=None)
    if best is not None and best.saddle is not None:
        L = np.sqrt(df.squared_lengths(prob.chart.realize(best.base_theta)))
        Lp = np.sqrt(df.squared_lengths(best.saddle.V))
        stats = deformation_statistics(L, Lp).to_json()
        _length_figure(L, Lp, out("length_changes.png"))

    with open(out("transitions.dot"), "w") as fh:
        fh.write(transition_graph_dot(cs, edges))

    with open(out("report.json"), "w") as fh:
        json.dump({
            "source": prob.name,
            "nu": nu,
            "engine": cs.engine,
            "n_paths": cs.n_paths,
            "n_real": len(cs.points),
            "n_rejected": cs.n_rejected,
            "s_global": None if not np.isfinite(s_global) else s_global,
            "o_lower_bound": None if not np.isfinite(o_bound)
            else o_bound,
            "realizations": [r.to_json() for r in results],
            "stats": stats,
            "transition_edges": edges,
        }, fh, indent=2, sort_keys=True)

    return written
