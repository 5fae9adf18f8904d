"""Command-line front end.

Inputs are either bundled fixture names (``quad``, ``4r-tetra``,
``sd-bar``, ``fh2-panel``, ``sg`` ...) or JSON files in the framework
schema of :mod:`snapdist.model`; fixture names carry their charts and
constraints, plain files get the standard pinned coordinate chart.

Exit codes: 0 success, 2 input validation, 3 solver budget, 4 internal.
"""

from __future__ import annotations

import csv as csv_mod
import io
import json
import sys

import click
import numpy as np

from . import fixtures
from .critical import (BudgetError, enumerate_critical_points,
                       oriented_volume_poly, transition_graph,
                       transition_graph_dot)
from .density import DensityFunction
from .model import Chart, Framework, FrameworkError
from .polysolve import TrackerConfig
from .rigidity import isostatic_check
from .singdist import (check_relation, global_singularity_distance,
                       local_singularity_distance)
from .snap import (deformation_statistics, global_snappability,
                   local_snappability, lower_bound, separation_filter,
                   undeformed_minima)
from .stewart_gough import SGManipulator, direct_kinematics, \
    sg_critical_points, sg_singularity_distance

EXIT_VALIDATION = 2
EXIT_BUDGET = 3
EXIT_INTERNAL = 4

_FIXTURES = {
    "quad": lambda: fixtures.quad(),
    "4r-bar": lambda: fixtures.four_r_loop("bar"),
    "4r-panel": lambda: fixtures.four_r_loop("panel"),
    "4r-tetra": lambda: fixtures.four_r_loop("tetra"),
    "sd-bar": lambda: fixtures.siamese_dipyramid("bar"),
    "sd-panel": lambda: fixtures.siamese_dipyramid("panel"),
}
for _d in (1, 2, 3):
    for _m in ("bar", "panel"):
        _FIXTURES[f"fh{_d}-{_m}"] = \
            (lambda d=_d, m=_m: fixtures.four_horn(d, m))


class _Problem:
    """A framework, its chart, base parameters and optional constraints."""

    def __init__(self, fw, chart, theta_base, minima, constraints, name):
        self.framework = fw
        self.chart = chart
        self.theta_base = theta_base
        self.minima = minima
        self.constraints = constraints
        self.name = name


def _load_problem(source: str, nu: float) -> _Problem:
    if source in _FIXTURES:
        fx = _FIXTURES[source]()
        constraints = []
        if source == "4r-tetra":
            theta1 = np.asarray(fx.minima[0], dtype=float)
            tet = fx.extras["tetras"][0]
            ref = oriented_volume_poly(fx.chart, tet)(theta1)
            constraints = [oriented_volume_poly(fx.chart, tet,
                                                reference=float(ref))]
        return _Problem(fx.framework, fx.chart,
                        np.asarray(fx.minima[0], dtype=float),
                        [np.asarray(m, dtype=float) for m in fx.minima],
                        constraints, source)
    fw = Framework.from_file(source)
    fw.validate()
    if fw.realization is None:
        raise FrameworkError("framework file carries no realization")
    chart = Chart.pinned_full(fw.n_joints, fw.dimension, fw.pin_joints)
    theta = chart.project(np.asarray(fw.realization, dtype=float))
    return _Problem(fw, chart, theta, [theta], [], source)


def _emit(data, out_format: str, csv_rows=None, csv_header=None) -> None:
    if out_format == "json":
        click.echo(json.dumps(data, indent=2, sort_keys=True))
    else:
        buf = io.StringIO()
        w = csv_mod.writer(buf)
        if csv_header:
            w.writerow(csv_header)
        for row in csv_rows or []:
            w.writerow(row)
        click.echo(buf.getvalue().rstrip("\n"))


def _critical_rows(cs):
    header = ["index", "kind", "n_negative", "u_over_E", "shaky",
              "min_separation", "theta"]
    rows = [[i, p.kind, p.n_negative, repr(p.u), p.shaky,
             repr(p.min_separation),
             " ".join(repr(t) for t in p.theta)]
            for i, p in enumerate(cs.points)]
    return header, rows


def _enumerate(prob, df, engine, budget, cfg, n_starts=4000):
    seeds = np.vstack([np.atleast_2d(m) for m in prob.minima]) \
        if prob.minima else None
    return enumerate_critical_points(
        df, prob.chart, constraints=prob.constraints, engine=engine,
        cfg=cfg, budget=budget, seeds=seeds, n_starts=n_starts)


pass_cfg = click.make_pass_decorator(dict, ensure=True)


def _common(f):
    f = click.option("--nu", type=float, default=0.5, show_default=True,
                     help="Poisson ratio of the material.")(f)
    f = click.option("--engine", type=click.Choice(["homotopy",
                                                    "multistart"]),
                     default="multistart", show_default=True)(f)
    f = click.option("--budget", type=int, default=3 ** 12,
                     show_default=True,
                     help="Maximum homotopy paths to track.")(f)
    f = click.option("--seed", type=int, default=0, show_default=True)(f)
    f = click.option("--tol-real", type=float, default=1e-8,
                     show_default=True,
                     help="Imaginary-part threshold for real solutions.")(f)
    f = click.option("--out", "out_format",
                     type=click.Choice(["json", "csv"]),
                     default="json", show_default=True)(f)
    f = click.option("--min-separation", type=float, default=0.0,
                     show_default=True,
                     help="Reject saddles whose closest joints are nearer "
                          "than this fraction of the mean edge length.")(f)
    return f


def _tracker(seed: int, tol_real: float) -> TrackerConfig:
    return TrackerConfig(seed=seed, real_tol=tol_real)


def _admissible(prob, min_separation: float):
    if min_separation <= 0.0:
        return None
    return separation_filter(min_separation
                             * prob.framework.mean_length())


@click.group()
def main():
    """Quantify snappability and singularity distance of pin-jointed
    frameworks through intrinsic strain-energy metrics."""


@main.command()
@click.argument("source")
def validate(source):
    """Schema and geometric feasibility check of a framework file."""
    try:
        prob = _load_problem(source, nu=0.5)
    except (FrameworkError, FileNotFoundError, json.JSONDecodeError,
            KeyError, ValueError) as exc:
        click.echo(json.dumps({"valid": False, "error": str(exc)}))
        sys.exit(EXIT_VALIDATION)
    fw = prob.framework
    rep = isostatic_check(fw)
    click.echo(json.dumps({
        "valid": True,
        "name": fw.name or prob.name,
        "dimension": fw.dimension,
        "joints": fw.n_joints,
        "edges": len(fw.edges),
        "bars": len(fw.bars),
        "bodies": len(fw.bodies),
        "isostatic": rep["isostatic"],
        "overbraced": len(fw.edges) > rep["rank"],
        "rank": rep["rank"],
    }, indent=2))


@main.command()
@click.argument("source")
@click.option("--nu", type=float, default=0.5, show_default=True)
def energy(source, nu):
    """Per-element and total strain-energy density at the stored
    realization."""
    try:
        prob = _load_problem(source, nu=nu)
    except (FrameworkError, FileNotFoundError, ValueError) as exc:
        click.echo(str(exc), err=True)
        sys.exit(EXIT_VALIDATION)
    df = DensityFunction(prob.framework, nu=nu)
    V = prob.chart.realize(prob.theta_base)
    q = df.squared_lengths(V)
    click.echo(json.dumps({
        "u_over_E": df.density_q(q) / df.E,
        "element_energies": (df.element_energies_q(q) / df.E).tolist(),
        "squared_lengths": q.tolist(),
    }, indent=2))


@main.command("critical-points")
@click.argument("source")
@_common
@click.option("--dot", "dot_path", type=click.Path(), default=None,
              help="Write the transition graph in DOT format here.")
def critical_points(source, nu, engine, budget, seed, tol_real, out_format,
                    min_separation, dot_path):
    """Enumerate and classify the critical points of the density."""
    try:
        prob = _load_problem(source, nu=nu)
    except (FrameworkError, FileNotFoundError, ValueError) as exc:
        click.echo(str(exc), err=True)
        sys.exit(EXIT_VALIDATION)
    df = DensityFunction(prob.framework, nu=nu)
    cfg = _tracker(seed, tol_real)
    try:
        cs = _enumerate(prob, df, engine, budget, cfg)
    except BudgetError as exc:
        click.echo(str(exc), err=True)
        sys.exit(EXIT_BUDGET)
    if dot_path:
        edges = transition_graph(df, prob.chart, cs,
                                 constraints=prob.constraints)
        with open(dot_path, "w") as fh:
            fh.write(transition_graph_dot(cs, edges))
    header, rows = _critical_rows(cs)
    _emit(cs.to_json(), out_format, rows, header)


@main.command()
@click.argument("source")
@_common
@click.option("--dot", "dot_path", type=click.Path(), default=None,
              help="Write the transition graph in DOT format here.")
def snappability(source, nu, engine, budget, seed, tol_real, out_format,
                 min_separation, dot_path):
    """Snappability s of every undeformed realization and the global
    s(L), with the deformation statistics of the minimal snap."""
    try:
        prob = _load_problem(source, nu=nu)
    except (FrameworkError, FileNotFoundError, ValueError) as exc:
        click.echo(str(exc), err=True)
        sys.exit(EXIT_VALIDATION)
    df = DensityFunction(prob.framework, nu=nu)
    cfg = _tracker(seed, tol_real)
    adm = _admissible(prob, min_separation)
    try:
        cs = _enumerate(prob, df, engine, budget, cfg)
        s_global, results = global_snappability(
            df, prob.chart, cs, constraints=prob.constraints, cfg=cfg,
            admissible=adm)
    except BudgetError as exc:
        click.echo(str(exc), err=True)
        sys.exit(EXIT_BUDGET)
    o_bound = lower_bound(df, cs, admissible=adm)
    stats = None
    best = min((r for r in results if np.isfinite(r.s)),
               key=lambda r: r.s, default=None)
    if best is not None and best.saddle is not None:
        L = np.sqrt(df.squared_lengths(
            prob.chart.realize(best.base_theta)))
        Lp = np.sqrt(df.squared_lengths(best.saddle.V))
        stats = deformation_statistics(L, Lp).to_json()
    report = {
        "source": prob.name,
        "nu": nu,
        "engine": cs.engine,
        "n_paths": cs.n_paths,
        "n_real": len(cs.points),
        "n_saddles": sum(p.kind == "saddle" for p in cs.points),
        "exhaustive": cs.engine == "homotopy",
        "s_global": None if not np.isfinite(s_global) else s_global,
        "o_lower_bound": None if not np.isfinite(o_bound) else o_bound,
        "realizations": [r.to_json() for r in results],
        "stats": stats,
    }
    if dot_path:
        edges = transition_graph(df, prob.chart, cs,
                                 constraints=prob.constraints)
        with open(dot_path, "w") as fh:
            fh.write(transition_graph_dot(cs, edges))
    rows = [[i, repr(r.s) if np.isfinite(r.s) else "inf",
             r.mode, r.saddle_shaky]
            for i, r in enumerate(results)]
    _emit(report, out_format, rows, ["realization", "s", "mode", "shaky"])


@main.command("singularity-distance")
@click.argument("source")
@_common
def singularity_distance(source, nu, engine, budget, seed, tol_real,
                         out_format, min_separation):
    """Intrinsic singularity distance of every undeformed realization,
    checked against the snappability relation s <= sigma."""
    try:
        prob = _load_problem(source, nu=nu)
    except (FrameworkError, FileNotFoundError, ValueError) as exc:
        click.echo(str(exc), err=True)
        sys.exit(EXIT_VALIDATION)
    df = DensityFunction(prob.framework, nu=nu)
    cfg = _tracker(seed, tol_real)
    adm = _admissible(prob, min_separation)
    try:
        cs = _enumerate(prob, df, engine, budget, cfg)
        sig_global, sings = global_singularity_distance(
            df, prob.chart, cs, constraints=prob.constraints, cfg=cfg,
            admissible=adm)
        _, snaps = global_snappability(
            df, prob.chart, cs, constraints=prob.constraints, cfg=cfg,
            admissible=adm)
    except BudgetError as exc:
        click.echo(str(exc), err=True)
        sys.exit(EXIT_BUDGET)
    relations = []
    for sn, sg_ in zip(snaps, sings):
        try:
            relations.append(check_relation(sn, sg_))
        except AssertionError as exc:
            relations.append({"violation": str(exc)})
    report = {
        "source": prob.name,
        "nu": nu,
        "sigma_global": None if not np.isfinite(sig_global)
        else sig_global,
        "realizations": [r.to_json() for r in sings],
        "relations": relations,
    }
    rows = [[i, repr(r.sigma) if np.isfinite(r.sigma) else "inf", r.mode]
            for i, r in enumerate(sings)]
    _emit(report, out_format, rows, ["realization", "sigma", "mode"])


@main.command()
@click.argument("source")
@click.option("--metric", type=click.Choice(["rel", "abs", "both"]),
              default="both", show_default=True)
@click.option("--engine", type=click.Choice(["homotopy", "multistart"]),
              default="homotopy", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", "out_format", type=click.Choice(["json", "csv"]),
              default="json", show_default=True)
def sg(source, metric, engine, seed, out_format):
    """Direct kinematics and singularity distances of a Stewart-Gough
    manipulator file (or the bundled ``sg`` example)."""
    try:
        if source == "sg":
            manip = SGManipulator.from_json(fixtures.sg_decoupled())
        else:
            with open(source) as fh:
                manip = SGManipulator.from_json(json.load(fh))
    except (FileNotFoundError, json.JSONDecodeError, KeyError,
            ValueError) as exc:
        click.echo(str(exc), err=True)
        sys.exit(EXIT_VALIDATION)
    cfg = TrackerConfig(seed=seed)
    poses = direct_kinematics(manip, cfg=cfg, engine=engine,
                              n_starts=3000)
    report = {"poses": [p.to_json() for p in poses], "distances": {}}
    if not poses:
        report["explanation"] = ("no real pose assembles the given leg "
                                 "lengths")
    else:
        base = max(poses, key=lambda p: (not p.below_base,
                                         p.platform[:, 2].mean()))
        kinds = ["rel", "abs"] if metric == "both" else [metric]
        for kind in kinds:
            pts = sg_critical_points(manip, kind, poses=poses, cfg=cfg,
                                     engine="multistart")
            res = sg_singularity_distance(manip, base, metric=kind,
                                          cfg=cfg, points=pts)
            report["distances"][kind] = res.to_json()
    rows = [[i, p.below_base, repr(p.residual)]
            + [repr(c) for c in p.v.ravel()]
            for i, p in enumerate(poses)]
    _emit(report, out_format, rows,
          ["pose", "below_base", "residual"]
          + [f"v{i}{a}" for i in (1, 2, 3) for a in "xyz"])


@main.command()
@click.argument("source")
@_common
@click.option("--outdir", type=click.Path(), default="snapdist-report",
              show_default=True,
              help="Directory receiving the CSV tables and figures.")
def report(source, nu, engine, budget, seed, tol_real, out_format,
           min_separation, outdir):
    """Full pipeline: critical points, snappability, transition graph;
    writes CSV tables and rendered figures into a directory."""
    from .report import write_report
    try:
        prob = _load_problem(source, nu=nu)
    except (FrameworkError, FileNotFoundError, ValueError) as exc:
        click.echo(str(exc), err=True)
        sys.exit(EXIT_VALIDATION)
    cfg = _tracker(seed, tol_real)
    try:
        written = write_report(prob, nu, engine, budget, cfg, outdir,
                               admissible=_admissible(prob,
                                                      min_separation))
    except BudgetError as exc:
        click.echo(str(exc), err=True)
        sys.exit(EXIT_BUDGET)
    for path in written:
        click.echo(path)


@main.command("write-fixtures")
@click.argument("directory", type=click.Path())
def write_fixtures(directory):
    """Export the bundled example frameworks as JSON files."""
    for path in fixtures.write_fixture_files(directory):
        click.echo(path)


def _excepthook(tp, value, tb):
    sys.__excepthook__(tp, value, tb)
    sys.exit(EXIT_INTERNAL)


if __name__ == "__main__":
    sys.excepthook = _excepthook
    main()
