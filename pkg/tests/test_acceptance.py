"""Acceptance suite: one test (and one printed PASS line) per criterion.

All reference values are pinned with their stated tolerances; the quad
table's legacy energy normalization (factor 8, see fixtures.QUAD_U_SCALE)
is applied where that table is the source.
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from snapdist import fixtures
from snapdist.critical import transition_graph
from snapdist.density import DensityFunction, pseudometric
from snapdist.polysolve import TrackerConfig, solve_multistart
from snapdist.poly import CompiledSystem
from snapdist.critical import build_gradient_system
from snapdist.singdist import check_relation
from snapdist.snap import deformation_statistics


def _match(points, theta, tol):
    """Index of the point whose chart coordinates match theta within tol."""
    best, dev = None, math.inf
    for i, p in enumerate(points):
        d = float(np.max(np.abs(p.theta - theta)))
        if d < dev:
            best, dev = i, d
    return best, dev


def _nearest_dev(theta, *references):
    return min(float(np.max(np.abs(np.asarray(theta)
                                   - np.asarray(r)))) for r in references)


# ---------------------------------------------------------------------------
# Criterion 1: quad critical-point table


def test_criterion_1_quad_critical_points(quad_run):
    fx, cs = quad_run["fixture"], quad_run["cs"]
    sep_tol = 1e-3 * fx.framework.mean_length()
    admissible = [p for p in cs.points
                  if p.theta[0] > 0 and p.min_separation > sep_tol]
    assert len(admissible) == 12

    table = fx.extras["table"]
    for name, row in table.items():
        theta_ref = np.asarray(row[:5], dtype=float)
        u_ref = row[5] / fixtures.QUAD_U_SCALE
        kind_ref = row[6]
        i, dev = _match(admissible, theta_ref, 1e-8)
        p = admissible[i]
        assert dev < 1e-8, f"{name}: coordinate deviation {dev}"
        assert abs(p.u / quad_run["df"].E - u_ref) \
            < 1e-9 / fixtures.QUAD_U_SCALE, f"{name}: u mismatch"
        assert p.kind == kind_ref, f"{name}: classified {p.kind}"

    # the two genuine nearly-coincident extra saddles stay visible
    extras = [p for p in cs.points
              if p.theta[0] > 0 and p.min_separation <= sep_tol]
    assert len(extras) == 2
    for p in extras:
        assert p.kind == "saddle"
        assert abs(p.u / quad_run["df"].E - 0.09543569706851) < 1e-9

    assert quad_run["enum_seconds"] < 60.0
    print("\nACCEPTANCE 1: PASS  quad 12 admissible critical points, "
          "coords<1e-8, u<1e-9, classes match, "
          f"{quad_run['enum_seconds']:.1f}s")


# ---------------------------------------------------------------------------
# Criterion 2: quad snappability, transition graph, lower bound


def test_criterion_2_quad_snappability(quad_run):
    fx, df, cs = quad_run["fixture"], quad_run["df"], quad_run["cs"]
    exp = fixtures.QUAD_SNAPPABILITY
    scale = fixtures.QUAD_U_SCALE

    table = fx.extras["table"]
    v1, _ = _match(cs.points, np.asarray(table["V1"][:5]), 1e-8)
    v2, _ = _match(cs.points, np.asarray(table["V2"][:5]), 1e-8)
    s1 = quad_run["snaps"][v1].s * scale
    s2 = quad_run["snaps"][v2].s * scale
    assert abs(s1 - exp) < 1e-9
    assert abs(s2 - exp) < 1e-9
    s_global = min(r.s for r in quad_run["snaps"].values()) * scale
    assert abs(s_global - exp) < 1e-9

    # o(L) = s(L): the pseudometric lower bound is attained
    from snapdist.snap import lower_bound
    o = lower_bound(df, cs, admissible=quad_run["admissible"]) * scale
    assert abs(o - exp) < 1e-9

    # descent-flow transition graph matches the published snap chains
    name_of = {}
    for name, row in table.items():
        i, dev = _match(cs.points, np.asarray(row[:5]), 1e-8)
        if dev < 1e-8:
            name_of[i] = name
    edges = transition_graph(df, fx.chart, cs)
    got = {}
    for e in edges:
        a, b = e["saddle"], e["target"]
        if a in name_of and b in name_of:
            got.setdefault(name_of[a], set()).add(name_of[b])
    for saddle, targets in fx.extras["transitions"].items():
        assert got.get(saddle) == targets, \
            f"{saddle}: {got.get(saddle)} != {targets}"
    print("\nACCEPTANCE 2: PASS  quad s(L)=s(V1)=s(V2)="
          f"{s_global:.12f} (exp {exp}), o(L)=s(L), graph matches")


# ---------------------------------------------------------------------------
# Criterion 3: 4R loop, all modes


def test_criterion_3_four_r_modes(four_r_runs):
    details = []
    for key, run in four_r_runs.items():
        mode, nu = key
        fx = run["fixture"]
        exp_s = fixtures.FOUR_R_S[key]
        s = min(r.s for r in run["snaps"].values())
        assert abs(s - exp_s) < 1e-12, f"{key}: s={s!r} exp={exp_s!r}"

        # the table lists (|u1|, |v1|, |w1|) of the symmetric saddle
        saddle_ref = np.asarray(fixtures.FOUR_R_SADDLES[key], dtype=float)
        best = min((r for r in run["snaps"].values()), key=lambda r: r.s)
        assert best.saddle is not None
        u1, v1, w1, u2, v2, w2 = best.saddle.theta
        dev = float(np.max(np.abs(np.abs([u1, v1, w1]) - saddle_ref)))
        assert dev < 1e-8, f"{key}: saddle coords deviate {dev}"
        assert abs(u1 * v1 * w2 - u2 * v2 * w1) < 1e-9
        assert run["seconds"] < 300.0, f"{key}: {run['seconds']:.0f}s"
        details.append(f"{mode}/nu={nu}:{run['seconds']:.0f}s")
    print("\nACCEPTANCE 3: PASS  4R all modes s within 1e-12, saddles "
          "within 1e-8, invariant<1e-9 (" + ", ".join(details) + ")")


# ---------------------------------------------------------------------------
# Criterion 4: 4R bar deformation statistics


def test_criterion_4_four_r_bar_statistics(four_r_runs):
    run = four_r_runs[("bar", 0.5)]
    fx, df = run["fixture"], run["df"]
    best = min(run["snaps"].values(), key=lambda r: r.s)
    L = np.sqrt(df.squared_lengths(fx.chart.realize(best.base_theta)))
    Lp = np.sqrt(df.squared_lengths(best.saddle.V))
    st = deformation_statistics(L, Lp)
    ref = fixtures.FOUR_R_BAR_STATS
    assert abs(st.dl_max_abs - ref["dL_max_abs"]) < 1e-9
    assert abs(st.dl_max_rel - ref["dL_max_rel"]) < 1e-9
    assert abs(st.dl_avg_abs - ref["dL_avg_abs"]) < 1e-9
    assert abs(st.dl_avg_rel - ref["dL_avg_rel"]) < 1e-9
    print("\nACCEPTANCE 4: PASS  4R bar length-change statistics within "
          "1e-9")


# ---------------------------------------------------------------------------
# Criterion 5: Stewart-Gough example


def test_criterion_5_stewart_gough(sg_run):
    poses = sg_run["poses"]
    assert len(poses) == 4
    assert sum(p.below_base for p in poses) == 2
    for metric in ("rel", "abs"):
        res = sg_run[metric]
        exp = fixtures.SG_S[metric]
        assert abs(res.sigma - exp) / exp < 1e-9, \
            f"{metric}: sigma={res.sigma!r}"
        tab = np.array(fixtures.SG_TABLE["Vp_" + metric]).reshape(3, 3).T
        dev = float(np.max(np.abs(res.saddle.v - tab)))
        assert dev < 1e-8, f"{metric}: saddle deviates {dev}"
        assert res.saddle.line_rank == 5
        assert res.saddle.singular_legs
    assert sg_run["seconds"] < 60.0
    print("\nACCEPTANCE 5: PASS  SG 4 poses (2 below base), rel/abs sigma "
          f"within 1e-9 rel, saddles match, rank 5, "
          f"{sg_run['seconds']:.0f}s")


# ---------------------------------------------------------------------------
# Criterion 6: Siamese dipyramid


def test_criterion_6_siamese_dipyramid(sd_runs):
    run = sd_runs["bar"]
    fx, df = run["fixture"], run["df"]
    exp = fixtures.SD_S["bar"]
    s = min(r.s for r in run["snaps"].values())
    sg = min(r.sigma for r in run["sings"].values())
    assert abs(s - exp) < 1e-11
    assert abs(sg - exp) < 1e-11

    best = min(run["snaps"].values(), key=lambda r: r.s)
    dev = _nearest_dev(best.saddle.theta, fx.saddle, fx.extras["saddle2"])
    assert dev < 1e-8

    L = np.sqrt(df.squared_lengths(fx.chart.realize(best.base_theta)))
    Lp = np.sqrt(df.squared_lengths(best.saddle.V))
    st = deformation_statistics(L, Lp)
    ref = fixtures.SD_STATS
    assert abs(st.e_min - ref["e_min"]) < 1e-9
    assert abs(st.dl_avg_abs - ref["dL_avg"]) < 1e-9
    assert abs(st.dl_max_rel - ref["dL_max_rel"]) < 1e-9

    run_p = sd_runs["panel"]
    exp_p = fixtures.SD_S["panel"]
    s_p = min(r.s for r in run_p["snaps"].values())
    assert abs(s_p - exp_p) < 1e-11
    fx_p = run_p["fixture"]
    best_p = min(run_p["snaps"].values(), key=lambda r: r.s)
    dev_p = _nearest_dev(best_p.saddle.theta, fx_p.saddle,
                         fx_p.extras["saddle2"])
    assert dev_p < 1e-8
    print("\nACCEPTANCE 6: PASS  SD bar s=sigma within 1e-11, panel within "
          "1e-11, saddles within 1e-8, statistics within 1e-9")


# ---------------------------------------------------------------------------
# Criterion 7: four-horn designs


def test_criterion_7_four_horns(fh_runs):
    for design in (1, 2, 3):
        run = fh_runs[(design, "bar")]
        fx, df = run["fixture"], run["df"]
        exp = fixtures.FH_S[(design, "bar")]
        s = min(r.s for r in run["snaps"].values())
        sg = min(r.sigma for r in run["sings"].values())
        assert abs(s - exp) < 1e-12, f"FH{design} bar: s={s!r} exp={exp!r}"
        assert abs(sg - exp) < 1e-12, f"FH{design} bar: sigma={sg!r}"

        best = min(run["snaps"].values(), key=lambda r: r.s)
        dev = _nearest_dev(best.saddle.theta, fx.saddle,
                           fx.extras["saddle2"])
        assert dev < 1e-8, f"FH{design} bar: saddle deviates {dev}"

        L = np.sqrt(df.squared_lengths(fx.chart.realize(best.base_theta)))
        Lp = np.sqrt(df.squared_lengths(best.saddle.V))
        st = deformation_statistics(L, Lp)
        ref = fixtures.FH_STATS[design]
        assert abs(st.e_min - ref["e_min"]) < 1e-9
        assert abs(st.dl_avg_abs - ref["dL_avg_abs"]) < 1e-9
        assert abs(st.dl_avg_rel - ref["dL_avg_rel"]) < 1e-9
        assert abs(st.dl_max_abs - ref["dL_max_abs"]) < 1e-9
        assert abs(st.dl_max_rel - ref["dL_max_rel"]) < 1e-9

        run_p = fh_runs[(design, "panel")]
        fx_p = run_p["fixture"]
        exp_p = fixtures.FH_S[(design, "panel")]
        s_p = min(r.s for r in run_p["snaps"].values())
        assert abs(s_p - exp_p) < 1e-11, f"FH{design} panel: s={s_p!r}"
        best_p = min(run_p["snaps"].values(), key=lambda r: r.s)
        dev_p = _nearest_dev(best_p.saddle.theta, fx_p.saddle,
                             fx_p.extras["saddle2"])
        assert dev_p < 1e-8, f"FH{design} panel: saddle deviates {dev_p}"
    print("\nACCEPTANCE 7: PASS  FH1-3 bar s=sigma within 1e-12, panel "
          "within 1e-11, saddles within 1e-8, statistics within 1e-9")


# ---------------------------------------------------------------------------
# Criterion 8: property suites


def _all_runs(quad_run, four_r_runs, sd_runs, fh_runs):
    yield quad_run
    yield from four_r_runs.values()
    yield from sd_runs.values()
    yield from fh_runs.values()


def test_criterion_8a_pseudometric_axioms(quad_run):
    df = quad_run["df"]
    rng = np.random.default_rng(11)
    b = len(df.active_edges())
    base = quad_run["fixture"].framework.length_vector()
    for _ in range(1000):
        la, lb, lc = (base * (1.0 + 0.3 * rng.uniform(-1, 1, size=b))
                      for _ in range(3))
        dab = pseudometric(df, la, lb)
        dba = pseudometric(df, lb, la)
        assert dab >= 0.0
        assert dab == dba
        assert pseudometric(df, la, la) == 0.0
        assert dab <= pseudometric(df, la, lc) \
            + pseudometric(df, lc, lb) + 1e-15
    print("\nACCEPTANCE 8a: PASS  pseudometric axioms on 1000 triples")


def test_criterion_8b_gradient_vs_central_differences():
    names = [("quad", fixtures.quad)] \
        + [(f"4r-{m}", lambda m=m: fixtures.four_r_loop(m))
           for m in ("bar", "panel", "tetra")] \
        + [(f"sd-{m}", lambda m=m: fixtures.siamese_dipyramid(m))
           for m in ("bar", "panel")] \
        + [(f"fh{d}-{m}", lambda d=d, m=m: fixtures.four_horn(d, m))
           for d in (1, 2, 3) for m in ("bar", "panel")]
    rng = np.random.default_rng(5)
    for name, make in names:
        fx = make()
        df = DensityFunction(fx.framework, nu=0.5)
        dim = fx.framework.dimension
        base = fx.chart.realize(np.asarray(fx.minima[0], dtype=float))
        for _ in range(100):
            V = base + 0.15 * rng.standard_normal(base.shape)
            g = df.gradient_realization(V)
            h = 1e-6
            idx = rng.integers(0, V.shape[0]), rng.integers(0, dim)
            Vp, Vm = V.copy(), V.copy()
            Vp[idx] += h
            Vm[idx] -= h
            cd = (df.density_from_realization(Vp)
                  - df.density_from_realization(Vm)) / (2 * h)
            scale = max(abs(cd), np.max(np.abs(g)), 1e-12)
            assert abs(g[idx] - cd) / scale < 1e-6, name
    print("\nACCEPTANCE 8b: PASS  gradients match central differences "
          "(rel < 1e-6, 100 realizations x 12 fixtures)")


def test_criterion_8c_isometry_invariance():
    rng = np.random.default_rng(17)
    for make in (fixtures.quad, lambda: fixtures.four_r_loop("tetra"),
                 lambda: fixtures.siamese_dipyramid("panel")):
        fx = make()
        df = DensityFunction(fx.framework, nu=0.5)
        dim = fx.framework.dimension
        base = fx.chart.realize(np.asarray(fx.minima[0], dtype=float))
        for _ in range(25):
            V = base + 0.2 * rng.standard_normal(base.shape)
            A = rng.standard_normal((dim, dim))
            Q, _ = np.linalg.qr(A)
            t = rng.standard_normal(dim)
            W = V @ Q.T + t
            q = df.squared_lengths(V)
            qw = df.squared_lengths(W)
            e = df.element_energies_q(q)
            ew = df.element_energies_q(qw)
            assert np.max(np.abs(e - ew)) < 1e-12 * max(1.0, e.max())
    print("\nACCEPTANCE 8c: PASS  simplex energies invariant under "
          "rotation/translation (<1e-12)")


def test_criterion_8d_self_stress_residual(quad_run, four_r_runs, sd_runs,
                                           fh_runs):
    checked = 0
    for run in _all_runs(quad_run, four_r_runs, sd_runs, fh_runs):
        for p in run["cs"].points:
            if run["fixture"].framework is not None:
                assert p.stress_residual < 1e-8, \
                    f"stress residual {p.stress_residual}"
                checked += 1
    assert checked > 100
    print(f"\nACCEPTANCE 8d: PASS  self-stress residual < 1e-8 at "
          f"{checked} critical points")


def test_criterion_8e_snappability_bounds_singularity(quad_run,
                                                      four_r_runs, sd_runs,
                                                      fh_runs):
    n = 0
    for run in _all_runs(quad_run, four_r_runs, sd_runs, fh_runs):
        for i, snap in run["snaps"].items():
            rec = check_relation(snap, run["sings"][i])
            assert rec["holds"]
            n += 1
    print(f"\nACCEPTANCE 8e: PASS  s <= sigma on {n} realizations across "
          "all fixtures")


def test_criterion_8f_monotone_paths(quad_run, four_r_runs, sd_runs,
                                     fh_runs):
    n = 0
    for run in _all_runs(quad_run, four_r_runs, sd_runs, fh_runs):
        for snap in run["snaps"].values():
            if snap.path is not None and snap.path.success:
                assert snap.path.monotone
                n += 1
        for sing in run["sings"].values():
            if sing.path is not None and sing.path.success:
                assert sing.path.monotone
                n += 1
    assert n > 10
    print(f"\nACCEPTANCE 8f: PASS  per-element energies monotone along "
          f"{n} accepted tracking paths")


def test_criterion_8g_solver_determinism():
    fx = fixtures.quad()
    df = DensityFunction(fx.framework, nu=0.5)
    system = CompiledSystem.compile(build_gradient_system(df, fx.chart))
    cfg = TrackerConfig(seed=123)
    a = solve_multistart(system, n_starts=300, scale=2.0, cfg=cfg)
    b = solve_multistart(system, n_starts=300, scale=2.0, cfg=cfg)
    assert len(a.solutions) == len(b.solutions)
    for sa, sb in zip(a.solutions, b.solutions):
        assert np.array_equal(sa.x, sb.x)
    print("\nACCEPTANCE 8g: PASS  multistart solver byte-identical under "
          "a fixed seed")
