"""Shared, session-scoped pipelines for the expensive example systems.

Every heavy enumeration/tracking run happens once per session; acceptance
and property tests consume the cached results.
"""

from __future__ import annotations

import time

import numpy as np
import pytest

from snapdist import fixtures
from snapdist.critical import enumerate_critical_points, oriented_volume_poly
from snapdist.density import DensityFunction
from snapdist.singdist import local_singularity_distance
from snapdist.snap import (local_snappability, separation_filter,
                           undeformed_minima)
from snapdist.stewart_gough import (SGManipulator, direct_kinematics,
                                    sg_critical_points,
                                    sg_singularity_distance)


def _pipeline(fx, nu=0.5, constraints=(), n_starts=1000, cloud=200,
              noise=0.05, admissible=None, engine="multistart", mode="track",
              seed=0):
    """Critical set + per-undeformed-minimum snappability/singularity."""
    fw, chart = fx.framework, fx.chart
    df = DensityFunction(fw, nu=nu)
    t0 = time.monotonic()
    if engine == "multistart":
        rng = np.random.default_rng(seed)
        anchors = [np.asarray(m, dtype=float) for m in fx.minima]
        if fx.saddle is not None:
            anchors.append(np.asarray(fx.saddle, dtype=float))
        if "saddle2" in fx.extras:
            anchors.append(np.asarray(fx.extras["saddle2"], dtype=float))
        base = np.vstack(anchors)
        blobs = np.repeat(base, cloud, axis=0)
        blobs = blobs + noise * rng.standard_normal(blobs.shape)
        cs = enumerate_critical_points(df, chart, constraints=constraints,
                                       engine="multistart",
                                       seeds=np.vstack([base, blobs]),
                                       n_starts=n_starts)
    else:
        cs = enumerate_critical_points(df, chart, constraints=constraints,
                                       engine="homotopy")
    snaps, sings = {}, {}
    for i in undeformed_minima(cs):
        snaps[i] = local_snappability(df, chart, cs.points[i].theta, cs,
                                      mode=mode, constraints=constraints,
                                      admissible=admissible)
        sings[i] = local_singularity_distance(
            df, chart, cs.points[i].theta, cs, mode=mode,
            constraints=constraints, admissible=admissible)
    return {"fixture": fx, "df": df, "cs": cs, "snaps": snaps,
            "sings": sings, "seconds": time.monotonic() - t0}


@pytest.fixture(scope="session")
def quad_run():
    fx = fixtures.quad()
    df = DensityFunction(fx.framework, nu=0.5)
    t0 = time.monotonic()
    cs = enumerate_critical_points(df, fx.chart, engine="homotopy")
    enum_seconds = time.monotonic() - t0
    adm = separation_filter(1e-3 * fx.framework.mean_length())
    snaps, sings = {}, {}
    for i in undeformed_minima(cs):
        snaps[i] = local_snappability(df, fx.chart, cs.points[i].theta, cs,
                                      mode="track", admissible=adm)
        sings[i] = local_singularity_distance(
            df, fx.chart, cs.points[i].theta, cs, mode="track",
            admissible=adm)
    return {"fixture": fx, "df": df, "cs": cs, "snaps": snaps,
            "sings": sings, "enum_seconds": enum_seconds,
            "admissible": adm}


def _four_r_constraints(fx):
    theta1 = np.asarray(fx.minima[0], dtype=float)
    ref = oriented_volume_poly(fx.chart, fx.extras["tetras"][0])(theta1)
    return [oriented_volume_poly(fx.chart, fx.extras["tetras"][0],
                                 reference=float(ref))]


@pytest.fixture(scope="session")
def four_r_runs():
    runs = {}
    fx = fixtures.four_r_loop("bar")
    runs[("bar", 0.5)] = _pipeline(fx, nu=0.5, engine="homotopy")
    for nu in (0.5, 0.25, 0.0):
        fx = fixtures.four_r_loop("panel")
        runs[("panel", nu)] = _pipeline(fx, nu=nu, engine="homotopy")
    fx = fixtures.four_r_loop("tetra")
    runs[("tetra", 0.5)] = _pipeline(fx, nu=0.5,
                                     constraints=_four_r_constraints(fx),
                                     engine="homotopy")
    return runs


@pytest.fixture(scope="session")
def sd_runs():
    runs = {}
    for mode in ("bar", "panel"):
        fx = fixtures.siamese_dipyramid(mode)
        adm = separation_filter(1e-2 * fx.framework.mean_length())
        runs[mode] = _pipeline(fx, admissible=adm)
    return runs


@pytest.fixture(scope="session")
def fh_runs():
    runs = {}
    for design in (1, 2, 3):
        for mode in ("bar", "panel"):
            fx = fixtures.four_horn(design, mode)
            adm = separation_filter(1e-2 * fx.framework.mean_length())
            runs[(design, mode)] = _pipeline(fx, admissible=adm)
    return runs


@pytest.fixture(scope="session")
def sg_run():
    sg = SGManipulator.from_json(fixtures.sg_decoupled())
    t0 = time.monotonic()
    rng = np.random.default_rng(7)
    tab = [np.array(fixtures.SG_TABLE[k]).reshape(3, 3).T.ravel()
           for k in ("V1", "V2", "Vp_rel", "Vp_abs")]
    seeds = np.repeat(np.array(tab), 60, axis=0)
    seeds = seeds + 0.3 * rng.standard_normal(seeds.shape)
    poses = direct_kinematics(sg, engine="multistart", seeds=seeds,
                              n_starts=800)
    tab_v1 = np.array(fixtures.SG_TABLE["V1"]).reshape(3, 3).T
    base = min(poses, key=lambda p: np.max(np.abs(p.v - tab_v1)))
    out = {"sg": sg, "poses": poses, "base": base}
    for metric in ("rel", "abs"):
        pts = sg_critical_points(sg, metric, poses=poses, n_starts=1200)
        out[metric] = sg_singularity_distance(sg, base, metric=metric,
                                              points=pts)
        out[metric + "_points"] = pts
    out["seconds"] = time.monotonic() - t0
    return out
