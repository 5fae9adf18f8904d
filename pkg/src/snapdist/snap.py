"""Snappability: minimal energy-density barrier between stable realizations.

The local snappability of a stable realization is the smallest pseudometric
distance d(L, L') to a saddle of the density that the framework can actually
reach by a continuous deformation with monotonically increasing element
energies.  Candidate saddles are processed in ascending d order; for each
one, the straight-line path Q_t = Q + t(Q' - Q) in the space of squared edge
lengths is imposed on the realization equations and the base solution is
tracked from t=0 to t=1 (every element energy is a quadratic in t with its
minimum at t=0, so the deformation needs exactly d(L, L') in density units).
If the tracked endpoint realizes the saddle metric, s = d; if no candidate
works, s = infinity.

Two modes are provided: "track" (the path-tracking algorithm above, exact
for isostatic frameworks) and "descent" (gradient flows from the saddles,
the fallback for overbraced frameworks); "auto" picks by an isostatic test.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .critical import CriticalPoint, CriticalSet, descend_flow, _negative_directions
from .density import DensityFunction
from .model import Chart, Framework
from .poly import CompiledSystem, Poly
from .polysolve import (TrackerConfig, newton_polish, solve_multistart,
                        track_parameter_path)
from .rigidity import is_shaky, rigidity_matrix

__all__ = [
    "DeformStats",
    "PathRecord",
    "SnapResult",
    "deformation_statistics",
    "canonicalize_realization",
    "tracking_chart",
    "select_tracking_edges",
    "track_metric_path",
    "separation_filter",
    "local_snappability",
    "global_snappability",
    "lower_bound",
]

ENDPOINT_TOL = 1e-6      # x mean(L), max-norm metric mismatch at t=1
TIE_TOL = 1e-12          # d values closer than this are a tie
ENDGAME_EPS = 1e-8       # fold endgame stops at t = 1 - ENDGAME_EPS


# ---------------------------------------------------------------------------
# Deformation statistics


@dataclass
class DeformStats:
    """Summary of the length changes between two intrinsic metrics."""

    e_min: float           # sqrt(sum (L^2 - L'^2)^2)
    dl_avg_abs: float
    dl_avg_rel: float
    dl_max_abs: float
    dl_max_rel: float

    def to_json(self) -> dict:
        return {"e_min": self.e_min,
                "dl_avg_abs": self.dl_avg_abs,
                "dl_avg_rel": self.dl_avg_rel,
                "dl_max_abs": self.dl_max_abs,
                "dl_max_rel": self.dl_max_rel}


def deformation_statistics(L: np.ndarray, L_prime: np.ndarray) -> DeformStats:
    """Length-change statistics between undeformed L and deformed L'."""
    L = np.asarray(L, dtype=float)
    Lp = np.asarray(L_prime, dtype=float)
    if L.shape != Lp.shape:
        raise ValueError("length vectors differ in size")
    dl = np.abs(Lp - L)
    rel = dl / L
    return DeformStats(
        e_min=float(np.sqrt(np.sum((L ** 2 - Lp ** 2) ** 2))),
        dl_avg_abs=float(dl.mean()),
        dl_avg_rel=float(rel.mean()),
        dl_max_abs=float(dl.max()),
        dl_max_rel=float(rel.max()),
    )


# ---------------------------------------------------------------------------
# Realization-equation tracking along a metric path


@dataclass
class PathRecord:
    """Outcome of one Q_t tracking attempt toward a candidate saddle."""

    success: bool
    reason: str = ""
    theta_end: np.ndarray | None = None
    V_end: np.ndarray | None = None
    metric_mismatch: float = float("inf")
    monotone: bool = False
    real_throughout: bool = True
    edges_tracked: list[int] = field(default_factory=list)
    t_star: float | None = None      # shaky-start protocol pivot, if used

    def to_json(self) -> dict:
        return {"success": self.success, "reason": self.reason,
                "metric_mismatch": self.metric_mismatch,
                "monotone": self.monotone,
                "real_throughout": self.real_throughout,
                "edges_tracked": self.edges_tracked,
                "t_star": self.t_star}


@dataclass
class SnapResult:
    base_theta: np.ndarray
    s: float                              # math.inf when no snap exists
    saddle: CriticalPoint | None
    path: PathRecord | None
    exhaustive: bool
    saddle_shaky: bool = False
    mode: str = ""
    ties: list[int] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"base_theta": self.base_theta.tolist(),
                "s": None if math.isinf(self.s) else self.s,
                "saddle": None if self.saddle is None else self.saddle.to_json(),
                "path": None if self.path is None else self.path.to_json(),
                "exhaustive": self.exhaustive,
                "saddle_shaky": self.saddle_shaky,
                "mode": self.mode,
                "ties": self.ties}


def canonicalize_realization(V: np.ndarray, dimension: int) -> np.ndarray:
    """Isometry moving joint 0 to the origin, joint 1 to the +x axis and
    (in 3D) joint 2 into the upper xy half-plane."""
    P = np.asarray(V, dtype=float).reshape(-1, dimension).copy()
    P -= P[0]
    # rotate joint 1 onto +x
    if dimension == 2:
        a = math.atan2(P[1, 1], P[1, 0])
        c, s = math.cos(-a), math.sin(-a)
        R = np.array([[c, -s], [s, c]])
        P = P @ R.T
        if P.shape[0] > 2 and P[2, 1] < 0:
            P[:, 1] = -P[:, 1]
    else:
        x = P[1] / np.linalg.norm(P[1])
        # third joint fixes the xy plane
        ref = P[2] if P.shape[0] > 2 else np.array([0.0, 1.0, 0.0])
        z = np.cross(x, ref)
        nz = np.linalg.norm(z)
        if nz < 1e-12:
            ref = (np.array([0.0, 1.0, 0.0]) if abs(x[1]) < 0.9
                   else np.array([0.0, 0.0, 1.0]))
            z = np.cross(x, ref)
            nz = np.linalg.norm(z)
        z /= nz
        y = np.cross(z, x)
        P = P @ np.column_stack([x, y, z])
    return P


def tracking_chart(fw: Framework, V_base: np.ndarray) -> tuple[Chart, np.ndarray]:
    """Pinned full-coordinate chart containing the (canonicalized) base.

    Returns (chart, theta0) with chart.realize(theta0) congruent to V_base.
    """
    d = fw.dimension
    P = canonicalize_realization(V_base, d)
    chart = Chart.pinned_full(fw.n_joints, d, pins=[0, 1, 2][:3 if d == 3 else 2])
    theta0 = chart.project(P)
    # projection must be exact: the pinned coordinates of P are zero
    if np.max(np.abs(chart.realize(theta0) - P)) > 1e-9:
        raise ValueError("base realization incompatible with pinned chart")
    return chart, theta0


def select_tracking_edges(df: DensityFunction, chart: Chart,
                          theta0: np.ndarray) -> list[int]:
    """Indices of edges whose constraints form a well-conditioned square
    realization system (QR column pivoting on the rigidity matrix).

    For an isostatic framework all edges are kept.
    """
    from scipy.linalg import qr

    V = chart.realize(theta0)
    R, _ = rigidity_matrix(df.framework, V, chart=chart)
    n = chart.n_params
    if R.shape[1] == n:
        return list(range(n))
    _, _, piv = qr(R, pivoting=True)
    return sorted(int(i) for i in piv[:n])


def _metric_systems(df: DensityFunction, chart: Chart, sel: list[int],
                    q0: np.ndarray, q1: np.ndarray,
                    ) -> tuple[CompiledSystem, CompiledSystem]:
    """Square systems q_e(theta) = q0_e and q_e(theta) = q1_e on ``sel``."""
    from .critical import edge_polys

    qs = edge_polys(df, chart)
    polys0 = [qs[e] + Poly.const(-q0[e], chart.n_params) for e in sel]
    polys1 = [qs[e] + Poly.const(-q1[e], chart.n_params) for e in sel]
    return CompiledSystem.compile(polys0), CompiledSystem.compile(polys1)


def _check_monotone(df: DensityFunction, q0: np.ndarray, q1: np.ndarray,
                    samples: int = 100) -> bool:
    """Each element energy along Q_t must be non-decreasing on [0, 1]."""
    ts = np.linspace(0.0, 1.0, samples)
    prev = None
    for t in ts:
        e = df.element_energies_q(q0 + t * (q1 - q0))
        if prev is not None and np.any(e < prev - 1e-13):
            return False
        prev = e
    return True


def track_metric_path(df: DensityFunction, chart: Chart, theta0: np.ndarray,
                      q_target: np.ndarray,
                      sel: list[int] | None = None,
                      cfg: TrackerConfig | None = None,
                      shaky_start: bool = False,
                      t_star: float = 0.43) -> PathRecord:
    """Track the realization equations along Q_t from theta0 to q_target.

    ``q_target`` is the full squared-length vector of the goal metric.  When
    the base realization is shaky (singular at t=0) the path is started at
    an interior pivot t* instead: the system at t* is solved, solutions
    tracked down to t=0 to find branches through the base, and those
    branches tracked up to t=1.
    """
    cfg = cfg or TrackerConfig()
    q0 = df.squared_lengths(chart.realize(theta0))
    if sel is None:
        sel = select_tracking_edges(df, chart, theta0)
    sys0, sys1 = _metric_systems(df, chart, sel, q0, q_target)
    # a saddle metric can sit exactly at a fold of the solution branch,
    # making the system singular at t = 1; the endgame stops just short
    q_eps = q0 + (1.0 - ENDGAME_EPS) * (q_target - q0)
    sys_eps, _ = _metric_systems(df, chart, sel, q_eps, q_target)

    def track_to_end(sys_from, x_start):
        end = track_parameter_path(sys_from, sys1, x_start, cfg=cfg)
        if end is None:
            end = track_parameter_path(sys_from, sys_eps, x_start, cfg=cfg)
        return end

    def finish(theta_end) -> PathRecord:
        if theta_end is None:
            return PathRecord(success=False, reason="tracking failed",
                              edges_tracked=sel)
        if np.iscomplexobj(theta_end):
            return PathRecord(success=False, reason="endpoint not real",
                              real_throughout=False, edges_tracked=sel)
        V_end = chart.realize(theta_end)
        q_end = df.squared_lengths(V_end)
        scale = df.framework.mean_length()
        mismatch = float(np.max(np.abs(np.sqrt(np.maximum(q_end, 0.0))
                                       - np.sqrt(q_target))))
        if mismatch > ENDPOINT_TOL * scale:
            return PathRecord(success=False, reason="endpoint metric mismatch",
                              theta_end=theta_end, V_end=V_end,
                              metric_mismatch=mismatch, edges_tracked=sel)
        mono = _check_monotone(df, q0, q_target)
        return PathRecord(success=True, reason="", theta_end=theta_end,
                          V_end=V_end, metric_mismatch=mismatch,
                          monotone=mono, edges_tracked=sel,
                          t_star=t_star if shaky_start else None)

    if not shaky_start:
        return finish(track_to_end(sys0, theta0))

    # shaky base: solve at an interior t*, walk branches through the base
    qs_mid = q0 + t_star * (q_target - q0)
    sys_mid, _ = _metric_systems(df, chart, sel, qs_mid, q_target)
    n = chart.n_params
    rng = np.random.default_rng(cfg.seed)
    seeds = theta0 + 1e-2 * df.framework.mean_length() * \
        rng.standard_normal((64, n))
    seeds = np.vstack([theta0[None, :], seeds])
    sols = solve_multistart(sys_mid, seeds=seeds, n_starts=0, cfg=cfg)
    branches = []
    for s in sols.real:
        down = track_parameter_path(sys_mid, sys0, s.x, cfg=cfg)
        if down is None or np.iscomplexobj(down):
            continue
        if np.max(np.abs(down - theta0)) < 1e-5 * df.framework.mean_length():
            branches.append(s.x)
    for x_mid in branches:
        rec = finish(track_to_end(sys_mid, x_mid))
        if rec.success:
            rec.t_star = t_star
            return rec
    return PathRecord(success=False, reason="no branch through shaky base",
                      edges_tracked=sel, t_star=t_star)


# ---------------------------------------------------------------------------
# Snappability


def separation_filter(min_distance: float):
    """Admissibility predicate rejecting candidate realizations in which
    two joints lie closer than ``min_distance`` (near-coincident points,
    the numeric form of the no-coincident-points restriction)."""
    def admissible(p: CriticalPoint) -> bool:
        return p.min_separation > min_distance
    return admissible


def _candidate_saddles(df: DensityFunction, cs: CriticalSet,
                       u_base: float,
                       admissible=None) -> list[tuple[float, int]]:
    """(d, index) pairs for all saddles, ascending in d."""
    out = []
    for i, p in enumerate(cs.points):
        if p.kind not in ("saddle", "maximum"):
            continue
        if admissible is not None and not admissible(p):
            continue
        out.append((abs(p.u - u_base) / df.E, i))
    out.sort(key=lambda pair: pair[0])
    return out


def _descent_reaches(df: DensityFunction, chart: Chart, saddle: CriticalPoint,
                     theta_base: np.ndarray, constraints=(),
                     match_tol: float | None = None) -> bool:
    """True if some descent flow from the saddle ends at the base minimum."""
    if match_tol is None:
        match_tol = 1e-5 * df.framework.mean_length()
    for vec in _negative_directions(df, chart, saddle, list(constraints)):
        for sign in (+1.0, -1.0):
            end, _, _ = descend_flow(df, chart, saddle.theta, sign * vec,
                                     constraints=list(constraints))
            if end is not None and np.max(np.abs(end - theta_base)) < match_tol:
                return True
    return False


def local_snappability(df: DensityFunction, chart: Chart,
                       theta_base: np.ndarray, cs: CriticalSet,
                       mode: str = "auto",
                       constraints=(),
                       cfg: TrackerConfig | None = None,
                       admissible=None) -> SnapResult:
    """Minimal density barrier out of the stable realization at theta_base.

    ``mode``: "track" imposes the Q_t metric path on the realization
    equations (exact for isostatic frameworks); "descent" accepts a saddle
    when one of its gradient flows descends to the base (overbraced
    fallback); "auto" picks "track" iff the chart rigidity matrix has full
    row rank at the base (the selected square system then determines the
    chart parameters locally).
    """
    cfg = cfg or TrackerConfig()
    fw = df.framework
    V_base = chart.realize(theta_base)
    u_base = df.density_from_realization(V_base)
    cands = _candidate_saddles(df, cs, u_base, admissible)
    if mode == "auto":
        R, _ = rigidity_matrix(fw, V_base, chart=chart)
        rank = np.linalg.matrix_rank(R, tol=1e-10 * max(1.0, np.abs(R).max()))
        mode = "track" if rank == chart.n_params else "descent"

    if mode == "descent":
        for d, i in cands:
            p = cs.points[i]
            if _descent_reaches(df, chart, p, theta_base, constraints):
                ties = [j for dd, j in cands if abs(dd - d) < TIE_TOL]
                return SnapResult(base_theta=np.asarray(theta_base), s=d,
                                  saddle=p, path=None, exhaustive=True,
                                  saddle_shaky=p.shaky, mode=mode, ties=ties)
        return SnapResult(base_theta=np.asarray(theta_base), s=math.inf,
                          saddle=None, path=None, exhaustive=True, mode=mode)

    if mode != "track":
        raise ValueError(f"unknown snappability mode {mode!r}")

    theta_base = np.asarray(theta_base, dtype=float)
    sel = select_tracking_edges(df, chart, theta_base)
    base_shaky, _ = is_shaky(fw, V_base, chart=chart)
    for d, i in cands:
        p = cs.points[i]
        q_target = df.squared_lengths(p.V)
        rec = track_metric_path(df, chart, theta_base, q_target, sel=sel,
                                cfg=cfg, shaky_start=base_shaky)
        if rec.success and rec.monotone:
            ties = [j for dd, j in cands if abs(dd - d) < TIE_TOL]
            return SnapResult(base_theta=np.asarray(theta_base), s=d,
                              saddle=p, path=rec, exhaustive=True,
                              saddle_shaky=p.shaky, mode=mode, ties=ties)
    return SnapResult(base_theta=np.asarray(theta_base), s=math.inf,
                      saddle=None, path=None, exhaustive=True, mode=mode)


def undeformed_minima(cs: CriticalSet, u_tol: float = 1e-12) -> list[int]:
    """Indices of minima whose density vanishes (undeformed realizations)."""
    scale = max((abs(p.u) for p in cs.points), default=1.0)
    return [i for i, p in enumerate(cs.points)
            if p.kind == "minimum" and abs(p.u) < u_tol * max(scale, 1e-30)]


def global_snappability(df: DensityFunction, chart: Chart, cs: CriticalSet,
                        mode: str = "auto", constraints=(),
                        cfg: TrackerConfig | None = None,
                        admissible=None) -> tuple[float, list[SnapResult]]:
    """Minimum local snappability over all undeformed realizations."""
    results = []
    for i in undeformed_minima(cs):
        results.append(local_snappability(df, chart, cs.points[i].theta, cs,
                                          mode=mode, constraints=constraints,
                                          cfg=cfg, admissible=admissible))
    s_global = min((r.s for r in results), default=math.inf)
    return s_global, results


def lower_bound(df: DensityFunction, cs: CriticalSet,
                u_base: float = 0.0, admissible=None) -> float:
    """o(L): minimal pseudometric distance from the base to any saddle.

    Always a lower bound for the global snappability; infinity when the
    saddle set is empty.
    """
    cands = _candidate_saddles(df, cs, u_base, admissible)
    return cands[0][0] if cands else math.inf
